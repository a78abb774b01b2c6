#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pv/counting.hpp"

namespace pv {

// CSV schema, fixed column order: k,s,N,method,count,seconds,threads,seed.
// Counts are decimal strings (128-bit safe); the seed column is empty when
// absent. with_timing=false zeroes the seconds column so reruns are
// byte-identical.
std::string records_to_csv(const std::vector<CountRecord>& records, bool with_timing = true);
std::vector<CountRecord> records_from_csv(const std::string& text);

std::string records_to_json(const std::vector<CountRecord>& records, bool with_timing = true);
std::vector<CountRecord> records_from_json(const std::string& text);

// "8..48", "8..48:4", or a single value
std::vector<std::int64_t> parse_range(const std::string& text);
// geometric "start:ratio:terms"
std::vector<std::int64_t> parse_geometric(const std::string& text);

}  // namespace pv
