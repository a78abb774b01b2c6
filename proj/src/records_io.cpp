#include "pv/records_io.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "pv/errors.hpp"

namespace pv {

namespace {

std::string format_seconds(double seconds) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", seconds);
    return buf;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

std::int64_t parse_int(const std::string& s, const char* what) {
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size())
        throw ValidationError(std::string("malformed ") + what + ": " + s);
    return v;
}

}  // namespace

std::string records_to_csv(const std::vector<CountRecord>& records, bool with_timing) {
    std::ostringstream out;
    out << "k,s,N,method,count,seconds,threads,seed\n";
    for (const CountRecord& r : records) {
        out << r.k << ',' << r.s << ',' << r.n << ',' << method_name(r.method) << ',' << to_string_u128(r.count)
            << ',' << format_seconds(with_timing ? r.seconds : 0.0) << ',' << r.threads << ',';
        if (r.seed) out << *r.seed;
        out << '\n';
    }
    return out.str();
}

std::vector<CountRecord> records_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw ValidationError("empty CSV");
    if (split(line, ',') != std::vector<std::string>{"k", "s", "N", "method", "count", "seconds", "threads", "seed"})
        throw ValidationError("malformed CSV header");
    std::vector<CountRecord> out;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto cells = split(line, ',');
        if (cells.size() != 8) throw ValidationError("malformed CSV row: " + line);
        CountRecord r;
        r.k = static_cast<int>(parse_int(cells[0], "k"));
        r.s = static_cast<int>(parse_int(cells[1], "s"));
        r.n = parse_int(cells[2], "N");
        r.method = method_from_name(cells[3]);
        r.count = parse_u128(cells[4]);
        try {
            r.seconds = std::stod(cells[5]);
        } catch (...) {
            throw ValidationError("malformed seconds: " + cells[5]);
        }
        r.threads = static_cast<int>(parse_int(cells[6], "threads"));
        if (!cells[7].empty()) r.seed = static_cast<std::uint64_t>(parse_int(cells[7], "seed"));
        out.push_back(r);
    }
    return out;
}

std::string records_to_json(const std::vector<CountRecord>& records, bool with_timing) {
    nlohmann::json arr = nlohmann::json::array();
    for (const CountRecord& r : records) {
        nlohmann::json o;
        o["k"] = r.k;
        o["s"] = r.s;
        o["N"] = r.n;
        o["method"] = method_name(r.method);
        o["count"] = to_string_u128(r.count);
        o["seconds"] = with_timing ? r.seconds : 0.0;
        o["threads"] = r.threads;
        if (r.seed)
            o["seed"] = *r.seed;
        else
            o["seed"] = nullptr;
        arr.push_back(o);
    }
    return arr.dump(2) + "\n";
}

std::vector<CountRecord> records_from_json(const std::string& text) {
    nlohmann::json arr;
    try {
        arr = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("malformed JSON: ") + e.what());
    }
    if (!arr.is_array()) throw ValidationError("expected a JSON array of records");
    std::vector<CountRecord> out;
    for (const auto& o : arr) {
        CountRecord r;
        r.k = o.at("k").get<int>();
        r.s = o.at("s").get<int>();
        r.n = o.at("N").get<std::int64_t>();
        r.method = method_from_name(o.at("method").get<std::string>());
        r.count = parse_u128(o.at("count").get<std::string>());
        r.seconds = o.at("seconds").get<double>();
        r.threads = o.at("threads").get<int>();
        if (!o.at("seed").is_null()) r.seed = o.at("seed").get<std::uint64_t>();
        out.push_back(r);
    }
    return out;
}

std::vector<std::int64_t> parse_range(const std::string& text) {
    std::string body = text;
    std::int64_t step = 1;
    if (auto colon = body.find(':'); colon != std::string::npos) {
        step = parse_int(body.substr(colon + 1), "range step");
        if (step < 1) throw ValidationError("range step must be >= 1");
        body = body.substr(0, colon);
    }
    auto dots = body.find("..");
    if (dots == std::string::npos) return {parse_int(body, "range value")};
    std::int64_t lo = parse_int(body.substr(0, dots), "range start");
    std::int64_t hi = parse_int(body.substr(dots + 2), "range end");
    if (hi < lo) throw ValidationError("range end before start");
    std::vector<std::int64_t> out;
    for (std::int64_t v = lo; v <= hi; v += step) out.push_back(v);
    return out;
}

std::vector<std::int64_t> parse_geometric(const std::string& text) {
    auto parts = split(text, ':');
    if (parts.size() != 3) throw ValidationError("geometric range must be start:ratio:terms");
    std::int64_t start = parse_int(parts[0], "geometric start");
    std::int64_t ratio = parse_int(parts[1], "geometric ratio");
    std::int64_t terms = parse_int(parts[2], "geometric terms");
    if (start < 1 || ratio < 2 || terms < 1) throw ValidationError("bad geometric range");
    std::vector<std::int64_t> out;
    std::int64_t v = start;
    for (std::int64_t i = 0; i < terms; ++i) {
        out.push_back(v);
        if (i + 1 < terms) {
            if (v > (1LL << 56) / ratio) throw ValidationError("geometric range overflows");
            v *= ratio;
        }
    }
    return out;
}

}  // namespace pv
