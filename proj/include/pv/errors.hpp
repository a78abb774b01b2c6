#pragma once

#include <stdexcept>
#include <string>

namespace pv {

// Contract violations on inputs. The CLI maps this to exit code 2.
struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Instance exceeds a configured budget or guard rail. Exit code 3 in the CLI.
struct BudgetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace pv
