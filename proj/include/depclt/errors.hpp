#pragma once

#include <stdexcept>
#include <string>

namespace depclt {

// Bad arguments: malformed shapes, out-of-range parameters, invalid structures.
struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A variance (or other normalizer) vanished where the theory needs it positive.
struct DegeneracyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An exact enumeration would exceed its outcome or work budget.
struct BudgetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace depclt
