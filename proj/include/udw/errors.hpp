#pragma once

#include <stdexcept>
#include <string>

namespace udw {

// Parameter or configuration outside the validated domain (range and
// ordering violations). Messages name the violated constraint.
struct validation_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Inputs that are individually valid but mutually contradictory, for
// example kernel values that cannot belong to the scenario they are
// combined with.
struct consistency_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A probability, population, or eigenvalue is negative beyond the
// floating-point noise budget.
struct positivity_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An adaptive numerical routine stopped before reaching its target
// tolerance; carries the tolerance it did achieve.
struct accuracy_error : std::runtime_error {
    accuracy_error(const std::string& what, double achieved)
        : std::runtime_error(what), achieved_tolerance(achieved) {}
    double achieved_tolerance;
};

} // namespace udw
