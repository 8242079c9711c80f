#pragma once

#include <stdexcept>
#include <string>

namespace tumor_dde {

// Parameter or argument outside the model's admissible domain.
struct domain_violation : std::domain_error {
    explicit domain_violation(const std::string& what) : std::domain_error(what) {}
};

// A hypothesis required by the requested analysis does not hold.
struct hypothesis_error : std::runtime_error {
    explicit hypothesis_error(const std::string& what) : std::runtime_error(what) {}
};

// An iterative scheme failed to converge within its budget.
struct convergence_error : std::runtime_error {
    explicit convergence_error(const std::string& what) : std::runtime_error(what) {}
};

// A characteristic root sits on (or too close to) a counting contour.
struct boundary_root_error : std::runtime_error {
    explicit boundary_root_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace tumor_dde
