#pragma once

#include <stdexcept>
#include <string>

namespace lqsim {

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad or inconsistent input shapes / values.
struct validation_error : error {
    using error::error;
};

// Requested rotation angle not reachable with the given pulse area.
struct infeasible_error : error {
    using error::error;
};

// Step-size underflow or state invariant violated during integration.
struct integrator_error : error {
    using error::error;
};

}  // namespace lqsim
