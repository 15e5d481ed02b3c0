#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace nconvex {

/// Base class of every exception thrown by this library.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A caller violated a documented precondition (bad node layout,
/// duplicate interpolation points, out-of-range order, ...).
struct precondition_error : error {
    using error::error;
};

/// The input lacks a capability the operation needs, e.g. a derivative
/// oracle of the required order at a repeated node.
struct capability_error : error {
    using error::error;
};

/// An iterative procedure exhausted its budget. Carries the last two
/// estimates so the failure mode (oscillation, stagnation) is diagnosable.
class convergence_error : public error {
public:
    convergence_error(const std::string& what,
                      std::vector<double> previous_estimate,
                      std::vector<double> last_estimate)
        : error(what),
          previous_(std::move(previous_estimate)),
          last_(std::move(last_estimate)) {}

    const std::vector<double>& previous_estimate() const noexcept { return previous_; }
    const std::vector<double>& last_estimate() const noexcept { return last_; }

private:
    std::vector<double> previous_;
    std::vector<double> last_;
};

} // namespace nconvex
