#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace pmpg {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input document. `location` points at the
// offending element, e.g. "states[2].actions[0].to[1].prob".
struct ValidationError : Error {
  std::string location;
  std::string message;
  ValidationError(std::string loc, std::string msg)
      : Error(loc.empty() ? msg : loc + ": " + msg),
        location(std::move(loc)),
        message(std::move(msg)) {}
};

// An enumeration or iteration budget was exceeded.
struct BudgetError : Error {
  using Error::Error;
};

// Exact elimination hit a structurally singular system.
struct SingularMatrixError : Error {
  std::size_t step;
  explicit SingularMatrixError(std::size_t step_)
      : Error("singular matrix at elimination step " + std::to_string(step_)),
        step(step_) {}
};

// Value iteration ran out of iterations; carries the last iterate.
struct ConvergenceError : Error {
  std::vector<double> last_values;
  std::size_t iterations;
  double residual;
  ConvergenceError(std::vector<double> values, std::size_t iters, double res)
      : Error("max_iter reached before tolerance (residual " +
              std::to_string(res) + " after " + std::to_string(iters) +
              " iterations)"),
        last_values(std::move(values)),
        iterations(iters),
        residual(res) {}
};

// A condition that is guaranteed by a theorem (or by exact arithmetic)
// failed to hold. Always indicates an implementation bug.
struct InvariantViolation : Error {
  using Error::Error;
};

}  // namespace pmpg
