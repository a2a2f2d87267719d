#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace dln {

// Configuration-level problems (bad CLI input, missing cache, infeasible
// request). The CLI maps these to exit code 2.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Requested start-point count exceeds the path budget.
struct BudgetExceededError : ConfigError {
  BudgetExceededError(std::uint64_t required_paths, std::uint64_t budget)
      : ConfigError("path budget exceeded: start system requires " +
                    std::to_string(required_paths) + " paths, budget is " +
                    std::to_string(budget)),
        required(required_paths),
        budget(budget) {}
  std::uint64_t required;
  std::uint64_t budget;
};

// LU elimination hit a pivot below the singularity threshold.
struct SingularMatrixError : std::runtime_error {
  SingularMatrixError(int pivot_index, double pivot_abs)
      : std::runtime_error("singular matrix: pivot " +
                           std::to_string(pivot_index) + " has magnitude " +
                           std::to_string(pivot_abs)),
        pivot_index(pivot_index),
        pivot_abs(pivot_abs) {}
  int pivot_index;
  double pivot_abs;
};

// Iterative numeric routine failed to converge.
struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// Newton refinement diverged (step norms grew three times in a row).
struct RefineFailedError : NumericError {
  explicit RefineFailedError(const std::string& what) : NumericError(what) {}
};

}  // namespace dln
