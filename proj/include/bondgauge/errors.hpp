#pragma once

#include <stdexcept>
#include <string>

namespace bondgauge {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Forward model produced a value outside double range (unphysical inputs).
struct NonFiniteResult : Error {
  using Error::Error;
};

// A finite-difference quotient came out non-finite.
struct JacobianFailure : Error {
  using Error::Error;
};

// Argument outside the mathematical domain of a distribution function.
struct DomainError : Error {
  using Error::Error;
};

// Every multistart run produced a non-finite objective.
struct OptimizerFailure : Error {
  using Error::Error;
};

// Linearized model matrix is numerically rank deficient.
struct RankDeficient : Error {
  using Error::Error;
};

// Endpoint optimization was handed an empty feasible set.
struct InfeasibleSet : Error {
  using Error::Error;
};

// Endpoint solver could not reach its KKT tolerance within budget.
struct SolverStall : Error {
  using Error::Error;
};

// Regression design has zero variance in the predictor.
struct DegenerateDesign : Error {
  using Error::Error;
};

// Miscoverage budget split is impossible (band level below overall level).
struct BudgetError : Error {
  using Error::Error;
};

// Run configuration failed validation.
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace bondgauge
