#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace smating {

// Shared numeric tolerances. Every solver takes these as defaults; callers
// may override per invocation.
struct Tolerances {
  double solver = 1e-12;         // Newton convergence on residuals
  double dedup = 1e-8;           // root deduplication radius
  double classification = 1e-6;  // band around |multiplier| = 1
  double landing = 1e-6;         // ray landing declaration
  double desk = 1e-3;            // coarse geometric residuals
  double escape_radius = 4.0;
  int escape_iters = 10000;
  int render_iters = 200;
  double infinity_switch = 1e8;  // |z| above which we work in w = 1/z
};

inline const Tolerances& tol() {
  static const Tolerances t{};
  return t;
}

struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SolverFailure : NumericError {
  double best_residual;
  SolverFailure(const std::string& what, double residual)
      : NumericError(what), best_residual(residual) {}
};

struct PreconditionError : NumericError {
  using NumericError::NumericError;
};

struct RegimeError : NumericError {
  using NumericError::NumericError;
};

struct BudgetError : NumericError {
  using NumericError::NumericError;
};

struct TraceFailure : NumericError {
  using NumericError::NumericError;
};

struct DegeneracyError : NumericError {
  using NumericError::NumericError;
};

struct ConstructionError : NumericError {
  using NumericError::NumericError;
};

// Bisection stalled on a mode-locked interval; carries the locked rational.
struct PlateauError : NumericError {
  std::int64_t locked_p;
  std::int64_t locked_q;
  PlateauError(const std::string& what, std::int64_t p, std::int64_t q)
      : NumericError(what), locked_p(p), locked_q(q) {}
};

struct ResolutionError : NumericError {
  using NumericError::NumericError;
};

}  // namespace smating
