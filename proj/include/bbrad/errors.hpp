#pragma once

#include <stdexcept>
#include <string>

namespace bbrad {

// Base class for every failure the library reports.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Input outside the mathematical domain of an operation.
struct domain_error : error {
  using error::error;
};

// The requested operation has no defined result for this model.
struct unsupported_model_error : error {
  using error::error;
};

// Parameters outside the regime where the underlying approximation holds.
struct regime_error : error {
  using error::error;
};

// Two independent internal computation routes disagreed beyond tolerance.
struct consistency_error : error {
  consistency_error(const std::string& what, double a, double b, double tol)
      : error(what), value_a(a), value_b(b), tolerance(tol) {}
  double value_a;
  double value_b;
  double tolerance;
};

// Adaptive integration failed to reach the requested tolerance.
// Carries the partial result so callers can inspect how far it got.
struct convergence_error : error {
  convergence_error(const std::string& what, double partial, double err)
      : error(what), partial_value(partial), err_estimate(err) {}
  double partial_value;
  double err_estimate;
};

// A time step was rejected (positivity or stability violation).
struct step_rejection_error : error {
  step_rejection_error(const std::string& what, double suggested)
      : error(what), suggested_dt(suggested) {}
  double suggested_dt;
};

} // namespace bbrad
