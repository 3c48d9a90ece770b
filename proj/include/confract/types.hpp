#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace confract {

/// Raised when a function evaluates to NaN/Inf where a finite value is required.
struct EvaluationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Raised when a quadrature rule exhausts its subdivision budget before
/// reaching the requested absolute tolerance.
struct QuadratureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Raised when an ODE integration exceeds its magnitude bound.
struct BlowUpError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Order of differentiation, restricted to (0, 1].
///
/// The value 1 is admitted so classical calculus is available as the
/// degenerate case (the derivative then reduces to d/dt).
class FractionalOrder {
 public:
  explicit FractionalOrder(double alpha) : alpha_(alpha) {
    if (!(alpha > 0.0) || alpha > 1.0 || !std::isfinite(alpha))
      throw std::invalid_argument("FractionalOrder: alpha must lie in (0, 1], got " +
                                  std::to_string(alpha));
  }

  double value() const { return alpha_; }

  friend bool operator==(FractionalOrder lhs, FractionalOrder rhs) {
    return lhs.alpha_ == rhs.alpha_;
  }
  friend bool operator!=(FractionalOrder lhs, FractionalOrder rhs) { return !(lhs == rhs); }

 private:
  double alpha_;
};

/// Time interval [a, b] with 0 < a < b.
///
/// The left endpoint must be strictly positive: every operation here
/// multiplies by t^(alpha-1) or t^(1-alpha), which is singular at t = 0.
class Interval {
 public:
  Interval(double a, double b) : a_(a), b_(b) {
    if (!(a > 0.0) || !(a < b) || !std::isfinite(a) || !std::isfinite(b))
      throw std::invalid_argument("Interval: require 0 < a < b, got [" + std::to_string(a) +
                                  ", " + std::to_string(b) + "]");
  }

  double a() const { return a_; }
  double b() const { return b_; }
  double width() const { return b_ - a_; }
  bool contains(double t) const { return t >= a_ && t <= b_; }

  friend bool operator==(Interval lhs, Interval rhs) {
    return lhs.a_ == rhs.a_ && lhs.b_ == rhs.b_;
  }
  friend bool operator!=(Interval lhs, Interval rhs) { return !(lhs == rhs); }

 private:
  double a_;
  double b_;
};

}  // namespace confract
