#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "confract/scalar_fn.hpp"
#include "confract/types.hpp"

namespace confract {

/// Stencil placement for the numeric conformable derivative. Central is
/// second order and the default; Forward matches the defining one-sided
/// limit and, together with Backward, serves interval endpoints where only
/// one side is evaluable.
enum class DerivMode { Central, Forward, Backward };

/// Default difference parameter, balancing truncation against rounding
/// across magnitudes of t.
inline double default_deriv_eps(double t, FractionalOrder alpha) {
  return std::max(1e-6, 1e-8 * std::pow(t, alpha.value()));
}

namespace detail {

inline double checked_value(const ScalarFn& f, double t) {
  const double v = f(t);
  if (!std::isfinite(v))
    throw EvaluationError("function evaluated to a non-finite value at t = " + std::to_string(t));
  return v;
}

}  // namespace detail

/// Finite-difference estimate of the conformable derivative
///
///   T_alpha(f)(t) = lim_{e -> 0} (f(t + e t^(1-alpha)) - f(t)) / e.
///
/// The difference quotient is evaluated at eps and eps/2 and Richardson
/// extrapolated. Pass eps = 0 to use default_deriv_eps.
inline double conf_deriv_numeric(const ScalarFn& f, double t, FractionalOrder alpha,
                                 double eps = 0.0, DerivMode mode = DerivMode::Central) {
  if (!(t > 0.0)) throw std::domain_error("conf_deriv_numeric: require t > 0");
  if (eps < 0.0) throw std::invalid_argument("conf_deriv_numeric: eps must be positive");
  if (eps == 0.0) eps = default_deriv_eps(t, alpha);
  const double scale = std::pow(t, 1.0 - alpha.value());

  const auto forward = [&](double e) {
    return (detail::checked_value(f, t + e * scale) - detail::checked_value(f, t)) / e;
  };
  const auto backward = [&](double e) {
    return (detail::checked_value(f, t) - detail::checked_value(f, t - e * scale)) / e;
  };
  const auto central = [&](double e) {
    return (detail::checked_value(f, t + e * scale) - detail::checked_value(f, t - e * scale)) /
           (2.0 * e);
  };

  switch (mode) {
    case DerivMode::Central: {
      if (t - eps * scale <= 0.0)
        throw std::domain_error("conf_deriv_numeric: central stencil leaves the domain t > 0");
      // symmetric quotient is O(eps^2); one Richardson step cancels that term
      return (4.0 * central(0.5 * eps) - central(eps)) / 3.0;
    }
    case DerivMode::Forward:
      return 2.0 * forward(0.5 * eps) - forward(eps);
    case DerivMode::Backward: {
      if (t - eps * scale <= 0.0)
        throw std::domain_error("conf_deriv_numeric: backward stencil leaves the domain t > 0");
      return 2.0 * backward(0.5 * eps) - backward(eps);
    }
  }
  throw std::logic_error("conf_deriv_numeric: unknown mode");
}

/// Exact conformable derivative for the four closed-form families.
inline double conf_deriv_closed(const ClosedForm& form, double t, FractionalOrder alpha) {
  if (!(t > 0.0)) throw std::domain_error("conf_deriv_closed: require t > 0");
  const double a = alpha.value();
  switch (form.tag) {
    case ClosedForm::Tag::Power: return form.param * std::pow(t, form.param - a);
    case ClosedForm::Tag::Constant: return 0.0;
    case ClosedForm::Tag::Exponential:
      return form.param * std::pow(t, 1.0 - a) * std::exp(form.param * t);
    case ClosedForm::Tag::AlphaExponential: return std::exp(std::pow(t, a) / a);
  }
  throw std::invalid_argument("conf_deriv_closed: unsupported form tag");
}

/// Conformable derivative of |x| at a point where x(t) and x^(alpha)(t) are
/// known:  |x|^(alpha) = x * x^(alpha) / |x|.  Undefined at x = 0.
inline double modulus_deriv(double x_val, double x_deriv_val) {
  if (x_val == 0.0)
    throw std::domain_error("modulus_deriv: undefined at x = 0");
  return x_val > 0.0 ? x_deriv_val : -x_deriv_val;
}

}  // namespace confract
