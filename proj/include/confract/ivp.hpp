#pragma once

#include <stdexcept>

#include "confract/scalar_fn.hpp"
#include "confract/types.hpp"

namespace confract {

/// Nonlinear conformable initial value problem
///   x^(alpha)(t) = f(t, x(t)),  t in [a, b],  x(a) = x0.
struct IVP {
  FractionalOrder alpha{1.0};
  Interval interval{1.0, 2.0};
  double x0 = 0.0;
  ScalarFn f;  // arity 2

  void validate() const {
    if (!f.valid() || f.arity() != 2)
      throw std::invalid_argument("IVP: f must be an arity-2 function of (t, x)");
  }
};

}  // namespace confract
