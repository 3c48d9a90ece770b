#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <utility>

#include "confract/types.hpp"

namespace confract {

/// One of the four function families whose conformable derivative of order
/// alpha has an exact closed form:
///
///   power(p):        t^p            ->  p * t^(p - alpha)
///   constant(l):     l              ->  0
///   exponential(c):  e^(c t)        ->  c * t^(1 - alpha) * e^(c t)
///   alpha_exp:       e^(t^alpha/alpha) -> itself (the eigenfunction)
struct ClosedForm {
  enum class Tag { Power, Constant, Exponential, AlphaExponential };

  Tag tag = Tag::Constant;
  double param = 0.0;  // p, lambda, or c; unused for AlphaExponential

  static ClosedForm power(double p) { return {Tag::Power, p}; }
  static ClosedForm constant(double lambda) { return {Tag::Constant, lambda}; }
  static ClosedForm exponential(double c) { return {Tag::Exponential, c}; }
  static ClosedForm alpha_exponential() { return {Tag::AlphaExponential, 0.0}; }

  double value(double t, FractionalOrder alpha) const {
    switch (tag) {
      case Tag::Power: return std::pow(t, param);
      case Tag::Constant: return param;
      case Tag::Exponential: return std::exp(param * t);
      case Tag::AlphaExponential:
        return std::exp(std::pow(t, alpha.value()) / alpha.value());
    }
    throw std::invalid_argument("ClosedForm: unsupported form tag");
  }
};

/// An evaluable real function of t (arity 1) or of (t, x) (arity 2).
///
/// Three backings are possible: one of the ClosedForm families above, a
/// parsed expression tree, or an arbitrary host callable. The backing is
/// recorded so calculus routines can prefer exact derivative formulas when
/// one exists.
class ScalarFn {
 public:
  enum class Kind { ClosedForm, Expression, Callable };

  ScalarFn() = default;

  static ScalarFn of_t(std::function<double(double)> fn, Kind kind = Kind::Callable) {
    ScalarFn s;
    s.arity_ = 1;
    s.kind_ = kind;
    s.fn1_ = std::move(fn);
    return s;
  }

  static ScalarFn of_tx(std::function<double(double, double)> fn, Kind kind = Kind::Callable) {
    ScalarFn s;
    s.arity_ = 2;
    s.kind_ = kind;
    s.fn2_ = std::move(fn);
    return s;
  }

  /// Arity-1 function backed by a closed form; alpha is needed to evaluate
  /// the alpha-exponential family.
  static ScalarFn of_closed(const ClosedForm& form, FractionalOrder alpha) {
    ScalarFn s = of_t([form, alpha](double t) { return form.value(t, alpha); },
                      Kind::ClosedForm);
    s.closed_ = form;
    return s;
  }

  bool valid() const { return arity_ != 0; }
  int arity() const { return arity_; }
  Kind kind() const { return kind_; }
  const std::optional<ClosedForm>& closed_form() const { return closed_; }

  double operator()(double t) const {
    if (arity_ != 1) throw std::logic_error("ScalarFn: arity-1 call on non-unary function");
    return fn1_(t);
  }

  double operator()(double t, double x) const {
    if (arity_ != 2) throw std::logic_error("ScalarFn: arity-2 call on non-binary function");
    return fn2_(t, x);
  }

 private:
  int arity_ = 0;
  Kind kind_ = Kind::Callable;
  std::function<double(double)> fn1_;
  std::function<double(double, double)> fn2_;
  std::optional<ClosedForm> closed_;
};

}  // namespace confract
