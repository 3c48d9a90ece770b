#pragma once

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <istream>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

#include "confract/expr.hpp"
#include "confract/ivp.hpp"
#include "confract/linear.hpp"
#include "confract/quadrature.hpp"
#include "confract/solver.hpp"
#include "confract/tube.hpp"
#include "confract/types.hpp"

namespace confract {

enum class ProblemKind { Nonlinear, LinearSpecial, LinearGeneral };

/// Problem-file load error; line is 1-based within the source text.
class ProblemError : public std::runtime_error {
 public:
  ProblemError(const std::string& what, std::size_t line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// In-memory form of a .problem file: a [problem] section (kind, alpha,
/// interval, x0 and the needed right-hand-side expressions), an optional
/// [tube] section (v, M) and an optional [solver] section with iteration,
/// quadrature and verification settings.
struct ProblemFile {
  ProblemKind kind = ProblemKind::Nonlinear;
  FractionalOrder alpha{1.0};
  Interval interval{1.0, 2.0};
  double x0 = 0.0;

  // sources kept verbatim for diagnostics; parsed forms used for evaluation
  std::string f_src, p_src, g_src, v_src, M_src;
  ScalarFn f, p, g, v, M;

  SolverConfig solver{};
  QuadratureConfig quad{};
  std::size_t verify_samples = 1001;
  double verify_tol = 1e-9;

  bool has_tube() const { return v.valid() && M.valid(); }

  /// The problem as a nonlinear IVP; linear kinds are rewritten as
  /// f(t, x) = g(t) - p(t) x with p = a^(-alpha) for the special kind.
  IVP to_ivp() const {
    switch (kind) {
      case ProblemKind::Nonlinear:
        return IVP{alpha, interval, x0, f};
      case ProblemKind::LinearSpecial:
        return special_to_ivp(g, alpha, interval, x0);
      case ProblemKind::LinearGeneral: {
        LinearIVP lin{alpha, interval, x0, p, g};
        return to_ivp(lin);
      }
    }
    throw std::logic_error("ProblemFile: unknown kind");
  }

  LinearIVP to_linear() const {
    if (kind == ProblemKind::LinearGeneral) return LinearIVP{alpha, interval, x0, p, g};
    if (kind == ProblemKind::LinearSpecial) {
      const double coeff = std::pow(interval.a(), -alpha.value());
      return LinearIVP{alpha, interval, x0,
                       ScalarFn::of_t([coeff](double) { return coeff; }), g};
    }
    throw std::logic_error("ProblemFile: nonlinear problem has no linear form");
  }

  TubeCertificate to_certificate() const {
    if (!has_tube()) throw std::logic_error("ProblemFile: no [tube] section");
    return TubeCertificate{v, M, alpha, interval};
  }

 private:
  static IVP to_ivp(const LinearIVP& lin) { return confract::to_ivp(lin); }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline double parse_real(std::string_view v, std::size_t line) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size())
    throw ProblemError("expected a real number, got '" + std::string(v) + "'", line);
  return out;
}

inline std::size_t parse_count(std::string_view v, std::size_t line) {
  std::size_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size())
    throw ProblemError("expected a non-negative integer, got '" + std::string(v) + "'", line);
  return out;
}

inline ScalarFn parse_fn_or_rethrow(std::string_view src, int arity, std::string_view key,
                                    std::size_t line) {
  try {
    return parse_fn(src, arity);
  } catch (const ParseError& e) {
    throw ProblemError(std::string(key) + ": " + e.what(), line);
  }
}

}  // namespace detail

/// Parses the flat key-value problem format:
///
///   [problem]                      # required section
///   kind = nonlinear               # or linear-special | linear-general
///   alpha = 0.5
///   a = 1
///   b = 2
///   x0 = 0
///   f = ...        # nonlinear: expression in t, x
///   p = ...        # linear-general: expression in t
///   g = ...        # linear-special/general: expression in t
///
///   [tube]                         # optional
///   v = ...        # expression in t
///   M = ...        # expression in t
///
///   [solver]                       # optional, any subset of keys
///   grid_n, picard_tol, max_iter, relaxation,
///   quad_abs_tol, quad_max_subdivisions, quad_method (simpson | gauss),
///   verify_samples, verify_tol
///
/// '#' starts a comment; blank lines are ignored; unknown sections, unknown
/// keys and duplicate keys are errors.
inline ProblemFile parse_problem(std::istream& in) {
  enum class Section { None, Problem, Tube, Solver };
  Section section = Section::None;
  std::string line;
  std::size_t lineno = 0;

  std::optional<std::string> kind_v, alpha_v, a_v, b_v, x0_v;
  std::optional<std::pair<std::string, std::size_t>> f_v, p_v, g_v, v_v, M_v;
  ProblemFile pf;
  std::size_t kind_line = 0;

  std::set<std::string, std::less<>> seen;

  while (std::getline(in, line)) {
    ++lineno;
    std::string_view s{line};
    if (const auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
    s = detail::trim(s);
    if (s.empty()) continue;

    if (s.front() == '[') {
      if (s.back() != ']') throw ProblemError("unterminated section header", lineno);
      const auto name = detail::trim(s.substr(1, s.size() - 2));
      if (name == "problem") section = Section::Problem;
      else if (name == "tube") section = Section::Tube;
      else if (name == "solver") section = Section::Solver;
      else throw ProblemError("unknown section '" + std::string(name) + "'", lineno);
      continue;
    }

    const auto eq = s.find('=');
    if (eq == std::string_view::npos)
      throw ProblemError("expected 'key = value'", lineno);
    const std::string key{detail::trim(s.substr(0, eq))};
    const std::string value{detail::trim(s.substr(eq + 1))};
    if (key.empty()) throw ProblemError("empty key", lineno);
    if (value.empty()) throw ProblemError("empty value for '" + key + "'", lineno);
    if (section == Section::None)
      throw ProblemError("key '" + key + "' before any section header", lineno);

    const std::string qualified =
        (section == Section::Problem ? "problem." : section == Section::Tube ? "tube." : "solver.") +
        key;
    if (!seen.insert(qualified).second)
      throw ProblemError("duplicate key '" + key + "'", lineno);

    if (section == Section::Problem) {
      if (key == "kind") { kind_v = value; kind_line = lineno; }
      else if (key == "alpha") alpha_v = value;
      else if (key == "a") a_v = value;
      else if (key == "b") b_v = value;
      else if (key == "x0") x0_v = value;
      else if (key == "f") f_v = {value, lineno};
      else if (key == "p") p_v = {value, lineno};
      else if (key == "g") g_v = {value, lineno};
      else throw ProblemError("unknown key '" + key + "' in [problem]", lineno);
    } else if (section == Section::Tube) {
      if (key == "v") v_v = {value, lineno};
      else if (key == "M") M_v = {value, lineno};
      else throw ProblemError("unknown key '" + key + "' in [tube]", lineno);
    } else {
      if (key == "grid_n") pf.solver.grid_n = detail::parse_count(value, lineno);
      else if (key == "picard_tol") pf.solver.picard_tol = detail::parse_real(value, lineno);
      else if (key == "max_iter") pf.solver.max_iter = detail::parse_count(value, lineno);
      else if (key == "relaxation") pf.solver.relaxation = detail::parse_real(value, lineno);
      else if (key == "quad_abs_tol") pf.quad.abs_tol = detail::parse_real(value, lineno);
      else if (key == "quad_max_subdivisions")
        pf.quad.max_subdivisions = detail::parse_count(value, lineno);
      else if (key == "quad_method") {
        if (value == "simpson") pf.quad.method = QuadratureConfig::Method::AdaptiveSimpson;
        else if (value == "gauss") pf.quad.method = QuadratureConfig::Method::GaussLegendre;
        else throw ProblemError("quad_method must be 'simpson' or 'gauss'", lineno);
      } else if (key == "verify_samples") pf.verify_samples = detail::parse_count(value, lineno);
      else if (key == "verify_tol") pf.verify_tol = detail::parse_real(value, lineno);
      else throw ProblemError("unknown key '" + key + "' in [solver]", lineno);
    }
  }

  const auto require = [&](const std::optional<std::string>& v, const char* key) -> const std::string& {
    if (!v) throw ProblemError(std::string("missing required key '") + key + "' in [problem]", lineno);
    return *v;
  };

  const std::string& kind_s = require(kind_v, "kind");
  if (kind_s == "nonlinear") pf.kind = ProblemKind::Nonlinear;
  else if (kind_s == "linear-special") pf.kind = ProblemKind::LinearSpecial;
  else if (kind_s == "linear-general") pf.kind = ProblemKind::LinearGeneral;
  else throw ProblemError("kind must be nonlinear, linear-special or linear-general", kind_line);

  try {
    pf.alpha = FractionalOrder(detail::parse_real(require(alpha_v, "alpha"), lineno));
    pf.interval = Interval(detail::parse_real(require(a_v, "a"), lineno),
                           detail::parse_real(require(b_v, "b"), lineno));
  } catch (const std::invalid_argument& e) {
    throw ProblemError(e.what(), lineno);
  }
  pf.x0 = detail::parse_real(require(x0_v, "x0"), lineno);

  const auto need_expr = [&](const std::optional<std::pair<std::string, std::size_t>>& src,
                             const char* key, int arity) {
    if (!src)
      throw ProblemError(std::string("missing required key '") + key + "' for this kind", lineno);
    return detail::parse_fn_or_rethrow(src->first, arity, key, src->second);
  };
  const auto reject_expr = [&](const std::optional<std::pair<std::string, std::size_t>>& src,
                               const char* key) {
    if (src) throw ProblemError(std::string("key '") + key + "' is not used by this kind", src->second);
  };

  switch (pf.kind) {
    case ProblemKind::Nonlinear:
      pf.f = need_expr(f_v, "f", 2);
      pf.f_src = f_v->first;
      reject_expr(p_v, "p");
      reject_expr(g_v, "g");
      break;
    case ProblemKind::LinearSpecial:
      pf.g = need_expr(g_v, "g", 1);
      pf.g_src = g_v->first;
      reject_expr(f_v, "f");
      reject_expr(p_v, "p");
      break;
    case ProblemKind::LinearGeneral:
      pf.p = need_expr(p_v, "p", 1);
      pf.p_src = p_v->first;
      pf.g = need_expr(g_v, "g", 1);
      pf.g_src = g_v->first;
      reject_expr(f_v, "f");
      break;
  }

  if (v_v.has_value() != M_v.has_value())
    throw ProblemError("[tube] needs both v and M", v_v ? v_v->second : M_v->second);
  if (v_v) {
    pf.v = need_expr(v_v, "v", 1);
    pf.v_src = v_v->first;
    pf.M = need_expr(M_v, "M", 1);
    pf.M_src = M_v->first;
  }

  try {
    pf.solver.validate();
    detail::check_quadrature_config(pf.quad);
    if (pf.verify_samples < 2) throw std::invalid_argument("verify_samples must be >= 2");
    if (!(pf.verify_tol > 0.0)) throw std::invalid_argument("verify_tol must be > 0");
  } catch (const std::invalid_argument& e) {
    throw ProblemError(e.what(), lineno);
  }
  return pf;
}

inline ProblemFile parse_problem(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_problem(in);
}

inline ProblemFile load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open problem file: " + path);
  return parse_problem(in);
}

}  // namespace confract
