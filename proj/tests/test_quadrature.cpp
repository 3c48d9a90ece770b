#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "confract/quadrature.hpp"
#include "confract/scalar_fn.hpp"

using namespace confract;

namespace {

// Independent reference: plain midpoint rule on a dense fixed grid.
double midpoint_oracle(const std::function<double(double)>& f, double a, double b,
                       int n = 400000) {
  double acc = 0.0;
  const double h = (b - a) / n;
  for (int i = 0; i < n; ++i) acc += f(a + (i + 0.5) * h);
  return acc * h;
}

std::vector<double> random_poly(std::mt19937& rng, int max_deg = 4) {
  std::uniform_int_distribution<int> deg(0, max_deg);
  std::uniform_real_distribution<double> coef(-3.0, 3.0);
  std::vector<double> c(deg(rng) + 1);
  for (auto& v : c) v = coef(rng);
  return c;
}

double horner(const std::vector<double>& c, double t) {
  double v = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * t + *it;
  return v;
}

}  // namespace

TEST_CASE("integrate agrees with the midpoint oracle on smooth integrands") {
  const std::function<double(double)> fns[] = {
      [](double t) { return t * t * t - 2.0 * t + 1.0; },
      [](double t) { return std::exp(-t) * std::sin(5.0 * t); },
      [](double t) { return 1.0 / (1.0 + t * t); },
  };
  for (auto method : {QuadratureConfig::Method::AdaptiveSimpson,
                      QuadratureConfig::Method::GaussLegendre}) {
    QuadratureConfig cfg;
    cfg.method = method;
    for (const auto& f : fns) {
      const double got = integrate(f, 0.25, 2.5, cfg);
      CHECK(std::abs(got - midpoint_oracle(f, 0.25, 2.5)) < 1e-8);
    }
  }
}

TEST_CASE("integrate validates its inputs") {
  const auto one = [](double) { return 1.0; };
  CHECK(integrate(one, 2.0, 2.0) == 0.0);
  CHECK_THROWS_AS(integrate(one, 2.0, 1.0), std::invalid_argument);

  QuadratureConfig bad;
  bad.abs_tol = 0.0;
  CHECK_THROWS_AS(integrate(one, 0.0, 1.0, bad), std::invalid_argument);
  bad = {};
  bad.max_subdivisions = 0;
  CHECK_THROWS_AS(integrate(one, 0.0, 1.0, bad), std::invalid_argument);
}

TEST_CASE("integrate surfaces non-finite integrand values") {
  const auto nan_at_half = [](double t) { return t == 0.5 ? std::nan("") : 1.0; };
  CHECK_THROWS_AS(integrate(nan_at_half, 0.0, 1.0), EvaluationError);
  const auto pole = [](double t) { return 1.0 / (t - 0.25); };
  CHECK_THROWS_AS(integrate(pole, 0.0, 1.0), EvaluationError);
}

namespace {
// integrable but slow to converge; the kink point is not a dyadic rational,
// so no low-depth evaluation node lands on it
double root_singularity(double t) { return 1.0 / std::sqrt(std::abs(t - 0.30102999566398120)); }
}  // namespace

TEST_CASE("adaptive Simpson reports an exhausted subdivision budget") {
  QuadratureConfig cfg;
  cfg.abs_tol = 1e-14;
  cfg.max_subdivisions = 4;
  CHECK_THROWS_AS(integrate(root_singularity, 0.0, 1.0, cfg), QuadratureError);
}

TEST_CASE("Gauss-Legendre reports an exhausted panel budget") {
  QuadratureConfig cfg;
  cfg.method = QuadratureConfig::Method::GaussLegendre;
  cfg.abs_tol = 1e-14;
  cfg.max_subdivisions = 4;
  CHECK_THROWS_AS(integrate(root_singularity, 0.0, 1.0, cfg), QuadratureError);
}

TEST_CASE("conformable integral of 1 over [1, 2] at alpha = 1/2") {
  // (b^alpha - a^alpha) / alpha = 2 (sqrt(2) - 1)
  const auto one = ScalarFn::of_t([](double) { return 1.0; });
  const double got = conf_integral(one, 1.0, 2.0, FractionalOrder(0.5));
  CHECK(std::abs(got - 0.8284271247461903) < 1e-10);
}

TEST_CASE("conformable integral is exactly zero on an empty range") {
  const auto f = ScalarFn::of_t([](double t) { return std::cos(t); });
  CHECK(conf_integral(f, 1.5, 1.5, FractionalOrder(0.7)) == 0.0);
}

TEST_CASE("conformable integral with a weight-cancelling integrand") {
  // f(tau) = tau^(1-alpha) makes the weighted integrand identically 1
  const FractionalOrder alpha(0.5);
  const auto f = ScalarFn::of_t([](double tau) { return std::pow(tau, 0.5); });
  CHECK(std::abs(conf_integral(f, 1.0, 4.0, alpha) - 3.0) < 1e-10);

  const auto weighted = [](double tau) { return std::pow(tau, 0.5) * std::pow(tau, -0.5); };
  CHECK(std::abs(midpoint_oracle(weighted, 1.0, 4.0) - 3.0) < 1e-6);
}

TEST_CASE("conformable integral rejects bad ranges") {
  const auto f = ScalarFn::of_t([](double) { return 1.0; });
  CHECK_THROWS_AS(conf_integral(f, 0.0, 1.0, FractionalOrder(0.5)), std::domain_error);
  CHECK_THROWS_AS(conf_integral(f, -1.0, 1.0, FractionalOrder(0.5)), std::domain_error);
  CHECK_THROWS_AS(conf_integral(f, 2.0, 1.0, FractionalOrder(0.5)), std::domain_error);
}

TEST_CASE("conformable integral is additive in the upper limit") {
  std::mt19937 rng(20240817);
  std::uniform_real_distribution<double> au(0.2, 1.5), wu(0.3, 1.2), al(0.05, 1.0);
  QuadratureConfig cfg;
  for (int trial = 0; trial < 40; ++trial) {
    const auto c = random_poly(rng);
    const auto f = ScalarFn::of_t([c](double t) { return horner(c, t); });
    const FractionalOrder alpha(al(rng));
    const double a = au(rng);
    const double t1 = a + wu(rng);
    const double t2 = t1 + wu(rng);
    const double whole = conf_integral(f, a, t2, alpha, cfg);
    const double split = conf_integral(f, a, t1, alpha, cfg) + conf_integral(f, t1, t2, alpha, cfg);
    CHECK(std::abs(whole - split) <= 2.0 * cfg.abs_tol + 1e-14);
  }
}

TEST_CASE("integral triangle inequality on sign-changing integrands") {
  std::mt19937 rng(777);
  std::uniform_real_distribution<double> au(0.3, 1.2), wu(0.5, 2.0), al(0.1, 1.0);
  QuadratureConfig cfg;
  cfg.abs_tol = 1e-9;
  for (int trial = 0; trial < 50; ++trial) {
    const auto c = random_poly(rng);
    const auto f = ScalarFn::of_t([c](double t) { return horner(c, t); });
    const auto fabs = ScalarFn::of_t([c](double t) { return std::abs(horner(c, t)); });
    const FractionalOrder alpha(al(rng));
    const double a = au(rng);
    const double b = a + wu(rng);
    const double lhs = std::abs(conf_integral(f, a, b, alpha, cfg));
    const double rhs = conf_integral(fabs, a, b, alpha, cfg);
    CHECK(lhs <= rhs + 1e-6);
  }
}

TEST_CASE("cumulative integral matches point-by-point integration") {
  std::mt19937 rng(99);
  const auto c = random_poly(rng);
  const auto h = [c](double t) { return horner(c, t) * std::pow(t, -0.25); };
  std::vector<double> grid;
  for (int i = 0; i <= 16; ++i) grid.push_back(1.0 + 0.125 * i);
  QuadratureConfig cfg;
  const auto cum = cumulative_integral(grid, h, cfg);
  REQUIRE(cum.size() == grid.size());
  CHECK(cum[0] == 0.0);
  for (std::size_t k = 1; k < grid.size(); ++k) {
    const double direct = integrate(h, grid[0], grid[k], cfg);
    CHECK(std::abs(cum[k] - direct) < 5.0 * cfg.abs_tol);
  }
}

TEST_CASE("cumulative integral validates the grid") {
  const auto h = [](double) { return 1.0; };
  std::vector<double> one{1.0};
  CHECK_THROWS_AS(cumulative_integral(one, h), std::invalid_argument);
  std::vector<double> bad{1.0, 2.0, 2.0};
  CHECK_THROWS_AS(cumulative_integral(bad, h), std::invalid_argument);
}
