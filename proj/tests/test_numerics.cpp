#include <doctest.h>

#include <atomic>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "kmsad/error.hpp"
#include "kmsad/ode.hpp"
#include "kmsad/parallel.hpp"
#include "kmsad/quadrature.hpp"

using namespace kmsad;

TEST_CASE("gauss-legendre is exact to degree 2n-1") {
  for (int n : {1, 2, 5, 16, 64}) {
    const auto rule = gauss_legendre(n, -0.5, 2.0);
    for (int d = 0; d <= 2 * n - 1; d += std::max(1, n / 4)) {
      const double exact = (std::pow(2.0, d + 1) - std::pow(-0.5, d + 1)) / (d + 1);
      const double approx = (rule.weights * rule.nodes.pow(d)).sum();
      CAPTURE(n);
      CAPTURE(d);
      CHECK(approx == doctest::Approx(exact).epsilon(1e-13));
    }
  }
  CHECK_THROWS_AS(gauss_legendre(0), DomainError);
  CHECK_THROWS_AS(gauss_legendre(4, 1.0, 1.0), DomainError);
}

TEST_CASE("composite rule covers the interval") {
  const auto rule = composite_gauss_legendre(0.0, 10.0, 0.3, 8);
  CHECK(rule.weights.sum() == doctest::Approx(10.0).epsilon(1e-14));
  CHECK((rule.weights * rule.nodes.sin()).sum() == doctest::Approx(1.0 - std::cos(10.0)).epsilon(1e-13));
  CHECK_THROWS_AS(composite_gauss_legendre(0.0, 1.0, 0.0, 8), DomainError);
}

TEST_CASE("adaptive quadrature") {
  const auto r = integrate_adaptive([](double x) { return std::sqrt(x); }, 0.0, 1.0, 1e-12);
  CHECK(r.value == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(r.error_estimate <= 1e-12);
  CHECK_THROWS_AS(integrate_adaptive([](double x) { return std::sin(400.0 * x); }, 0.0, 10.0, 1e-14, 2),
                  NumericalError);
}

TEST_CASE("pairwise summation") {
  std::vector<double> v(1000, 0.1);
  CHECK(pairwise_sum(std::span<const double>(v)) == doctest::Approx(100.0).epsilon(1e-14));
  Eigen::ArrayXcd z = Eigen::ArrayXcd::Constant(37, {1.0, -2.0});
  CHECK(pairwise_sum(z) == std::complex<double>(37.0, -74.0));
}

TEST_CASE("dopri5 on a complex oscillator") {
  using State = Eigen::Vector2cd;
  const double w = 3.0;
  auto rhs = [w](double, const State& y) { return State(y[1], -w * w * y[0]); };
  const State y0(1.0, std::complex<double>(0.0, -w));
  const auto sol = integrate_dopri5<State>(rhs, 0.0, y0, 10.0);
  const auto exact = std::exp(std::complex<double>(0.0, -w * 10.0));
  CHECK(sol.t.back() == 10.0);
  CHECK(std::abs(sol.y.back()[0] - exact) <= 1e-10);
  for (std::size_t i = 1; i < sol.t.size(); ++i) CHECK(sol.t[i] > sol.t[i - 1]);

  OdeOptions tight;
  tight.max_steps = 5;
  CHECK_THROWS_AS(integrate_dopri5<State>(rhs, 0.0, y0, 10.0, tight), NumericalError);
  CHECK_THROWS_AS(integrate_dopri5<State>(rhs, 1.0, y0, 1.0), DomainError);
}

TEST_CASE("parallel_for covers every index once and rethrows") {
  std::vector<int> hits(101, 0);
  parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) CHECK(h == 1);
  CHECK_THROWS_AS(parallel_for(10, 3,
                               [](std::size_t i) {
                                 if (i == 7) throw std::runtime_error("boom");
                               }),
                  std::runtime_error);
}
