#include <doctest.h>

#include <cmath>

#include "kmsad/error.hpp"
#include "kmsad/oracles.hpp"
#include "kmsad/thermal.hpp"

using namespace kmsad;

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(ThermalParams(0.0, 1, 1, 0), DomainError);
  CHECK_THROWS_AS(ThermalParams(1, -1, 1, 0), DomainError);
  CHECK_THROWS_AS(ThermalParams(1, 1, 1, -1.0), DomainError);
  CHECK_THROWS_AS(ThermalParams(1, 1, 1, NAN), DomainError);
  CHECK_NOTHROW(ThermalParams(1, 1, 1, -0.5));
  CHECK_THROWS_AS(dispersion(-1.0, ThermalParams(1, 1, 1, 0)), DomainError);
}

TEST_CASE("dispersion and absorbed mass") {
  const ThermalParams p(1, 1, 2, 0.25);
  const auto d = dispersion(2.0, p);
  CHECK(d.eps == doctest::Approx(std::sqrt(5.0)).epsilon(1e-15));
  CHECK(d.eps_lambda == doctest::Approx(std::sqrt(5.5)).epsilon(1e-15));
  const auto a = p.absorbed();
  CHECK(a.lambda() == 0.0);
  CHECK(dispersion(2.0, a).eps == doctest::Approx(d.eps_lambda).epsilon(1e-15));
}

TEST_CASE("bose coefficients") {
  for (double x : {1e-6, 0.1, 1.0, 10.0, 700.0}) {
    const double bp = bose_coefficient(Sign::plus, 1.0, x);
    const double bm = bose_coefficient(Sign::minus, 1.0, x);
    CAPTURE(x);
    CHECK(std::abs(bp - bm - 1.0) <= 4e-16 * bp);
    CHECK(bm == doctest::Approx(std::exp(-x) * bp).epsilon(1e-12));
  }
  CHECK(bose_coefficient(Sign::minus, 1.0, 800.0) == 0.0);
  CHECK(bose_coefficient(Sign::plus, 1.0, 800.0) == 1.0);

  Eigen::ArrayXd eps(3);
  eps << 0.5, 1.0, 3.0;
  const Eigen::ArrayXd bp = bose_plus(2.0, eps);
  const Eigen::ArrayXd bm = bose_minus(2.0, eps);
  for (int i = 0; i < 3; ++i) {
    CHECK(bp[i] == bose_coefficient(Sign::plus, 2.0, eps[i]));
    CHECK(bm[i] == bose_coefficient(Sign::minus, 2.0, eps[i]));
  }
}

TEST_CASE("first derivative is -eps b+ b-") {
  for (double beta : {0.3, 1.0, 4.0}) {
    const double eps = 1.3;
    const double bp = bose_coefficient(Sign::plus, beta, eps);
    const double bm = bose_coefficient(Sign::minus, beta, eps);
    CHECK(bose_derivative(1, Sign::plus, beta, eps) == doctest::Approx(-eps * bp * bm).epsilon(1e-14));
    CHECK(bose_derivative(1, Sign::minus, beta, eps) == bose_derivative(1, Sign::plus, beta, eps));
  }
  CHECK(bose_derivative(0, Sign::minus, 1.0, 1.0) ==
        doctest::Approx(bose_coefficient(Sign::minus, 1.0, 1.0)).epsilon(1e-15));
}

TEST_CASE("derivative tower against Richardson and chain rule") {
  const std::pair<double, double> points[] = {{1.0, 1.0}, {0.5, 2.0}, {2.0, 0.7}};
  for (const auto& [beta, eps] : points) {
    const auto f = [eps = eps](double b) { return bose_coefficient(Sign::plus, b, eps); };
    for (int n = 1; n <= 4; ++n) {
      CAPTURE(beta);
      CAPTURE(n);
      const double exact = bose_derivative(n, Sign::plus, beta, eps);
      const auto fd = oracles::richardson_derivative(f, beta, n, beta / 8.0);
      CHECK(std::abs(fd.value - exact) <= 1e-6 * std::abs(exact));
    }
    for (int n = 1; n <= 12; ++n) {
      const double exact = bose_derivative(n, Sign::plus, beta, eps);
      CHECK(oracles::bose_derivative_chain_rule(n, beta, eps) == doctest::Approx(exact).epsilon(1e-11));
    }
  }
  CHECK_THROWS_AS(bose_derivative(-1, Sign::plus, 1, 1), DomainError);
  CHECK_THROWS_AS(bose_derivative(2, Sign::plus, 0.0, 1), DomainError);
  CHECK_THROWS_WITH_AS(bose_derivative(17, Sign::plus, 1, 1), doctest::Contains("cap exceeded"),
                       DomainError);
}

TEST_CASE("eulerian polynomial") {
  const auto row = eulerian_row_recursive(5);
  // Every term carries at least one b_-.
  CHECK(eulerian_polynomial(row, 1.5, 0.0) == 0.0);
  CHECK(eulerian_polynomial(eulerian_row_recursive(2), 2.0, 1.0) == doctest::Approx(6.0));
  // sum_k c_{n,k} = n!
  CHECK(eulerian_polynomial(row, 1.0, 1.0) == doctest::Approx(120.0));
}

TEST_CASE("shifted inverse temperature reproduces the shifted dispersion") {
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    for (int j = 0; j < 10; ++j) {
      const ThermalParams p(0.7, 1.0, 1.0, -0.5 + 2.5 * j / 9.0);
      const auto d = dispersion(5.0 * i / 9.0, p);
      const double bs = shifted_beta(p, d);
      CHECK(bs * d.eps == doctest::Approx(p.beta() * d.eps_lambda).epsilon(1e-14));
      CHECK(shift_ratio(p, d) == doctest::Approx(d.eps_lambda / d.eps - 1.0).epsilon(1e-12));
      for (Sign s : {Sign::plus, Sign::minus}) {
        worst = std::max(worst, std::abs(bose_coefficient(s, bs, d.eps) -
                                         bose_coefficient(s, p.beta(), d.eps_lambda)));
      }
    }
  }
  CHECK(worst <= 1e-12);
  const ThermalParams free(1, 1, 1, 0);
  CHECK(shifted_beta(free, dispersion(1.0, free)) == 1.0);
}
