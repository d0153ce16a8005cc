#include <doctest.h>

#include <cmath>

#include "kmsad/error.hpp"
#include "kmsad/series.hpp"

using namespace kmsad;

namespace {

const ThermalParams kBench(1.0, 1.0, 1.0, 0.1);
const TestPacket kF{1.0, 0.5, 20.0, 1.0};
const TestPacket kG{1.0, 0.5, 21.0, 1.0};

double rel_dev(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

}  // namespace

TEST_CASE("simplex factor") {
  CHECK(simplex_factor(1.0, 0) == 1.0);
  CHECK(simplex_factor(2.0, 3) == doctest::Approx(8.0 / 6.0));
  for (int n = 1; n <= 10; ++n) {
    CHECK(simplex_factor(1.4, n) * std::pow(2.0, n) == doctest::Approx(simplex_factor(2.8, n)).epsilon(1e-14));
  }
}

TEST_CASE("first-order coefficient sign") {
  Eigen::ArrayXd k(3);
  k << 0.0, 1.0, 3.0;
  for (auto path : {SeriesPath::descent_sum, SeriesPath::beta_derivative}) {
    const auto c = order_coefficients(1, kBench, k, path);
    for (int i = 0; i < 3; ++i) {
      const auto d = dispersion(k[i], kBench);
      const double s = kBench.mass_shift() / (d.eps_lambda + d.eps);
      const double want = -kBench.beta() * s * bose_coefficient(Sign::plus, 1.0, d.eps) *
                          bose_coefficient(Sign::minus, 1.0, d.eps);
      CHECK(c.plus[i] == doctest::Approx(want).epsilon(1e-14));
      CHECK(c.minus[i] == doctest::Approx(want).epsilon(1e-14));
    }
  }
}

TEST_CASE("descent sum and beta derivative agree at every order") {
  Eigen::ArrayXd k = Eigen::ArrayXd::LinSpaced(20, 0.0, 5.0);
  for (const auto& p : {kBench, kBench.with_lambda(-0.4), kBench.with_beta(0.3)}) {
    for (int n = 1; n <= kDefaultOrderCap; ++n) {
      const auto a = order_coefficients(n, p, k, SeriesPath::descent_sum);
      const auto b = order_coefficients(n, p, k, SeriesPath::beta_derivative);
      for (Eigen::Index i = 0; i < k.size(); ++i) {
        CAPTURE(n);
        CHECK(rel_dev(a.plus[i], b.plus[i]) <= 1e-10);
        CHECK(rel_dev(a.minus[i], b.minus[i]) <= 1e-10);
        // The +- sum is symmetric under c_{n,j} -> c_{n,n+1-j}.
        CHECK(rel_dev(a.plus[i], a.minus[i]) <= 1e-13);
      }
    }
  }
  const auto t_desc = nth_order_term(3, kBench, kF, kG, SeriesPath::descent_sum);
  const auto t_beta = nth_order_term(3, kBench, kF, kG, SeriesPath::beta_derivative);
  CHECK(std::abs(t_desc - t_beta) <= 1e-10 * std::abs(t_beta));
}

TEST_CASE("terms vanish without coupling") {
  const auto free = kBench.with_lambda(0.0);
  for (int n = 1; n <= 5; ++n) {
    CHECK(nth_order_term(n, free, kF, kG, SeriesPath::descent_sum) == cplx(0.0));
    CHECK(nth_order_term(n, free, kF, kG, SeriesPath::beta_derivative) == cplx(0.0));
  }
  const auto report = verify_resummation(free, kF, kG, 0, 1e-12);
  CHECK(report.verdict == Verdict::pass);
  CHECK(report.final_gap() == 0.0);
}

TEST_CASE("order range") {
  CHECK_THROWS_AS(nth_order_term(0, kBench, kF, kG, SeriesPath::descent_sum), DomainError);
  CHECK_THROWS_WITH_AS(nth_order_term(17, kBench, kF, kG, SeriesPath::descent_sum),
                       doctest::Contains("cap exceeded"), DomainError);
  CHECK_THROWS_AS(partial_sum(-1, kBench, kF, kG), DomainError);
  CHECK_THROWS_AS(verify_resummation(kBench, kF, kG, 4, 0.0), DomainError);
}

TEST_CASE("partial sums") {
  RadialQuadrature quad;
  quad.check_refinement = false;
  CHECK(partial_sum(0, kBench, kF, kG) == pair(adiabatic_classical(kBench), kF, kG, quad).value);
  const auto s2 = partial_sum(2, kBench, kF, kG);
  const auto by_hand = partial_sum(0, kBench, kF, kG) +
                       nth_order_term(1, kBench, kF, kG, SeriesPath::beta_derivative) +
                       nth_order_term(2, kBench, kF, kG, SeriesPath::beta_derivative);
  CHECK(std::abs(s2 - by_hand) <= 1e-15 * std::abs(s2));
}

TEST_CASE("resummation at the default bench") {
  const auto report = verify_resummation(kBench, kF, kG, 8, 1e-8);
  REQUIRE(report.verdict == Verdict::pass);
  CHECK(report.final_gap() <= 1e-8);
  CHECK(report.max_dual_path_deviation() <= 1e-10);
  CHECK(report.orders.size() == 9);
  CHECK(report.radius_ratio < 0.1);
  const auto closed = report.closed_form;
  SeriesOptions same_nodes;
  same_nodes.quad.nodes = report.nodes;
  CHECK(report.orders.back().cumulative == partial_sum(8, kBench, kF, kG, same_nodes));

  for (std::size_t n = 1; n < report.orders.size(); ++n) {
    CAPTURE(n);
    CHECK(report.orders[n].gap_to_closed_form < report.orders[n - 1].gap_to_closed_form);
    // Remainder controlled by the first omitted term.
    if (n + 1 < report.orders.size()) {
      const double remainder = std::abs(report.orders[n].cumulative - closed);
      CHECK(remainder <= 2.0 * std::abs(report.orders[n + 1].term_value));
    }
    // Successive terms shrink at least as fast as the worst per-node shift ratio.
    if (n >= 2) {
      const double ratio = std::abs(report.orders[n].term_value) / std::abs(report.orders[n - 1].term_value);
      CHECK(ratio <= report.radius_ratio);
    }
  }
}

TEST_CASE("radius guard") {
  const auto strong = kBench.with_lambda(4.0);
  const auto report = verify_resummation(strong, kF, kG, 8, 1e-8);
  CHECK(report.verdict == Verdict::not_expected_to_converge);
  CHECK(report.radius_ratio >= 1.0);
  CHECK(report.message.find("not expected to converge") != std::string::npos);
  // Negative coupling keeps every node inside the disc.
  const auto k = radial_rule(kF, kG, 64).nodes;
  CHECK(convergence_ratio(kBench.with_lambda(-0.9), k) < 1.0);
  CHECK(verify_resummation(kBench.with_lambda(-0.3), kF, kG, 12, 1e-8).verdict == Verdict::pass);
}
