#include <doctest.h>

#include <cmath>

#include "kmsad/error.hpp"
#include "kmsad/spectral.hpp"

using namespace kmsad;

namespace {

const ThermalParams kParams(1.0, 1.0, 1.0, 0.5);
const TestPacket kF{1.0, 0.5, 20.0, 1.0};
const TestPacket kG{1.0, 0.5, 21.0, 1.0};

double rel(cplx a, cplx b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("packet transform uses e^{-i w t}") {
  const TestPacket p{0.0, 1.0, 1.5, 0.7};
  const auto [lo, hi] = p.time_support();
  const auto rule = composite_gauss_legendre(lo, hi, 0.2, 16);
  for (double w : {-2.0, 0.3, 1.7}) {
    cplx acc = 0.0;
    for (Eigen::Index i = 0; i < rule.size(); ++i) {
      acc += rule.weights[i] * p.temporal(rule.nodes[i]) * std::exp(cplx(0.0, -w * rule.nodes[i]));
    }
    CHECK(std::abs(acc - p.temporal_transform(w)) <= 1e-13);
  }
  CHECK(p.spatial(0.0) == 1.0);
  CHECK_THROWS_AS((TestPacket{1.0, 0.0, 0.0, 1.0}.validate()), DomainError);
  CHECK_THROWS_AS((TestPacket{-1.0, 1.0, 0.0, 1.0}.validate()), DomainError);
}

TEST_CASE("constructed states satisfy CCR and positivity") {
  const auto k = radial_rule(kF, kG, 128).nodes;
  const SpectralState states[] = {
      free_kms(kParams), adiabatic_classical(kParams), adiabatic(kParams),
      ness_classical(kParams, bogoliubov_source(SwitchingProfile(1.0), kParams))};
  for (const auto& s : states) {
    CAPTURE(s.label());
    CHECK(s.ccr_residual(k) <= 1e-10);
    CHECK(s.min_positivity(k) >= 0.0);
  }
  CHECK(states[0].branch() == Branch::free);
  CHECK(states[1].branch() == Branch::shifted);
  CHECK(states[1].frequency(0.0) == doctest::Approx(std::sqrt(1.5)));
  CHECK(states[0].frequency(0.0) == 1.0);
}

TEST_CASE("adiabatic state equals the classical one at absorbed mass") {
  const auto a = pair(adiabatic(kParams), kF, kG).value;
  const auto b = pair(adiabatic_classical(kParams.absorbed()), kF, kG).value;
  CHECK(rel(a, b) <= 1e-14);
  const auto k = radial_rule(kF, kG, 64).nodes;
  CHECK((adiabatic(kParams).c_plus(k) - adiabatic_classical(kParams.absorbed()).c_plus(k)).abs().maxCoeff() <= 1e-15);
}

TEST_CASE("without coupling every state is the free KMS state") {
  const ThermalParams free(0.8, 1.0, 1.0, 0.0);
  const auto ref = pair(free_kms(free), kF, kG).value;
  CHECK(pair(adiabatic(free), kF, kG).value == ref);
  CHECK(pair(adiabatic_classical(free), kF, kG).value == ref);
}

TEST_CASE("swapping real packets conjugates the pairing") {
  for (const auto& s : {free_kms(kParams), adiabatic(kParams)}) {
    const auto fg = pair(s, kF, kG).value;
    const auto gf = pair(s, kG, kF).value;
    CHECK(std::abs(gf - std::conj(fg)) <= 1e-14 * std::abs(fg));
    const auto ff = pair(s, kF, kF).value;
    CHECK(std::abs(ff.imag()) <= 1e-14 * std::abs(ff));
    CHECK(ff.real() > 0.0);
  }
}

TEST_CASE("radial refinement converges at a Gauss rate") {
  RadialQuadrature q;
  q.check_refinement = false;
  const auto s = adiabatic(kParams);
  q.nodes = 256;
  const auto ref = pair(s, kF, kG, q).value;
  double prev = INFINITY;
  for (int n : {8, 16, 32}) {
    q.nodes = n;
    const double err = std::abs(pair(s, kF, kG, q).value - ref);
    CHECK(err < 1e-2 * prev);
    prev = err;
  }
  const auto checked = pair(s, kF, kG);
  CHECK(checked.refinement_delta <= 1e-9 * std::abs(checked.value));
  CHECK(checked.nodes == 128);
}

TEST_CASE("unresolved radial integrand is reported") {
  RadialQuadrature q;
  q.nodes = 4;
  q.max_nodes = 16;
  const TestPacket late{1.0, 0.5, 300.0, 1.0};
  CHECK_THROWS_AS(pair(free_kms(kParams), kF, late, q), NumericalError);
  q.nodes = 1;
  CHECK_THROWS_AS(pair(free_kms(kParams), kF, kG, q), DomainError);
}

TEST_CASE("ness built from unmixed modes is the classical adiabatic state") {
  const auto unmixed = ness_classical(kParams, [](double) { return BogoliubovPair{1.0, 0.0, 1.0}; });
  const auto ref = adiabatic_classical(kParams);
  const auto k = radial_rule(kF, kG, 64).nodes;
  CHECK((unmixed.c_plus(k) - ref.c_plus(k)).abs().maxCoeff() <= 1e-12);
  CHECK((unmixed.c_minus(k) - ref.c_minus(k)).abs().maxCoeff() <= 1e-12);
  const auto broken = ness_classical(kParams, [](double) { return BogoliubovPair{2.0, 0.0, 1.0}; });
  CHECK_THROWS_AS(broken.c_plus(1.0), DomainError);
}

TEST_CASE("finite-mu pairing") {
  SUBCASE("coupling off reproduces the free state") {
    const ThermalParams free(1.0, 1.0, 1.0, 0.0);
    const auto a = pair_finite_mu(SwitchingProfile(5.0), free, kF, kG).value;
    CHECK(rel(a, pair(free_kms(free), kF, kG).value) <= 1e-9);
  }
  SUBCASE("real packet pairs with itself to a real number") {
    const auto ff = pair_finite_mu(SwitchingProfile(5.0), kParams, kF, kF).value;
    CHECK(std::abs(ff.imag()) <= 1e-10 * std::abs(ff));
  }
  SUBCASE("slow switching approaches the classical adiabatic state") {
    const auto target = pair(adiabatic_classical(kParams), kF, kG).value;
    double prev = INFINITY;
    for (double mu : {5.0, 10.0, 20.0, 40.0}) {
      const double gap = rel(pair_finite_mu(SwitchingProfile(mu), kParams, kF, kG).value, target);
      CHECK(gap < prev);
      prev = gap;
    }
    CHECK(prev <= 1e-2);
  }
  SUBCASE("thread count does not change the result") {
    RadialQuadrature one, three;
    three.threads = 3;
    const SwitchingProfile prof(5.0);
    CHECK(pair_finite_mu(prof, kParams, kF, kG, one).value ==
          pair_finite_mu(prof, kParams, kF, kG, three).value);
  }
  SUBCASE("packets beyond the horizon are rejected") {
    FiniteMuOptions opts;
    opts.horizon = 10.0;
    CHECK_THROWS_AS(pair_finite_mu(SwitchingProfile(5.0), kParams, kF, kG, {}, opts), DomainError);
  }
}
