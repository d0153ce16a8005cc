#include "kmsad/modes.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>

#include "kmsad/quadrature.hpp"

namespace kmsad {

namespace {

constexpr cplx kI{0.0, 1.0};

// chi(t) and 1 - chi(t) without cancellation, for t in (-1, 0).
std::pair<double, double> step_parts(double t) {
  const double a = std::exp(-1.0 / (t + 1.0));
  const double b = std::exp(1.0 / t);
  return {a / (a + b), b / (a + b)};
}

cplx plane_wave(double eps, double t) { return std::exp(-kI * (eps * t)) / std::sqrt(2.0 * eps); }

}  // namespace

double smooth_step(double t) {
  if (t <= -1.0) return 0.0;
  if (t >= 0.0) return 1.0;
  return step_parts(t).first;
}

double smooth_step_derivative(double t) {
  if (t <= -1.0 || t >= 0.0) return 0.0;
  const auto [chi, rest] = step_parts(t);
  if (chi == 0.0 || rest == 0.0) return 0.0;
  const double u = t + 1.0;
  return chi * rest * (1.0 / (u * u) + 1.0 / (t * t));
}

SwitchingProfile::SwitchingProfile(double mu) : mu_(mu) {
  if (!(mu > 0.0) || !std::isfinite(mu)) throw DomainError("switching profile: mu must be positive");
}

double time_frequency(double k_mag, double t, const SwitchingProfile& prof,
                      const ThermalParams& params) {
  const auto disp = dispersion(k_mag, params);
  return std::sqrt(disp.eps * disp.eps + params.mass_shift() * prof.value(t));
}

// ---------------------------------------------------------------------------
// ModeTrajectory

ModeTrajectory::ModeTrajectory(double k_mag, const SwitchingProfile& prof,
                               const ThermalParams& params, std::vector<double> grid,
                               std::vector<cplx> values, std::vector<cplx> rates)
    : k_mag_(k_mag),
      profile_(prof),
      params_(params),
      disp_(kmsad::dispersion(k_mag, params)),
      grid_(std::move(grid)),
      values_(std::move(values)),
      rates_(std::move(rates)) {
  if (grid_.size() < 2 || grid_.size() != values_.size() || grid_.size() != rates_.size()) {
    throw DomainError("mode trajectory: inconsistent sample arrays");
  }
  if (!std::is_sorted(grid_.begin(), grid_.end()) ||
      std::adjacent_find(grid_.begin(), grid_.end()) != grid_.end()) {
    throw DomainError("mode trajectory: grid must be strictly increasing");
  }
}

double ModeTrajectory::frequency_sq(double t) const {
  return disp_.eps * disp_.eps + params_.mass_shift() * profile_.value(t);
}

ModeTrajectory::Sample ModeTrajectory::evaluate(double t) const {
  if (t <= grid_.front()) {
    if (t > profile_.ramp_begin()) {
      throw DomainError("mode trajectory: time inside the ramp but before the first sample");
    }
    const cplx v = plane_wave(disp_.eps, t);
    return {v, -kI * disp_.eps * v};
  }
  if (t > grid_.back()) throw DomainError("mode trajectory: time beyond the solved range");

  const auto it = std::upper_bound(grid_.begin(), grid_.end(), t);
  const std::size_t i = std::min<std::size_t>(it - grid_.begin(), grid_.size() - 1) - 1;
  const double t0 = grid_[i];
  const double t1 = grid_[i + 1];
  const double h = t1 - t0;
  const double s = (t - t0) / h;

  // Quintic Hermite basis on [0, 1] with derivatives.
  const double s2 = s * s, s3 = s2 * s, s4 = s3 * s, s5 = s4 * s;
  const double h0 = 1 - 10 * s3 + 15 * s4 - 6 * s5;
  const double h1 = 10 * s3 - 15 * s4 + 6 * s5;
  const double g0 = s - 6 * s3 + 8 * s4 - 3 * s5;
  const double g1 = -4 * s3 + 7 * s4 - 3 * s5;
  const double k0 = 0.5 * (s2 - 3 * s3 + 3 * s4 - s5);
  const double k1 = 0.5 * (s3 - 2 * s4 + s5);

  const double w0 = frequency_sq(t0);
  const double w1 = frequency_sq(t1);
  const double dw0 = params_.mass_shift() * profile_.derivative(t0);
  const double dw1 = params_.mass_shift() * profile_.derivative(t1);

  const cplx y0 = values_[i], y1 = values_[i + 1];
  const cplx d0 = rates_[i], d1 = rates_[i + 1];
  const cplx a0 = -w0 * y0, a1 = -w1 * y1;
  // Third derivative for the rate interpolant: -(w' T + w T').
  const cplx j0 = -(dw0 * y0 + w0 * d0), j1 = -(dw1 * y1 + w1 * d1);

  const cplx value = h0 * y0 + h1 * y1 + h * (g0 * d0 + g1 * d1) + h * h * (k0 * a0 + k1 * a1);
  const cplx rate = h0 * d0 + h1 * d1 + h * (g0 * a0 + g1 * a1) + h * h * (k0 * j0 + k1 * j1);
  return {value, rate};
}

cplx ModeTrajectory::wronskian(std::size_t i) const {
  return std::conj(rates_[i]) * values_[i] - std::conj(values_[i]) * rates_[i];
}

double ModeTrajectory::max_wronskian_residual() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < size(); ++i) worst = std::max(worst, std::abs(wronskian(i) - kI));
  return worst;
}

void ModeTrajectory::write_csv(std::ostream& os) const {
  os << "t,re_T,im_T,re_dT,im_dT,wronskian_residual\n";
  char line[256];
  for (std::size_t i = 0; i < size(); ++i) {
    std::snprintf(line, sizeof line, "%.17e,%.17e,%.17e,%.17e,%.17e,%.17e\n", grid_[i],
                  values_[i].real(), values_[i].imag(), rates_[i].real(), rates_[i].imag(),
                  std::abs(wronskian(i) - kI));
    os << line;
  }
}

ModeTrajectory solve_modes(double k_mag, const SwitchingProfile& prof,
                           const ThermalParams& params, double t_max, const ModeOptions& opts) {
  if (!(t_max >= 0.0)) throw DomainError("solve_modes: t_max must be >= 0");
  if (!(opts.ode.rtol > 0.0) || !(opts.ode.atol > 0.0)) {
    throw DomainError("solve_modes: tolerances must be positive");
  }
  const auto disp = dispersion(k_mag, params);
  const double eps2 = disp.eps * disp.eps;
  const double shift = params.mass_shift();
  const double t0 = prof.ramp_begin() - opts.pad;

  using State = Eigen::Matrix<cplx, 2, 1>;
  State y0;
  y0[0] = plane_wave(disp.eps, t0);
  y0[1] = -kI * disp.eps * y0[0];

  auto rhs = [&](double t, const State& y) -> State {
    const double w2 = eps2 + shift * prof.value(t);
    return State(y[1], -w2 * y[0]);
  };
  const auto sol = integrate_dopri5(rhs, t0, y0, t_max, opts.ode);

  std::vector<cplx> values(sol.y.size()), rates(sol.y.size());
  for (std::size_t i = 0; i < sol.y.size(); ++i) {
    values[i] = sol.y[i][0];
    rates[i] = sol.y[i][1];
  }
  return ModeTrajectory(k_mag, prof, params, sol.t, std::move(values), std::move(rates));
}

cplx wkb_mode(double k_mag, double t, const SwitchingProfile& prof, const ThermalParams& params,
              double t0) {
  if (t0 > prof.ramp_begin()) throw DomainError("wkb_mode: t0 must precede the ramp");
  const auto disp = dispersion(k_mag, params);
  auto freq = [&](double s) { return time_frequency(k_mag, s, prof, params); };

  // Phase: constant eps before the ramp, constant eps_lambda after it.
  double phase = 0.0;
  const double lo = t0;
  const double hi = t;
  const double ramp_lo = std::max(lo, prof.ramp_begin());
  const double ramp_hi = std::min(hi, prof.ramp_end());
  if (hi <= prof.ramp_begin()) {
    phase = disp.eps * (hi - lo);
  } else {
    phase = disp.eps * (ramp_lo - lo);
    if (ramp_hi > ramp_lo) {
      phase += integrate_adaptive(freq, ramp_lo, ramp_hi, 1e-13 * std::max(1.0, prof.mu())).value;
    }
    if (hi > prof.ramp_end()) phase += disp.eps_lambda * (hi - prof.ramp_end());
  }
  // The e^{-i eps t0} factor aligns the WKB mode with T before the ramp.
  return std::exp(-kI * (disp.eps * t0 + phase)) / std::sqrt(2.0 * freq(t));
}

// ---------------------------------------------------------------------------
// Switching integrals

SwitchIntegrals switch_integrals(const ModeTrajectory& traj) {
  const auto& prof = traj.profile();
  if (traj.t_begin() > prof.ramp_begin() || traj.t_end() < prof.ramp_end()) {
    throw DomainError("switch_integrals: trajectory grid does not cover [-mu, 0]");
  }
  const double panel = std::min(prof.mu() / 16.0, 1.0 / traj.dispersion().eps_lambda);
  const auto rule = composite_gauss_legendre(prof.ramp_begin(), prof.ramp_end(), panel, 16);

  std::vector<cplx> sq(rule.size());
  std::vector<double> ab(rule.size());
  for (Eigen::Index i = 0; i < rule.size(); ++i) {
    const double t = rule.nodes[i];
    const double weight = rule.weights[i] * prof.derivative(t);
    const cplx v = traj.evaluate(t).value;
    sq[i] = weight * v * v;
    ab[i] = weight * std::norm(v);
  }
  return {pairwise_sum(std::span<const cplx>(sq)), pairwise_sum(std::span<const double>(ab))};
}

SwitchIntegrals switch_integrals(double k_mag, const SwitchingProfile& prof,
                                 const ThermalParams& params, const ModeOptions& opts) {
  return switch_integrals(solve_modes(k_mag, prof, params, 0.0, opts));
}

SwitchIntegrals switch_integral_limits(double k_mag, const ThermalParams& params) {
  const auto disp = dispersion(k_mag, params);
  return {cplx{0.0, 0.0}, 1.0 / (disp.eps_lambda + disp.eps)};
}

// ---------------------------------------------------------------------------
// Bogoliubov coefficients

BogoliubovPair bogoliubov(const ModeTrajectory& traj, double t_star) {
  if (!(t_star >= traj.profile().ramp_end())) {
    throw DomainError("bogoliubov: matching time must lie after the ramp (t* >= 0)");
  }
  const double w = traj.dispersion().eps_lambda;
  const double norm = 1.0 / std::sqrt(2.0 * w);
  const cplx down = std::exp(-kI * (w * t_star));
  const cplx up = std::exp(kI * (w * t_star));

  Eigen::Matrix2cd basis;
  basis << norm * down, norm * up, -kI * w * norm * down, kI * w * norm * up;
  const auto sample = traj.evaluate(t_star);
  const Eigen::Vector2cd rhs(sample.value, sample.rate);
  const Eigen::Vector2cd a = basis.partialPivLu().solve(rhs);

  const Eigen::JacobiSVD<Eigen::Matrix2cd> svd(basis);
  const auto sv = svd.singularValues();
  return {a[0], a[1], sv[0] / sv[1]};
}

BogoliubovPair sudden_quench_bogoliubov(const DispersionPair& disp) {
  const double up = std::sqrt(disp.eps_lambda / disp.eps);
  const double down = std::sqrt(disp.eps / disp.eps_lambda);
  return {cplx{0.5 * (up + down), 0.0}, cplx{0.5 * (up - down), 0.0}, 1.0};
}

double mode_amplitude_bound(const DispersionPair& disp) {
  // Energy E = |T'|^2 + w^2 |T|^2 obeys E' = 2 w w' |T|^2 and E(t0) = eps.
  return std::sqrt(std::max(1.0 / disp.eps, disp.eps / (disp.eps_lambda * disp.eps_lambda)));
}

// ---------------------------------------------------------------------------
// Ergodic means

namespace {

// int_a^b e^{-i c tau} d tau.
cplx oscillatory_integral(double c, double a, double b) {
  if (c == 0.0) return {b - a, 0.0};
  return (std::exp(-kI * (c * b)) - std::exp(-kI * (c * a))) / (-kI * c);
}

}  // namespace

ErgodicAverages ergodic_averages(double k_mag, const SwitchingProfile& prof,
                                 const ThermalParams& params, double t1, double t2,
                                 double horizon, const ModeOptions& opts) {
  if (!(horizon > 0.0)) throw DomainError("ergodic_averages: horizon must be positive");
  const double tau_min = std::max({0.0, -t1, -t2});
  const double t_needed = std::max(0.0, std::max(t1, t2) + std::min(tau_min, horizon));
  const auto traj = solve_modes(k_mag, prof, params, t_needed, opts);

  cplx sum_tt{0.0, 0.0};
  cplx sum_tt_bar{0.0, 0.0};

  const double tau_num = std::min(tau_min, horizon);
  if (tau_num > 0.0) {
    const double panel = std::min(1.0, 0.5 / traj.dispersion().eps_lambda);
    const auto rule = composite_gauss_legendre(0.0, tau_num, panel, 16);
    std::vector<cplx> tt(rule.size()), tt_bar(rule.size());
    for (Eigen::Index i = 0; i < rule.size(); ++i) {
      const cplx u = traj.evaluate(t1 + rule.nodes[i]).value;
      const cplx v = traj.evaluate(t2 + rule.nodes[i]).value;
      tt[i] = rule.weights[i] * u * v;
      tt_bar[i] = rule.weights[i] * u * std::conj(v);
    }
    sum_tt += pairwise_sum(std::span<const cplx>(tt));
    sum_tt_bar += pairwise_sum(std::span<const cplx>(tt_bar));
  }

  if (horizon > tau_min) {
    const auto bog = bogoliubov(traj, 0.0);
    const double w = traj.dispersion().eps_lambda;
    const double s = t1 + t2;
    const double d = t1 - t2;
    const double len = horizon - tau_min;
    const cplx down = oscillatory_integral(2.0 * w, tau_min, horizon);
    const cplx up = oscillatory_integral(-2.0 * w, tau_min, horizon);
    const cplx es_down = std::exp(-kI * (w * s));
    const cplx es_up = std::exp(kI * (w * s));
    const auto& ap = bog.a_plus;
    const auto& am = bog.a_minus;

    sum_tt += (ap * ap * es_down * down + am * am * es_up * up +
               2.0 * ap * am * std::cos(w * d) * len) /
              (2.0 * w);
    sum_tt_bar += (std::norm(ap) * std::exp(-kI * (w * d)) * len +
                   std::norm(am) * std::exp(kI * (w * d)) * len +
                   ap * std::conj(am) * es_down * down + am * std::conj(ap) * es_up * up) /
                  (2.0 * w);
  }
  return {sum_tt / horizon, sum_tt_bar / horizon};
}

ErgodicAverages ergodic_limits(const BogoliubovPair& bog, double eps_lambda, double t1,
                               double t2) {
  const double d = t1 - t2;
  const cplx tt = bog.a_plus * bog.a_minus * 2.0 * std::cos(eps_lambda * d) / (2.0 * eps_lambda);
  const cplx tt_bar = (std::norm(bog.a_plus) * std::exp(-kI * (eps_lambda * d)) +
                       std::norm(bog.a_minus) * std::exp(kI * (eps_lambda * d))) /
                      (2.0 * eps_lambda);
  return {tt, tt_bar};
}

}  // namespace kmsad
