#pragma once

#include <complex>
#include <iosfwd>
#include <vector>

#include "kmsad/ode.hpp"
#include "kmsad/thermal.hpp"

namespace kmsad {

using cplx = std::complex<double>;

// Smooth step chi(t) = psi(t+1) / (psi(t+1) + psi(-t)), psi(s) = exp(-1/s) for
// s > 0: exactly 0 for t <= -1, exactly 1 for t >= 0, monotone in between.
double smooth_step(double t);
double smooth_step_derivative(double t);

// chi_mu(t) = chi(t / mu).
class SwitchingProfile {
 public:
  explicit SwitchingProfile(double mu);

  double mu() const { return mu_; }
  double value(double t) const { return smooth_step(t / mu_); }
  double derivative(double t) const { return smooth_step_derivative(t / mu_) / mu_; }

  // Support of the derivative.
  double ramp_begin() const { return -mu_; }
  double ramp_end() const { return 0.0; }

 private:
  double mu_;
};

inline double chi_value(double t, const SwitchingProfile& prof) { return prof.value(t); }

// eps_mu(k, t) = sqrt(eps^2 + (eps_lambda^2 - eps^2) chi_mu(t)).
double time_frequency(double k_mag, double t, const SwitchingProfile& prof,
                      const ThermalParams& params);

struct ModeOptions {
  OdeOptions ode{};
  // The solve starts at t0 = -mu - pad.
  double pad = 1.0;
};

/// Solution of T'' + eps_mu(k,t)^2 T = 0 with T = e^{-i eps t}/sqrt(2 eps)
/// before the ramp, sampled at every accepted integrator step.
///
/// Dense output between samples is quintic Hermite using T, T' and
/// T'' = -eps_mu^2 T. Before the first sample the exact plane wave is used.
class ModeTrajectory {
 public:
  ModeTrajectory(double k_mag, const SwitchingProfile& prof, const ThermalParams& params,
                 std::vector<double> grid, std::vector<cplx> values, std::vector<cplx> rates);

  double k_mag() const { return k_mag_; }
  double mu() const { return profile_.mu(); }
  const SwitchingProfile& profile() const { return profile_; }
  const DispersionPair& dispersion() const { return disp_; }

  std::size_t size() const { return grid_.size(); }
  const std::vector<double>& grid() const { return grid_; }
  const std::vector<cplx>& values() const { return values_; }
  const std::vector<cplx>& rates() const { return rates_; }
  double t_begin() const { return grid_.front(); }
  double t_end() const { return grid_.back(); }

  struct Sample {
    cplx value;
    cplx rate;
  };
  // Throws DomainError for t beyond the last sample.
  Sample evaluate(double t) const;

  // conj(T') T - conj(T) T', which equals i for a canonically normalised mode.
  cplx wronskian(std::size_t i) const;
  double max_wronskian_residual() const;

  // CSV: t, Re T, Im T, Re T', Im T', |W - i|.
  void write_csv(std::ostream& os) const;

 private:
  double frequency_sq(double t) const;

  double k_mag_;
  SwitchingProfile profile_;
  ThermalParams params_;
  DispersionPair disp_;
  std::vector<double> grid_;
  std::vector<cplx> values_;
  std::vector<cplx> rates_;
};

ModeTrajectory solve_modes(double k_mag, const SwitchingProfile& prof,
                           const ThermalParams& params, double t_max,
                           const ModeOptions& opts = {});

// Instantaneous-frequency WKB mode (2 eps_mu)^{-1/2} exp(-i int_{t0}^t eps_mu).
cplx wkb_mode(double k_mag, double t, const SwitchingProfile& prof, const ThermalParams& params,
              double t0);

struct SwitchIntegrals {
  cplx sq;      // int T^2 chi_mu' dt
  double abs;   // int |T|^2 chi_mu' dt
};

// Quadrature over the trajectory's dense output on [-mu, 0].
SwitchIntegrals switch_integrals(const ModeTrajectory& traj);
SwitchIntegrals switch_integrals(double k_mag, const SwitchingProfile& prof,
                                 const ThermalParams& params, const ModeOptions& opts = {});

// Adiabatic-limit targets: (0, 1/(eps_lambda + eps)).
SwitchIntegrals switch_integral_limits(double k_mag, const ThermalParams& params);

struct BogoliubovPair {
  cplx a_plus;
  cplx a_minus;
  // Condition number of the 2x2 matching system.
  double condition = 1.0;

  double normalization_residual() const {
    return std::norm(a_plus) - std::norm(a_minus) - 1.0;
  }
};

// Match T(t*), T'(t*) against e^{-+i eps_lambda t}/sqrt(2 eps_lambda); t* >= 0.
BogoliubovPair bogoliubov(const ModeTrajectory& traj, double t_star = 0.0);

// Instantaneous switch at t = 0: A_pm = (sqrt(eps_l/eps) +- sqrt(eps/eps_l))/2.
BogoliubovPair sudden_quench_bogoliubov(const DispersionPair& disp);

// sup_t |T(t)| for any monotone switch: sqrt(max(1/eps, eps/eps_lambda^2)).
double mode_amplitude_bound(const DispersionPair& disp);

struct ErgodicAverages {
  cplx tt;      // mean of T(t1+tau) T(t2+tau)
  cplx tt_bar;  // mean of T(t1+tau) conj(T(t2+tau))
};

/// Finite-horizon means over tau in [0, horizon]. The part of the window where
/// either argument lies before t = 0 is integrated numerically on the
/// trajectory; the flat remainder is integrated in closed form from the
/// Bogoliubov coefficients.
ErgodicAverages ergodic_averages(double k_mag, const SwitchingProfile& prof,
                                 const ThermalParams& params, double t1, double t2,
                                 double horizon, const ModeOptions& opts = {});

// horizon -> infinity limits.
ErgodicAverages ergodic_limits(const BogoliubovPair& bog, double eps_lambda, double t1, double t2);

}  // namespace kmsad
