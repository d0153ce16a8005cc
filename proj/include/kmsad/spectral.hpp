#pragma once

#include <functional>
#include <limits>
#include <string>
#include <utility>

#include "kmsad/modes.hpp"
#include "kmsad/quadrature.hpp"
#include "kmsad/thermal.hpp"

namespace kmsad {

// Which dispersion a quasi-free state oscillates with.
enum class Branch { free, shifted };

inline const char* to_string(Branch b) { return b == Branch::free ? "free" : "shifted"; }

/// Rotationally symmetric test function, Gaussian in |k| and in t:
///   f~(t, k) = exp(-(|k| - k_c)^2 / (2 sigma_k^2)) exp(-(t - t_c)^2 / (2 sigma_t^2)).
/// Its time transform uses f^(w, k) = int e^{-i w t} f~(t, k) dt, which pairs
/// e^{-i eps t} modes with the positive-frequency slot.
struct TestPacket {
  double k_c = 1.0;
  double sigma_k = 0.5;
  double t_c = 0.0;
  double sigma_t = 1.0;

  void validate() const;

  double spatial(double k) const;
  double temporal(double t) const;
  cplx temporal_transform(double omega) const;
  cplx hat(double omega, double k) const { return spatial(k) * temporal_transform(omega); }

  // Radius / half-width beyond which the Gaussian tails are below 1e-16 of the peak.
  static constexpr double kTailWidths = 9.0;
  double k_max() const { return k_c + kTailWidths * sigma_k; }
  std::pair<double, double> time_support() const {
    return {t_c - kTailWidths * sigma_t, t_c + kTailWidths * sigma_t};
  }
};

/// Quasi-free two-point function
///   w(f, g) = int d^3k / (2 w_k) sum_pm c_pm(k) f^(+-w_k, k) g^(-+w_k, -k)
/// with w_k the branch frequency. Immutable after construction.
class SpectralState {
 public:
  using Coefficient = std::function<double(double)>;

  SpectralState(Branch branch, ThermalParams params, Coefficient c_plus, Coefficient c_minus,
                std::string label);

  Branch branch() const { return branch_; }
  const ThermalParams& params() const { return params_; }
  const std::string& label() const { return label_; }

  double frequency(double k_mag) const;
  double c_plus(double k_mag) const { return c_plus_(k_mag); }
  double c_minus(double k_mag) const { return c_minus_(k_mag); }

  Eigen::ArrayXd frequencies(const Eigen::ArrayXd& k) const;
  Eigen::ArrayXd c_plus(const Eigen::ArrayXd& k) const;
  Eigen::ArrayXd c_minus(const Eigen::ArrayXd& k) const;

  // max |c_+ - c_- - 1| over the given momenta.
  double ccr_residual(const Eigen::ArrayXd& k) const;
  // min (c_+ + c_-) over the given momenta.
  double min_positivity(const Eigen::ArrayXd& k) const;

 private:
  Branch branch_;
  ThermalParams params_;
  Coefficient c_plus_;
  Coefficient c_minus_;
  std::string label_;
};

SpectralState free_kms(const ThermalParams& params);
SpectralState adiabatic_classical(const ThermalParams& params);
SpectralState adiabatic(const ThermalParams& params);

using BogoliubovSource = std::function<BogoliubovPair(double)>;

// A_pm(k) from the mode equation at switching scale prof.mu().
BogoliubovSource bogoliubov_source(const SwitchingProfile& prof, const ThermalParams& params,
                                   const ModeOptions& opts = {});

/// Ergodic mean of the KMS state pulled back by the classical dynamics:
/// c_+ = b_+ |A_+|^2 + b_- |A_-|^2, c_- = b_+ |A_-|^2 + b_- |A_+|^2 on the
/// shifted branch. Coefficient evaluation throws DomainError when a
/// Bogoliubov pair violates |A_+|^2 - |A_-|^2 = 1 by more than norm_tol.
SpectralState ness_classical(const ThermalParams& params, BogoliubovSource bog,
                             double norm_tol = 1e-8);

struct RadialQuadrature {
  int nodes = 64;
  // Nodes are doubled until the result moves by less than refine_tol
  // (relative), or max_nodes would be exceeded.
  double refine_tol = 1e-9;
  int max_nodes = 1024;
  bool check_refinement = true;
  int threads = 1;
};

// Gauss-Legendre nodes on [0, k_max] with weights including 4 pi k^2.
QuadratureRule radial_rule(const TestPacket& f, const TestPacket& g, int nodes);

struct PairingResult {
  cplx value;
  double refinement_delta = 0.0;
  int nodes = 0;
};

/// Sum over radial nodes of weight/(2 w) (c_+ f^(w) g^(-w) + c_- f^(-w) g^(w)).
/// This is the common kernel of every pairing; coefficient arrays need not
/// satisfy the CCR (series terms reuse it).
cplx spectral_sum(const QuadratureRule& rule, const Eigen::ArrayXd& omega,
                  const Eigen::ArrayXd& c_plus, const Eigen::ArrayXd& c_minus,
                  const TestPacket& f, const TestPacket& g);

// Throws NumericalError when doubling up to max_nodes does not settle the result.
PairingResult pair(const SpectralState& state, const TestPacket& f, const TestPacket& g,
                   const RadialQuadrature& quad = {});

struct FiniteMuOptions {
  ModeOptions modes{};
  // Mode trajectories are solved no further than this time.
  double horizon = std::numeric_limits<double>::infinity();
  // Time quadrature: panels no wider than this fraction of a period.
  double panel_periods = 0.25;
  int panel_points = 16;
};

/// Pairing of the KMS state pulled back through the mode equation at finite
/// switching scale:
///   int dt dt' d^3k f~(t,k) g~(t',k) [b_+ T(t) conj T(t') + b_- conj T(t) T(t')].
PairingResult pair_finite_mu(const SwitchingProfile& prof, const ThermalParams& params,
                             const TestPacket& f, const TestPacket& g,
                             const RadialQuadrature& quad = {},
                             const FiniteMuOptions& opts = {});

}  // namespace kmsad
