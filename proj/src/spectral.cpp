#include "kmsad/spectral.hpp"

#include <cstdio>
#include <numbers>

#include "kmsad/error.hpp"
#include "kmsad/parallel.hpp"

namespace kmsad {

void TestPacket::validate() const {
  if (!(k_c >= 0.0) || !(sigma_k > 0.0) || !(sigma_t > 0.0) || !std::isfinite(t_c)) {
    throw DomainError("test packet: need k_c >= 0, sigma_k > 0, sigma_t > 0, finite t_c");
  }
}

double TestPacket::spatial(double k) const {
  const double x = (k - k_c) / sigma_k;
  return std::exp(-0.5 * x * x);
}

double TestPacket::temporal(double t) const {
  const double x = (t - t_c) / sigma_t;
  return std::exp(-0.5 * x * x);
}

cplx TestPacket::temporal_transform(double omega) const {
  const double s = omega * sigma_t;
  return std::sqrt(2.0 * std::numbers::pi) * sigma_t * std::exp(-0.5 * s * s) *
         std::exp(cplx{0.0, -omega * t_c});
}

// ---------------------------------------------------------------------------

SpectralState::SpectralState(Branch branch, ThermalParams params, Coefficient c_plus,
                             Coefficient c_minus, std::string label)
    : branch_(branch),
      params_(params),
      c_plus_(std::move(c_plus)),
      c_minus_(std::move(c_minus)),
      label_(std::move(label)) {}

double SpectralState::frequency(double k_mag) const {
  const auto d = dispersion(k_mag, params_);
  return branch_ == Branch::free ? d.eps : d.eps_lambda;
}

Eigen::ArrayXd SpectralState::frequencies(const Eigen::ArrayXd& k) const {
  const double m2 = branch_ == Branch::free ? params_.m_sq() : params_.m_sq() + params_.mass_shift();
  return (k.square() + m2).sqrt();
}

Eigen::ArrayXd SpectralState::c_plus(const Eigen::ArrayXd& k) const {
  return k.unaryExpr([this](double x) { return c_plus_(x); });
}

Eigen::ArrayXd SpectralState::c_minus(const Eigen::ArrayXd& k) const {
  return k.unaryExpr([this](double x) { return c_minus_(x); });
}

double SpectralState::ccr_residual(const Eigen::ArrayXd& k) const {
  return (c_plus(k) - c_minus(k) - 1.0).abs().maxCoeff();
}

double SpectralState::min_positivity(const Eigen::ArrayXd& k) const {
  return (c_plus(k) + c_minus(k)).minCoeff();
}

SpectralState free_kms(const ThermalParams& params) {
  const double beta = params.beta();
  auto eps = [params](double k) { return dispersion(k, params).eps; };
  return {Branch::free, params,
          [=](double k) { return bose_coefficient(Sign::plus, beta, eps(k)); },
          [=](double k) { return bose_coefficient(Sign::minus, beta, eps(k)); }, "free_kms"};
}

SpectralState adiabatic_classical(const ThermalParams& params) {
  // Old-frequency thermal weights on the new branch.
  const double beta = params.beta();
  auto eps = [params](double k) { return dispersion(k, params).eps; };
  return {Branch::shifted, params,
          [=](double k) { return bose_coefficient(Sign::plus, beta, eps(k)); },
          [=](double k) { return bose_coefficient(Sign::minus, beta, eps(k)); },
          "adiabatic_classical"};
}

SpectralState adiabatic(const ThermalParams& params) {
  const double beta = params.beta();
  auto eps_l = [params](double k) { return dispersion(k, params).eps_lambda; };
  return {Branch::shifted, params,
          [=](double k) { return bose_coefficient(Sign::plus, beta, eps_l(k)); },
          [=](double k) { return bose_coefficient(Sign::minus, beta, eps_l(k)); }, "adiabatic"};
}

BogoliubovSource bogoliubov_source(const SwitchingProfile& prof, const ThermalParams& params,
                                   const ModeOptions& opts) {
  return [=](double k) { return bogoliubov(solve_modes(k, prof, params, 0.0, opts), 0.0); };
}

SpectralState ness_classical(const ThermalParams& params, BogoliubovSource bog, double norm_tol) {
  const double beta = params.beta();
  auto weights = [=](double k) {
    const auto pair = bog(k);
    if (std::abs(pair.normalization_residual()) > norm_tol) {
      throw DomainError("ness_classical: Bogoliubov pair violates |A+|^2 - |A-|^2 = 1 at k=" +
                        std::to_string(k));
    }
    const double eps = dispersion(k, params).eps;
    return std::array<double, 4>{bose_coefficient(Sign::plus, beta, eps),
                                 bose_coefficient(Sign::minus, beta, eps),
                                 std::norm(pair.a_plus), std::norm(pair.a_minus)};
  };
  return {Branch::shifted, params,
          [=](double k) {
            const auto [bp, bm, ap, am] = weights(k);
            return bp * ap + bm * am;
          },
          [=](double k) {
            const auto [bp, bm, ap, am] = weights(k);
            return bp * am + bm * ap;
          },
          "ness_classical"};
}

// ---------------------------------------------------------------------------

QuadratureRule radial_rule(const TestPacket& f, const TestPacket& g, int nodes) {
  f.validate();
  g.validate();
  auto rule = gauss_legendre(nodes, 0.0, std::max(f.k_max(), g.k_max()));
  rule.weights *= 4.0 * std::numbers::pi * rule.nodes.square();
  return rule;
}

namespace {

struct Accumulated {
  cplx value;
  double magnitude;  // sum of |terms|, the rounding scale
};

Accumulated accumulate(const std::vector<cplx>& terms) {
  std::vector<double> mags(terms.size());
  for (std::size_t i = 0; i < terms.size(); ++i) mags[i] = std::abs(terms[i]);
  return {pairwise_sum(std::span<const cplx>(terms)), pairwise_sum(std::span<const double>(mags))};
}

std::vector<cplx> spectral_terms(const QuadratureRule& rule, const Eigen::ArrayXd& omega,
                                 const Eigen::ArrayXd& c_plus, const Eigen::ArrayXd& c_minus,
                                 const TestPacket& f, const TestPacket& g) {
  std::vector<cplx> terms(rule.size());
  for (Eigen::Index i = 0; i < rule.size(); ++i) {
    const double k = rule.nodes[i];
    const double w = omega[i];
    // Rotational symmetry: g^(., -k) = g^(., k).
    const cplx plus = f.hat(w, k) * g.hat(-w, k);
    const cplx minus = f.hat(-w, k) * g.hat(w, k);
    terms[i] = rule.weights[i] / (2.0 * w) * (c_plus[i] * plus + c_minus[i] * minus);
  }
  return terms;
}

PairingResult refine(const std::function<Accumulated(int)>& eval, const RadialQuadrature& quad,
                     const char* what) {
  if (quad.nodes < 2) throw DomainError(std::string(what) + ": need at least 2 radial nodes");
  auto coarse = eval(quad.nodes);
  PairingResult out{coarse.value, 0.0, quad.nodes};
  if (!quad.check_refinement) return out;
  for (int nodes = 2 * quad.nodes;; nodes *= 2) {
    const auto fine = eval(nodes);
    out = {fine.value, std::abs(fine.value - coarse.value), nodes};
    const double scale = std::max(std::abs(fine.value), 1e-3 * fine.magnitude);
    if (out.refinement_delta <= quad.refine_tol * scale) return out;
    if (2 * nodes > quad.max_nodes) {
      char buf[200];
      std::snprintf(buf, sizeof buf,
                    ": radial quadrature not converged at %d nodes, doubling moved the result "
                    "by %.3e (relative %.3e, tolerance %.1e)",
                    nodes, out.refinement_delta, out.refinement_delta / scale, quad.refine_tol);
      throw NumericalError(what + std::string(buf));
    }
    coarse = fine;
  }
}

}  // namespace

cplx spectral_sum(const QuadratureRule& rule, const Eigen::ArrayXd& omega,
                  const Eigen::ArrayXd& c_plus, const Eigen::ArrayXd& c_minus,
                  const TestPacket& f, const TestPacket& g) {
  return accumulate(spectral_terms(rule, omega, c_plus, c_minus, f, g)).value;
}

PairingResult pair(const SpectralState& state, const TestPacket& f, const TestPacket& g,
                   const RadialQuadrature& quad) {
  auto eval = [&](int nodes) {
    const auto rule = radial_rule(f, g, nodes);
    return accumulate(spectral_terms(rule, state.frequencies(rule.nodes),
                                     state.c_plus(rule.nodes), state.c_minus(rule.nodes), f, g));
  };
  return refine(eval, quad, "pair");
}

PairingResult pair_finite_mu(const SwitchingProfile& prof, const ThermalParams& params,
                             const TestPacket& f, const TestPacket& g,
                             const RadialQuadrature& quad, const FiniteMuOptions& opts) {
  const double t_end = std::max({0.0, f.time_support().second, g.time_support().second});
  if (t_end > opts.horizon) {
    throw DomainError("pair_finite_mu: packet support extends beyond the solved trajectory");
  }

  auto eval = [&](int nodes) {
    const auto rule = radial_rule(f, g, nodes);
    std::vector<cplx> terms(rule.size());
    parallel_for(rule.size(), quad.threads, [&](std::size_t i) {
      const double k = rule.nodes[i];
      const auto traj = solve_modes(k, prof, params, t_end, opts.modes);
      const auto& disp = traj.dispersion();
      const double period = 2.0 * std::numbers::pi / std::max(disp.eps, disp.eps_lambda);

      // (int G T dt, int G conj(T) dt) for one packet's temporal profile.
      auto project = [&](const TestPacket& p) {
        const auto [lo, hi] = p.time_support();
        const auto tr = composite_gauss_legendre(lo, hi, opts.panel_periods * period,
                                                 opts.panel_points);
        std::vector<cplx> with(tr.size()), with_conj(tr.size());
        for (Eigen::Index j = 0; j < tr.size(); ++j) {
          const double w = tr.weights[j] * p.temporal(tr.nodes[j]);
          const cplx v = traj.evaluate(tr.nodes[j]).value;
          with[j] = w * v;
          with_conj[j] = w * std::conj(v);
        }
        return std::pair{pairwise_sum(std::span<const cplx>(with)),
                         pairwise_sum(std::span<const cplx>(with_conj))};
      };
      const auto [f_t, f_tbar] = project(f);
      const auto [g_t, g_tbar] = project(g);
      const double bp = bose_coefficient(Sign::plus, params.beta(), disp.eps);
      const double bm = bose_coefficient(Sign::minus, params.beta(), disp.eps);
      terms[i] = rule.weights[i] * f.spatial(k) * g.spatial(k) *
                 (bp * f_t * g_tbar + bm * f_tbar * g_t);
    });
    return accumulate(terms);
  };
  return refine(eval, quad, "pair_finite_mu");
}

}  // namespace kmsad
