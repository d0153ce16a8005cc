#pragma once

#include <string>
#include <vector>

#include "kmsad/spectral.hpp"

namespace kmsad {

// Two algebraically independent routes to the order-n coefficient.
enum class SeriesPath { descent_sum, beta_derivative };

inline const char* to_string(SeriesPath p) {
  return p == SeriesPath::descent_sum ? "descent_sum" : "beta_derivative";
}

struct SeriesOptions {
  int cap = kDefaultOrderCap;
  RadialQuadrature quad{};
  // Per-order relative agreement required between the two paths.
  double dual_path_tol = 1e-10;
};

// beta^n / n!, the volume of the scaled simplex beta S_n.
double simplex_factor(double beta, int n);

// Per-node coefficients multiplying f^(+-w) g^(-+w)/(2 w) on the shifted
// branch for the order-n term of the adiabatic-limit series.
struct OrderCoefficients {
  Eigen::ArrayXd plus;
  Eigen::ArrayXd minus;
};

/// descent_sum:      (-1)^n (beta^n/n!) s^n sum_j c_{n,j} b_pm^{n+1-j} b_mp^j
/// beta_derivative:  (beta^n/n!) (s/eps)^n d^n/dbeta^n b_pm(beta, eps)
/// with s = lambda m0^2 / (eps_lambda + eps). The derivative tower carries a
/// (-eps)^n, which is where the explicit (-1)^n of the descent path comes from.
OrderCoefficients order_coefficients(int n, const ThermalParams& params, const Eigen::ArrayXd& k,
                                     SeriesPath path, int cap = kDefaultOrderCap);

cplx nth_order_term(int n, const ThermalParams& params, const TestPacket& f, const TestPacket& g,
                    SeriesPath path, const SeriesOptions& opts = {});

// pair(adiabatic_classical) + sum_{n=1..N} nth_order_term(n).
cplx partial_sum(int N, const ThermalParams& params, const TestPacket& f, const TestPacket& g,
                 const SeriesOptions& opts = {});

// max over momenta of |beta' - beta| / beta. The beta-Taylor series of b_pm
// converges iff this is < 1 (nearest singularity at beta = 0).
double convergence_ratio(const ThermalParams& params, const Eigen::ArrayXd& k);

enum class Verdict { pass, fail, not_expected_to_converge };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::not_expected_to_converge: return "not_expected_to_converge";
  }
  return "?";
}

struct OrderRecord {
  int order = 0;
  cplx term_value;
  cplx cumulative;
  double gap_to_closed_form = 0.0;  // relative
  double dual_path_deviation = 0.0;  // relative
};

struct ResummationReport {
  Verdict verdict = Verdict::fail;
  std::string message;
  double tol = 0.0;
  int max_order = 0;
  double radius_ratio = 0.0;
  cplx closed_form;
  double refinement_delta = 0.0;
  int nodes = 0;
  std::vector<OrderRecord> orders;

  double final_gap() const { return orders.empty() ? 0.0 : orders.back().gap_to_closed_form; }
  double max_dual_path_deviation() const;
};

ResummationReport verify_resummation(const ThermalParams& params, const TestPacket& f,
                                     const TestPacket& g, int N, double tol,
                                     const SeriesOptions& opts = {});

}  // namespace kmsad
