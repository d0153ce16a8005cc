#include "kmsad/thermal.hpp"

#include <string>

#include "kmsad/error.hpp"

namespace kmsad {

ThermalParams::ThermalParams(double beta, double m_sq, double m0_sq, double lambda)
    : beta_(beta), m_sq_(m_sq), m0_sq_(m0_sq), lambda_(lambda) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw DomainError("thermal params: beta must be positive and finite");
  }
  if (!(m_sq > 0.0) || !std::isfinite(m_sq)) {
    throw DomainError("thermal params: m_sq must be positive");
  }
  if (!std::isfinite(m0_sq) || !std::isfinite(lambda)) {
    throw DomainError("thermal params: m0_sq and lambda must be finite");
  }
  if (!(m_sq + lambda * m0_sq > 0.0)) {
    throw DomainError("thermal params: m_sq + lambda*m0_sq must be positive (tachyonic mass)");
  }
}

DispersionPair dispersion(double k_mag, const ThermalParams& params) {
  if (!(k_mag >= 0.0)) throw DomainError("dispersion: negative momentum magnitude");
  const double k2 = k_mag * k_mag;
  return {std::sqrt(k2 + params.m_sq()), std::sqrt(k2 + params.m_sq() + params.mass_shift())};
}

double eulerian_polynomial(const EulerianRow& row, double b_plus, double b_minus) {
  // Horner in r = b_-/b_+ after factoring b_+^{n+1}; b_+ >= 1 so r <= 1.
  const int n = row.n;
  const double r = b_minus / b_plus;
  double acc = 0.0;
  for (int k = n; k >= 1; --k) {
    acc = acc * r + static_cast<double>(row[k]);
  }
  return acc * r * std::pow(b_plus, n + 1);
}

double bose_derivative(int n, Sign sign, double beta, double eps, int cap) {
  if (n < 0) throw DomainError("bose_derivative: negative order");
  if (!(beta > 0.0) || !(eps > 0.0)) {
    throw DomainError("bose_derivative: beta and eps must be positive");
  }
  if (n == 0) return bose_coefficient(sign, beta, eps);
  const EulerianRow row = eulerian_row_recursive(n, cap);
  const double bp = bose_coefficient(Sign::plus, beta, eps);
  const double bm = bose_coefficient(Sign::minus, beta, eps);
  return std::pow(-eps, n) * eulerian_polynomial(row, bp, bm);
}

double shift_ratio(const ThermalParams& params, const DispersionPair& disp) {
  return params.mass_shift() / ((disp.eps_lambda + disp.eps) * disp.eps);
}

double shifted_beta(const ThermalParams& params, const DispersionPair& disp) {
  return params.beta() + params.beta() * shift_ratio(params, disp);
}

}  // namespace kmsad
