#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "kmsad/combinatorics.hpp"

namespace kmsad {

enum class Sign { plus, minus };

inline Sign flip(Sign s) { return s == Sign::plus ? Sign::minus : Sign::plus; }
inline const char* to_string(Sign s) { return s == Sign::plus ? "+" : "-"; }

// Inverse temperature, free mass, perturbation mass scale and coupling.
// The perturbed squared mass m_sq + lambda * m0_sq must stay positive.
class ThermalParams {
 public:
  ThermalParams(double beta, double m_sq, double m0_sq, double lambda);

  double beta() const { return beta_; }
  double m_sq() const { return m_sq_; }
  double m0_sq() const { return m0_sq_; }
  double lambda() const { return lambda_; }

  // lambda * m0^2, the squared-mass shift.
  double mass_shift() const { return lambda_ * m0_sq_; }

  ThermalParams with_beta(double beta) const { return {beta, m_sq_, m0_sq_, lambda_}; }
  ThermalParams with_lambda(double lambda) const { return {beta_, m_sq_, m0_sq_, lambda}; }

  // Same state physics at the shifted mass with the perturbation removed.
  ThermalParams absorbed() const { return {beta_, m_sq_ + mass_shift(), m0_sq_, 0.0}; }

 private:
  double beta_;
  double m_sq_;
  double m0_sq_;
  double lambda_;
};

struct DispersionPair {
  double eps;
  double eps_lambda;
};

DispersionPair dispersion(double k_mag, const ThermalParams& params);

/// b_+(beta, eps) = 1/(1 - e^{-beta eps}), b_-(beta, eps) = 1/(e^{beta eps} - 1).
/// Both are evaluated through expm1 so that b_- underflows cleanly to 0 and
/// b_+ to 1 for large beta*eps.
template <typename Scalar>
Scalar bose_coefficient(Sign sign, Scalar beta, Scalar eps) {
  using std::expm1;
  const Scalar x = beta * eps;
  return sign == Sign::plus ? Scalar(-1) / expm1(-x) : Scalar(1) / expm1(x);
}

template <typename Derived>
auto bose_plus(double beta, const Eigen::ArrayBase<Derived>& eps) {
  return -1.0 / (-beta * eps).expm1();
}

template <typename Derived>
auto bose_minus(double beta, const Eigen::ArrayBase<Derived>& eps) {
  return 1.0 / (beta * eps).expm1();
}

// d^n/dbeta^n b_sign at fixed eps, via the Eulerian expansion
// (-eps)^n sum_k c_{n,k} b_+^{n+1-k} b_-^k. Independent of sign for n >= 1.
double bose_derivative(int n, Sign sign, double beta, double eps, int cap = kDefaultOrderCap);

// sum_k c_{n,k} b_+^{n+1-k} b_-^k, the sign-free part of the n-th derivative.
double eulerian_polynomial(const EulerianRow& row, double b_plus, double b_minus);

// beta' with beta' * eps == beta * eps_lambda, written as
// beta + beta * lambda m0^2 / ((eps_lambda + eps) eps).
double shifted_beta(const ThermalParams& params, const DispersionPair& disp);

// Relative inverse-temperature shift lambda m0^2 / ((eps_lambda + eps) eps),
// equal to eps_lambda/eps - 1 but computed without cancellation.
double shift_ratio(const ThermalParams& params, const DispersionPair& disp);

}  // namespace kmsad
