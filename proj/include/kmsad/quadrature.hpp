#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace kmsad {

struct QuadratureRule {
  Eigen::ArrayXd nodes;
  Eigen::ArrayXd weights;

  Eigen::Index size() const { return nodes.size(); }
};

// n-point Gauss-Legendre rule on [a, b].
QuadratureRule gauss_legendre(int n, double a = -1.0, double b = 1.0);

// Composite Gauss-Legendre: [a, b] split into panels no wider than max_panel.
QuadratureRule composite_gauss_legendre(double a, double b, double max_panel, int points_per_panel);

struct AdaptiveResult {
  double value;
  double error_estimate;
  int evaluations;
};

// Adaptive Gauss-Kronrod 7/15 with global bisection. Throws NumericalError
// when the interval budget runs out before abs_tol is met.
AdaptiveResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                  double abs_tol = 1e-13, int max_intervals = 2000);

// Pairwise (cascade) summation; the reduction order depends only on size.
template <typename T>
T pairwise_sum(std::span<const T> values) {
  if (values.size() <= 8) {
    T acc{};
    for (const auto& v : values) acc += v;
    return acc;
  }
  const auto half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

template <typename Derived>
typename Derived::Scalar pairwise_sum(const Eigen::DenseBase<Derived>& values) {
  using Scalar = typename Derived::Scalar;
  std::vector<Scalar> buffer(values.size());
  for (Eigen::Index i = 0; i < values.size(); ++i) buffer[i] = values.derived().coeff(i);
  return pairwise_sum(std::span<const Scalar>(buffer));
}

}  // namespace kmsad
