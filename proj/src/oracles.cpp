#include "kmsad/oracles.hpp"

#include <cmath>
#include <random>
#include <vector>

#include "kmsad/error.hpp"

namespace kmsad::oracles {

namespace {

double binomial(int n, int k) {
  double out = 1.0;
  for (int j = 1; j <= k; ++j) out = out * (n - k + j) / j;
  return out;
}

double central_difference(const std::function<double(double)>& f, double x, int n, double h) {
  double acc = 0.0;
  for (int j = 0; j <= n; ++j) {
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    acc += sign * binomial(n, j) * f(x + (0.5 * n - j) * h);
  }
  return acc / std::pow(h, n);
}

}  // namespace

RichardsonResult richardson_derivative(const std::function<double(double)>& f, double x, int n,
                                       double h, int levels) {
  if (n < 1) throw DomainError("richardson_derivative: order must be >= 1");
  if (!(h > 0.0) || levels < 2) throw DomainError("richardson_derivative: bad step or levels");

  std::vector<std::vector<double>> table(levels);
  for (int i = 0; i < levels; ++i) {
    table[i].resize(i + 1);
    table[i][0] = central_difference(f, x, n, h / std::ldexp(1.0, i));
    for (int j = 1; j <= i; ++j) {
      const double factor = std::ldexp(1.0, 2 * j);
      table[i][j] = table[i][j - 1] + (table[i][j - 1] - table[i - 1][j - 1]) / (factor - 1.0);
    }
  }
  // Deeper columns eventually amplify rounding; take the diagonal entry that
  // moved least from its predecessor.
  RichardsonResult best{table[1][1], std::abs(table[1][1] - table[0][0])};
  for (int i = 2; i < levels; ++i) {
    const double err = std::abs(table[i][i] - table[i - 1][i - 1]);
    if (err < best.error_estimate) best = {table[i][i], err};
  }
  return best;
}

double bose_derivative_chain_rule(int n, double beta, double eps) {
  if (n < 0) throw DomainError("bose_derivative_chain_rule: negative order");
  // coefficients of p(b) = sum_i p[i] b^i, starting from p(b) = b.
  std::vector<double> p{0.0, 1.0};
  for (int step = 0; step < n; ++step) {
    // d/dbeta p(b) = p'(b) * (-eps) (b^2 - b)
    std::vector<double> next(p.size() + 1, 0.0);
    for (std::size_t i = 1; i < p.size(); ++i) {
      const double d = i * p[i] * -eps;
      next[i + 1] += d;
      next[i] -= d;
    }
    p = std::move(next);
  }
  const double b = -1.0 / std::expm1(-beta * eps);
  double acc = 0.0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * b + *it;
  return acc;
}

namespace {

using cplx = std::complex<double>;

// Sum over perfect matchings of elems (ascending), pairing the first element
// with each later one in turn.
cplx matching_sum(const std::vector<int>& elems, const Eigen::MatrixXcd& two_point) {
  if (elems.empty()) return 1.0;
  if (elems.size() % 2 == 1) return 0.0;
  cplx acc = 0.0;
  for (std::size_t j = 1; j < elems.size(); ++j) {
    std::vector<int> rest;
    rest.reserve(elems.size() - 2);
    for (std::size_t i = 1; i < elems.size(); ++i) {
      if (i != j) rest.push_back(elems[i]);
    }
    acc += two_point(elems[0] - 1, elems[j] - 1) * matching_sum(rest, two_point);
  }
  return acc;
}

}  // namespace

SubsetTable quasi_free_moments(const Eigen::MatrixXcd& two_point, int n) {
  if (n < 1 || n > kMaxPartitionOrder) throw DomainError("quasi_free_moments: n out of range");
  if (two_point.rows() < n || two_point.cols() < n) {
    throw DomainError("quasi_free_moments: two-point matrix smaller than n");
  }
  SubsetTable table;
  for (Subset s = 1; s < (Subset{1} << n); ++s) {
    std::vector<int> elems;
    for (int i = 1; i <= n; ++i) {
      if (s & (Subset{1} << (i - 1))) elems.push_back(i);
    }
    table[s] = matching_sum(elems, two_point);
  }
  return table;
}

SubsetTable synthetic_moments(int n, unsigned seed, int max_abs) {
  if (n < 1 || n > kMaxPartitionOrder) throw DomainError("synthetic_moments: n out of range");
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> dist(-max_abs, max_abs);
  SubsetTable table;
  for (Subset s = 1; s < (Subset{1} << n); ++s) {
    const double re = dist(rng);
    const double im = dist(rng);
    table[s] = {re, im};
  }
  return table;
}

}  // namespace kmsad::oracles
