#pragma once

#include <functional>

#include <Eigen/Dense>

#include "kmsad/combinatorics.hpp"

// Reference computations that share no code path with the modules they check.
namespace kmsad::oracles {

struct RichardsonResult {
  double value;
  double error_estimate;
};

/// n-th derivative of f at x by central differences of step h, h/2, h/4, ...
/// combined in a Richardson table (the central stencil has an h^2 series).
/// The caller guarantees f is smooth on [x - n h / 2, x + n h / 2].
RichardsonResult richardson_derivative(const std::function<double(double)>& f, double x, int n,
                                       double h, int levels = 6);

// d^n/dbeta^n b_+ by repeated chain rule on a polynomial in b_+, using
// db_+/dbeta = -eps b_+ (b_+ - 1). No Eulerian numbers involved.
double bose_derivative_chain_rule(int n, double beta, double eps);

// Moments of a quasi-free (Gaussian, zero-mean) table: sum over perfect
// matchings of the ordered elements of each subset, pairs (i<j) -> omega(i,j).
SubsetTable quasi_free_moments(const Eigen::MatrixXcd& two_point, int n);

// Integer-valued moments on every non-empty subset of {1..n}, from a fixed
// seed; connected parts of such tables are exact integers in double.
SubsetTable synthetic_moments(int n, unsigned seed, int max_abs = 5);

}  // namespace kmsad::oracles
