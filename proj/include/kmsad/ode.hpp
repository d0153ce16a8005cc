#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "kmsad/error.hpp"

namespace kmsad {

struct OdeOptions {
  double rtol = 1e-12;
  double atol = 1e-14;
  double max_step = std::numeric_limits<double>::infinity();
  long max_steps = 10'000'000;
};

template <typename State>
struct OdeSolution {
  std::vector<double> t;
  std::vector<State> y;
  long accepted = 0;
  long rejected = 0;
};

namespace detail {

template <typename State>
double scaled_error(const State& err, const State& y, const State& y_new, const OdeOptions& opt) {
  const auto scale = opt.atol + opt.rtol * y.cwiseAbs().cwiseMax(y_new.cwiseAbs()).array();
  return (err.cwiseAbs().array() / scale).maxCoeff();
}

}  // namespace detail

/// Dormand-Prince 5(4) with local extrapolation and FSAL. The state type is
/// any fixed- or dynamic-size Eigen column vector (real or complex). Every
/// accepted step is recorded so the caller can build dense output.
///
/// Throws NumericalError when the step size underflows or the step budget
/// is exhausted.
template <typename State, typename Rhs>
OdeSolution<State> integrate_dopri5(Rhs&& rhs, double t0, const State& y0, double t1,
                                    const OdeOptions& opt = {}) {
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                   a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                   a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                   b6 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                   e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  if (!(t1 > t0)) throw DomainError("integrate_dopri5: need t1 > t0");

  OdeSolution<State> sol;
  sol.t.push_back(t0);
  sol.y.push_back(y0);

  double t = t0;
  State y = y0;
  State k1 = rhs(t, y);

  // Hairer's starting step heuristic.
  const auto sc = (opt.atol + opt.rtol * y.cwiseAbs().array()).eval();
  const double d0 = (y.cwiseAbs().array() / sc).matrix().norm();
  const double d1 = (k1.cwiseAbs().array() / sc).matrix().norm();
  double h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
  h = std::min({h, opt.max_step, t1 - t0});

  while (t < t1) {
    if (sol.accepted + sol.rejected >= opt.max_steps) {
      std::ostringstream msg;
      msg << "integrate_dopri5: step budget exhausted at t=" << t;
      throw NumericalError(msg.str());
    }
    if (t1 - t <= 64 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t1))) {
      sol.t.back() = t1;
      break;
    }
    if (t + h > t1) h = t1 - t;
    if (h <64 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t))) {
      std::ostringstream msg;
      msg << "integrate_dopri5: step size underflow at t=" << t << " (h=" << h << ")";
      throw NumericalError(msg.str());
    }

    const State k2 = rhs(t + c2 * h, (y + h * a21 * k1).eval());
    const State k3 = rhs(t + c3 * h, (y + h * (a31 * k1 + a32 * k2)).eval());
    const State k4 = rhs(t + c4 * h, (y + h * (a41 * k1 + a42 * k2 + a43 * k3)).eval());
    const State k5 =
        rhs(t + c5 * h, (y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4)).eval());
    const State k6 = rhs(t + h, (y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 +
                                          a65 * k5)).eval());
    const State y_new = (y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6)).eval();
    const State k7 = rhs(t + h, y_new);
    const State err =
        (h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7)).eval();

    const double en = detail::scaled_error(err, y, y_new, opt);
    const double factor =
        en == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
    if (en <= 1.0) {
      t = (h == t1 - t) ? t1 : t + h;
      y = y_new;
      k1 = k7;
      sol.t.push_back(t);
      sol.y.push_back(y);
      ++sol.accepted;
      h = std::min(h * factor, opt.max_step);
    } else {
      ++sol.rejected;
      h *= std::min(factor, 1.0);
    }
  }
  return sol;
}

}  // namespace kmsad
