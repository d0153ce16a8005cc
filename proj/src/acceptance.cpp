#include "kmsad/acceptance.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>

#include "kmsad/error.hpp"
#include "kmsad/oracles.hpp"

namespace kmsad {

namespace {

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, a, b, c);
  return buf;
}

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] < v[i - 1])) return false;
  }
  return true;
}

std::string join(const std::vector<double>& v) {
  std::string out;
  for (double x : v) out += (out.empty() ? "" : " ") + fmt("%.3e", x);
  return out;
}

// Runs body with timing; NumericalError and DomainError become a failed
// criterion carrying the message.
CriterionResult timed(int id, const char* name, double threshold, double budget,
                      const AcceptanceConfig& cfg,
                      const std::function<void(CriterionResult&)>& body) {
  CriterionResult r;
  r.id = id;
  r.name = name;
  r.threshold = threshold;
  r.budget_seconds = budget;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(r);
  } catch (const std::exception& e) {
    r.status = Status::fail;
    r.numerical_failure = dynamic_cast<const NumericalError*>(&e) != nullptr;
    r.detail = std::string("error: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (cfg.enforce_budgets && r.status != Status::skipped && r.seconds > budget) {
    r.status = Status::fail;
    r.detail += fmt(" [over runtime budget %.0f s]", budget);
  }
  return r;
}

BigCount factorial(int n) {
  BigCount out = 1;
  for (int i = 2; i <= n; ++i) out *= static_cast<BigCount>(i);
  return out;
}

std::vector<double> sweep_mus(const AcceptanceConfig& cfg) {
  std::vector<double> mus{cfg.sudden_mu};
  mus.insert(mus.end(), cfg.mu_ladder.begin(), cfg.mu_ladder.end());
  return mus;
}

double trajectory_end(const AcceptanceConfig& cfg) {
  return std::max({0.0, cfg.f.time_support().second, cfg.g.time_support().second});
}

}  // namespace

CriterionResult check_eulerian(const AcceptanceConfig& cfg) {
  return timed(1, "eulerian cross-oracle", 0.0, 5.0, cfg, [](CriterionResult& r) {
    int mismatches = 0;
    for (int n = 1; n <= 8; ++n) {
      const auto rec = eulerian_row_recursive(n);
      const auto enu = eulerian_row_by_enumeration(n);
      if (!(rec == enu) || rec.sum() != factorial(n)) ++mismatches;
    }
    r.measured = mismatches;
    r.status = mismatches == 0 ? Status::pass : Status::fail;
    r.detail = fmt("%.0f mismatching rows for n=1..8", mismatches);
  });
}

CriterionResult check_derivative_tower(const AcceptanceConfig& cfg) {
  return timed(2, "derivative tower", cfg.derivative_tol, 1.0, cfg, [&](CriterionResult& r) {
    const std::pair<double, double> points[] = {{1.0, 1.0}, {0.5, 2.0}, {2.0, 0.7}};
    double worst = 0.0;
    for (const auto& [beta, eps] : points) {
      const auto b_plus = [eps = eps](double x) { return bose_coefficient(Sign::plus, x, eps); };
      for (int n = 1; n <= 4; ++n) {
        const auto fd = oracles::richardson_derivative(b_plus, beta, n, beta / 8.0);
        const double exact = bose_derivative(n, Sign::plus, beta, eps);
        worst = std::max(worst, std::abs(fd.value - exact) / std::abs(exact));
      }
    }
    r.measured = worst;
    r.status = worst <= cfg.derivative_tol ? Status::pass : Status::fail;
    r.detail = "max relative deviation from Richardson finite differences, n=1..4";
  });
}

CriterionResult check_shifted_beta(const AcceptanceConfig& cfg) {
  return timed(3, "shifted-beta identity", cfg.resummation_tol, 1.0, cfg, [&](CriterionResult& r) {
    double worst = 0.0;
    const auto& base = cfg.bench;
    for (int i = 0; i < 10; ++i) {
      const double k = 5.0 * i / 9.0;
      for (int j = 0; j < 10; ++j) {
        const double lambda = -0.5 + 2.5 * j / 9.0;
        const auto p = base.with_lambda(lambda);
        const auto disp = dispersion(k, p);
        const double beta_s = shifted_beta(p, disp);
        for (Sign s : {Sign::plus, Sign::minus}) {
          worst = std::max(worst, std::abs(bose_coefficient(s, beta_s, disp.eps) -
                                           bose_coefficient(s, p.beta(), disp.eps_lambda)));
        }
      }
    }
    r.measured = worst;
    r.status = worst <= cfg.resummation_tol ? Status::pass : Status::fail;
    r.detail = "max |b(beta', eps) - b(beta, eps_lambda)| on 10x10 (k, lambda) grid";
  });
}

CriterionResult check_wronskian(const AcceptanceConfig& cfg) {
  return timed(4, "wronskian", cfg.wronskian_tol, 30.0, cfg, [&](CriterionResult& r) {
    double worst = 0.0;
    int count = 0;
    const double t_end = std::max(40.0, trajectory_end(cfg));
    for (double mu : sweep_mus(cfg)) {
      for (double k : cfg.sweep_momenta) {
        const auto traj = solve_modes(k, SwitchingProfile(mu), cfg.modes, t_end, cfg.mode_opts);
        worst = std::max(worst, traj.max_wronskian_residual());
        ++count;
      }
    }
    r.measured = worst;
    r.status = worst <= cfg.wronskian_tol ? Status::pass : Status::fail;
    r.detail = fmt("max |W - i| over %.0f trajectories", count);
  });
}

CriterionResult check_switch_integrals(const AcceptanceConfig& cfg) {
  return timed(5, "switch-integral ladder", cfg.limits_tol, 60.0, cfg, [&](CriterionResult& r) {
    bool ok = true;
    double worst_final = 0.0;
    for (double k : cfg.momenta) {
      const auto target = switch_integral_limits(k, cfg.modes);
      std::vector<double> gap_abs, mag_sq;
      for (double mu : cfg.mu_ladder) {
        const auto si = switch_integrals(k, SwitchingProfile(mu), cfg.modes, cfg.mode_opts);
        gap_abs.push_back(std::abs(si.abs - target.abs));
        mag_sq.push_back(std::abs(si.sq));
      }
      ok = ok && strictly_decreasing(gap_abs) && strictly_decreasing(mag_sq);
      worst_final = std::max({worst_final, gap_abs.back(), mag_sq.back()});
      r.detail += fmt("k=%g", k) + " |I_abs-target|: " + join(gap_abs) + "; |I_sq|: " +
                  join(mag_sq) + ". ";
    }
    r.measured = worst_final;
    r.status = ok && worst_final <= cfg.limits_tol ? Status::pass : Status::fail;
    if (!ok) r.detail += "not strictly decreasing";
  });
}

CriterionResult check_pairing_ladder(const AcceptanceConfig& cfg) {
  return timed(6, "finite-mu pairing ladder", cfg.pairing_tol, 120.0, cfg,
               [&](CriterionResult& r) {
    const cplx target = pair(adiabatic_classical(cfg.modes), cfg.f, cfg.g, cfg.quad).value;
    std::vector<double> gaps;
    FiniteMuOptions opts;
    opts.modes = cfg.mode_opts;
    for (double mu : cfg.mu_ladder) {
      const cplx v = pair_finite_mu(SwitchingProfile(mu), cfg.modes, cfg.f, cfg.g, cfg.quad, opts).value;
      gaps.push_back(std::abs(v - target) / std::abs(target));
    }
    const bool monotone = strictly_decreasing(gaps);
    r.measured = gaps.back();
    r.status = monotone && gaps.back() <= cfg.pairing_tol ? Status::pass : Status::fail;
    r.detail = "relative gaps: " + join(gaps) + (monotone ? "" : " (not decreasing)");
  });
}

CriterionResult check_resummation(const AcceptanceConfig& cfg) {
  return timed(7, "resummation", cfg.series_tol, 60.0, cfg, [&](CriterionResult& r) {
    SeriesOptions opts;
    opts.quad = cfg.quad;
    opts.dual_path_tol = cfg.dual_path_tol;
    const auto report = verify_resummation(cfg.bench, cfg.f, cfg.g, cfg.series_order, cfg.series_tol, opts);
    r.measured = report.final_gap();
    r.detail = report.message + fmt(" (N=%.0f, max dual-path deviation %.3e, radius ratio %.4f)",
                                    cfg.series_order, report.max_dual_path_deviation(),
                                    report.radius_ratio);
    switch (report.verdict) {
      case Verdict::pass: r.status = Status::pass; break;
      case Verdict::fail: r.status = Status::fail; break;
      case Verdict::not_expected_to_converge: r.status = Status::skipped; break;
    }
  });
}

CriterionResult check_bogoliubov(const AcceptanceConfig& cfg) {
  return timed(8, "bogoliubov", cfg.sudden_tol, 30.0, cfg, [&](CriterionResult& r) {
    double worst_norm = 0.0;
    double worst_sudden = 0.0;
    for (double mu : sweep_mus(cfg)) {
      for (double k : cfg.sweep_momenta) {
        const auto traj = solve_modes(k, SwitchingProfile(mu), cfg.modes, 1.0, cfg.mode_opts);
        const auto bog = bogoliubov(traj, 0.0);
        worst_norm = std::max(worst_norm, std::abs(bog.normalization_residual()));
        if (mu == cfg.sudden_mu) {
          const auto oracle = sudden_quench_bogoliubov(traj.dispersion());
          worst_sudden = std::max({worst_sudden, std::abs(bog.a_plus - oracle.a_plus),
                                   std::abs(bog.a_minus - oracle.a_minus)});
        }
      }
    }
    r.measured = worst_sudden;
    r.status = worst_norm <= cfg.normalization_tol && worst_sudden <= cfg.sudden_tol
                   ? Status::pass
                   : Status::fail;
    r.detail = fmt("max ||A+|^2-|A-|^2-1| = %.3e (tol %.0e); sudden-quench gap at mu=%g",
                   worst_norm, cfg.normalization_tol, cfg.sudden_mu);
  });
}

CriterionResult check_ness(const AcceptanceConfig& cfg) {
  return timed(9, "ness spectral data", cfg.ccr_tol, 5.0, cfg, [&](CriterionResult& r) {
    const auto ness = ness_classical(
        cfg.modes, bogoliubov_source(SwitchingProfile(cfg.ness_mu), cfg.modes, cfg.mode_opts));
    const auto unmixed =
        ness_classical(cfg.modes, [](double) { return BogoliubovPair{1.0, 0.0, 1.0}; });
    const auto reference = adiabatic_classical(cfg.modes);
    double ccr = 0.0;
    double pointwise = 0.0;
    for (int nodes : {cfg.quad.nodes, 2 * cfg.quad.nodes}) {
      const auto k = radial_rule(cfg.f, cfg.g, nodes).nodes;
      ccr = std::max(ccr, ness.ccr_residual(k));
      pointwise = std::max({pointwise, (unmixed.c_plus(k) - reference.c_plus(k)).abs().maxCoeff(),
                            (unmixed.c_minus(k) - reference.c_minus(k)).abs().maxCoeff(),
                            (unmixed.frequencies(k) - reference.frequencies(k)).abs().maxCoeff()});
    }
    r.measured = ccr;
    r.status = ccr <= cfg.ccr_tol && pointwise <= cfg.pointwise_tol ? Status::pass : Status::fail;
    r.detail = fmt("max |c+ - c- - 1| at mu=%g; A-=0 vs adiabatic_classical max %.3e (tol %.0e)",
                   cfg.ness_mu, pointwise, cfg.pointwise_tol);
  });
}

CriterionResult check_connected(const AcceptanceConfig& cfg) {
  return timed(10, "connected functions", cfg.connected_tol, 5.0, cfg, [&](CriterionResult& r) {
    int round_trip_failures = 0;
    for (int n = 1; n <= 6; ++n) {
      const auto moments = oracles::synthetic_moments(n, 1000u + n);
      if (moments_from_connected(connected_from_moments(moments, n), n) != moments) {
        ++round_trip_failures;
      }
    }
    // Quasi-free tables built from thermal pairings of time-translated packets.
    constexpr int n_max = 6;
    Eigen::MatrixXcd two_point(n_max, n_max);
    const auto state = free_kms(cfg.bench);
    for (int i = 0; i < n_max; ++i) {
      for (int j = 0; j < n_max; ++j) {
        TestPacket a = cfg.f, b = cfg.f;
        a.t_c = 0.5 * i;
        b.t_c = 0.5 * j;
        two_point(i, j) = pair(state, a, b, cfg.quad).value;
      }
    }
    double worst = 0.0;
    for (int n = 3; n <= n_max; ++n) {
      const auto connected = connected_from_moments(oracles::quasi_free_moments(two_point, n), n);
      for (const auto& [subset, value] : connected) {
        if (std::popcount(subset) >= 3) worst = std::max(worst, std::abs(value));
      }
    }
    r.measured = worst;
    r.status = round_trip_failures == 0 && worst <= cfg.connected_tol ? Status::pass : Status::fail;
    r.detail = fmt("%.0f inexact round trips (n=1..6); max |connected| of order >= 3 shown",
                   round_trip_failures);
  });
}

std::vector<CriterionResult> run_acceptance(const AcceptanceConfig& cfg) {
  return {check_eulerian(cfg),         check_derivative_tower(cfg), check_shifted_beta(cfg),
          check_wronskian(cfg),        check_switch_integrals(cfg), check_pairing_ladder(cfg),
          check_resummation(cfg),      check_bogoliubov(cfg),       check_ness(cfg),
          check_connected(cfg)};
}

std::string summary_line(const CriterionResult& r) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-7s %2d %-26s measured=%.3e threshold=%.1e (%.2f s)",
                to_string(r.status), r.id, r.name.c_str(), r.measured, r.threshold, r.seconds);
  return std::string(buf) + "  " + r.detail;
}

}  // namespace kmsad
