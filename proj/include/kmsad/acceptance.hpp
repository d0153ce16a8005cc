#pragma once

#include <string>
#include <vector>

#include "kmsad/series.hpp"
#include "kmsad/spectral.hpp"

namespace kmsad {

enum class Status { pass, fail, skipped };

inline const char* to_string(Status s) {
  switch (s) {
    case Status::pass: return "PASS";
    case Status::fail: return "FAIL";
    case Status::skipped: return "SKIPPED";
  }
  return "?";
}

struct CriterionResult {
  int id = 0;
  std::string name;
  Status status = Status::fail;
  double measured = 0.0;   // worst observed value of the criterion's metric
  double threshold = 0.0;
  std::string detail;
  double seconds = 0.0;
  double budget_seconds = 0.0;
  // Set when an integrator or quadrature gave up, as opposed to a metric miss.
  bool numerical_failure = false;
};

struct AcceptanceConfig {
  ThermalParams bench{1.0, 1.0, 1.0, 0.1};
  ThermalParams modes{1.0, 1.0, 1.0, 0.5};
  TestPacket f{1.0, 0.5, 20.0, 1.0};
  TestPacket g{1.0, 0.5, 21.0, 1.0};
  std::vector<double> mu_ladder{5.0, 10.0, 20.0, 40.0};
  std::vector<double> momenta{0.0, 1.0};
  // Extra momenta for the Wronskian and Bogoliubov sweeps.
  std::vector<double> sweep_momenta{0.0, 0.5, 1.0, 2.0, 5.0};
  double ness_mu = 1.0;
  double sudden_mu = 1e-3;
  int series_order = 8;
  double series_tol = 1e-8;
  double dual_path_tol = 1e-10;
  double pairing_tol = 1e-2;
  double limits_tol = 1e-2;
  double wronskian_tol = 1e-8;
  double normalization_tol = 1e-8;
  double sudden_tol = 1e-3;
  double ccr_tol = 1e-10;
  double pointwise_tol = 1e-12;
  double derivative_tol = 1e-6;
  double resummation_tol = 1e-12;
  double connected_tol = 1e-12;
  RadialQuadrature quad{};
  ModeOptions mode_opts{};
  // Wall-clock budgets are enforced unless disabled (e.g. under sanitizers).
  bool enforce_budgets = true;
};

CriterionResult check_eulerian(const AcceptanceConfig& cfg);
CriterionResult check_derivative_tower(const AcceptanceConfig& cfg);
CriterionResult check_shifted_beta(const AcceptanceConfig& cfg);
CriterionResult check_wronskian(const AcceptanceConfig& cfg);
CriterionResult check_switch_integrals(const AcceptanceConfig& cfg);
CriterionResult check_pairing_ladder(const AcceptanceConfig& cfg);
CriterionResult check_resummation(const AcceptanceConfig& cfg);
CriterionResult check_bogoliubov(const AcceptanceConfig& cfg);
CriterionResult check_ness(const AcceptanceConfig& cfg);
CriterionResult check_connected(const AcceptanceConfig& cfg);

std::vector<CriterionResult> run_acceptance(const AcceptanceConfig& cfg);

// "PASS  4 wronskian  measured=... threshold=... (0.12 s)  detail"
std::string summary_line(const CriterionResult& r);

}  // namespace kmsad
