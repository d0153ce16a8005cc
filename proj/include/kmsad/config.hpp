#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "kmsad/acceptance.hpp"

namespace kmsad {

inline constexpr int kConfigSchemaVersion = 1;

// Everything a CLI run needs. The acceptance block carries the physical
// parameters, packets, mu ladder, momenta, quadrature and tolerances.
struct RunConfig {
  AcceptanceConfig acceptance{};
  std::vector<int> series_orders{0, 1, 2, 4, 8};
  std::vector<double> horizons{10.0, 100.0, 1000.0};
};

// Throws ConfigError on malformed JSON, unknown keys, a wrong schema version,
// non-positive tolerances, non-increasing ladders or invalid parameters.
// Absent sections keep their defaults.
RunConfig parse_run_config(std::string_view json_text);
RunConfig load_run_config(const std::string& path);

// The defaults as a JSON document (a starting point for edits).
std::string default_config_json();

// Doubles radial node counts and inserts geometric midpoints into the mu and
// horizon ladders.
RunConfig refined(const RunConfig& cfg);

}  // namespace kmsad
