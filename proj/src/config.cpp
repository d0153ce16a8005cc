#include "kmsad/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "kmsad/error.hpp"

namespace kmsad {

namespace {

using Json = nlohmann::ordered_json;

void only_keys(const Json& obj, const std::string& where, std::set<std::string> allowed) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key)) throw ConfigError(where + ": unknown key \"" + key + "\"");
  }
}

double number(const Json& obj, const std::string& key, const std::string& where, double fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(where + "." + key + ": expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(where + "." + key + ": must be finite");
  return x;
}

int integer(const Json& obj, const std::string& key, const std::string& where, int fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number_integer()) throw ConfigError(where + "." + key + ": expected an integer");
  return v.get<int>();
}

template <typename T>
std::vector<T> list(const Json& obj, const std::string& key, const std::string& where,
                    std::vector<T> fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_array() || v.empty()) throw ConfigError(where + "." + key + ": expected a non-empty array");
  std::vector<T> out;
  for (const auto& e : v) {
    if (std::is_integral_v<T> ? !e.is_number_integer() : !e.is_number()) {
      throw ConfigError(where + "." + key + ": array entries must be numbers");
    }
    out.push_back(e.get<T>());
  }
  return out;
}

template <typename T>
void require_increasing(const std::vector<T>& v, const std::string& what) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] > v[i - 1])) throw ConfigError(what + ": ladder must be strictly increasing");
  }
}

ThermalParams read_params(const Json& doc, const std::string& key, const ThermalParams& fallback) {
  if (!doc.contains(key)) return fallback;
  const auto& p = doc.at(key);
  only_keys(p, key, {"beta", "m_sq", "m0_sq", "lambda"});
  try {
    return {number(p, "beta", key, fallback.beta()), number(p, "m_sq", key, fallback.m_sq()),
            number(p, "m0_sq", key, fallback.m0_sq()), number(p, "lambda", key, fallback.lambda())};
  } catch (const DomainError& e) {
    throw ConfigError(key + ": " + e.what());
  }
}

TestPacket read_packet(const Json& p, const std::string& where) {
  only_keys(p, where, {"k_c", "sigma_k", "t_c", "sigma_t"});
  const TestPacket defaults{};
  TestPacket out{number(p, "k_c", where, defaults.k_c), number(p, "sigma_k", where, defaults.sigma_k),
                 number(p, "t_c", where, defaults.t_c), number(p, "sigma_t", where, defaults.sigma_t)};
  try {
    out.validate();
  } catch (const DomainError& e) {
    throw ConfigError(where + ": " + e.what());
  }
  return out;
}

Json packet_json(const TestPacket& p) {
  return {{"k_c", p.k_c}, {"sigma_k", p.sigma_k}, {"t_c", p.t_c}, {"sigma_t", p.sigma_t}};
}

Json params_json(const ThermalParams& p) {
  return {{"beta", p.beta()}, {"m_sq", p.m_sq()}, {"m0_sq", p.m0_sq()}, {"lambda", p.lambda()}};
}

// Tolerance name -> field. Order here is the order written by default_config_json.
template <typename Cfg>
auto tolerance_fields(Cfg& a) {
  return std::vector<std::pair<const char*, decltype(&a.series_tol)>>{
      {"refine", &a.quad.refine_tol},      {"series", &a.series_tol},
      {"dual_path", &a.dual_path_tol},     {"pairing", &a.pairing_tol},
      {"limits", &a.limits_tol},           {"wronskian", &a.wronskian_tol},
      {"normalization", &a.normalization_tol}, {"sudden", &a.sudden_tol},
      {"ccr", &a.ccr_tol},                 {"pointwise", &a.pointwise_tol},
      {"derivative", &a.derivative_tol},   {"resummation", &a.resummation_tol},
      {"connected", &a.connected_tol},     {"ode_rtol", &a.mode_opts.ode.rtol},
      {"ode_atol", &a.mode_opts.ode.atol}};
}

}  // namespace

RunConfig parse_run_config(std::string_view json_text) {
  Json doc;
  try {
    doc = Json::parse(json_text);
  } catch (const Json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  only_keys(doc, "config",
            {"schema_version", "params", "mode_params", "profile", "packets", "ladders", "momenta",
             "sweep_momenta", "quadrature", "tolerances"});
  if (!doc.contains("schema_version")) throw ConfigError("config: schema_version is required");
  if (integer(doc, "schema_version", "config", 0) != kConfigSchemaVersion) {
    throw ConfigError("config: unsupported schema_version (expected " +
                      std::to_string(kConfigSchemaVersion) + ")");
  }

  RunConfig cfg;
  auto& a = cfg.acceptance;
  a.bench = read_params(doc, "params", a.bench);
  a.modes = read_params(doc, "mode_params", a.modes);

  if (doc.contains("profile")) {
    const auto& p = doc.at("profile");
    only_keys(p, "profile", {"mu", "sudden_mu"});
    a.ness_mu = number(p, "mu", "profile", a.ness_mu);
    a.sudden_mu = number(p, "sudden_mu", "profile", a.sudden_mu);
    if (!(a.ness_mu > 0.0) || !(a.sudden_mu > 0.0)) throw ConfigError("profile: mu must be positive");
  }

  if (doc.contains("packets")) {
    const auto& p = doc.at("packets");
    if (!p.is_array() || p.size() != 2) throw ConfigError("packets: expected exactly two packets");
    a.f = read_packet(p[0], "packets[0]");
    a.g = read_packet(p[1], "packets[1]");
  }

  if (doc.contains("ladders")) {
    const auto& l = doc.at("ladders");
    only_keys(l, "ladders", {"mu", "N", "horizon"});
    a.mu_ladder = list<double>(l, "mu", "ladders", a.mu_ladder);
    cfg.series_orders = list<int>(l, "N", "ladders", cfg.series_orders);
    cfg.horizons = list<double>(l, "horizon", "ladders", cfg.horizons);
  }
  require_increasing(a.mu_ladder, "ladders.mu");
  require_increasing(cfg.series_orders, "ladders.N");
  require_increasing(cfg.horizons, "ladders.horizon");
  if (!(a.mu_ladder.front() > 0.0)) throw ConfigError("ladders.mu: entries must be positive");
  if (!(cfg.horizons.front() > 0.0)) throw ConfigError("ladders.horizon: entries must be positive");
  if (cfg.series_orders.front() < 0 || cfg.series_orders.back() > kDefaultOrderCap) {
    throw ConfigError("ladders.N: orders must lie in [0, " + std::to_string(kDefaultOrderCap) + "]");
  }
  a.series_order = cfg.series_orders.back();

  a.momenta = list<double>(doc, "momenta", "config", a.momenta);
  a.sweep_momenta = list<double>(doc, "sweep_momenta", "config", a.sweep_momenta);
  for (const auto* ks : {&a.momenta, &a.sweep_momenta}) {
    for (double k : *ks) {
      if (!(k >= 0.0)) throw ConfigError("momenta: entries must be non-negative");
    }
  }

  if (doc.contains("quadrature")) {
    const auto& q = doc.at("quadrature");
    only_keys(q, "quadrature", {"radial_nodes", "max_radial_nodes"});
    a.quad.nodes = integer(q, "radial_nodes", "quadrature", a.quad.nodes);
    a.quad.max_nodes = integer(q, "max_radial_nodes", "quadrature", a.quad.max_nodes);
  }
  if (a.quad.nodes < 2 || a.quad.max_nodes < 2 * a.quad.nodes) {
    throw ConfigError("quadrature: need radial_nodes >= 2 and max_radial_nodes >= 2 * radial_nodes");
  }

  if (doc.contains("tolerances")) {
    const auto& t = doc.at("tolerances");
    std::set<std::string> names;
    for (const auto& [name, _] : tolerance_fields(a)) names.insert(name);
    only_keys(t, "tolerances", names);
    for (const auto& [name, field] : tolerance_fields(a)) {
      *field = number(t, name, "tolerances", *field);
    }
  }
  for (const auto& [name, field] : tolerance_fields(a)) {
    if (!(*field > 0.0)) throw ConfigError(std::string("tolerances.") + name + ": must be positive");
  }
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_run_config(text.str());
}

std::string default_config_json() {
  RunConfig cfg;
  auto& a = cfg.acceptance;
  Json tol = Json::object();
  for (const auto& [name, field] : tolerance_fields(a)) tol[name] = *field;
  Json doc = {
      {"schema_version", kConfigSchemaVersion},
      {"params", params_json(a.bench)},
      {"mode_params", params_json(a.modes)},
      {"profile", {{"mu", a.ness_mu}, {"sudden_mu", a.sudden_mu}}},
      {"packets", Json::array({packet_json(a.f), packet_json(a.g)})},
      {"ladders", {{"mu", a.mu_ladder}, {"N", cfg.series_orders}, {"horizon", cfg.horizons}}},
      {"momenta", a.momenta},
      {"sweep_momenta", a.sweep_momenta},
      {"quadrature", {{"radial_nodes", a.quad.nodes}, {"max_radial_nodes", a.quad.max_nodes}}},
      {"tolerances", tol}};
  return doc.dump(2) + "\n";
}

RunConfig refined(const RunConfig& cfg) {
  RunConfig out = cfg;
  auto densify = [](const std::vector<double>& v) {
    std::vector<double> d;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i > 0) d.push_back(std::sqrt(v[i - 1] * v[i]));
      d.push_back(v[i]);
    }
    return d;
  };
  out.acceptance.mu_ladder = densify(cfg.acceptance.mu_ladder);
  out.horizons = densify(cfg.horizons);
  out.acceptance.quad.nodes *= 2;
  out.acceptance.quad.max_nodes = std::max(out.acceptance.quad.max_nodes, 4 * out.acceptance.quad.nodes);
  return out;
}

}  // namespace kmsad
