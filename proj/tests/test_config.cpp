#include <doctest.h>

#include "kmsad/config.hpp"
#include "kmsad/error.hpp"

using namespace kmsad;

namespace {

std::string with(const std::string& body) { return "{\"schema_version\": 1" + body + "}"; }

}  // namespace

TEST_CASE("defaults round trip through JSON") {
  const auto cfg = parse_run_config(default_config_json());
  const RunConfig def;
  CHECK(cfg.acceptance.mu_ladder == def.acceptance.mu_ladder);
  CHECK(cfg.series_orders == def.series_orders);
  CHECK(cfg.acceptance.bench.lambda() == def.acceptance.bench.lambda());
  CHECK(cfg.acceptance.f.t_c == def.acceptance.f.t_c);
  CHECK(cfg.acceptance.quad.refine_tol == def.acceptance.quad.refine_tol);
  CHECK(default_config_json() == default_config_json());
}

TEST_CASE("partial configs keep defaults") {
  const auto cfg = parse_run_config(with(R"(, "params": {"lambda": 0.2}, "ladders": {"N": [0, 3]})"));
  CHECK(cfg.acceptance.bench.lambda() == 0.2);
  CHECK(cfg.acceptance.bench.beta() == 1.0);
  CHECK(cfg.acceptance.series_order == 3);
  CHECK(cfg.acceptance.modes.lambda() == 0.5);
}

TEST_CASE("schema errors") {
  CHECK_THROWS_AS(parse_run_config("{"), ConfigError);
  CHECK_THROWS_AS(parse_run_config("{}"), ConfigError);
  CHECK_THROWS_AS(parse_run_config(R"({"schema_version": 2})"), ConfigError);
  CHECK_THROWS_AS(parse_run_config(with(R"(, "extra": 1)")), ConfigError);
  CHECK_THROWS_AS(parse_run_config(with(R"(, "tolerances": {"series": -1e-8})")), ConfigError);
  CHECK_THROWS_AS(parse_run_config(with(R"(, "tolerances": {"seriess": 1e-8})")), ConfigError);
  CHECK_THROWS_AS(parse_run_config(with(R"(, "ladders": {"mu": [5, 5, 10]})")), ConfigError);
  CHECK_THROWS_AS(parse_run_config(with(R"(, "ladders": {"N": [0, 17]})")), ConfigError);
  CHECK_THROWS_AS(parse_run_config(with(R"(, "ladders": {"horizon": []})")), ConfigError);
  CHECK_THROWS_AS(parse_run_config(with(R"(, "params": {"lambda": -2})")), ConfigError);
  CHECK_THROWS_AS(parse_run_config(with(R"(, "params": {"beta": "hot"})")), ConfigError);
  CHECK_THROWS_AS(parse_run_config(with(R"(, "packets": [{"k_c": 1}])")), ConfigError);
  CHECK_THROWS_AS(parse_run_config(with(R"(, "packets": [{"sigma_k": 0}, {}])")), ConfigError);
  CHECK_THROWS_AS(parse_run_config(with(R"(, "momenta": [-1])")), ConfigError);
  CHECK_THROWS_AS(parse_run_config(with(R"(, "quadrature": {"radial_nodes": 1})")), ConfigError);
  CHECK_THROWS_AS(parse_run_config(with(R"(, "profile": {"mu": 0})")), ConfigError);
  CHECK_THROWS_AS(load_run_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("refinement doubles density") {
  const auto r = refined(RunConfig{});
  CHECK(r.acceptance.quad.nodes == 128);
  REQUIRE(r.acceptance.mu_ladder.size() == 7);
  CHECK(r.acceptance.mu_ladder[1] == doctest::Approx(std::sqrt(50.0)));
  CHECK(r.horizons.size() == 5);
}
