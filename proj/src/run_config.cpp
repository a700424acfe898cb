#include "halfline/run_config.hpp"

#include <algorithm>
#include <set>

#include <json.hpp>

#include "halfline/errors.hpp"
#include "halfline/utm_boundary.hpp"

namespace halfline::cli {

using nlohmann::json;

namespace {

// One visitor drives both directions so that the key set cannot drift.
template <class Config, class F>
void for_each_field(Config& c, F&& f) {
  f("command", c.command);
  f("output_dir", c.output_dir);
  f("seed", c.seed);
  f("kind", c.kind);
  f("profile", c.profile);
  f("member", c.member);
  f("boundary_csv", c.boundary_csv);
  f("T", c.T);
  f("reunify", c.reunify);
  f("initial", c.initial);
  f("initial_csv", c.initial_csv);
  f("forcing", c.forcing);
  f("x_max", c.x_max);
  f("dx", c.dx);
  f("dt", c.dt);
  f("tail_tolerance", c.tail_tolerance);
  f("k_max", c.k_max);
  f("quadrature_order", c.quadrature_order);
  f("write_csv", c.write_csv);
  f("suite", c.suite);
  f("estimates", c.estimates);
  f("pairs", c.pairs);
  f("s_values", c.s_values);
  f("checks", c.checks);
  f("trace_s", c.trace_s);
  f("ensemble_size", c.ensemble_size);
  f("enriched_size", c.enriched_size);
  f("T_primes", c.T_primes);
  f("drift_limit", c.drift_limit);
  f("obs_dx", c.obs_dx);
  f("obs_dt", c.obs_dt);
  f("obs_speed", c.obs_speed);
  f("cauchy_size", c.cauchy_size);
  f("dispersive_size", c.dispersive_size);
  f("kernels", c.kernels);
  f("refine", c.refine);
  f("tau_points", c.tau_points);
  f("t_points", c.t_points);
  f("b_values", c.b_values);
  f("x_values", c.x_values);
}

template <class T>
bool type_matches(const json& j) {
  if constexpr (std::is_same_v<T, bool>) {
    return j.is_boolean();
  } else if constexpr (std::is_same_v<T, std::string>) {
    return j.is_string();
  } else if constexpr (std::is_floating_point_v<T>) {
    return j.is_number();
  } else if constexpr (std::is_unsigned_v<T>) {
    return j.is_number_unsigned();
  } else if constexpr (std::is_integral_v<T>) {
    return j.is_number_integer();
  } else {
    if (!j.is_array()) return false;
    return std::all_of(j.begin(), j.end(), [](const json& e) { return type_matches<typename T::value_type>(e); });
  }
}

const std::set<std::string> kEstimates{"dirichlet", "neumann-homogeneous", "neumann-inhomogeneous"};
const std::set<std::string> kChecks{"cauchy", "trace", "transfer", "dispersive"};

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }

NormSpec make_spec(const std::string& pair, double s) {
  const auto [lambda, r] = parse_pair(pair);
  NormSpec n;
  n.s = s;
  n.lambda = lambda;
  n.r = r;
  return n;
}

const std::vector<std::string> kDefaultPairs{"inf:2", "8:4", "6:6"};

}  // namespace

std::string serialize(const RunConfig& config) {
  json j;
  j["schema_version"] = kSchemaVersion;
  for_each_field(config, [&](const char* key, const auto& value) { j[key] = value; });
  return j.dump(2) + "\n";
}

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  require(j.is_object(), "config must be a JSON object");
  require(j.contains("schema_version"), "config lacks schema_version");
  require(j["schema_version"].is_number_integer() && j["schema_version"].get<int>() == kSchemaVersion,
          "config schema_version must be " + std::to_string(kSchemaVersion));
  RunConfig c;
  std::set<std::string> known{"schema_version"};
  for_each_field(c, [&](const char* key, auto& value) {
    known.insert(key);
    if (!j.contains(key)) return;
    using T = std::decay_t<decltype(value)>;
    require(type_matches<T>(j[key]), std::string("config key '") + key + "' has the wrong type");
    value = j[key].template get<T>();
  });
  for (const auto& item : j.items()) require(known.count(item.key()) > 0, "unknown config key '" + item.key() + "'");
  return c;
}

std::pair<Exponent, Exponent> parse_pair(const std::string& text) {
  const auto colon = text.find(':');
  require(colon != std::string::npos, "pair '" + text + "' must read lambda:r");
  return {Exponent::parse(text.substr(0, colon)), Exponent::parse(text.substr(colon + 1))};
}

kernel::ScanKernel parse_kernel(const std::string& text) {
  if (text == "fresnel") return kernel::ScanKernel::fresnel;
  if (text == "ell") return kernel::ScanKernel::ell;
  if (text == "double") return kernel::ScanKernel::double_kernel;
  throw ConfigError("unknown kernel '" + text + "' (expected fresnel, ell or double)");
}

std::vector<verify::Target> study_targets(const RunConfig& config) {
  std::vector<verify::Target> out;
  auto add = [&](verify::Estimate e, const std::vector<double>& s_list, const std::vector<std::string>& pairs) {
    for (double s : s_list) {
      for (const auto& p : pairs) out.push_back({e, make_spec(p, s)});
    }
  };
  if (config.suite == "default") {
    add(verify::Estimate::dirichlet, {0.0, 0.25, 1.0}, kDefaultPairs);
    add(verify::Estimate::neumann_homogeneous, {0.0, 0.5}, kDefaultPairs);
    add(verify::Estimate::neumann_inhomogeneous, {0.5, 1.0}, kDefaultPairs);
    return out;
  }
  const auto& pairs = config.pairs.empty() ? kDefaultPairs : config.pairs;
  for (const auto& e : config.estimates) add(verify::parse_estimate(e), config.s_values, pairs);
  return out;
}

std::vector<std::pair<verify::Estimate, double>> transfer_runs(const RunConfig& config) {
  std::vector<std::pair<verify::Estimate, double>> out;
  std::set<std::pair<int, double>> seen;
  for (const auto& t : study_targets(config)) {
    if (seen.insert({static_cast<int>(t.estimate), t.spec.s}).second) out.emplace_back(t.estimate, t.spec.s);
  }
  return out;
}

std::vector<std::string> active_checks(const RunConfig& config) {
  if (config.suite == "default") return {"cauchy", "trace", "transfer", "dispersive"};
  return config.checks;
}

std::vector<NormSpec> cauchy_specs(const RunConfig& config) {
  std::vector<NormSpec> out;
  const auto& pairs = config.pairs.empty() || config.suite == "default" ? kDefaultPairs : config.pairs;
  const std::vector<double> s_list =
      config.suite == "default" || config.s_values.empty() ? std::vector<double>{0.0, 1.0} : config.s_values;
  for (double s : s_list) {
    for (const auto& p : pairs) out.push_back(make_spec(p, s));
  }
  return out;
}

void validate(const RunConfig& c) {
  static const std::set<std::string> commands{"solve", "reunify", "verify", "kernel-scan"};
  require(commands.count(c.command) > 0, "unknown command '" + c.command + "'");
  (void)utm::parse_kind(c.kind);
  require(c.profile == "zero" || c.profile == "bump" || c.profile == "chirp" || c.profile == "noise",
          "unknown profile '" + c.profile + "' (expected zero, bump, chirp or noise)");
  require(c.initial == "zero" || c.initial == "gaussian", "unknown initial datum '" + c.initial + "'");
  require(c.forcing == "zero" || c.forcing == "gaussian", "unknown forcing '" + c.forcing + "'");
  require(finite_positive(c.T), "T must be positive");
  require(finite_positive(c.x_max) && finite_positive(c.dx) && finite_positive(c.dt), "grids need positive x_max, dx, dt");
  require(c.dx < c.x_max && c.dt <= c.T, "grid steps must be smaller than the ranges");
  require(finite_positive(c.tail_tolerance) && c.tail_tolerance < 1.0, "tail_tolerance must lie in (0, 1)");
  require(std::isfinite(c.k_max) && c.k_max >= 0.0, "k_max must be non-negative");
  require(c.quadrature_order >= 2 && c.quadrature_order <= 64, "quadrature_order must lie in [2, 64]");

  require(c.suite.empty() || c.suite == "default", "unknown suite '" + c.suite + "' (expected default)");
  for (const auto& e : c.estimates) require(kEstimates.count(e) > 0, "unknown estimate '" + e + "'");
  for (const auto& k : c.checks) require(kChecks.count(k) > 0, "unknown check '" + k + "'");
  for (const auto& p : c.pairs) (void)parse_pair(p);
  for (double s : c.s_values) require(std::isfinite(s), "s values must be finite");
  require(c.estimates.empty() || !c.s_values.empty() || c.suite == "default", "estimates need s values");
  for (const auto& t : study_targets(c)) verify::check_target(t.estimate, t.spec);
  const auto checks = active_checks(c);
  auto has = [&](const char* name) { return std::find(checks.begin(), checks.end(), name) != checks.end(); };
  if (has("cauchy")) {
    for (const auto& spec : cauchy_specs(c)) {
      if (!spec.admissible()) {
        throw DomainError("pair (" + spec.lambda.to_string() + ", " + spec.r.to_string() + ") is not admissible");
      }
      require(spec.s >= 0.0, "whole-line checks need s >= 0");
    }
  }
  if (has("trace")) {
    require(!c.trace_s.empty(), "trace check needs at least one s");
    for (double s : c.trace_s) {
      if (!(s > 0.5 && s < 2.5)) throw DomainError("trace check needs 1/2 < s < 5/2");
    }
  }
  if (has("transfer")) require(!transfer_runs(c).empty(), "transfer check needs estimates and s values");
  require(c.ensemble_size >= 1 && c.enriched_size >= c.ensemble_size, "need 1 <= ensemble_size <= enriched_size");
  require(!c.T_primes.empty(), "need at least one T'");
  for (double T : c.T_primes) require(finite_positive(T) && T >= 0.95, "every T' must be at least 0.95");
  require(c.drift_limit > 1.0, "drift_limit must exceed 1");
  require(finite_positive(c.obs_dx) && finite_positive(c.obs_dt) && finite_positive(c.obs_speed),
          "observation grid needs positive obs_dx, obs_dt, obs_speed");
  require(c.cauchy_size >= 1 && c.dispersive_size >= 1, "check ensembles need at least one member");

  require(!c.kernels.empty() || c.command != "kernel-scan", "kernel scan needs at least one kernel");
  for (const auto& k : c.kernels) (void)parse_kernel(k);
  require(c.refine >= 1 && c.refine <= 8, "refine must lie in [1, 8]");
  require(c.tau_points >= 1 && c.t_points >= 2, "scan needs tau_points >= 1 and t_points >= 2");
  for (double b : c.b_values) require(finite_positive(b), "b values must be positive");
  for (double x : c.x_values) require(std::isfinite(x) && x >= 0.0, "x values must be non-negative");
}

verify::StudyConfig study_config(const RunConfig& c) {
  verify::StudyConfig s;
  s.ensemble.seed = c.seed;
  s.ensemble.size = c.ensemble_size;
  s.enriched_size = c.enriched_size;
  s.T_primes = c.T_primes;
  s.refine = c.refine;
  s.drift_limit = c.drift_limit;
  s.grid.dx = c.obs_dx;
  s.grid.dt = c.obs_dt;
  s.grid.speed = c.obs_speed;
  s.grid.utm.tail_tolerance = c.tail_tolerance;
  s.grid.utm.k_max = c.k_max;
  s.grid.utm.quadrature_order = c.quadrature_order;
  return s;
}

kernel::ScanConfig scan_config(const RunConfig& c) {
  kernel::ScanConfig s;
  s.kernels.clear();
  for (const auto& k : c.kernels) s.kernels.push_back(parse_kernel(k));
  s.refine = c.refine;
  s.tau_points = c.tau_points;
  s.t_points = c.t_points;
  s.b_values = c.b_values;
  s.x_values = c.x_values;
  return s;
}

}  // namespace halfline::cli
