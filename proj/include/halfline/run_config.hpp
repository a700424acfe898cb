#pragma once

// Run configuration shared by every CLI subcommand. The text form is a JSON
// object with one member per field below plus "schema_version"; unknown
// members, wrong types and other schema versions are rejected.

#include <cstdint>
#include <string>
#include <vector>

#include "halfline/estimate_verifier.hpp"
#include "halfline/kernel_analysis.hpp"

namespace halfline::cli {

inline constexpr int kSchemaVersion = 1;

struct RunConfig {
  std::string command = "solve";     ///< solve | reunify | verify | kernel-scan
  std::string output_dir;            ///< empty: $HALFLINE_OUT_DIR, else ./halfline-out
  std::uint64_t seed = 20240917;

  // solve, reunify
  std::string kind = "dirichlet";
  std::string profile = "bump";      ///< boundary datum: zero | bump | chirp | noise
  std::size_t member = 0;            ///< which seeded signal of the family
  std::string boundary_csv;          ///< t,re,im file; replaces the named profile
  double T = 1.0;
  bool reunify = false;              ///< solve the full problem on [0, T'] with T' = 1.25 T
  std::string initial = "zero";      ///< reunify initial datum: zero | gaussian
  std::string initial_csv;           ///< x,re,im file on the half line
  std::string forcing = "zero";      ///< reunify forcing: zero | gaussian
  double x_max = 10.0;
  double dx = 0.05;
  double dt = 0.01;
  double tail_tolerance = 1e-20;
  double k_max = 0.0;                ///< 0 selects the cut-off from tail_tolerance
  int quadrature_order = 16;
  bool write_csv = true;

  // verify
  std::string suite;                 ///< "" (only what is listed) | default
  std::vector<std::string> estimates;  ///< dirichlet | neumann-homogeneous | neumann-inhomogeneous
  std::vector<std::string> pairs;      ///< "lambda:r", e.g. inf:2
  std::vector<double> s_values;
  std::vector<std::string> checks;     ///< cauchy | trace | transfer | dispersive
  std::vector<double> trace_s{1.0};
  std::size_t ensemble_size = 50;
  std::size_t enriched_size = 200;
  std::vector<double> T_primes{1.0, 2.0, 4.0};
  double drift_limit = 2.0;
  double obs_dx = 0.1;
  double obs_dt = 0.02;
  double obs_speed = 20.0;
  std::size_t cauchy_size = 20;
  std::size_t dispersive_size = 10;

  // kernel-scan (refine also drives the verify grid gate)
  std::vector<std::string> kernels{"fresnel", "ell", "double"};
  int refine = 2;
  std::size_t tau_points = 101;
  std::size_t t_points = 25;
  std::vector<double> b_values{1e2, 1e3, 1e4};
  std::vector<double> x_values{0.0, 0.1, 1.0, 10.0};

  bool operator==(const RunConfig&) const = default;
};

std::string serialize(const RunConfig& config);
/// Throws ConfigError on malformed text, unknown keys, wrong types or a
/// schema_version other than kSchemaVersion. Missing keys keep defaults.
RunConfig parse_config(const std::string& text);

/// Every check that can fail without solving anything. Throws ConfigError
/// (or DomainError for targets outside an estimate's range).
void validate(const RunConfig& config);

/// Study targets: estimates x pairs x s, or the built-in default suite.
std::vector<verify::Target> study_targets(const RunConfig& config);
/// Norm-transfer runs as (estimate, s) pairs.
std::vector<std::pair<verify::Estimate, double>> transfer_runs(const RunConfig& config);
std::vector<std::string> active_checks(const RunConfig& config);
/// (pair, s) specs for the whole-line checks.
std::vector<NormSpec> cauchy_specs(const RunConfig& config);

verify::StudyConfig study_config(const RunConfig& config);
kernel::ScanConfig scan_config(const RunConfig& config);
kernel::ScanKernel parse_kernel(const std::string& text);

/// "inf:2" -> (infinity, 2).
std::pair<Exponent, Exponent> parse_pair(const std::string& text);

}  // namespace halfline::cli
