#pragma once

// Ensemble experiments that turn the half-line estimates into measured,
// falsifiable reports. A "bounded" estimate is one whose largest measured
// ratio moves by less than a fixed factor when the ensemble is enriched, the
// window T' is doubled and the grids are refined.

#include <cstdint>
#include <string>
#include <vector>

#include "halfline/types.hpp"
#include "halfline/utm_boundary.hpp"

namespace halfline::verify {

using utm::BoundaryKind;

enum class Family { bump, chirp, noise };
std::string to_string(Family family);

struct EnsembleConfig {
  std::uint64_t seed = 20240917;
  std::size_t size = 50;
  double support = 0.95;      ///< every signal lives on [0, support)
  double dt = 1e-3;
  double noise_band = 30.0;   ///< |omega| bound of the band-limited noise family
  std::vector<Family> families{Family::bump, Family::chirp, Family::noise};
};

/// One boundary signal. Member i depends only on (seed, i), so a larger
/// ensemble extends a smaller one.
struct Member {
  std::size_t index = 0;
  Family family = Family::bump;
  TimeSignal h;
};

Member make_member(const EnsembleConfig& config, std::size_t index);
std::vector<Member> make_ensemble(const EnsembleConfig& config);

enum class Estimate { dirichlet, neumann_homogeneous, neumann_inhomogeneous };
std::string to_string(Estimate estimate);
Estimate parse_estimate(const std::string& text);
BoundaryKind kind_of(Estimate estimate);

/// Throws DomainError unless the estimate is stated for this (s, lambda, r).
void check_target(Estimate estimate, const NormSpec& spec);

/// Grids on which u is observed for a window [0, T']. The x-range grows with
/// T' so that the waves launched by the signals stay inside it; a smooth
/// taper over the last part of the range removes the truncation edge before
/// Bessel potentials are applied.
struct ObservationGrid {
  double dx = 0.1;
  double dt = 0.02;
  double x_margin = 12.0;
  double speed = 20.0;          ///< x_max = x_margin + speed * T'
  double taper_start = 0.8;     ///< taper on [taper_start, 1] * x_max
  utm::UtmOptions utm;
  double x_max(double T_prime) const { return x_margin + speed * T_prime; }
  ObservationGrid refined(int factor = 2) const;
};

/// u for the signal on the observation grid over [0, T'], tapered.
Field2D observe(const TimeSignal& h, BoundaryKind kind, double T_prime, const ObservationGrid& grid,
                Diagnostics* diag = nullptr);

struct RatioSample {
  std::size_t index = 0;
  Family family = Family::bump;
  double T_prime = 0.0;
  std::string grid;  ///< "base" or "refined"
  double numerator = 0.0;
  double denominator = 0.0;
  double ratio = 0.0;
};

/// Max-ratio drift between a reference measurement and a varied one.
struct Gate {
  std::string name;
  double reference = 0.0;
  double varied = 0.0;
  /// varied / reference for growth gates (ensemble, window), otherwise
  /// max(varied / reference, reference / varied) (grid refinement)
  double drift = 0.0;
  double limit = 2.0;
  bool growth_only = true;
  bool passed = false;
};

struct RatioReport {
  Estimate estimate = Estimate::dirichlet;
  NormSpec spec;
  std::size_t ensemble_size = 0;
  std::vector<RatioSample> samples;
  double max_ratio = 0.0;     ///< over the base samples at the first T'
  double median_ratio = 0.0;
  std::vector<double> T_primes;
  std::vector<double> max_per_T_prime;
  double refined_max_ratio = 0.0;  ///< 0 when no refinement was run
  double refinement_delta = 0.0;   ///< relative change of the max ratio under refinement
  std::vector<Gate> gates;
  bool bounded = true;             ///< every gate passed
  Diagnostics diagnostics;
  std::string label() const;
};

/// Single-window reports: one ratio per member at T'.
RatioReport strichartz_ratio_dirichlet(const std::vector<Member>& ensemble, const NormSpec& spec, double T_prime,
                                       const ObservationGrid& grid = {});
RatioReport strichartz_ratio_neumann(const std::vector<Member>& ensemble, const NormSpec& spec, double T_prime,
                                     bool homogeneous, const ObservationGrid& grid = {});

struct Target {
  Estimate estimate = Estimate::dirichlet;
  NormSpec spec;
};

struct StudyConfig {
  EnsembleConfig ensemble;            ///< base ensemble (size = base size)
  std::size_t enriched_size = 200;
  std::vector<double> T_primes{1.0, 2.0, 4.0};
  int refine = 2;
  double drift_limit = 2.0;
  ObservationGrid grid;
};

/// Runs every target through the three stability gates. Each member is solved
/// once per boundary kind and grid; all targets reuse the same fields.
/// Targets are validated before any solve.
std::vector<RatioReport> stability_study(const std::vector<Target>& targets, const StudyConfig& config);

/// Per-sample CSV rows with a header.
std::string ratio_csv(const std::vector<RatioReport>& reports);
/// Human-readable summary: measured constants and gate outcomes.
std::string ratio_summary(const std::vector<RatioReport>& reports);

// Whole-line checks of the free and Duhamel evolutions.

struct CauchyConfig {
  std::uint64_t seed = 20240917;
  std::size_t size = 20;
  UniformGrid x{-40.0, 0.05, 1601};
  UniformGrid t{0.0, 0.02, 51};
  int padding = 4;
  std::vector<double> conservation_s{0.0, 1.0};
};

/// Seeded whole-line initial data (single and paired Gaussian packets) on config.x.
std::vector<SpaceProfile> cauchy_profiles(const CauchyConfig& config);
/// Seeded whole-line forcings on config.x by config.t.
std::vector<Field2D> cauchy_forcings(const CauchyConfig& config);

struct CauchyReport {
  NormSpec spec;
  /// max over profiles, times and conservation_s of | |v(t)|_{H^s} / |y0*|_{H^s} - 1 |
  double conservation_error = 0.0;
  RatioReport free_evolution;  ///< |v|_{L^lambda W^{s,r}(R)} / |y0*|_{H^s}
  RatioReport duhamel;         ///< |z|_{L^lambda W^{s,r}(R)} / |f|_{L^lambda' W^{s,r'}(R)}
};

CauchyReport cauchy_checks(const std::vector<SpaceProfile>& initial, const std::vector<Field2D>& forcing,
                           const NormSpec& spec, const CauchyConfig& config);

// Time regularity of u at fixed positions.

struct TraceConfig {
  double T_prime = 1.0;
  std::vector<double> probes{0.0, 0.1, 1.0, 10.0};
  utm::UtmOptions utm;
};

/// Ratio sup_p |u(x_p, .)|_{H^{(2s+1)/4}(0,T')} / |h|_{H^{(2s+1)/4}} for the
/// Dirichlet problem, 1/2 < s < 5/2. The series on [0, T'] is continued past
/// T' by even reflection and a smooth cutoff over T'/20 (u vanishes to all
/// orders at t = 0 for compatible data, so zero continuation is used there).
RatioReport trace_regularity_check(const std::vector<Member>& ensemble, double s, const TraceConfig& config = {});

/// The per-probe norms of one member, in probe order.
std::vector<double> probe_time_norms(const TimeSignal& h, double s, const TraceConfig& config);

// Norms of H1, H2 against the matching norm of h.

struct TransferSample {
  std::size_t index = 0;
  Family family = Family::bump;
  double T_prime = 0.0;
  double h_norm = 0.0;
  double H1_norm = 0.0;
  double H2_norm = 0.0;
  double antiderivative_norm = 0.0;  ///< inhomogeneous Neumann path only
  double ratio1 = 0.0;               ///< H1_norm / h_norm
  double ratio2 = 0.0;               ///< H2_norm / h_norm
  double antiderivative_ratio = 0.0; ///< antiderivative_norm / h_norm
};

struct TransferReport {
  Estimate estimate = Estimate::dirichlet;
  double s = 0.0;
  std::vector<TransferSample> samples;
  double max_ratio1 = 0.0, max_ratio2 = 0.0;
  /// Inhomogeneous Neumann: per T', max over members of the raw ratios and of
  /// the ratios divided by (1 + T').
  std::vector<double> T_primes;
  std::vector<double> max_ratio_per_T_prime;
  std::vector<double> normalized_max_per_T_prime;
  std::vector<double> antiderivative_max_per_T_prime;
};

/// Dirichlet:  |H_i|_{H^s} against |h|_{H^{(2s+1)/4}}.
/// Neumann homogeneous:  |H_i|_{Hdot^s} against |h|_{Hdot^{(2s-1)/4}}.
/// Neumann inhomogeneous:  H_i built from the mean-zero extension on
/// [0, 2T'+1), |H_i|_{H^s} and |int h_e|_{H^{(2s+3)/4}} against
/// |h|_{H^{(2s-1)/4}}, per T'.
TransferReport norm_transfer(const std::vector<Member>& ensemble, Estimate estimate, double s,
                             const std::vector<double>& T_primes = {1.0});

// Pointwise decay of the imaginary-leg part u1.

struct DispersiveConfig {
  double t_min = 0.01, t_max = 10.0;
  std::size_t t_points = 40;         ///< log-spaced
  double x_max = 10.0, dx = 0.01;
  std::vector<double> lr{2.0, 4.0};  ///< extra L^r exponents for the interpolated bound
  utm::UtmOptions utm;
};

struct DispersiveSample {
  std::size_t index = 0;
  Family family = Family::bump;
  double H1_l1 = 0.0;
  std::vector<double> scaled;         ///< sqrt(t) sup_x |u1| / |H1|_{L^1} per t
  double max_over_t = 0.0;
  double median_over_t = 0.0;
  double spread = 0.0;                ///< max / median
  std::vector<double> lr_constants;   ///< sup_t t^{1/2-1/r} |u1|_{L^r} / |H1|_{L^{r'}}, per r
};

struct DispersiveReport {
  BoundaryKind kind = BoundaryKind::dirichlet;
  std::vector<double> t_values;
  std::vector<DispersiveSample> samples;
  double sup_constant = 0.0;  ///< max over members and t of the scaled quantity
  double worst_spread = 0.0;
};

DispersiveReport dispersive_check(const std::vector<Member>& ensemble, BoundaryKind kind,
                                  const DispersiveConfig& config = {});

}  // namespace halfline::verify
