#include "halfline/estimate_verifier.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <tuple>

#include "halfline/cauchy_solver.hpp"
#include "halfline/errors.hpp"
#include "halfline/extension_ops.hpp"
#include "halfline/fft.hpp"
#include "halfline/special.hpp"
#include "halfline/spectral_core.hpp"

namespace halfline::verify {
namespace {

// Seeded draws. The 53-bit mapping is spelled out because the standard
// distributions are implementation-defined and reports must be reproducible.
class Draw {
 public:
  Draw(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(index),
                      static_cast<std::uint32_t>(index >> 32)};
    rng_.seed(seq);
  }
  double uniform(double a, double b) {
    const double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
    return a + (b - a) * u;
  }

 private:
  std::mt19937_64 rng_;
};

constexpr std::uint64_t kBoundaryStream = 1;
constexpr std::uint64_t kProfileStream = 2;
constexpr std::uint64_t kForcingStream = 3;
constexpr int kNoiseModes = 16;

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double safe_ratio(double num, double den) { return den > 0.0 ? num / den : 0.0; }

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::size_t nodes_on(double length, double step) {
  return static_cast<std::size_t>(std::llround(length / step)) + 1;
}

bool homogeneous_numerator(Estimate e) { return e == Estimate::neumann_homogeneous; }

double denominator(const TimeSignal& h, Estimate e, double s, double T_prime) {
  switch (e) {
    case Estimate::dirichlet:
      return spectral::sobolev_norm(h, (2.0 * s + 1.0) / 4.0);
    case Estimate::neumann_homogeneous:
      return spectral::homogeneous_sobolev_norm(h, (2.0 * s - 1.0) / 4.0).value;
    case Estimate::neumann_inhomogeneous:
      return (1.0 + T_prime) * spectral::sobolev_norm(h, (2.0 * s - 1.0) / 4.0);
  }
  return 0.0;
}

// Slice norms of one field, cached per (s, r, homogeneous).
class FieldNorms {
 public:
  explicit FieldNorms(const Field2D& u) : u_(u) {}
  const std::vector<double>& slices(double s, double r, bool homogeneous) {
    const auto key = std::make_tuple(s, r, homogeneous);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    const spectral::SliceNorm norm(u_.x, Domain::half_line, s, r, homogeneous);
    std::vector<double> v(u_.t.count);
    for (std::size_t n = 0; n < u_.t.count; ++n) v[n] = norm(u_.slice(n));
    return cache_.emplace(key, std::move(v)).first->second;
  }
  double mixed(const NormSpec& spec, bool homogeneous, double T_prime) {
    const auto& v = slices(spec.s, spec.r.value(), homogeneous);
    return spectral::time_lp(v, u_.t, spec.lambda.value(), 0.0, T_prime);
  }

 private:
  const Field2D& u_;
  std::map<std::tuple<double, double, bool>, std::vector<double>> cache_;
};

RatioSample make_sample(const Member& m, double T_prime, const char* grid, double num, double den) {
  RatioSample s;
  s.index = m.index;
  s.family = m.family;
  s.T_prime = T_prime;
  s.grid = grid;
  s.numerator = num;
  s.denominator = den;
  s.ratio = safe_ratio(num, den);
  return s;
}

// Max and median over the base-grid samples at T0 from members below index_limit.
void summarize(RatioReport& r, double T0, std::size_t index_limit = std::numeric_limits<std::size_t>::max()) {
  std::vector<double> base;
  for (const auto& s : r.samples) {
    if (s.grid == "base" && s.T_prime == T0 && s.index < index_limit) base.push_back(s.ratio);
  }
  r.max_ratio = base.empty() ? 0.0 : *std::max_element(base.begin(), base.end());
  r.median_ratio = median(base);
}

double max_where(const RatioReport& r, const std::function<bool(const RatioSample&)>& pick) {
  double m = 0.0;
  for (const auto& s : r.samples) {
    if (pick(s)) m = std::max(m, s.ratio);
  }
  return m;
}

// Growth gates look for a max ratio that climbs (a bounded quantity cannot);
// the refinement gate also rejects a drop, which would mean the base grid
// overstated the ratio.
Gate make_gate(std::string name, double reference, double varied, double limit, bool growth_only) {
  Gate g;
  g.name = std::move(name);
  g.reference = reference;
  g.varied = varied;
  g.limit = limit;
  g.growth_only = growth_only;
  if (reference > 0.0 && varied > 0.0) {
    g.drift = growth_only ? varied / reference : std::max(varied / reference, reference / varied);
  } else {
    g.drift = reference == varied ? 1.0 : std::numeric_limits<double>::infinity();
  }
  g.passed = g.drift < limit;
  return g;
}

// Continuation of u(x_p, .) past T' by even reflection about T', cut off
// smoothly within a twentieth of the window. Even reflection is bounded on
// H^sigma for sigma < 3/2 and reads only [T' - T'/20, T'], so data that have
// already switched off there are continued by zero.
TimeSignal continue_past_window(std::span<const cplx> series, double dt) {
  const std::size_t n = series.size();
  const std::size_t m = std::max<std::size_t>(n / 20, 1);
  TimeSignal out;
  out.t0 = 0.0;
  out.dt = dt;
  out.samples.assign(series.begin(), series.end());
  const double length = static_cast<double>(m) * dt;
  for (std::size_t j = 1; j < m && j < n; ++j) {
    const double w = special::smooth_step_down(static_cast<double>(j) * dt, 0.0, length);
    out.samples.push_back(series[n - 1 - j] * w);
  }
  out.samples.push_back(0.0);
  out.support_end = static_cast<double>(out.samples.size() - 1) * dt;
  return out;
}

// H1 as a function of tau: (1/2pi) int_0^K e^{ik tau} H1^(k) dk on a periodic
// window of the given length, by one FFT.
std::vector<cplx> H1_in_time(const utm::BoundarySpectrum& spec, BoundaryKind kind, double K, double window,
                             double& dtau) {
  const double dk = two_pi / window;
  const std::size_t modes = static_cast<std::size_t>(std::ceil(K / dk)) + 1;
  const std::size_t n = fft::good_size(std::max<std::size_t>(4 * modes, 1024));
  std::vector<cplx> buf(n);
  for (std::size_t j = 0; j < modes; ++j) {
    const double w = j == 0 ? 0.5 : 1.0;
    buf[j] = w * spec.H1(kind, static_cast<double>(j) * dk) * dk / two_pi;
  }
  fft::backward(buf);
  dtau = window / static_cast<double>(n);
  return buf;
}

double time_lp_of(const std::vector<cplx>& v, double step, double p) { return spectral::lp_norm(v, step, p); }

}  // namespace

std::string to_string(Family family) {
  switch (family) {
    case Family::bump:
      return "bump";
    case Family::chirp:
      return "chirp";
    case Family::noise:
      return "noise";
  }
  return "?";
}

Member make_member(const EnsembleConfig& config, std::size_t index) {
  if (config.families.empty()) throw ConfigError("ensemble: no signal families selected");
  if (!(config.support > 0.0) || !(config.dt > 0.0)) throw ConfigError("ensemble: support and dt must be positive");
  Member m;
  m.index = index;
  m.family = config.families[index % config.families.size()];
  Draw d(config.seed, kBoundaryStream, index);
  const double S = config.support;
  std::function<cplx(double)> fn;
  switch (m.family) {
    case Family::bump: {
      const double c = d.uniform(0.25, 0.7) * S;
      const double w = d.uniform(0.3, 1.0) * std::min(c, S - c);
      fn = [=](double t) { return cplx(special::mollifier((t - c) / w)); };
      break;
    }
    case Family::chirp: {
      const double c = d.uniform(0.35, 0.65) * S;
      const double sigma = d.uniform(0.06, 0.15) * S;
      const double omega = d.uniform(-15.0, 15.0);
      const double rate = d.uniform(-40.0, 40.0);
      fn = [=](double t) {
        const double u = t - c;
        return special::mollifier((t - 0.5 * S) / (0.5 * S)) * std::exp(-0.5 * u * u / (sigma * sigma)) *
               std::polar(1.0, omega * u + rate * u * u);
      };
      break;
    }
    case Family::noise: {
      std::vector<double> omega(kNoiseModes), phase(kNoiseModes);
      for (int j = 0; j < kNoiseModes; ++j) {
        omega[static_cast<std::size_t>(j)] = d.uniform(-config.noise_band, config.noise_band);
        phase[static_cast<std::size_t>(j)] = d.uniform(0.0, two_pi);
      }
      fn = [=](double t) {
        cplx acc{};
        for (std::size_t j = 0; j < omega.size(); ++j) acc += std::polar(1.0, omega[j] * t + phase[j]);
        return special::mollifier((t - 0.5 * S) / (0.5 * S)) * acc / std::sqrt(static_cast<double>(omega.size()));
      };
      break;
    }
  }
  const std::size_t n = static_cast<std::size_t>(std::ceil(S / config.dt)) + 1;
  m.h = TimeSignal::sample(fn, 0.0, config.dt, n, S);
  return m;
}

std::vector<Member> make_ensemble(const EnsembleConfig& config) {
  std::vector<Member> out;
  out.reserve(config.size);
  for (std::size_t i = 0; i < config.size; ++i) out.push_back(make_member(config, i));
  return out;
}

std::string to_string(Estimate estimate) {
  switch (estimate) {
    case Estimate::dirichlet:
      return "dirichlet";
    case Estimate::neumann_homogeneous:
      return "neumann-homogeneous";
    case Estimate::neumann_inhomogeneous:
      return "neumann-inhomogeneous";
  }
  return "?";
}

Estimate parse_estimate(const std::string& text) {
  if (text == "dirichlet") return Estimate::dirichlet;
  if (text == "neumann-homogeneous") return Estimate::neumann_homogeneous;
  if (text == "neumann-inhomogeneous") return Estimate::neumann_inhomogeneous;
  throw ConfigError("unknown estimate '" + text +
                    "' (expected dirichlet, neumann-homogeneous or neumann-inhomogeneous)");
}

BoundaryKind kind_of(Estimate estimate) {
  return estimate == Estimate::dirichlet ? BoundaryKind::dirichlet : BoundaryKind::neumann;
}

void check_target(Estimate estimate, const NormSpec& spec) {
  if (!spec.admissible()) {
    throw DomainError("pair (" + spec.lambda.to_string() + ", " + spec.r.to_string() +
                      ") is not admissible: 1/lambda + 1/(2r) = 1/4 with 2 <= lambda, r <= inf is required");
  }
  if (spec.s < 0.0) throw DomainError("the estimates are stated for s >= 0");
  if (estimate == Estimate::neumann_inhomogeneous && spec.s < 0.5) {
    throw DomainError("the inhomogeneous Neumann estimate needs s >= 1/2");
  }
}

ObservationGrid ObservationGrid::refined(int factor) const {
  if (factor < 1) throw ConfigError("refinement factor must be at least 1");
  ObservationGrid g = *this;
  g.dx /= factor;
  g.dt /= factor;
  return g;
}

Field2D observe(const TimeSignal& h, BoundaryKind kind, double T_prime, const ObservationGrid& grid,
                Diagnostics* diag) {
  if (!(T_prime > 0.0)) throw DomainError("observe: T' must be positive");
  if (h.support_end > T_prime + 1e-12) throw DomainError("observe: supp h must lie in [0, T')");
  const double x_max = grid.x_max(T_prime);
  const UniformGrid x{0.0, grid.dx, nodes_on(x_max, grid.dx)};
  const UniformGrid t{0.0, grid.dt, nodes_on(T_prime, grid.dt)};
  const utm::UtmEvaluator ev(h, kind, x.back(), t.back(), grid.utm, grid.dx);
  Field2D u = ev.u1(x, t);
  u += ev.u2(x, t);
  const double a = grid.taper_start * x.back();
  double far = 0.0, total = 0.0;
  for (std::size_t i = 0; i < x.count; ++i) {
    const double e = std::norm(u(t.count - 1, i));
    total += e;
    if (x[i] > a) far += e;
  }
  for (std::size_t n = 0; n < t.count; ++n) {
    for (std::size_t i = 0; i < x.count; ++i) {
      if (x[i] > a) u(n, i) *= special::smooth_step_down(x[i], a, x.back());
    }
  }
  if (diag) {
    diag->merge(ev.diagnostics());
    diag->record("far_field_fraction", safe_ratio(far, total));
  }
  return u;
}

std::string RatioReport::label() const { return to_string(estimate) + " " + spec.label(); }

namespace {

RatioReport single_window(const std::vector<Member>& ensemble, Estimate estimate, const NormSpec& spec,
                          double T_prime, const ObservationGrid& grid) {
  check_target(estimate, spec);
  RatioReport r;
  r.estimate = estimate;
  r.spec = spec;
  r.ensemble_size = ensemble.size();
  r.T_primes = {T_prime};
  for (const Member& m : ensemble) {
    Diagnostics d;
    const Field2D u = observe(m.h, kind_of(estimate), T_prime, grid, &d);
    FieldNorms norms(u);
    const double num = norms.mixed(spec, homogeneous_numerator(estimate), T_prime);
    r.samples.push_back(make_sample(m, T_prime, "base", num, denominator(m.h, estimate, spec.s, T_prime)));
    for (const auto& w : d.warnings) r.diagnostics.warn("member " + std::to_string(m.index) + ": " + w);
  }
  summarize(r, T_prime);
  r.max_per_T_prime = {r.max_ratio};
  return r;
}

}  // namespace

RatioReport strichartz_ratio_dirichlet(const std::vector<Member>& ensemble, const NormSpec& spec, double T_prime,
                                       const ObservationGrid& grid) {
  return single_window(ensemble, Estimate::dirichlet, spec, T_prime, grid);
}

RatioReport strichartz_ratio_neumann(const std::vector<Member>& ensemble, const NormSpec& spec, double T_prime,
                                     bool homogeneous, const ObservationGrid& grid) {
  return single_window(ensemble, homogeneous ? Estimate::neumann_homogeneous : Estimate::neumann_inhomogeneous,
                       spec, T_prime, grid);
}

std::vector<RatioReport> stability_study(const std::vector<Target>& targets, const StudyConfig& config) {
  for (const Target& t : targets) check_target(t.estimate, t.spec);
  if (config.T_primes.empty()) throw ConfigError("stability study: no T' values");
  for (double T : config.T_primes) {
    if (!(T >= config.ensemble.support)) throw ConfigError("stability study: every T' must cover the signal support");
  }
  const double T0 = config.T_primes.front();
  const double T_max = *std::max_element(config.T_primes.begin(), config.T_primes.end());
  const std::size_t base = config.ensemble.size;
  const std::size_t enriched = std::max(config.enriched_size, base);

  std::vector<RatioReport> reports(targets.size());
  for (std::size_t j = 0; j < targets.size(); ++j) {
    reports[j].estimate = targets[j].estimate;
    reports[j].spec = targets[j].spec;
    reports[j].ensemble_size = base;
    reports[j].T_primes = config.T_primes;
  }

  double worst_far = 0.0, worst_unresolved = 0.0;
  std::size_t warnings = 0;
  auto measure = [&](const Member& m, BoundaryKind kind, double T_window, const ObservationGrid& grid,
                     const char* label, const std::vector<double>& windows) {
    Diagnostics d;
    const Field2D u = observe(m.h, kind, T_window, grid, &d);
    worst_far = std::max(worst_far, d.metrics["far_field_fraction"]);
    worst_unresolved = std::max(worst_unresolved, d.metrics["unresolved_fraction"]);
    warnings += d.warnings.size();
    FieldNorms norms(u);
    for (std::size_t j = 0; j < targets.size(); ++j) {
      if (kind_of(targets[j].estimate) != kind) continue;
      for (double T : windows) {
        const double num = norms.mixed(targets[j].spec, homogeneous_numerator(targets[j].estimate), T);
        const double den = denominator(m.h, targets[j].estimate, targets[j].spec.s, T);
        reports[j].samples.push_back(make_sample(m, T, label, num, den));
      }
    }
  };

  for (BoundaryKind kind : {BoundaryKind::dirichlet, BoundaryKind::neumann}) {
    if (std::none_of(targets.begin(), targets.end(), [&](const Target& t) { return kind_of(t.estimate) == kind; })) {
      continue;
    }
    for (std::size_t i = 0; i < enriched; ++i) {
      const Member m = make_member(config.ensemble, i);
      if (i < base) {
        measure(m, kind, T_max, config.grid, "base", config.T_primes);
        if (config.refine > 1) measure(m, kind, T0, config.grid.refined(config.refine), "refined", {T0});
      } else {
        measure(m, kind, T0, config.grid, "base", {T0});
      }
    }
  }

  for (RatioReport& r : reports) {
    summarize(r, T0, base);
    for (double T : config.T_primes) {
      r.max_per_T_prime.push_back(max_where(r, [&](const RatioSample& s) {
        return s.grid == "base" && s.T_prime == T && s.index < base;
      }));
    }
    if (enriched > base) {
      const double all = max_where(r, [&](const RatioSample& s) { return s.grid == "base" && s.T_prime == T0; });
      r.gates.push_back(make_gate("ensemble " + std::to_string(base) + "->" + std::to_string(enriched), r.max_ratio,
                                  all, config.drift_limit, true));
    }
    for (std::size_t k = 1; k < config.T_primes.size(); ++k) {
      r.gates.push_back(make_gate("window T'=" + fmt(T0) + "->" + fmt(config.T_primes[k]), r.max_ratio,
                                  r.max_per_T_prime[k], config.drift_limit, true));
    }
    if (config.refine > 1) {
      r.refined_max_ratio = max_where(r, [](const RatioSample& s) { return s.grid == "refined"; });
      r.refinement_delta = safe_ratio(std::abs(r.refined_max_ratio - r.max_ratio), r.max_ratio);
      r.gates.push_back(make_gate("grid x" + std::to_string(config.refine), r.max_ratio, r.refined_max_ratio,
                                  config.drift_limit, false));
    }
    r.bounded = std::all_of(r.gates.begin(), r.gates.end(), [](const Gate& g) { return g.passed; });
    r.diagnostics.record("far_field_fraction_max", worst_far);
    r.diagnostics.record("unresolved_fraction_max", worst_unresolved);
    r.diagnostics.record("solver_warnings", static_cast<double>(warnings));
    if (worst_far > 1e-2) {
      r.diagnostics.warn("up to " + fmt(worst_far) + " of the energy reached the far-field taper; widen the x-range");
    }
  }
  return reports;
}

std::string ratio_csv(const std::vector<RatioReport>& reports) {
  std::ostringstream out;
  out << "estimate,s,lambda,r,index,family,T_prime,grid,numerator,denominator,ratio\n";
  for (const auto& r : reports) {
    for (const auto& s : r.samples) {
      out << to_string(r.estimate) << ',' << fmt17(r.spec.s) << ',' << r.spec.lambda.to_string() << ','
          << r.spec.r.to_string() << ',' << s.index << ',' << to_string(s.family) << ',' << fmt17(s.T_prime) << ','
          << s.grid << ',' << fmt17(s.numerator) << ',' << fmt17(s.denominator) << ',' << fmt17(s.ratio) << '\n';
    }
  }
  return out.str();
}

std::string ratio_summary(const std::vector<RatioReport>& reports) {
  std::ostringstream out;
  for (const auto& r : reports) {
    out << r.label() << "\n";
    out << "  members " << r.ensemble_size << ", max ratio " << fmt(r.max_ratio) << ", median " << fmt(r.median_ratio)
        << "\n";
    for (std::size_t k = 0; k < r.T_primes.size() && k < r.max_per_T_prime.size(); ++k) {
      out << "  T'=" << fmt(r.T_primes[k]) << " max " << fmt(r.max_per_T_prime[k]) << "\n";
    }
    if (r.refined_max_ratio > 0.0) {
      out << "  refined max " << fmt(r.refined_max_ratio) << " (relative change " << fmt(r.refinement_delta) << ")\n";
    }
    for (const auto& g : r.gates) {
      out << "  gate " << g.name << ": " << fmt(g.reference) << " -> " << fmt(g.varied) << ", drift " << fmt(g.drift)
          << (g.passed ? " ok" : " TRIPPED") << "\n";
    }
    out << "  bounded: " << (r.bounded ? "yes" : "no") << "\n";
    for (const auto& w : r.diagnostics.warnings) out << "  warning: " << w << "\n";
  }
  return out.str();
}

std::vector<SpaceProfile> cauchy_profiles(const CauchyConfig& config) {
  std::vector<SpaceProfile> out;
  for (std::size_t i = 0; i < config.size; ++i) {
    Draw d(config.seed, kProfileStream, i);
    const double a = d.uniform(-3.0, 3.0);
    const double p = d.uniform(-4.0, 4.0);
    const double alpha = d.uniform(0.5, 2.0);
    std::function<cplx(double)> fn = [=](double x) {
      return std::exp(-alpha * (x - a) * (x - a)) * std::polar(1.0, p * x);
    };
    if (i % 2 == 1) {
      // A second packet with its own centre, width and momentum.
      const double b = d.uniform(-3.0, 3.0);
      const double q = d.uniform(-4.0, 4.0);
      const double beta = d.uniform(0.5, 2.0);
      fn = [=](double x) {
        return std::exp(-alpha * (x - a) * (x - a)) * std::polar(1.0, p * x) +
               0.5 * std::exp(-beta * (x - b) * (x - b)) * std::polar(1.0, q * x);
      };
    }
    out.push_back(SpaceProfile::sample(fn, config.x.start, config.x.step, config.x.count, Domain::full_line));
  }
  return out;
}

std::vector<Field2D> cauchy_forcings(const CauchyConfig& config) {
  std::vector<Field2D> out;
  for (std::size_t i = 0; i < config.size; ++i) {
    Draw d(config.seed, kForcingStream, i);
    const double a = d.uniform(-3.0, 3.0);
    const double p = d.uniform(-3.0, 3.0);
    const double alpha = d.uniform(0.5, 2.0);
    const double omega = d.uniform(-6.0, 6.0);
    Field2D f(config.x, config.t);
    for (std::size_t n = 0; n < config.t.count; ++n) {
      const cplx envelope = std::polar(1.0, omega * config.t[n]);
      for (std::size_t j = 0; j < config.x.count; ++j) {
        const double x = config.x[j];
        f(n, j) = envelope * std::exp(-alpha * (x - a) * (x - a)) * std::polar(1.0, p * x);
      }
    }
    out.push_back(std::move(f));
  }
  return out;
}

CauchyReport cauchy_checks(const std::vector<SpaceProfile>& initial, const std::vector<Field2D>& forcing,
                           const NormSpec& spec, const CauchyConfig& config) {
  if (!spec.admissible()) {
    throw DomainError("pair (" + spec.lambda.to_string() + ", " + spec.r.to_string() + ") is not admissible");
  }
  CauchyReport rep;
  rep.spec = spec;
  const double T = config.t.back();
  for (RatioReport* r : {&rep.free_evolution, &rep.duhamel}) {
    r->spec = spec;
    r->T_primes = {T};
  }
  rep.free_evolution.ensemble_size = initial.size();
  rep.duhamel.ensemble_size = forcing.size();

  for (std::size_t i = 0; i < initial.size(); ++i) {
    const SpaceProfile& y0 = initial[i];
    cauchy::EvolutionOptions opt;
    opt.padding = config.padding;
    opt.x_out = y0.grid();
    Diagnostics d;
    const Field2D v = cauchy::free_evolution(y0, config.t, opt, &d);
    for (double s : config.conservation_s) {
      const spectral::SliceNorm hs(v.x, Domain::full_line, s, 2.0, false);
      const double n0 = hs(y0.samples);
      if (n0 == 0.0) continue;
      for (std::size_t n = 0; n < v.t.count; ++n) {
        rep.conservation_error = std::max(rep.conservation_error, std::abs(hs(v.slice(n)) / n0 - 1.0));
      }
    }
    const double num = spectral::mixed_norm(v, spec, 0.0, T, Domain::full_line);
    Member m;
    m.index = i;
    rep.free_evolution.samples.push_back(make_sample(m, T, "base", num, spectral::sobolev_norm(y0, spec.s)));
    for (const auto& w : d.warnings) rep.free_evolution.diagnostics.warn("profile " + std::to_string(i) + ": " + w);
  }
  for (std::size_t i = 0; i < forcing.size(); ++i) {
    const Field2D& f = forcing[i];
    cauchy::EvolutionOptions opt;
    opt.padding = config.padding;
    opt.x_out = f.x;
    Diagnostics d;
    const Field2D z = cauchy::duhamel(f, opt, &d);
    const double Tf = f.t.back();
    const double num = spectral::mixed_norm(z, spec, 0.0, Tf, Domain::full_line);
    const double den = spectral::mixed_norm(f, spec.s, spec.lambda.conjugate().value(), spec.r.conjugate().value(), 0.0,
                                            Tf, Domain::full_line);
    Member m;
    m.index = i;
    rep.duhamel.samples.push_back(make_sample(m, Tf, "base", num, den));
    for (const auto& w : d.warnings) rep.duhamel.diagnostics.warn("forcing " + std::to_string(i) + ": " + w);
  }
  summarize(rep.free_evolution, T);
  if (!forcing.empty()) summarize(rep.duhamel, forcing.front().t.back());
  rep.free_evolution.diagnostics.record("conservation_error", rep.conservation_error);
  return rep;
}

std::vector<double> probe_time_norms(const TimeSignal& h, double s, const TraceConfig& config) {
  if (config.probes.empty()) throw ConfigError("trace check: no probe positions");
  if (h.support_end > config.T_prime + 1e-12) throw DomainError("trace check: supp h must lie in [0, T')");
  const double x_max = *std::max_element(config.probes.begin(), config.probes.end());
  const utm::UtmEvaluator ev(h, BoundaryKind::dirichlet, x_max, config.T_prime, config.utm);
  const UniformGrid t{0.0, h.dt, nodes_on(config.T_prime, h.dt)};
  std::vector<double> out;
  for (double x : config.probes) {
    if (x < 0.0) throw DomainError("trace check: probes must lie in x >= 0");
    const UniformGrid xp{x, 1.0, 1};
    Field2D u = ev.u1(xp, t);
    u += ev.u2(xp, t);
    std::vector<cplx> series(u.values.begin(), u.values.end());
    out.push_back(spectral::sobolev_norm(continue_past_window(series, t.step), (2.0 * s + 1.0) / 4.0));
  }
  return out;
}

RatioReport trace_regularity_check(const std::vector<Member>& ensemble, double s, const TraceConfig& config) {
  if (!(s > 0.5)) throw DomainError("the time-trace estimate needs s > 1/2");
  if (!(s < 2.5)) throw DomainError("the time continuation supports s < 5/2 only");
  RatioReport r;
  r.estimate = Estimate::dirichlet;
  r.spec.s = s;
  r.ensemble_size = ensemble.size();
  r.T_primes = {config.T_prime};
  for (const Member& m : ensemble) {
    const auto norms = probe_time_norms(m.h, s, config);
    const double num = *std::max_element(norms.begin(), norms.end());
    r.samples.push_back(make_sample(m, config.T_prime, "base", num, spectral::sobolev_norm(m.h, (2.0 * s + 1.0) / 4.0)));
  }
  summarize(r, config.T_prime);
  r.max_per_T_prime = {r.max_ratio};
  return r;
}

TransferReport norm_transfer(const std::vector<Member>& ensemble, Estimate estimate, double s,
                             const std::vector<double>& T_primes) {
  if (T_primes.empty()) throw ConfigError("norm transfer: no T' values");
  if (s < 0.0) throw DomainError("norm transfer: s must be non-negative");
  if (estimate == Estimate::neumann_inhomogeneous && s < 0.5) {
    throw DomainError("the inhomogeneous Neumann path needs s >= 1/2");
  }
  TransferReport rep;
  rep.estimate = estimate;
  rep.s = s;
  const BoundaryKind kind = kind_of(estimate);
  const bool per_window = estimate == Estimate::neumann_inhomogeneous;
  const std::vector<double> windows = per_window ? T_primes : std::vector<double>{T_primes.front()};
  rep.T_primes = windows;
  for (double T : windows) {
    double raw = 0.0, anti = 0.0;
    for (const Member& m : ensemble) {
      TransferSample t;
      t.index = m.index;
      t.family = m.family;
      t.T_prime = T;
      if (estimate == Estimate::neumann_inhomogeneous) {
        const auto ext = extension::mean_zero_extension(m.h, T, s);
        const TimeSignal H = extension::antiderivative(ext.he);
        const utm::BoundarySpectrum spec(ext.he);
        t.h_norm = spectral::sobolev_norm(m.h, (2.0 * s - 1.0) / 4.0);
        t.H1_norm = utm::H_norm(spec, kind, 1, s, false);
        t.H2_norm = utm::H_norm(spec, kind, 2, s, false);
        t.antiderivative_norm = spectral::sobolev_norm(H, (2.0 * s + 3.0) / 4.0);
        t.antiderivative_ratio = safe_ratio(t.antiderivative_norm, t.h_norm);
      } else {
        const utm::BoundarySpectrum spec(m.h);
        const bool hom = estimate == Estimate::neumann_homogeneous;
        t.h_norm = hom ? spectral::homogeneous_sobolev_norm(m.h, (2.0 * s - 1.0) / 4.0).value
                       : spectral::sobolev_norm(m.h, (2.0 * s + 1.0) / 4.0);
        t.H1_norm = utm::H_norm(spec, kind, 1, s, hom);
        t.H2_norm = utm::H_norm(spec, kind, 2, s, hom);
      }
      t.ratio1 = safe_ratio(t.H1_norm, t.h_norm);
      t.ratio2 = safe_ratio(t.H2_norm, t.h_norm);
      rep.max_ratio1 = std::max(rep.max_ratio1, t.ratio1);
      rep.max_ratio2 = std::max(rep.max_ratio2, t.ratio2);
      raw = std::max({raw, t.ratio1, t.ratio2});
      anti = std::max(anti, t.antiderivative_ratio);
      rep.samples.push_back(t);
    }
    rep.max_ratio_per_T_prime.push_back(raw);
    rep.antiderivative_max_per_T_prime.push_back(anti);
    rep.normalized_max_per_T_prime.push_back(anti / (1.0 + T));
  }
  return rep;
}

DispersiveReport dispersive_check(const std::vector<Member>& ensemble, BoundaryKind kind,
                                  const DispersiveConfig& config) {
  if (!(config.t_min > 0.0) || !(config.t_max > config.t_min) || config.t_points < 2) {
    throw ConfigError("dispersive check: need 0 < t_min < t_max and at least two times");
  }
  DispersiveReport rep;
  rep.kind = kind;
  for (std::size_t j = 0; j < config.t_points; ++j) {
    const double u = static_cast<double>(j) / static_cast<double>(config.t_points - 1);
    rep.t_values.push_back(config.t_min * std::pow(config.t_max / config.t_min, u));
  }
  const UniformGrid x{0.0, config.dx, nodes_on(config.x_max, config.dx)};
  for (const Member& m : ensemble) {
    const utm::UtmEvaluator ev(m.h, kind, x.back(), config.t_max, config.utm, config.dx);
    DispersiveSample ds;
    ds.index = m.index;
    ds.family = m.family;
    double dtau = 0.0;
    const double K = std::max(ev.k_max_u1(), 1.0);
    const auto H1t = H1_in_time(ev.spectrum(), kind, K, 400.0, dtau);
    ds.H1_l1 = time_lp_of(H1t, dtau, 1.0);
    std::vector<double> dual;
    for (double r : config.lr) dual.push_back(time_lp_of(H1t, dtau, r / (r - 1.0)));
    ds.lr_constants.assign(config.lr.size(), 0.0);
    for (double t : rep.t_values) {
      const Field2D u1 = ev.u1(x, UniformGrid{t, 1.0, 1});
      const double sup = spectral::lp_norm(u1.values, x.step, std::numeric_limits<double>::infinity());
      ds.scaled.push_back(std::sqrt(t) * safe_ratio(sup, ds.H1_l1));
      for (std::size_t q = 0; q < config.lr.size(); ++q) {
        const double r = config.lr[q];
        const double c = std::pow(t, 0.5 - 1.0 / r) * safe_ratio(spectral::lp_norm(u1.values, x.step, r), dual[q]);
        ds.lr_constants[q] = std::max(ds.lr_constants[q], c);
      }
    }
    ds.max_over_t = *std::max_element(ds.scaled.begin(), ds.scaled.end());
    ds.median_over_t = median(ds.scaled);
    ds.spread = safe_ratio(ds.max_over_t, ds.median_over_t);
    rep.sup_constant = std::max(rep.sup_constant, ds.max_over_t);
    rep.worst_spread = std::max(rep.worst_spread, ds.spread);
    rep.samples.push_back(std::move(ds));
  }
  return rep;
}

}  // namespace halfline::verify
