#include "halfline/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "halfline/errors.hpp"
#include "halfline/field_io.hpp"
#include "halfline/utm_boundary.hpp"

namespace halfline::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr double kBoundaryStep = 1e-3;
constexpr double kWindowFactor = 1.25;  // reunify solves on [0, 1.25 T]

std::string g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json grid_json(const UniformGrid& g) { return {{"start", g.start}, {"step", g.step}, {"count", g.count}}; }

json manifest_base(const RunConfig& config) {
  json m;
  m["program"] = "halfline";
  m["manifest_version"] = 1;
  m["command"] = config.command;
  m["config"] = json::parse(serialize(config));
  return m;
}

void write_manifest(const fs::path& dir, const json& manifest) {
  io::write_text(dir / "manifest.json", manifest.dump(2) + "\n");
}

utm::UtmOptions utm_options(const RunConfig& c) {
  utm::UtmOptions o;
  o.tail_tolerance = c.tail_tolerance;
  o.k_max = c.k_max;
  o.quadrature_order = c.quadrature_order;
  return o;
}

/// Boundary datum: a CSV file or a seeded named profile on [0, 0.95 T).
TimeSignal boundary_datum(const RunConfig& c) {
  if (!c.boundary_csv.empty()) return io::read_signal_csv(c.boundary_csv);
  const std::size_t n = static_cast<std::size_t>(std::ceil(c.T / kBoundaryStep - 1e-9)) + 1;
  if (c.profile == "zero") return TimeSignal::sample([](double) { return cplx{}; }, 0.0, kBoundaryStep, n, 0.0);
  verify::EnsembleConfig e;
  e.seed = c.seed;
  e.support = 0.95 * c.T;
  e.dt = kBoundaryStep;
  e.families = {c.profile == "bump"    ? verify::Family::bump
                : c.profile == "chirp" ? verify::Family::chirp
                                       : verify::Family::noise};
  return verify::make_member(e, c.member).h;
}

cplx boundary_at(const TimeSignal& g, double t) {
  const long i = std::lround((t - g.t0) / g.dt);
  if (i < 0) return g.samples.front();
  if (static_cast<std::size_t>(i) >= g.size()) return g.samples.back();
  return g.samples[static_cast<std::size_t>(i)];
}

/// u_x(0, t) from five one-sided points.
cplx edge_derivative(const Field2D& u, std::size_t n) {
  return (-25.0 * u(n, 0) + 48.0 * u(n, 1) - 36.0 * u(n, 2) + 16.0 * u(n, 3) - 3.0 * u(n, 4)) / (12.0 * u.x.step);
}

std::string trace_csv(const UniformGrid& t, const std::vector<cplx>& datum, const std::vector<cplx>& trace) {
  std::string out = "t,datum_re,datum_im,trace_re,trace_im\n";
  for (std::size_t n = 0; n < t.count; ++n) {
    out += g17(t[n]) + ',' + g17(datum[n].real()) + ',' + g17(datum[n].imag()) + ',' + g17(trace[n].real()) + ',' +
           g17(trace[n].imag()) + '\n';
  }
  return out;
}

double relative_l2(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += std::norm(a[i] - b[i]);
    den += std::norm(b[i]);
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

json metrics_json(const Diagnostics& d) {
  json m = json::object();
  for (const auto& [k, v] : d.metrics) m[k] = std::isfinite(v) ? json(v) : json(g17(v));
  return m;
}

}  // namespace

fs::path output_dir(const RunConfig& config) {
  if (!config.output_dir.empty()) return config.output_dir;
  if (const char* env = std::getenv(kOutDirVariable); env != nullptr && *env != '\0') return env;
  return "halfline-out";
}

int cmd_solve(const RunConfig& c, std::ostream& log) {
  validate(c);
  const utm::BoundaryKind kind = utm::parse_kind(c.kind);
  const bool reunify = c.reunify || c.command == "reunify";
  const TimeSignal g = boundary_datum(c);
  if (!reunify && g.support_end > c.T + 1e-12) {
    throw ConfigError("the boundary datum must vanish from t = T on; use reunify for longer data");
  }
  const UniformGrid x = UniformGrid::covering(0.0, c.x_max, c.dx);
  const UniformGrid t = UniformGrid::covering(0.0, c.T, c.dt);
  const fs::path dir = output_dir(c);
  fs::create_directories(dir);

  json m = manifest_base(c);
  Field2D field;
  std::vector<cplx> datum(t.count), trace(t.count);
  Diagnostics diag;
  const auto opt = utm_options(c);
  if (!reunify) {
    const utm::UtmEvaluator ev(g, kind, x.back(), t.back(), opt, x.step);
    field = ev.u1(x, t);
    field += ev.u2(x, t);
    diag = ev.diagnostics();
    for (std::size_t n = 0; n < t.count; ++n) {
      datum[n] = boundary_at(g, t[n]);
      trace[n] = kind == utm::BoundaryKind::dirichlet ? field(n, 0) : ev.u1_x_at(0.0, t[n]) + ev.u2_x_at(0.0, t[n]);
    }
    m["T_prime"] = c.T;
  } else {
    // Initial datum and forcing live on a half line long enough to hold
    // everything that moves during [0, T'].
    const double L = std::max(40.0, 4.0 * c.x_max);
    const UniformGrid xl = UniformGrid::covering(0.0, L, c.dx);
    SpaceProfile y0;
    if (!c.initial_csv.empty()) {
      y0 = io::read_profile_csv(c.initial_csv, Domain::half_line);
    } else {
      const bool gauss = c.initial == "gaussian";
      y0 = SpaceProfile::sample(
          [gauss](double xx) { return gauss ? std::exp(-0.5 * (xx - 4.0) * (xx - 4.0)) * std::polar(1.0, -xx) : cplx{}; },
          0.0, xl.step, xl.count, Domain::half_line);
    }
    const double T_prime = kWindowFactor * c.T;
    const long sub = std::max(1L, std::lround(c.dt / kBoundaryStep));
    const double dt_f = c.dt / static_cast<double>(sub);
    Field2D f;
    if (c.forcing == "gaussian") {
      f = Field2D(xl, {0.0, dt_f, static_cast<std::size_t>(std::ceil(T_prime / dt_f - 1e-9)) + 1});
      for (std::size_t n = 0; n < f.t.count; ++n) {
        for (std::size_t i = 0; i < xl.count; ++i) {
          const double d = xl[i] - 3.0;
          f(n, i) = std::exp(-d * d) * std::sin(2.0 * f.t[n]);
        }
      }
    }
    utm::ReunifyGrids rg;
    rg.x = x;
    rg.t = t;
    rg.T = c.T;
    rg.dt_boundary = dt_f;
    const utm::ReunifyResult r = utm::reunify_solve(y0, f, g, kind, rg, opt);
    field = r.y;
    diag = r.diagnostics;
    for (std::size_t n = 0; n < t.count; ++n) {
      datum[n] = boundary_at(g, t[n]);
      trace[n] = kind == utm::BoundaryKind::dirichlet ? field(n, 0) : edge_derivative(field, n);
    }
    m["T_prime"] = r.T_prime;
    io::write_text(dir / "initial.csv", io::profile_csv(y0));
  }

  io::write_field_binary(field, dir / "field.bin");
  if (c.write_csv) io::write_text(dir / "field.csv", io::field_csv(field));
  io::write_text(dir / "boundary.csv", io::signal_csv(g));
  io::write_text(dir / "trace.csv", trace_csv(t, datum, trace));
  io::write_text(dir / "config.json", serialize(c));

  const std::string checksum = io::to_hex(io::field_checksum(field));
  m["x_grid"] = grid_json(x);
  m["t_grid"] = grid_json(t);
  m["boundary"] = {{"samples", g.size()}, {"dt", g.dt}, {"support_end", g.support_end}};
  m["trace_relative_l2"] = relative_l2(trace, datum);
  m["metrics"] = metrics_json(diag);
  m["warnings"] = diag.warnings;
  m["outputs"] = {{"field.bin", {{"checksum", checksum}}}};
  write_manifest(dir, m);

  log << (reunify ? "reunify " : "solve ") << c.kind << ": " << x.count << " x " << t.count
      << " field, checksum " << checksum << ", trace mismatch " << g17(relative_l2(trace, datum)) << "\n";
  for (const auto& w : diag.warnings) log << "warning: " << w << "\n";
  log << "wrote " << dir.string() << "\n";
  return kExitOk;
}

int cmd_verify(const RunConfig& c, std::ostream& log) {
  validate(c);
  const auto targets = study_targets(c);
  const auto checks = active_checks(c);
  auto has = [&](const char* name) { return std::find(checks.begin(), checks.end(), name) != checks.end(); };
  const fs::path dir = output_dir(c);
  fs::create_directories(dir);
  const verify::StudyConfig study = study_config(c);

  json m = manifest_base(c);
  std::ostringstream summary;
  bool tripped = false;

  const auto reports = verify::stability_study(targets, study);
  io::write_text(dir / "ratios.csv", verify::ratio_csv(reports));
  json rj = json::array();
  for (const auto& r : reports) {
    tripped = tripped || !r.bounded;
    json gates = json::array();
    for (const auto& gt : r.gates) {
      gates.push_back({{"name", gt.name}, {"drift", gt.drift}, {"limit", gt.limit}, {"passed", gt.passed}});
    }
    rj.push_back({{"target", r.label()},
                  {"max_ratio", r.max_ratio},
                  {"median_ratio", r.median_ratio},
                  {"bounded", r.bounded},
                  {"gates", gates},
                  {"metrics", metrics_json(r.diagnostics)},
                  {"warnings", r.diagnostics.warnings}});
  }
  m["reports"] = rj;
  summary << (targets.empty() ? "no study targets\n" : verify::ratio_summary(reports));

  if (has("cauchy")) {
    verify::CauchyConfig cc;
    cc.seed = c.seed;
    cc.size = c.cauchy_size;
    const auto profiles = verify::cauchy_profiles(cc);
    const auto forcings = verify::cauchy_forcings(cc);
    std::string csv = "check,s,lambda,r,index,numerator,denominator,ratio\n";
    json cj = json::array();
    for (const auto& spec : cauchy_specs(c)) {
      const auto rep = verify::cauchy_checks(profiles, forcings, spec, cc);
      for (const auto* r : {&rep.free_evolution, &rep.duhamel}) {
        const char* name = r == &rep.free_evolution ? "free" : "duhamel";
        for (const auto& s : r->samples) {
          csv += std::string(name) + ',' + g17(spec.s) + ',' + spec.lambda.to_string() + ',' + spec.r.to_string() +
                 ',' + std::to_string(s.index) + ',' + g17(s.numerator) + ',' + g17(s.denominator) + ',' +
                 g17(s.ratio) + '\n';
        }
      }
      summary << "whole line " << spec.label() << ": conservation error " << g17(rep.conservation_error)
              << ", free max ratio " << g17(rep.free_evolution.max_ratio) << ", Duhamel max ratio "
              << g17(rep.duhamel.max_ratio) << "\n";
      cj.push_back({{"spec", spec.label()},
                    {"conservation_error", rep.conservation_error},
                    {"free_max_ratio", rep.free_evolution.max_ratio},
                    {"duhamel_max_ratio", rep.duhamel.max_ratio}});
    }
    io::write_text(dir / "cauchy.csv", csv);
    m["cauchy"] = cj;
  }

  if (has("trace")) {
    verify::EnsembleConfig e = study.ensemble;
    const auto ens = verify::make_ensemble(e);
    std::string csv = "s,index,family,numerator,denominator,ratio\n";
    json tj = json::array();
    for (double s : c.trace_s) {
      verify::TraceConfig tc;
      tc.utm = study.grid.utm;
      const auto r = verify::trace_regularity_check(ens, s, tc);
      for (const auto& sm : r.samples) {
        csv += g17(s) + ',' + std::to_string(sm.index) + ',' + verify::to_string(sm.family) + ',' +
               g17(sm.numerator) + ',' + g17(sm.denominator) + ',' + g17(sm.ratio) + '\n';
      }
      summary << "time regularity s=" << g17(s) << ": max ratio " << g17(r.max_ratio) << ", median "
              << g17(r.median_ratio) << "\n";
      tj.push_back({{"s", s}, {"max_ratio", r.max_ratio}, {"median_ratio", r.median_ratio}});
    }
    io::write_text(dir / "trace.csv", csv);
    m["trace"] = tj;
  }

  if (has("transfer")) {
    verify::EnsembleConfig base = study.ensemble;
    verify::EnsembleConfig enriched = base;
    enriched.size = c.enriched_size;
    const auto ens = verify::make_ensemble(base);
    const auto big = verify::make_ensemble(enriched);
    std::string csv =
        "estimate,s,ensemble,index,family,T_prime,h_norm,H1_norm,H2_norm,antiderivative_norm,ratio1,ratio2,"
        "antiderivative_ratio\n";
    json xj = json::array();
    for (const auto& [est, s] : transfer_runs(c)) {
      const bool inhom = est == verify::Estimate::neumann_inhomogeneous;
      const auto a = verify::norm_transfer(ens, est, s, inhom ? c.T_primes : std::vector<double>{c.T_primes.front()});
      const auto b = verify::norm_transfer(big, est, s, {c.T_primes.front()});
      for (const auto* r : {&a, &b}) {
        const std::string which = r == &a ? "base" : "enriched";
        for (const auto& t : r->samples) {
          csv += verify::to_string(est) + ',' + g17(s) + ',' + which + ',' + std::to_string(t.index) + ',' +
                 verify::to_string(t.family) + ',' + g17(t.T_prime) + ',' + g17(t.h_norm) + ',' + g17(t.H1_norm) +
                 ',' + g17(t.H2_norm) + ',' + g17(t.antiderivative_norm) + ',' + g17(t.ratio1) + ',' +
                 g17(t.ratio2) + ',' + g17(t.antiderivative_ratio) + '\n';
        }
      }
      summary << "transfer " << verify::to_string(est) << " s=" << g17(s) << ": max |H1|/|h| " << g17(a.max_ratio1)
              << " -> " << g17(b.max_ratio1) << ", max |H2|/|h| " << g17(a.max_ratio2) << " -> " << g17(b.max_ratio2)
              << " (" << ens.size() << " -> " << big.size() << " members)\n";
      json entry = {{"estimate", verify::to_string(est)},
                    {"s", s},
                    {"max_ratio1", a.max_ratio1},
                    {"max_ratio2", a.max_ratio2},
                    {"enriched_max_ratio1", b.max_ratio1},
                    {"enriched_max_ratio2", b.max_ratio2}};
      if (inhom) {
        for (std::size_t k = 0; k < a.T_primes.size(); ++k) {
          summary << "  T'=" << g17(a.T_primes[k]) << ": |int h_e|/|h| " << g17(a.antiderivative_max_per_T_prime[k])
                  << ", divided by (1+T') " << g17(a.normalized_max_per_T_prime[k]) << "\n";
        }
        entry["T_primes"] = a.T_primes;
        entry["antiderivative_max"] = a.antiderivative_max_per_T_prime;
        entry["normalized_max"] = a.normalized_max_per_T_prime;
      }
      xj.push_back(entry);
    }
    io::write_text(dir / "transfer.csv", csv);
    m["transfer"] = xj;
  }

  if (has("dispersive")) {
    verify::EnsembleConfig e = study.ensemble;
    e.size = c.dispersive_size;
    const auto ens = verify::make_ensemble(e);
    std::string csv = "kind,index,family,t,scaled\n";
    json dj = json::array();
    for (auto kind : {utm::BoundaryKind::dirichlet, utm::BoundaryKind::neumann}) {
      verify::DispersiveConfig dc;
      dc.utm = study.grid.utm;
      const auto r = verify::dispersive_check(ens, kind, dc);
      for (const auto& s : r.samples) {
        for (std::size_t k = 0; k < r.t_values.size(); ++k) {
          csv += utm::to_string(kind) + ',' + std::to_string(s.index) + ',' + verify::to_string(s.family) + ',' +
                 g17(r.t_values[k]) + ',' + g17(s.scaled[k]) + '\n';
        }
      }
      summary << "dispersive " << utm::to_string(kind) << ": sup constant " << g17(r.sup_constant)
              << ", worst max/median over t " << g17(r.worst_spread) << "\n";
      dj.push_back({{"kind", utm::to_string(kind)}, {"sup_constant", r.sup_constant}, {"worst_spread", r.worst_spread}});
    }
    io::write_text(dir / "dispersive.csv", csv);
    m["dispersive"] = dj;
  }

  m["tripped"] = tripped;
  io::write_text(dir / "summary.txt", summary.str());
  io::write_text(dir / "config.json", serialize(c));
  write_manifest(dir, m);
  log << summary.str();
  log << (tripped ? "a stability gate tripped\n" : "all stability gates passed\n");
  log << "wrote " << dir.string() << "\n";
  return tripped ? kExitTripped : kExitOk;
}

int cmd_kernel_scan(const RunConfig& c, std::ostream& log) {
  validate(c);
  const fs::path dir = output_dir(c);
  fs::create_directories(dir);
  const auto reports = kernel::decay_scan(scan_config(c));
  io::write_text(dir / "scan.csv", kernel::scan_csv(reports));
  std::string csv = "kernel,sup,sup_refined,refinement_ratio,sup_b_doubled,b_ratio,argmax_tau,argmax_x,argmax_t,argmax_b\n";
  json m = manifest_base(c);
  json rj = json::array();
  for (const auto& r : reports) {
    csv += kernel::to_string(r.kernel) + ',' + g17(r.sup) + ',' + g17(r.sup_refined) + ',' + g17(r.refinement_ratio) +
           ',' + g17(r.sup_b_doubled) + ',' + g17(r.b_ratio) + ',' + g17(r.argmax.tau) + ',' + g17(r.argmax.x) + ',' +
           g17(r.argmax.t) + ',' + g17(r.argmax.b) + '\n';
    log << kernel::to_string(r.kernel) << ": sup " << g17(r.sup) << ", refined x" << c.refine << " ratio "
        << g17(r.refinement_ratio) << ", b doubled ratio " << g17(r.b_ratio) << "\n";
    rj.push_back({{"kernel", kernel::to_string(r.kernel)},
                  {"sup", r.sup},
                  {"refinement_ratio", r.refinement_ratio},
                  {"b_ratio", r.b_ratio},
                  {"evaluations", r.evaluations}});
  }
  io::write_text(dir / "decay.csv", csv);
  io::write_text(dir / "config.json", serialize(c));
  m["reports"] = rj;
  write_manifest(dir, m);
  log << "wrote " << dir.string() << "\n";
  return kExitOk;
}

namespace {

// Options write into a scratch config; only the ones actually given are
// copied over the --config file, so flags override file values.
class Binder {
 public:
  template <class T>
  void option(CLI::App* app, const std::string& name, T RunConfig::*field, const std::string& help) {
    CLI::Option* o = app->add_option(name, flags_.*field, help)->capture_default_str();
    if constexpr (requires { typename T::value_type; } && !std::is_same_v<T, std::string>) o->delimiter(',');
    copies_.emplace_back(o, [this, field](RunConfig& dst) { dst.*field = flags_.*field; });
  }
  void flag(CLI::App* app, const std::string& name, bool RunConfig::*field, const std::string& help) {
    CLI::Option* o = app->add_flag(name, flags_.*field, help);
    copies_.emplace_back(o, [this, field](RunConfig& dst) { dst.*field = flags_.*field; });
  }
  RunConfig merge(RunConfig base) const {
    for (const auto& [o, copy] : copies_) {
      if (o->count() > 0) copy(base);
    }
    return base;
  }

 private:
  RunConfig flags_;
  std::vector<std::pair<CLI::Option*, std::function<void(RunConfig&)>>> copies_;
};

void solve_options(Binder& b, CLI::App* app) {
  b.option(app, "--kind", &RunConfig::kind, "dirichlet or neumann");
  b.option(app, "--profile", &RunConfig::profile, "boundary datum: zero, bump, chirp or noise");
  b.option(app, "--member", &RunConfig::member, "index of the seeded signal");
  b.option(app, "--boundary-csv", &RunConfig::boundary_csv, "boundary datum as t,re,im");
  b.option(app, "--T", &RunConfig::T, "data horizon");
  b.option(app, "--initial", &RunConfig::initial, "reunify initial datum: zero or gaussian");
  b.option(app, "--initial-csv", &RunConfig::initial_csv, "reunify initial datum as x,re,im");
  b.option(app, "--forcing", &RunConfig::forcing, "reunify forcing: zero or gaussian");
  b.option(app, "--x-max", &RunConfig::x_max, "output x range [0, x_max]");
  b.option(app, "--dx", &RunConfig::dx, "output x step");
  b.option(app, "--dt", &RunConfig::dt, "output t step");
  b.flag(app, "--no-csv{false}", &RunConfig::write_csv, "skip field.csv (field.bin is always written)");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Half-line linear Schroedinger solver and estimate verifier", "halfline"};
  app.require_subcommand(1);
  Binder b;
  std::string config_path;
  bool print_config = false;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON run configuration; flags override its values");
    sub->add_flag("--print-config", print_config, "print the merged configuration and exit");
    b.option(sub, "-o,--output", &RunConfig::output_dir, "output directory (default $HALFLINE_OUT_DIR)");
    b.option(sub, "--seed", &RunConfig::seed, "ensemble seed");
    b.option(sub, "--tail-tolerance", &RunConfig::tail_tolerance, "neglected spectral tail fraction");
    b.option(sub, "--k-max", &RunConfig::k_max, "wavenumber cut-off (0: from the tail tolerance)");
    b.option(sub, "--quadrature-order", &RunConfig::quadrature_order, "Gauss-Legendre order per panel");
  };

  CLI::App* solve = app.add_subcommand("solve", "boundary-forced solve (or the full problem with --reunify)");
  CLI::App* reunify = app.add_subcommand("reunify", "full problem with initial datum, forcing and boundary datum");
  CLI::App* verify_cmd = app.add_subcommand("verify", "ensemble ratio studies and checks");
  CLI::App* scan = app.add_subcommand("kernel-scan", "uniform decay scans of the oscillatory kernels");
  for (CLI::App* sub : {solve, reunify, verify_cmd, scan}) common(sub);
  solve_options(b, solve);
  b.flag(solve, "--reunify", &RunConfig::reunify, "solve the full problem on [0, 1.25 T]");
  solve_options(b, reunify);

  b.option(verify_cmd, "--suite", &RunConfig::suite, "default: the full seeded suite");
  b.option(verify_cmd, "--estimate", &RunConfig::estimates,
           "dirichlet, neumann-homogeneous, neumann-inhomogeneous (comma list)");
  b.option(verify_cmd, "--pairs", &RunConfig::pairs, "admissible pairs lambda:r (comma list)");
  b.option(verify_cmd, "--s", &RunConfig::s_values, "Sobolev indices (comma list)");
  b.option(verify_cmd, "--checks", &RunConfig::checks, "cauchy, trace, transfer, dispersive (comma list)");
  b.option(verify_cmd, "--trace-s", &RunConfig::trace_s, "indices for the time-regularity check");
  b.option(verify_cmd, "--ensemble", &RunConfig::ensemble_size, "base ensemble size");
  b.option(verify_cmd, "--enriched", &RunConfig::enriched_size, "enriched ensemble size");
  b.option(verify_cmd, "--T-primes", &RunConfig::T_primes, "observation windows (comma list)");
  b.option(verify_cmd, "--refine", &RunConfig::refine, "grid refinement factor of the grid gate");
  b.option(verify_cmd, "--drift-limit", &RunConfig::drift_limit, "largest allowed max-ratio drift");
  b.option(verify_cmd, "--obs-dx", &RunConfig::obs_dx, "observation x step");
  b.option(verify_cmd, "--obs-dt", &RunConfig::obs_dt, "observation t step");
  b.option(verify_cmd, "--obs-speed", &RunConfig::obs_speed, "x range growth per unit T'");
  b.option(verify_cmd, "--cauchy-size", &RunConfig::cauchy_size, "whole-line ensemble size");
  b.option(verify_cmd, "--dispersive-size", &RunConfig::dispersive_size, "dispersive-check ensemble size");

  b.option(scan, "--kernel", &RunConfig::kernels, "fresnel, ell, double (comma list)");
  b.option(scan, "--refine", &RunConfig::refine, "refinement factor for every scan grid");
  b.option(scan, "--tau-points", &RunConfig::tau_points, "tau grid size");
  b.option(scan, "--t-points", &RunConfig::t_points, "t grid size");
  b.option(scan, "--b", &RunConfig::b_values, "truncation points b (comma list)");
  b.option(scan, "--x", &RunConfig::x_values, "x values (comma list)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitConfig;
  }

  RunConfig config;
  try {
    RunConfig base;
    if (!config_path.empty()) base = parse_config(io::read_text(config_path));
    RunConfig c = b.merge(base);
    CLI::App* chosen = app.get_subcommands().front();
    c.command = chosen->get_name();
    if (c.command == "reunify") c.reunify = true;
    validate(c);
    config = c;
  } catch (const Error& e) {
    err << "halfline: configuration error: " << e.what() << "\n";
    return kExitConfig;
  }
  if (print_config) {
    out << serialize(config);
    return kExitOk;
  }
  try {
    if (config.command == "verify") return cmd_verify(config, out);
    if (config.command == "kernel-scan") return cmd_kernel_scan(config, out);
    return cmd_solve(config, out);
  } catch (const ConfigError& e) {
    err << "halfline: configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "halfline: " << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace halfline::cli
