#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "halfline/errors.hpp"
#include "halfline/estimate_verifier.hpp"
#include "halfline/special.hpp"
#include "halfline/spectral_core.hpp"

using namespace halfline;
using namespace halfline::verify;

namespace {

NormSpec pair(double s, const char* lambda, const char* r) {
  NormSpec n;
  n.s = s;
  n.lambda = Exponent::parse(lambda);
  n.r = Exponent::parse(r);
  return n;
}

std::vector<Member> first_members(std::size_t n) {
  EnsembleConfig c;
  c.size = n;
  return make_ensemble(c);
}

Member trivial_bump() {
  Member m;
  m.h = TimeSignal::sample([](double t) { return cplx(special::mollifier((t - 0.45) / 0.35)); }, 0.0, 1e-3, 951, 0.95);
  return m;
}

}  // namespace

TEST_CASE("estimates refuse targets they do not cover") {
  CHECK_THROWS_AS(check_target(Estimate::dirichlet, pair(0.0, "4", "4")), DomainError);
  CHECK_THROWS_AS(check_target(Estimate::neumann_homogeneous, pair(-0.5, "inf", "2")), DomainError);
  CHECK_THROWS_AS(check_target(Estimate::neumann_inhomogeneous, pair(0.25, "8", "4")), DomainError);
  CHECK_NOTHROW(check_target(Estimate::neumann_inhomogeneous, pair(0.5, "8", "4")));
  CHECK_THROWS_AS(strichartz_ratio_dirichlet(first_members(1), pair(0.0, "2", "2"), 1.0), DomainError);
  CHECK_THROWS_AS(strichartz_ratio_neumann(first_members(1), pair(0.0, "inf", "2"), 1.0, false), DomainError);
  CHECK(parse_estimate("neumann-homogeneous") == Estimate::neumann_homogeneous);
  CHECK_THROWS_AS(parse_estimate("schroedinger"), ConfigError);
}

TEST_CASE("a larger ensemble extends a smaller one") {
  const auto small = first_members(7);
  const auto large = first_members(12);
  for (std::size_t i = 0; i < small.size(); ++i) {
    CHECK(small[i].family == large[i].family);
    CHECK(small[i].h.samples == large[i].h.samples);
  }
  // each family is present and every member lives strictly inside [0, 0.95)
  std::size_t counts[3] = {0, 0, 0};
  for (const auto& m : large) {
    ++counts[static_cast<int>(m.family)];
    CHECK_NOTHROW(m.h.validate());
    CHECK(m.h.support_end <= 0.95);
  }
  for (auto c : counts) CHECK(c > 0);
}

TEST_CASE("a single bump gives a single finite ratio") {
  const std::vector<Member> one{trivial_bump()};
  const auto d = strichartz_ratio_dirichlet(one, pair(0.0, "inf", "2"), 1.0);
  REQUIRE(d.samples.size() == 1);
  CHECK(std::isfinite(d.max_ratio));
  CHECK(d.max_ratio > 0.0);
  const auto n = strichartz_ratio_neumann(one, pair(0.5, "8", "4"), 1.0, true);
  CHECK(std::isfinite(n.max_ratio));
  CHECK(n.max_ratio > 0.0);
}

TEST_CASE("ratios do not see the amplitude of h") {
  Member m = first_members(2)[1];
  Member scaled = m;
  for (auto& v : scaled.h.samples) v *= 3.7;
  for (const auto& spec : {pair(0.0, "inf", "2"), pair(1.0, "6", "6")}) {
    const double a = strichartz_ratio_dirichlet({m}, spec, 1.0).max_ratio;
    const double b = strichartz_ratio_dirichlet({scaled}, spec, 1.0).max_ratio;
    CHECK(std::abs(a / b - 1.0) < 1e-10);
  }
  const double a = strichartz_ratio_neumann({m}, pair(0.5, "inf", "2"), 2.0, false).max_ratio;
  const double b = strichartz_ratio_neumann({scaled}, pair(0.5, "inf", "2"), 2.0, false).max_ratio;
  CHECK(std::abs(a / b - 1.0) < 1e-10);
}

TEST_CASE("ratios settle once the wavenumber cut-off passes the tail threshold") {
  const Member m = first_members(3)[2];
  for (auto kind : {BoundaryKind::dirichlet, BoundaryKind::neumann}) {
    Diagnostics d;
    ObservationGrid g;
    (void)observe(m.h, kind, 1.0, g, &d);
    g.utm.k_max = 2.0 * std::max(d.metrics.at("k_max_u1"), d.metrics.at("k_max_u2"));
    const auto e = kind == BoundaryKind::dirichlet ? Estimate::dirichlet : Estimate::neumann_homogeneous;
    const auto spec = pair(e == Estimate::dirichlet ? 1.0 : 0.5, "8", "4");
    const double base = e == Estimate::dirichlet ? strichartz_ratio_dirichlet({m}, spec, 1.0).max_ratio
                                                 : strichartz_ratio_neumann({m}, spec, 1.0, true).max_ratio;
    const double wide = e == Estimate::dirichlet ? strichartz_ratio_dirichlet({m}, spec, 1.0, g).max_ratio
                                                 : strichartz_ratio_neumann({m}, spec, 1.0, true, g).max_ratio;
    CHECK(std::abs(wide / base - 1.0) < 0.01);
  }
}

TEST_CASE("a small study passes its gates and repeats bit for bit") {
  StudyConfig c;
  c.ensemble.size = 3;
  c.enriched_size = 5;
  c.T_primes = {1.0, 2.0};
  const std::vector<Target> targets{{Estimate::dirichlet, pair(0.0, "inf", "2")},
                                    {Estimate::dirichlet, pair(0.25, "6", "6")}};
  const auto a = stability_study(targets, c);
  const auto b = stability_study(targets, c);
  REQUIRE(a.size() == 2);
  CHECK(ratio_csv(a) == ratio_csv(b));
  for (const auto& r : a) {
    CHECK(r.gates.size() == 3);
    CHECK(r.bounded);
    CHECK(r.T_primes.size() == 2);
    CHECK(std::abs(r.max_per_T_prime[1] / r.max_per_T_prime[0] - 1.0) < 0.25);
    for (const auto& sm : r.samples) {
      CHECK(std::isfinite(sm.ratio));
      CHECK(sm.ratio > 0.0);
    }
  }
  const std::string csv = ratio_csv(a);
  CHECK(csv.rfind("estimate,s,lambda,r,index,family,T_prime,grid,numerator,denominator,ratio\n", 0) == 0);
}

TEST_CASE("a study validates every target before solving") {
  StudyConfig c;
  c.ensemble.size = 1;
  c.enriched_size = 1;
  CHECK_THROWS_AS(stability_study({{Estimate::dirichlet, pair(0.0, "inf", "2")},
                                   {Estimate::dirichlet, pair(0.0, "3", "3")}},
                                  c),
                  DomainError);
  CHECK(stability_study({}, c).empty());
}

TEST_CASE("whole-line checks") {
  CauchyConfig c;
  c.size = 3;
  SUBCASE("zero data give zero norms") {
    SpaceProfile zero;
    zero.samples.assign(c.x.count, cplx{});
    zero.x0 = c.x.start;
    zero.dx = c.x.step;
    const auto rep = cauchy_checks({zero}, {}, pair(0.0, "6", "6"), c);
    REQUIRE(rep.free_evolution.samples.size() == 1);
    CHECK(rep.free_evolution.samples[0].numerator == 0.0);
    CHECK(rep.free_evolution.samples[0].denominator == 0.0);
    CHECK(rep.conservation_error == 0.0);
  }
  SUBCASE("the H^s norm is conserved") {
    const auto rep = cauchy_checks(cauchy_profiles(c), cauchy_forcings(c), pair(0.0, "inf", "2"), c);
    CHECK(rep.conservation_error < 1e-8);
    CHECK(rep.free_evolution.max_ratio > 0.5);
    CHECK(rep.free_evolution.max_ratio < 2.0);
    CHECK(std::isfinite(rep.duhamel.max_ratio));
  }
  SUBCASE("a Gaussian ratio is stable under grid doubling") {
    const auto profile = [](double x) { return cplx(std::exp(-x * x)); };
    CauchyConfig fine = c;
    fine.x = {c.x.start, c.x.step / 2, 2 * c.x.count - 1};
    fine.t = {c.t.start, c.t.step / 2, 2 * c.t.count - 1};
    const auto y = SpaceProfile::sample(profile, c.x.start, c.x.step, c.x.count, Domain::full_line);
    const auto yf = SpaceProfile::sample(profile, fine.x.start, fine.x.step, fine.x.count, Domain::full_line);
    const double a = cauchy_checks({y}, {}, pair(0.0, "6", "6"), c).free_evolution.max_ratio;
    const double b = cauchy_checks({yf}, {}, pair(0.0, "6", "6"), fine).free_evolution.max_ratio;
    CHECK(std::abs(b / a - 1.0) < 0.1);
  }
  CHECK_THROWS_AS(cauchy_checks({}, {}, pair(0.0, "inf", "inf"), c), DomainError);
}

TEST_CASE("time regularity at fixed positions") {
  const auto ens = first_members(3);
  CHECK_THROWS_AS(trace_regularity_check(ens, 0.5), DomainError);

  TimeSignal zero = ens[0].h;
  std::fill(zero.samples.begin(), zero.samples.end(), cplx{});
  for (double v : probe_time_norms(zero, 1.0, {})) CHECK(v == 0.0);

  const Member bump = trivial_bump();
  const auto norms = probe_time_norms(bump.h, 1.0, {});
  REQUIRE(norms.size() == 4);
  const double h_norm = spectral::sobolev_norm(bump.h, 0.75);
  CHECK(norms[0] == doctest::Approx(h_norm).epsilon(1e-3));

  const auto coarse = trace_regularity_check({bump}, 1.0);
  TraceConfig dense;
  dense.probes = {0.0, 0.05, 0.1, 0.3, 1.0, 3.0, 10.0, 20.0};
  const auto fine = trace_regularity_check({bump}, 1.0, dense);
  CHECK(std::isfinite(coarse.max_ratio));
  CHECK(std::abs(fine.max_ratio / coarse.max_ratio - 1.0) < 0.15);
}

TEST_CASE("boundary transforms carry the norm of h") {
  const auto ens = first_members(3);
  const auto d = norm_transfer(ens, Estimate::dirichlet, 0.25);
  CHECK(d.samples.size() == 3);
  CHECK(d.max_ratio1 > 0.0);
  CHECK(std::isfinite(d.max_ratio2));
  const auto n = norm_transfer(ens, Estimate::neumann_inhomogeneous, 0.5, {1.0, 2.0});
  REQUIRE(n.antiderivative_max_per_T_prime.size() == 2);
  for (std::size_t k = 0; k < 2; ++k) {
    CHECK(n.normalized_max_per_T_prime[k] ==
          doctest::Approx(n.antiderivative_max_per_T_prime[k] / (1.0 + n.T_primes[k])));
  }
  CHECK_THROWS_AS(norm_transfer(ens, Estimate::neumann_inhomogeneous, 0.25), DomainError);
}

TEST_CASE("dispersive constants are finite") {
  DispersiveConfig c;
  c.t_points = 8;
  c.x_max = 5.0;
  c.dx = 0.02;
  const auto rep = dispersive_check(first_members(2), BoundaryKind::dirichlet, c);
  REQUIRE(rep.samples.size() == 2);
  CHECK(rep.t_values.size() == 8);
  CHECK(rep.t_values.front() == doctest::Approx(0.01));
  CHECK(rep.t_values.back() == doctest::Approx(10.0));
  CHECK(std::isfinite(rep.sup_constant));
  CHECK(rep.sup_constant > 0.0);
  for (const auto& s : rep.samples) CHECK(s.lr_constants.size() == 2);
}
