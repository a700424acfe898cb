#include <doctest.h>

#include <random>

#include "halfline/errors.hpp"
#include "halfline/quadrature.hpp"
#include "halfline/special.hpp"
#include "halfline/utm_boundary.hpp"

using namespace halfline;
using utm::BoundaryKind;

namespace {

cplx smooth_datum(double t) {
  return special::mollifier((t - 1.2) / 1.0) * cplx(std::cos(3.0 * t), 0.5 * std::sin(5.0 * t));
}

cplx second_datum(double t) { return special::mollifier((t - 0.9) / 0.6) * cplx(0.3, -0.8) * std::cos(7.0 * t); }

TimeSignal sampled(cplx (*fn)(double), double dt = 1e-3) {
  return TimeSignal::sample(fn, 0.0, dt, static_cast<std::size_t>(2.6 / dt), 2.5);
}

double field_max(const Field2D& u) {
  double m = 0.0;
  for (const cplx& v : u.values) m = std::max(m, std::abs(v));
  return m;
}

const utm::UtmGrids kGrids{{0.0, 0.05, 401}, {0.0, 0.02, 151}};

// Moving Gaussian solving y_t = i y_xx with y(x, 0) = exp(-alpha (x-a)^2 + i p x).
cplx moving_gaussian(double x, double t, double alpha, double a, double p) {
  const cplx d = 1.0 + 4.0 * I * alpha * t;
  return std::exp((-alpha * (x - a) * (x - a) + I * p * (x - a) - I * p * p * t) / d) / std::sqrt(d) *
         std::polar(1.0, p * a);
}

cplx moving_gaussian_x(double x, double t, double alpha, double a, double p) {
  const cplx d = 1.0 + 4.0 * I * alpha * t;
  return moving_gaussian(x, t, alpha, a, p) * (-2.0 * alpha * (x - a) + I * p) / d;
}

}  // namespace

TEST_CASE("kind names round-trip") {
  CHECK(utm::parse_kind("dirichlet") == BoundaryKind::dirichlet);
  CHECK(utm::parse_kind(utm::to_string(BoundaryKind::neumann)) == BoundaryKind::neumann);
  CHECK_THROWS_AS(utm::parse_kind("robin"), ConfigError);
}

TEST_CASE("zero boundary datum gives zero everywhere") {
  const TimeSignal h = TimeSignal::sample([](double) { return cplx{}; }, 0.0, 1e-2, 100, 0.9);
  for (auto kind : {BoundaryKind::dirichlet, BoundaryKind::neumann}) {
    const auto d = utm::utm_solve(h, kind, kGrids);
    CHECK(field_max(d.u1) == 0.0);
    CHECK(field_max(d.u2) == 0.0);
    const auto H1 = utm::build_H1(h, kind, {0.0, 0.1, 50});
    for (const cplx& v : H1.values) CHECK(v == cplx{});
    CHECK(utm::direct_contour_eval(h, kind, 0.5, 0.5).value == cplx{});
  }
}

TEST_CASE("densities are one-sided and match the definitions") {
  const TimeSignal h = sampled(smooth_datum);
  const UniformGrid k{-6.0, 0.01, 1201};
  for (auto kind : {BoundaryKind::dirichlet, BoundaryKind::neumann}) {
    const auto H1 = utm::build_H1(h, kind, k);
    const auto H2 = utm::build_H2(h, kind, k);
    CHECK_FALSE(H1.one_sided);
    double max_err = 0.0;
    for (std::size_t j = 0; j < k.count; ++j) {
      const double kj = k[j];
      if (kj < 0.0) {
        CHECK(H1.values[j] == cplx{});
        CHECK(H2.values[j] == cplx{});
        continue;
      }
      const cplx plus = spectral::transform_at(h, kj * kj);
      const cplx minus = spectral::transform_at(h, -kj * kj);
      const cplx e1 = kind == BoundaryKind::dirichlet ? kj * plus / pi : -plus / pi;
      const cplx e2 = kind == BoundaryKind::dirichlet ? 2.0 * kj * minus : -2.0 * I * minus;
      max_err = std::max({max_err, std::abs(H1.values[j] - e1), std::abs(H2.values[j] - e2)});
    }
    CHECK(max_err < 1e-10);
  }
  CHECK(utm::build_H2(h, BoundaryKind::dirichlet, {0.0, 0.1, 10}).one_sided);
}

TEST_CASE("short k-grid triggers a truncation warning") {
  const TimeSignal h = sampled(smooth_datum);
  Diagnostics diag;
  utm::build_H1(h, BoundaryKind::dirichlet, {0.0, 0.01, 200}, &diag);
  CHECK_FALSE(diag.warnings.empty());
  CHECK(diag.metrics.at("H1_tail_beyond_grid") > 1e-10);
}

TEST_CASE("u1 of a Gaussian density matches the closed form") {
  const double k0 = 3.0, sigma = 0.2;
  auto H1 = [&](double k) { return cplx(std::exp(-(k - k0) * (k - k0) / (2.0 * sigma * sigma))); };
  const UniformGrid x{0.0, 0.25, 21}, t{0.0, 0.1, 21};
  const Field2D u = utm::evaluate_u1(H1, 6.0, x, t, 2.0);
  double err = 0.0;
  for (std::size_t n = 0; n < t.count; ++n) {
    for (std::size_t i = 0; i < x.count; ++i) {
      const cplx a = 1.0 / (2.0 * sigma * sigma) - I * t[n];
      const double beta = k0 / (sigma * sigma) - x[i];
      const double gamma = -k0 * k0 / (2.0 * sigma * sigma);
      const cplx exact = std::sqrt(pi / a) * std::exp(beta * beta / (4.0 * a) + gamma);
      err = std::max(err, std::abs(u(n, i) - exact));
    }
  }
  CHECK(err < 1e-11);
}

TEST_CASE("u1 of a narrow spectral bump is the stationary amplitude") {
  const double k0 = 2.0, sigma = 1e-3;
  const UniformGrid k{0.0, 1e-4, 40001};
  SpectralDensity H1;
  H1.k_min = 0.0;
  H1.dk = k.step;
  H1.one_sided = true;
  for (std::size_t j = 0; j < k.count; ++j) {
    H1.values.push_back(std::exp(-(k[j] - k0) * (k[j] - k0) / (2.0 * sigma * sigma)));
  }
  const double mass = sigma * std::sqrt(two_pi);
  const UniformGrid x{0.0, 0.5, 2}, t{0.0, 0.1, 2};
  const Field2D u = utm::evaluate_u1(H1, x, t);
  for (std::size_t n = 0; n < t.count; ++n) {
    for (std::size_t i = 0; i < x.count; ++i) {
      const cplx approx = mass * std::exp(-k0 * x[i] + I * k0 * k0 * t[n]);
      CHECK(std::abs(u(n, i) - approx) < 1e-6 * mass);
    }
  }
}

TEST_CASE("u2 at t = 0 is the inverse transform of the one-sided H2") {
  const TimeSignal h = sampled(smooth_datum);
  for (auto kind : {BoundaryKind::dirichlet, BoundaryKind::neumann}) {
    const utm::UtmEvaluator ev(h, kind, 20.0, 0.0);
    const UniformGrid x{0.0, 0.05, 401}, t{0.0, 1.0, 1};
    const Field2D u2 = ev.u2(x, t);
    const double K = ev.spectrum().k_resolved();
    double err = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < x.count; i += 20) {
      auto f = [&](double k) { return std::exp(I * k * x[i]) * ev.spectrum().H2(kind, k) / two_pi; };
      std::vector<double> breaks;
      for (double b = 0.05; b < K; b += 0.05) breaks.push_back(b);
      const cplx H2x = quad::gauss_kronrod(f, 0.0, K, breaks).value;
      err = std::max(err, std::abs(u2(0, i) - H2x));
      scale = std::max(scale, std::abs(H2x));
    }
    CHECK(err < 1e-10 * scale);
  }
}

TEST_CASE("solution starts from zero and is linear in h") {
  const TimeSignal h1 = sampled(smooth_datum);
  const TimeSignal h2 = sampled(second_datum);
  TimeSignal sum = h1;
  for (std::size_t i = 0; i < sum.size(); ++i) sum.samples[i] += h2.samples[i];
  for (auto kind : {BoundaryKind::dirichlet, BoundaryKind::neumann}) {
    const Field2D a = utm::utm_solve(h1, kind, kGrids).total();
    const Field2D b = utm::utm_solve(h2, kind, kGrids).total();
    const Field2D c = utm::utm_solve(sum, kind, kGrids).total();
    double diff = 0.0;
    for (std::size_t j = 0; j < c.values.size(); ++j) {
      diff = std::max(diff, std::abs(c.values[j] - a.values[j] - b.values[j]));
    }
    CHECK(diff < 1e-10 * field_max(c));
    double initial = 0.0;
    for (std::size_t i = 0; i < a.x.count; ++i) initial = std::max(initial, std::abs(a(0, i)));
    CHECK(initial < 1e-4);
  }
}

TEST_CASE("boundary traces reproduce the datum") {
  const TimeSignal h = sampled(smooth_datum);
  const UniformGrid t{0.0, 0.01, 251};
  for (auto kind : {BoundaryKind::dirichlet, BoundaryKind::neumann}) {
    const utm::UtmEvaluator ev(h, kind, 10.0, t.back());
    double num = 0.0, den = 0.0;
    for (std::size_t n = 0; n < t.count; ++n) {
      const cplx trace = kind == BoundaryKind::dirichlet ? ev.u1_at(0.0, t[n]) + ev.u2_at(0.0, t[n])
                                                         : ev.u1_x_at(0.0, t[n]) + ev.u2_x_at(0.0, t[n]);
      num += std::norm(trace - smooth_datum(t[n]));
      den += std::norm(smooth_datum(t[n]));
    }
    CHECK(std::sqrt(num / den) < 1e-6);
  }
}

TEST_CASE("spectral split agrees with the direct contour quadrature") {
  const TimeSignal h = sampled(smooth_datum);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ux(0.0, 5.0), ut(0.0, 3.0);
  for (auto kind : {BoundaryKind::dirichlet, BoundaryKind::neumann}) {
    const utm::UtmEvaluator ev(h, kind, 5.0, 3.0);
    double worst = 0.0;
    for (int p = 0; p < 20; ++p) {
      const double x = ux(rng), t = ut(rng);
      const auto direct = utm::direct_contour_eval(h, kind, x, t);
      CHECK(direct.converged);
      const cplx fast = ev.u1_at(x, t) + ev.u2_at(x, t);
      worst = std::max(worst, std::abs(fast - direct.value));
      CHECK(std::abs(ev.u1_at(x, t) - direct.imaginary_leg) < 1e-7);
    }
    CHECK(worst < 1e-7);
  }
}

TEST_CASE("grid field agrees with pointwise evaluation") {
  const TimeSignal h = sampled(second_datum);
  const auto d = utm::utm_solve(h, BoundaryKind::dirichlet, kGrids);
  const utm::UtmEvaluator ev(h, BoundaryKind::dirichlet, kGrids.x.back(), kGrids.t.back());
  for (std::size_t n : {0ul, 40ul, 150ul}) {
    for (std::size_t i : {0ul, 7ul, 100ul, 400ul}) {
      const double x = kGrids.x[i], t = kGrids.t[n];
      CHECK(std::abs(d.u1(n, i) - ev.u1_at(x, t)) < 1e-12);
      CHECK(std::abs(d.u2(n, i) - ev.u2_at(x, t)) < 1e-8);
    }
  }
}

TEST_CASE("inhomogeneous Neumann path") {
  const double T_prime = 2.5;
  SUBCASE("mean-zero data reproduce the homogeneous solve") {
    // Derivative of a bump: zero mean and support well inside [0, T').
    auto fn = [](double t) { return cplx(special::mollifier_derivative((t - 1.2) / 0.8)); };
    const TimeSignal h = TimeSignal::sample(fn, 0.0, 1e-3, 2500, 2.5);
    const auto inh = utm::neumann_inhomogeneous_solve(h, T_prime, kGrids, 0.5);
    const Field2D a = inh.decomposition.total();
    const Field2D b = utm::utm_solve(h, BoundaryKind::neumann, kGrids).total();
    double diff = 0.0;
    for (std::size_t j = 0; j < a.values.size(); ++j) diff = std::max(diff, std::abs(a.values[j] - b.values[j]));
    CHECK(diff < 1e-6 * field_max(b));
    CHECK(inh.H1_norm > 0.0);
  }
  SUBCASE("nonzero mean: the derivative trace still equals h on [0, T')") {
    const TimeSignal h = sampled(smooth_datum);
    const auto inh = utm::neumann_inhomogeneous_solve(h, T_prime, kGrids, 0.5);
    CHECK(inh.decomposition.u1.t.back() <= T_prime);
    CHECK(std::abs(inh.extension.cancelled_mass) > 0.0);
    const utm::UtmEvaluator ev(inh.extension.he, BoundaryKind::neumann, 10.0, T_prime);
    double num = 0.0, den = 0.0;
    for (double t = 0.0; t < 2.4; t += 0.01) {
      num += std::norm(ev.u1_x_at(0.0, t) + ev.u2_x_at(0.0, t) - smooth_datum(t));
      den += std::norm(smooth_datum(t));
    }
    CHECK(std::sqrt(num / den) < 1e-5);
    CHECK(inh.decomposition.diagnostics.metrics.at("one_plus_T_prime") == doctest::Approx(1.0 + T_prime));
    CHECK(inh.H_norm > 0.0);
    CHECK(inh.h_norm > 0.0);
  }
}

TEST_CASE("reunification: zero data") {
  const SpaceProfile y0 = SpaceProfile::sample([](double) { return cplx{}; }, 0.0, 0.05, 401, Domain::half_line);
  const TimeSignal g = TimeSignal::sample([](double) { return cplx{}; }, 0.0, 1e-3, 1300, 1.3);
  utm::ReunifyGrids grids{{0.0, 0.05, 401}, {0.0, 0.05, 21}, 1.0};
  const auto r = utm::reunify_solve(y0, Field2D{}, g, BoundaryKind::dirichlet, grids);
  CHECK(field_max(r.y) == 0.0);
  CHECK(r.T_prime == doctest::Approx(1.25));
}

TEST_CASE("reunification reproduces a free evolution from its own traces") {
  const double alpha = 1.0, a = 5.0, p = -2.0;
  const SpaceProfile y0 = SpaceProfile::sample([&](double x) { return moving_gaussian(x, 0.0, alpha, a, p); }, 0.0,
                                               0.05, 801, Domain::half_line);
  utm::ReunifyGrids grids{{0.0, 0.05, 801}, {0.0, 0.02, 101}, 2.0};
  for (auto kind : {BoundaryKind::dirichlet, BoundaryKind::neumann}) {
    auto trace = [&](double t) {
      return kind == BoundaryKind::dirichlet ? moving_gaussian(0.0, t, alpha, a, p)
                                             : moving_gaussian_x(0.0, t, alpha, a, p);
    };
    const TimeSignal g = TimeSignal::sample(trace, 0.0, 1e-3, 2600, 2.6);
    const auto r = utm::reunify_solve(y0, Field2D{}, g, kind, grids);
    double num = 0.0, den = 0.0;
    for (std::size_t n = 0; n < grids.t.count; ++n) {
      for (std::size_t i = 0; i < grids.x.count; ++i) {
        const cplx exact = moving_gaussian(grids.x[i], grids.t[n], alpha, a, p);
        num += std::norm(r.y(n, i) - exact);
        den += std::norm(exact);
      }
    }
    CHECK(std::sqrt(num / den) < 1e-3);
    CHECK(r.T_prime == doctest::Approx(2.5));
  }
}

TEST_CASE("reunification validates its inputs") {
  const SpaceProfile full = SpaceProfile::sample([](double) { return cplx{}; }, -1.0, 0.05, 41, Domain::full_line);
  const TimeSignal g = TimeSignal::sample([](double) { return cplx{}; }, 0.0, 1e-3, 1300, 1.3);
  utm::ReunifyGrids grids{{0.0, 0.05, 41}, {0.0, 0.05, 21}, 1.0};
  CHECK_THROWS_AS(utm::reunify_solve(full, Field2D{}, g, BoundaryKind::dirichlet, grids), DomainError);
  const SpaceProfile y0 = SpaceProfile::sample([](double) { return cplx{}; }, 0.0, 0.05, 41, Domain::half_line);
  grids.t.step = 0.0525;
  CHECK_THROWS_AS(utm::reunify_solve(y0, Field2D{}, g, BoundaryKind::dirichlet, grids), DomainError);
}
