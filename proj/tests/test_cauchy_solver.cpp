#include <doctest.h>

#include <cmath>

#include "halfline/cauchy_solver.hpp"
#include "halfline/errors.hpp"
#include "halfline/fft.hpp"
#include "halfline/spectral_core.hpp"

using namespace halfline;
using namespace halfline::cauchy;

namespace {

cplx free_gaussian(double x, double t) {
  const cplx d = 1.0 + 2.0 * I * t;
  return std::exp(-x * x / (2.0 * d)) / std::sqrt(d);
}

SpaceProfile gaussian_profile() {
  return SpaceProfile::sample([](double x) { return cplx(std::exp(-0.5 * x * x)); }, -40.0, 0.05, 1601,
                              Domain::full_line);
}

SpaceProfile slice_profile(const Field2D& u, std::size_t n) {
  SpaceProfile p;
  p.x0 = u.x.start;
  p.dx = u.x.step;
  p.samples.assign(u.slice(n).begin(), u.slice(n).end());
  return p;
}

}  // namespace

TEST_CASE("free evolution of zero is zero") {
  auto z = gaussian_profile();
  for (auto& v : z.samples) v = 0.0;
  const auto v = free_evolution(z, {0.0, 0.1, 5});
  for (const auto& x : v.values) CHECK(x == cplx{});
}

TEST_CASE("free evolution matches the closed-form gaussian") {
  Diagnostics diag;
  const auto v = free_evolution(gaussian_profile(), {0.0, 0.05, 21}, {}, &diag);
  double err = 0.0;
  for (std::size_t n = 0; n < v.t.count; ++n) {
    for (std::size_t i = 0; i < v.x.count; ++i) {
      if (std::abs(v.x[i]) <= 10.0) err = std::max(err, std::abs(v(n, i) - free_gaussian(v.x[i], v.t[n])));
    }
  }
  CHECK(err < 1e-8);
  CHECK(diag.warnings.empty());
}

TEST_CASE("free evolution conserves H^s and L2, and has the group property") {
  const auto y0 = gaussian_profile();
  const auto v = free_evolution(y0, {0.0, 0.1, 11});
  for (double s : {0.0, 1.0}) {
    const double n0 = spectral::sobolev_norm(y0, s);
    for (std::size_t n = 0; n < v.t.count; ++n) {
      CHECK(spectral::sobolev_norm(slice_profile(v, n), s) == doctest::Approx(n0).epsilon(1e-10));
    }
  }
  const auto half = free_evolution(y0, {0.0, 0.4, 2});
  const auto twice = free_evolution(slice_profile(half, 1), {0.0, 0.3, 2});
  const auto once = free_evolution(y0, {0.0, 0.7, 2});
  double err = 0.0;
  for (std::size_t i = 0; i < once.x.count; ++i) err = std::max(err, std::abs(twice(1, i) - once(1, i)));
  CHECK(err < 1e-10);
}

TEST_CASE("aliasing horizon produces a warning") {
  Diagnostics diag;
  const auto narrow = SpaceProfile::sample([](double x) { return cplx(std::exp(-20.0 * x * x)); }, -5.0, 0.05, 201,
                                           Domain::full_line);
  free_evolution(narrow, {0.0, 1.0, 11}, {}, &diag);
  CHECK_FALSE(diag.warnings.empty());
}

TEST_CASE("traces of the free gaussian") {
  const UniformGrid t{0.0, 0.01, 101};
  EvolutionOptions opt;
  opt.x_out = {0.0, 0.05, 200};
  const auto r = free_evolution_with_traces(gaussian_profile(), t, 10, opt);
  double err = 0.0, derr = 0.0;
  for (std::size_t n = 0; n < t.count; ++n) {
    err = std::max(err, std::abs(r.traces.value.samples[n] - free_gaussian(0.0, t[n])));
    derr = std::max(derr, std::abs(r.traces.derivative.samples[n]));
  }
  CHECK(err < 1e-8);
  CHECK(derr < 1e-8);
  CHECK(r.field.t.count == 11);
  const auto fd = boundary_traces(r.field);
  for (std::size_t n = 0; n < r.field.t.count; ++n) {
    CHECK(std::abs(fd.value.samples[n] - free_gaussian(0.0, r.field.t[n])) < 1e-8);
  }
}

TEST_CASE("boundary traces of a plane wave") {
  Field2D u({0.0, 0.01, 50}, {0.0, 0.1, 4});
  for (std::size_t n = 0; n < 4; ++n)
    for (std::size_t i = 0; i < 50; ++i) u(n, i) = std::exp(I * u.x[i]);
  const auto tr = boundary_traces(u);
  for (std::size_t n = 0; n < 4; ++n) {
    CHECK(std::abs(tr.value.samples[n] - 1.0) < 1e-8);
    CHECK(std::abs(tr.derivative.samples[n] - I) < 1e-8);
  }
  Field2D zero({0.0, 0.01, 50}, {0.0, 0.1, 4});
  const auto tz = boundary_traces(zero);
  for (std::size_t n = 0; n < 4; ++n) CHECK(tz.derivative.samples[n] == cplx{});
  Field2D small({0.0, 0.01, 4}, {0.0, 0.1, 2});
  CHECK_THROWS_AS(boundary_traces(small), ResolutionError);
}

TEST_CASE("duhamel: single mode is exact, zero forcing gives zero") {
  const std::size_t n = 256;
  const double dx = 0.05;
  const double k0 = two_pi * 5.0 / (n * dx);
  Field2D f({0.0, dx, n}, {0.0, 0.01, 101});
  for (std::size_t it = 0; it < f.t.count; ++it)
    for (std::size_t i = 0; i < n; ++i) f(it, i) = std::exp(I * (k0 * f.x[i] - k0 * k0 * f.t[it]));
  EvolutionOptions opt;
  opt.padding = 1;
  const auto z = duhamel(f, opt);
  double err = 0.0;
  for (std::size_t it = 0; it < f.t.count; ++it)
    for (std::size_t i = 0; i < n; ++i) err = std::max(err, std::abs(z(it, i) - f.t[it] * f(it, i)));
  CHECK(err < 1e-8);
  for (std::size_t i = 0; i < n; ++i) CHECK(z(0, i) == cplx{});
  Field2D zero({0.0, dx, n}, {0.0, 0.01, 11});
  for (const auto& v : duhamel(zero).values) CHECK(v == cplx{});
}

TEST_CASE("duhamel residual under spectral differentiation") {
  const double dx = 0.05, dt = 0.002;
  Field2D f({-20.0, dx, 801}, {0.0, dt, 501});
  for (std::size_t it = 0; it < f.t.count; ++it)
    for (std::size_t i = 0; i < f.x.count; ++i)
      f(it, i) = std::exp(-f.x[i] * f.x[i]) * std::cos(3.0 * f.t[it]) * std::exp(I * f.x[i]);
  const auto z = duhamel(f);
  // P z = -i z_xx = i k^2 z^ in Fourier space
  const std::size_t nb = fft::good_size(4 * f.x.count);
  double res = 0.0, ref = 0.0;
  for (std::size_t it = 1; it + 1 < f.t.count; ++it) {
    std::vector<cplx> buf(nb);
    for (std::size_t i = 0; i < f.x.count; ++i) buf[i] = z(it, i);
    fft::forward(buf);
    for (std::size_t j = 0; j < nb; ++j) {
      const double k = fft::signed_index(j, nb) * two_pi / (nb * dx);
      buf[j] *= I * k * k / static_cast<double>(nb);
    }
    fft::backward(buf);
    for (std::size_t i = 0; i < f.x.count; ++i) {
      const cplx zt = (z(it + 1, i) - z(it - 1, i)) / (2.0 * dt);
      res += std::norm(zt + buf[i] - f(it, i));
      ref += std::norm(f(it, i));
    }
  }
  CHECK(std::sqrt(res / ref) < 1e-4);
}
