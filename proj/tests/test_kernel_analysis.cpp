#include <doctest.h>

#include <cmath>
#include <random>

#include "halfline/kernel_analysis.hpp"

using namespace halfline;
using namespace halfline::kernel;

TEST_CASE("kernel values against high-precision quadrature") {
  // mpmath, 30 digits, subdivided quadrature of int_0^b e^{-kx + ik^2 t - ik tau} dk
  struct Ref {
    double tau, x, t, b;
    cplx value;
  };
  const Ref refs[] = {
      {3, 0.5, 2, 5, {0.77581253060313331, -0.55269481968909189}},
      {-7, 0, 0.3, 10, {-0.037439812126079766, 0.076601764663493128}},
      {10, 1, -1.5, 4, {0.013323138584700448, -0.097571584702958511}},
      {0, 0, 1, 20, {0.60540059950431265, 0.63981600617583289}},
      {25, 0.1, 5, 3, {0.47528285453214814, 0.41073834875933479}},
  };
  for (const auto& r : refs) CHECK(std::abs(kernel_ell(r.tau, r.x, r.t, r.b) - r.value) < 1e-13);
}

TEST_CASE("elementary cases") {
  CHECK(fresnel_partial(0.0, 3.0, 1.0) == cplx{});
  for (double tau : {-4.0, 0.5, 9.0}) {
    const double k = 2.7;
    const cplx expect = (std::exp(cplx(0.0, -k * tau)) - 1.0) / cplx(0.0, -tau);
    CHECK(std::abs(fresnel_partial(k, tau, 0.0) - expect) < 1e-12);
  }
  for (double x : {1e-6, 0.3, 4.0}) {
    const double b = 7.0;
    CHECK(std::abs(kernel_ell(0.0, x, 0.0, b) - (1.0 - std::exp(-b * x)) / x) < 1e-10);
  }
  CHECK(std::abs(kernel_ell(0.0, 0.0, 0.0, 3.0) - 3.0) < 1e-15);
  CHECK(std::abs(kernel_ell(1.0, 0.5, 2.0, 1e-300)) < 1e-200);
  const double x = 0.4, y = 1.1, b = 30.0;
  CHECK(std::abs(double_kernel_L(x, y, 2.0, 2.0, b) - two_pi * (1.0 - std::exp(-b * (x + y))) / (x + y)) < 1e-10);
}

TEST_CASE("amplitude one at x = 0 makes ell and the Fresnel integral identical") {
  for (double t : {-3.0, 0.01, 1.0, 8.0})
    for (double tau : {-50.0, 0.0, 12.5})
      for (double b : {0.5, 100.0, 1e4}) CHECK(kernel_ell(tau, 0.0, t, b) == fresnel_partial(b, tau, t));
}

TEST_CASE("damped envelope bound for the double kernel") {
  for (double b : {1e2, 1e3, 1e4}) {
    for (double t : {0.01, 1.0, 10.0}) {
      const double x = 30.0 / b, y = 20.0 / b;
      CHECK(std::abs(double_kernel_L(x, y, t, 0.0, b)) <= two_pi / (x + y) * (1.0 + 1e-6));
    }
  }
}

TEST_CASE("closed form and adaptive quadrature agree on random triples") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> uk(0.0, 20.0), ut(-10.0, 10.0), utau(-50.0, 50.0), ux(0.0, 3.0);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double k = uk(rng), t = ut(rng), tau = utau(rng);
    const auto q = fresnel_partial_quadrature(k, tau, t);
    CHECK(q.converged);
    worst = std::max(worst, std::abs(q.value - fresnel_partial(k, tau, t)) / std::max(1.0, std::abs(q.value)));
  }
  CHECK(worst < 1e-9);
  worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const double b = uk(rng), t = ut(rng), tau = utau(rng), x = ux(rng);
    const auto q = kernel_ell_quadrature(tau, x, t, b);
    worst = std::max(worst, std::abs(q.value - kernel_ell(tau, x, t, b)) / std::max(1.0, std::abs(q.value)));
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("decay scans on reduced grids") {
  ScanConfig c;
  c.tau_points = 21;
  c.t_points = 7;
  c.k_points = 21;
  const auto reports = decay_scan(c);
  REQUIRE(reports.size() == 3);
  for (const auto& r : reports) {
    CHECK(std::isfinite(r.sup));
    CHECK(r.sup > 0.0);
    CHECK(r.refinement_ratio >= 0.5);
    CHECK(r.refinement_ratio <= 2.0);
    CHECK(r.sup_per_t.size() == 7);
  }
  const std::string csv = scan_csv(reports);
  CHECK(csv.rfind("kernel,t,sup_sqrt_t_abs\n", 0) == 0);

  ScanConfig empty;
  empty.t_points = 0;
  for (const auto& r : decay_scan(empty)) {
    CHECK(r.sup == 0.0);
    CHECK(r.refinement_ratio == 0.0);
  }
}
