#include "halfline/kernel_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "halfline/errors.hpp"
#include "halfline/special.hpp"

namespace halfline::kernel {
namespace {

// (1 - e^{-b beta}) / beta, accurate for small |b beta|.
cplx damped_segment(cplx beta, double b) {
  const cplx z = b * beta;
  if (std::abs(z) < 0.1) {
    // b * sum_n (-z)^n / (n+1)!
    cplx term = b, acc = 0.0;
    for (int n = 0; n < 18; ++n) {
      acc += term;
      term *= -z / static_cast<double>(n + 2);
    }
    return acc;
  }
  return (1.0 - std::exp(-z)) / beta;
}

std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> v;
  if (n == 0) return v;
  if (n == 1) return {a};
  for (std::size_t i = 0; i < n; ++i) v.push_back(a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1));
  return v;
}

std::vector<double> logspace(double a, double b, std::size_t n) {
  std::vector<double> v = linspace(std::log(a), std::log(b), n);
  for (auto& x : v) x = std::exp(x);
  return v;
}

struct Grids {
  std::vector<double> tau, t, k, x, b;
};

Grids make_grids(const ScanConfig& c, int refine, double b_scale) {
  const auto r = static_cast<std::size_t>(std::max(refine, 1));
  auto refined = [r](std::size_t n) { return n == 0 ? 0 : (n - 1) * r + 1; };
  Grids g;
  g.tau = linspace(c.tau_min, c.tau_max, refined(c.tau_points));
  if (c.t_points > 0 && c.t_min > 0.0) g.t = logspace(c.t_min, c.t_max, refined(c.t_points));
  g.k = linspace(0.0, c.k_max * b_scale, refined(c.k_points));
  g.x = c.x_values;
  for (double b : c.b_values) g.b.push_back(b * b_scale);
  return g;
}

struct ScanResult {
  double sup = 0.0;
  KernelSample argmax;
  std::vector<double> per_t;
  std::size_t evaluations = 0;
};

ScanResult scan(ScanKernel kernel, const Grids& g) {
  ScanResult r;
  r.per_t.assign(g.t.size(), 0.0);
  for (std::size_t it = 0; it < g.t.size(); ++it) {
    const double t = g.t[it];
    const double w = std::sqrt(std::abs(t));
    auto consider = [&](double value, double tau, double x, double b, cplx v) {
      ++r.evaluations;
      r.per_t[it] = std::max(r.per_t[it], value);
      if (value > r.sup) {
        r.sup = value;
        r.argmax = {tau, x, t, b, v};
      }
    };
    switch (kernel) {
      case ScanKernel::fresnel:
        for (double tau : g.tau)
          for (double k : g.k) {
            const cplx v = fresnel_partial(k, tau, t);
            consider(w * std::abs(v), tau, 0.0, k, v);
          }
        break;
      case ScanKernel::ell:
        for (double tau : g.tau)
          for (double x : g.x)
            for (double b : g.b) {
              const cplx v = kernel_ell(tau, x, t, b);
              consider(w * std::abs(v), tau, x, b, v);
            }
        break;
      case ScanKernel::double_kernel:
        // t plays the role of t - s; x and y both range over the x-set.
        for (double x : g.x)
          for (double y : g.x)
            for (double b : g.b) {
              const cplx v = double_kernel_L(x, y, t, 0.0, b);
              consider(w * std::abs(v), 0.0, x + y, b, v);
            }
        break;
    }
  }
  return r;
}

}  // namespace

cplx half_line_fresnel(double t, cplx beta) {
  if (t == 0.0) {
    if (beta.real() <= 0.0) throw DomainError("half_line_fresnel: divergent integral");
    return 1.0 / beta;
  }
  if (t < 0.0) return std::conj(half_line_fresnel(-t, std::conj(beta)));
  // int_0^inf e^{-a k^2 - beta k} dk = (1/2) sqrt(pi/a) w(i beta / (2 sqrt a)), a = -it
  const double rt = std::sqrt(t);
  const cplx sqrt_a = rt * std::polar(1.0, -0.25 * pi);
  const cplx zeta = beta * std::polar(1.0, 0.75 * pi) / (2.0 * rt);
  return 0.5 * std::sqrt(pi) / sqrt_a * special::faddeeva(zeta);
}

cplx kernel_ell(double tau, double x, double t, double b) {
  if (x < 0.0) throw DomainError("kernel_ell: x must be non-negative");
  if (b <= 0.0) return 0.0;
  const cplx beta(x, tau);
  if (t == 0.0) return damped_segment(beta, b);
  if (t < 0.0) return std::conj(kernel_ell(-tau, x, -t, b));
  // ell = F(beta) - e^{itb^2 - beta b} F(beta - 2itb)
  const cplx tail_phase = std::exp(cplx(-x * b, t * b * b - tau * b));
  return half_line_fresnel(t, beta) - tail_phase * half_line_fresnel(t, beta - 2.0 * I * t * b);
}

cplx fresnel_partial(double k, double tau, double t) { return kernel_ell(tau, 0.0, t, k); }

cplx double_kernel_L(double x, double y, double t, double s, double b) {
  if (x < 0.0 || y < 0.0) throw DomainError("double_kernel_L: x, y must be non-negative");
  return two_pi * kernel_ell(0.0, x + y, -(t - s), b);
}

quad::Result kernel_ell_quadrature(double tau, double x, double t, double b, double tol) {
  if (b <= 0.0) return {};
  auto f = [=](double k) { return std::exp(cplx(-k * x, k * k * t - k * tau)); };
  // Panels of bounded phase change; the linear phase tau*k is folded into the width cap.
  const double width = std::min(b, 2.0 / std::max({std::abs(tau), x, 1e-3}));
  auto breaks = quad::chirp_panels(b, std::abs(t), 2.0, width);
  quad::AdaptiveOptions opt;
  opt.abs_tol = tol;
  opt.rel_tol = tol;
  return quad::gauss_kronrod(f, 0.0, b, breaks, opt);
}

quad::Result fresnel_partial_quadrature(double k, double tau, double t, double tol) {
  return kernel_ell_quadrature(tau, 0.0, t, k, tol);
}

std::string to_string(ScanKernel k) {
  switch (k) {
    case ScanKernel::fresnel:
      return "fresnel";
    case ScanKernel::ell:
      return "ell";
    case ScanKernel::double_kernel:
      return "double";
  }
  return "unknown";
}

std::vector<DecayReport> decay_scan(const ScanConfig& config) {
  std::vector<DecayReport> reports;
  const Grids base = make_grids(config, 1, 1.0);
  const Grids fine = make_grids(config, config.refine, 1.0);
  const Grids wide = make_grids(config, 1, 2.0);
  for (ScanKernel kernel : config.kernels) {
    DecayReport rep;
    rep.kernel = kernel;
    rep.t_values = base.t;
    const ScanResult a = scan(kernel, base);
    rep.sup = a.sup;
    rep.argmax = a.argmax;
    rep.sup_per_t = a.per_t;
    rep.evaluations = a.evaluations;
    if (a.sup > 0.0) {
      const ScanResult r = scan(kernel, fine);
      const ScanResult w = scan(kernel, wide);
      rep.sup_refined = r.sup;
      rep.sup_b_doubled = w.sup;
      rep.refinement_ratio = r.sup / a.sup;
      rep.b_ratio = w.sup / a.sup;
      rep.evaluations += r.evaluations + w.evaluations;
    }
    reports.push_back(std::move(rep));
  }
  return reports;
}

std::string scan_csv(const std::vector<DecayReport>& reports) {
  std::ostringstream out;
  out << "kernel,t,sup_sqrt_t_abs\n";
  char line[128];
  for (const auto& r : reports) {
    for (std::size_t i = 0; i < r.t_values.size(); ++i) {
      std::snprintf(line, sizeof line, "%s,%.10e,%.10e\n", to_string(r.kernel).c_str(), r.t_values[i],
                    r.sup_per_t[i]);
      out << line;
    }
  }
  return out.str();
}

}  // namespace halfline::kernel
