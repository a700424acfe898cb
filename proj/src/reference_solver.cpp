#include "halfline/reference_solver.hpp"

#include <algorithm>
#include <cmath>
#include <span>

#include "halfline/errors.hpp"
#include "halfline/fft.hpp"

namespace halfline::reference {
namespace {

// Index of grid value v on the lattice start + i * step, or -1 when off-lattice.
long lattice_index(double v, double start, double step) {
  const double u = (v - start) / step;
  const long i = std::lround(u);
  return std::abs(u - static_cast<double>(i)) < 1e-6 ? i : -1;
}

// Four-point Lagrange stencil at fractional index u of n samples: first
// index and weights. Returns false outside [0, n-1].
bool cubic_stencil(double u, long n, long& j, double w[4]) {
  if (n == 0 || u < -1e-9 || u > static_cast<double>(n - 1) + 1e-9) return false;
  if (n < 4) {
    j = std::clamp(std::lround(u), 0L, n - 1);
    w[0] = 1.0;
    w[1] = w[2] = w[3] = 0.0;
    return true;
  }
  j = std::clamp(static_cast<long>(std::floor(u)) - 1, 0L, n - 4);
  for (long a = 0; a < 4; ++a) {
    w[a] = 1.0;
    for (long b = 0; b < 4; ++b) {
      if (b != a) w[a] *= (u - static_cast<double>(j + b)) / static_cast<double>(a - b);
    }
  }
  return true;
}

cplx cubic_at(std::span<const cplx> v, double start, double step, double x) {
  long j = 0;
  double w[4];
  const auto n = static_cast<long>(v.size());
  if (!cubic_stencil((x - start) / step, n, j, w)) return {};
  cplx acc{};
  for (long a = 0; a < 4 && j + a < n; ++a) acc += w[a] * v[static_cast<std::size_t>(j + a)];
  return acc;
}

// Thomas solve with fixed tridiagonal coefficients, factorized once.
class Tridiagonal {
 public:
  Tridiagonal(std::vector<cplx> lower, std::vector<cplx> diag, std::vector<cplx> upper)
      : lower_(std::move(lower)), upper_(std::move(upper)), c_(diag.size()), inv_(diag.size()) {
    const std::size_t m = diag.size();
    cplx denom = diag[0];
    inv_[0] = 1.0 / denom;
    c_[0] = m > 1 ? upper_[0] * inv_[0] : cplx{};
    for (std::size_t j = 1; j < m; ++j) {
      denom = diag[j] - lower_[j] * c_[j - 1];
      inv_[j] = 1.0 / denom;
      c_[j] = j + 1 < m ? upper_[j] * inv_[j] : cplx{};
    }
  }

  void solve(std::vector<cplx>& d) const {
    const std::size_t m = d.size();
    d[0] *= inv_[0];
    for (std::size_t j = 1; j < m; ++j) d[j] = (d[j] - lower_[j] * d[j - 1]) * inv_[j];
    for (std::size_t j = m - 1; j-- > 0;) d[j] -= c_[j] * d[j + 1];
  }

 private:
  std::vector<cplx> lower_, upper_, c_, inv_;
};

// Left-moving share of the energy in a Hann window around X_max / 2.
double left_moving_energy(const std::vector<cplx>& y, std::size_t j0, std::size_t j1, double dx) {
  const std::size_t m = j1 - j0;
  const std::size_t n = fft::good_size(4 * m);
  std::vector<cplx> buf(n);
  for (std::size_t j = 0; j < m; ++j) {
    const double w = std::sin(pi * static_cast<double>(j) / static_cast<double>(m));
    buf[j] = w * w * y[j0 + j];
  }
  fft::forward(buf);
  double left = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    if (fft::signed_index(j, n) < 0) left += std::norm(buf[j]);
  }
  return left * dx / static_cast<double>(n);
}

}  // namespace

Field2D crank_nicolson_solve(const InitialFn& y0, const ForcingFn& f, const BoundaryFn& g, BoundaryKind kind,
                             const FdScheme& sc, const UniformGrid& x_out, const UniformGrid& t_out,
                             FdReport* report) {
  if (sc.dx <= 0.0 || sc.dt <= 0.0 || sc.X_max <= 0.0) throw DomainError("crank_nicolson_solve: bad scheme");
  if (sc.layer_fraction <= 0.0 || sc.layer_fraction >= 0.5) {
    throw DomainError("crank_nicolson_solve: layer fraction must lie in (0, 1/2)");
  }
  const std::size_t J = static_cast<std::size_t>(std::lround(sc.X_max / sc.dx));
  const long ix0 = lattice_index(x_out.start, 0.0, sc.dx);
  const long ixs = lattice_index(x_out.step, 0.0, sc.dx);
  const long it0 = lattice_index(t_out.start, 0.0, sc.dt);
  const long its = lattice_index(t_out.step, 0.0, sc.dt);
  if (ix0 < 0 || ixs < 1 || it0 < 0 || (t_out.count > 1 && its < 1)) {
    throw DomainError("crank_nicolson_solve: output grids must sit on the scheme lattice");
  }
  if (static_cast<std::size_t>(ix0) + (x_out.count - 1) * static_cast<std::size_t>(ixs) > J) {
    throw DomainError("crank_nicolson_solve: output grid extends past X_max");
  }
  const bool dirichlet = kind == BoundaryKind::dirichlet;
  const double x_layer = (1.0 - sc.layer_fraction) * sc.X_max;
  std::vector<double> W(J + 1, 0.0);
  for (std::size_t j = 0; j <= J; ++j) {
    const double x = static_cast<double>(j) * sc.dx;
    if (x > x_layer) W[j] = sc.layer_strength * std::pow((x - x_layer) / (sc.X_max - x_layer), 4);
  }

  // Unknowns: j = 1..J-1 (Dirichlet) or j = 0..J-1 (Neumann); y_J = 0.
  const std::size_t first = dirichlet ? 1 : 0;
  const std::size_t m = J - first;
  const cplx r = I * sc.dt / (2.0 * sc.dx * sc.dx);
  std::vector<cplx> lo(m, -r), di(m), up(m, -r);
  for (std::size_t q = 0; q < m; ++q) di[q] = 1.0 + 2.0 * r + 0.5 * sc.dt * W[first + q];
  if (!dirichlet) up[0] = -2.0 * r;
  const Tridiagonal lhs(lo, di, up);

  auto boundary = [&](std::size_t n, cplx y00) {
    const double t = static_cast<double>(n) * sc.dt;
    cplx v = g ? g(t) : cplx{};
    if (sc.smooth_corner && dirichlet && n < 5) {
      v += (y00 - (g ? g(0.0) : cplx{})) * (1.0 - static_cast<double>(n) / 5.0);
    }
    return v;
  };
  auto forcing = [&](std::vector<cplx>& out, double t) {
    for (std::size_t j = 0; j <= J; ++j) out[j] = f ? f(static_cast<double>(j) * sc.dx, t) : cplx{};
  };

  std::vector<cplx> y(J + 1), rhs(m), f_now(J + 1), f_next(J + 1);
  for (std::size_t j = 0; j < J; ++j) y[j] = y0 ? y0(static_cast<double>(j) * sc.dx) : cplx{};
  y[J] = 0.0;
  const cplx y00 = y[0];
  if (dirichlet) y[0] = boundary(0, y00);
  forcing(f_now, 0.0);

  Field2D out(x_out, t_out);
  const std::size_t n_last = static_cast<std::size_t>(it0) + (t_out.count - 1) * static_cast<std::size_t>(std::max(its, 1L));
  auto store = [&](std::size_t n) {
    if (static_cast<long>(n) < it0) return;
    const std::size_t k = n - static_cast<std::size_t>(it0);
    const std::size_t s = static_cast<std::size_t>(std::max(its, 1L));
    if (k % s != 0 || k / s >= t_out.count) return;
    for (std::size_t i = 0; i < x_out.count; ++i) out(k / s, i) = y[static_cast<std::size_t>(ix0) + i * static_cast<std::size_t>(ixs)];
  };

  // Reflection probe on [0.4, 0.6] X_max.
  const std::size_t p0 = static_cast<std::size_t>(0.4 * static_cast<double>(J));
  const std::size_t p1 = static_cast<std::size_t>(0.6 * static_cast<double>(J));
  const std::size_t l1 = static_cast<std::size_t>((1.0 - sc.layer_fraction) * static_cast<double>(J));
  const std::size_t check_every = std::max<std::size_t>(1, static_cast<std::size_t>(0.05 / sc.dt));
  double reference_energy = 0.0, reflected = 0.0;
  auto probe = [&]() {
    double e = 0.0;
    for (std::size_t j = 0; j < l1; ++j) e += std::norm(y[j]);
    reference_energy = std::max(reference_energy, e * sc.dx);
    reflected = std::max(reflected, left_moving_energy(y, p0, p1, sc.dx));
  };
  probe();
  store(0);

  for (std::size_t n = 0; n < n_last; ++n) {
    const double t1 = static_cast<double>(n + 1) * sc.dt;
    forcing(f_next, t1);
    const cplx g0 = boundary(n, y00), g1 = boundary(n + 1, y00);
    for (std::size_t q = 0; q < m; ++q) {
      const std::size_t j = first + q;
      const cplx left = j == 0 ? y[1] - 2.0 * sc.dx * g0 : y[j - 1];
      rhs[q] = r * left + (1.0 - 2.0 * r - 0.5 * sc.dt * W[j]) * y[j] + r * y[j + 1] +
               0.5 * sc.dt * (f_now[j] + f_next[j]);
    }
    if (dirichlet) {
      rhs[0] += r * g1;
    } else {
      rhs[0] -= 2.0 * r * sc.dx * g1;
    }
    lhs.solve(rhs);
    for (std::size_t q = 0; q < m; ++q) y[first + q] = rhs[q];
    if (dirichlet) y[0] = g1;
    std::swap(f_now, f_next);
    if ((n + 1) % check_every == 0) probe();
    store(n + 1);
  }
  const double fraction = reference_energy > 0.0 ? reflected / reference_energy : 0.0;
  if (report) {
    report->reflected_fraction = fraction;
    report->dt_over_dx2 = sc.dt_over_dx2();
    report->steps = n_last;
  }
  if (fraction > sc.reflection_limit) {
    throw DomainTooSmall("crank_nicolson_solve: reflected energy fraction " + std::to_string(fraction) +
                         " at X_max/2 exceeds the limit; enlarge X_max or the absorbing layer");
  }
  return out;
}

Field2D crank_nicolson_solve(const SpaceProfile& y0, const Field2D& f, const TimeSignal& g, BoundaryKind kind,
                             const FdScheme& scheme, const UniformGrid& x_out, const UniformGrid& t_out,
                             FdReport* report) {
  InitialFn y0_fn = [&](double x) { return cubic_at(y0.samples, y0.x0, y0.dx, x); };
  ForcingFn f_fn;
  if (!f.values.empty()) {
    f.validate();
    f_fn = [&](double x, double t) {
      // Cubic in t of cubic-in-x slice values.
      long j = 0;
      double w[4];
      const auto n = static_cast<long>(f.t.count);
      if (!cubic_stencil((t - f.t.start) / f.t.step, n, j, w)) return cplx{};
      cplx acc{};
      for (long a = 0; a < 4 && j + a < n; ++a) {
        acc += w[a] * cubic_at(f.slice(static_cast<std::size_t>(j + a)), f.x.start, f.x.step, x);
      }
      return acc;
    };
  }
  BoundaryFn g_fn = [&](double t) {
    if (g.size() == 0) return cplx{};
    const double t_end = g.time(g.size() - 1);
    return cubic_at(g.samples, g.t0, g.dt, std::min(t, t_end));
  };
  return crank_nicolson_solve(y0_fn, f_fn, g_fn, kind, scheme, x_out, t_out, report);
}

ConvergenceReport self_convergence(const InitialFn& y0, const ForcingFn& f, const BoundaryFn& g, BoundaryKind kind,
                                   const FdScheme& coarse, const UniformGrid& x_out, const UniformGrid& t_out) {
  FdScheme s = coarse;
  const Field2D a = crank_nicolson_solve(y0, f, g, kind, s, x_out, t_out);
  s.dx *= 0.5;
  s.dt *= 0.5;
  const Field2D b = crank_nicolson_solve(y0, f, g, kind, s, x_out, t_out);
  s.dx *= 0.5;
  s.dt *= 0.5;
  const Field2D c = crank_nicolson_solve(y0, f, g, kind, s, x_out, t_out);
  ConvergenceReport rep;
  double d1 = 0.0, d2 = 0.0;
  for (std::size_t j = 0; j < a.values.size(); ++j) {
    d1 += std::norm(a.values[j] - b.values[j]);
    d2 += std::norm(b.values[j] - c.values[j]);
  }
  rep.coarse_difference = std::sqrt(d1);
  rep.fine_difference = std::sqrt(d2);
  rep.order = rep.fine_difference > 0.0 ? std::log2(rep.coarse_difference / rep.fine_difference) : 0.0;
  return rep;
}

}  // namespace halfline::reference
