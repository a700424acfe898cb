#include "halfline/cauchy_solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "halfline/errors.hpp"
#include "halfline/fft.hpp"

namespace halfline::cauchy {
namespace {

long lattice_offset(double x, double x_start, double dx) {
  const double u = (x - x_start) / dx;
  const long i = std::lround(u);
  if (std::abs(u - static_cast<double>(i)) > 1e-6) {
    throw DomainError("grid node does not lie on the propagator lattice");
  }
  return i;
}

TimeSignal make_signal(const UniformGrid& t, std::vector<cplx> samples) {
  TimeSignal s;
  s.t0 = t.start;
  s.dt = t.step;
  s.support_end = t.back() + t.step;
  s.samples = std::move(samples);
  return s;
}

// Largest |k| carrying more than tol of the spectral energy.
double energetic_wavenumber(const std::vector<cplx>& spec, const std::vector<double>& k, double tol) {
  std::vector<std::pair<double, double>> e;
  double total = 0.0;
  for (std::size_t j = 0; j < spec.size(); ++j) {
    e.emplace_back(std::abs(k[j]), std::norm(spec[j]));
    total += std::norm(spec[j]);
  }
  if (total == 0.0) return 0.0;
  std::sort(e.begin(), e.end());
  double tail = 0.0;
  for (std::size_t j = e.size(); j-- > 0;) {
    tail += e[j].second;
    if (tail > tol * total) return e[j].first;
  }
  return 0.0;
}

void check_horizon(const PropagatorPlan& plan, const std::vector<cplx>& spec, double data_span,
                   double t_max, Diagnostics* diag) {
  if (!diag) return;
  const double k_eff = energetic_wavenumber(spec, plan.wavenumbers(), 1e-10);
  const double free_room = 0.5 * (plan.length() - data_span);
  if (2.0 * k_eff * t_max > free_room) {
    std::ostringstream msg;
    msg << "free evolution: waves at |k| = " << k_eff << " travel " << 2.0 * k_eff * t_max
        << " by t = " << t_max << ", beyond the " << free_room << " of free box room (aliasing)";
    diag->warn(msg.str());
  }
  diag->record("box_length", plan.length());
  diag->record("energetic_wavenumber", k_eff);
}

UniformGrid output_grid(const EvolutionOptions& options, const UniformGrid& fallback) {
  return options.x_out.count > 0 ? options.x_out : fallback;
}

}  // namespace

PropagatorPlan::PropagatorPlan(double x_start, double dx, std::size_t n_box) : x_start_(x_start), dx_(dx) {
  if (!(dx > 0.0) || n_box < 2) throw DomainError("PropagatorPlan: invalid box");
  k_.resize(n_box);
  const double dk = two_pi / (static_cast<double>(n_box) * dx);
  for (std::size_t j = 0; j < n_box; ++j) k_[j] = static_cast<double>(fft::signed_index(j, n_box)) * dk;
  // The Nyquist bin of an even box is treated as +-pi/dx; its derivative is dropped.
}

PropagatorPlan PropagatorPlan::around(const UniformGrid& data, int padding) {
  const std::size_t n = fft::good_size(static_cast<std::size_t>(std::max(padding, 1)) * data.count);
  const std::size_t shift = (n - data.count) / 2;
  return PropagatorPlan(data.start - static_cast<double>(shift) * data.step, data.step, n);
}

cplx PropagatorPlan::multiplier(std::size_t j, double t) const { return std::polar(1.0, -k_[j] * k_[j] * t); }

std::vector<cplx> PropagatorPlan::analyse(const SpaceProfile& f) const {
  if (std::abs(f.dx - dx_) > 1e-12 * dx_) throw DomainError("PropagatorPlan: profile spacing differs from box");
  const long offset = lattice_offset(f.x0, x_start_, dx_);
  if (offset < 0 || static_cast<std::size_t>(offset) + f.size() > k_.size()) {
    throw DomainError("PropagatorPlan: profile does not fit in the box");
  }
  std::vector<cplx> buf(k_.size());
  std::copy(f.samples.begin(), f.samples.end(), buf.begin() + offset);
  fft::forward(buf);
  const double scale = 1.0 / static_cast<double>(k_.size());
  for (auto& v : buf) v *= scale;
  return buf;
}

void PropagatorPlan::propagate(std::vector<cplx>& spectrum, double t) const {
  for (std::size_t j = 0; j < spectrum.size(); ++j) spectrum[j] *= multiplier(j, t);
}

void PropagatorPlan::synthesize(std::vector<cplx> spectrum, const UniformGrid& x_out, std::span<cplx> out) const {
  fft::backward(spectrum);
  const long first = lattice_offset(x_out.start, x_start_, dx_);
  const long stride = std::lround(x_out.step / dx_);
  if (stride < 1 || std::abs(static_cast<double>(stride) * dx_ - x_out.step) > 1e-9 * dx_) {
    throw DomainError("PropagatorPlan: output spacing is not a multiple of the box spacing");
  }
  const long n = static_cast<long>(k_.size());
  for (std::size_t i = 0; i < x_out.count; ++i) {
    long idx = first + static_cast<long>(i) * stride;
    idx = ((idx % n) + n) % n;
    out[i] = spectrum[static_cast<std::size_t>(idx)];
  }
}

cplx PropagatorPlan::value_at(const std::vector<cplx>& spectrum, double x) const {
  cplx acc{};
  const double u = x - x_start_;
  for (std::size_t j = 0; j < k_.size(); ++j) acc += spectrum[j] * std::polar(1.0, k_[j] * u);
  return acc;
}

cplx PropagatorPlan::derivative_at(const std::vector<cplx>& spectrum, double x) const {
  cplx acc{};
  const double u = x - x_start_;
  const std::size_t nyquist = k_.size() % 2 == 0 ? k_.size() / 2 : k_.size();
  for (std::size_t j = 0; j < k_.size(); ++j) {
    if (j == nyquist) continue;
    acc += I * k_[j] * spectrum[j] * std::polar(1.0, k_[j] * u);
  }
  return acc;
}

EvolutionResult free_evolution_with_traces(const SpaceProfile& y0_star, const UniformGrid& t_grid,
                                           std::size_t stride, const EvolutionOptions& options,
                                           Diagnostics* diag) {
  y0_star.validate();
  if (t_grid.count == 0) throw DomainError("free_evolution: empty time grid");
  stride = std::max<std::size_t>(stride, 1);
  const PropagatorPlan plan = PropagatorPlan::around(y0_star.grid(), options.padding);
  const std::vector<cplx> spec0 = plan.analyse(y0_star);
  check_horizon(plan, spec0, static_cast<double>(y0_star.size()) * y0_star.dx,
                std::max(std::abs(t_grid.start), std::abs(t_grid.back())), diag);
  const UniformGrid x_out = output_grid(options, y0_star.grid());
  const std::size_t n_out = (t_grid.count - 1) / stride + 1;
  EvolutionResult res;
  res.field = Field2D(x_out, {t_grid.start, t_grid.step * static_cast<double>(stride), n_out});
  std::vector<cplx> value(t_grid.count), deriv(t_grid.count);
  // Phase factors e^{ik(0 - x_start)} shared by every trace evaluation.
  const auto& k = plan.wavenumbers();
  std::vector<cplx> at_origin(k.size());
  for (std::size_t j = 0; j < k.size(); ++j) at_origin[j] = spec0[j] * std::polar(1.0, -k[j] * plan.x_start());
  const std::size_t nyquist = k.size() % 2 == 0 ? k.size() / 2 : k.size();
  // Running products of the step phase; re-anchored every 256 steps to bound drift.
  std::vector<cplx> current(k.size()), step_phase(k.size());
  for (std::size_t j = 0; j < k.size(); ++j) step_phase[j] = plan.multiplier(j, t_grid.step);
  for (std::size_t n = 0; n < t_grid.count; ++n) {
    const double t = t_grid[n];
    if (n % 256 == 0) {
      for (std::size_t j = 0; j < k.size(); ++j) current[j] = at_origin[j] * plan.multiplier(j, t);
    } else {
      for (std::size_t j = 0; j < k.size(); ++j) current[j] *= step_phase[j];
    }
    cplx v{}, d{};
    for (std::size_t j = 0; j < k.size(); ++j) {
      v += current[j];
      if (j != nyquist) d += I * k[j] * current[j];
    }
    value[n] = v;
    deriv[n] = d;
    if (n % stride == 0) {
      std::vector<cplx> spec = spec0;
      plan.propagate(spec, t);
      plan.synthesize(std::move(spec), x_out, res.field.slice(n / stride));
    }
  }
  res.traces.value = make_signal(t_grid, std::move(value));
  res.traces.derivative = make_signal(t_grid, std::move(deriv));
  return res;
}

Field2D free_evolution(const SpaceProfile& y0_star, const UniformGrid& t_grid, const EvolutionOptions& options,
                       Diagnostics* diag) {
  y0_star.validate();
  if (t_grid.count == 0) throw DomainError("free_evolution: empty time grid");
  const PropagatorPlan plan = PropagatorPlan::around(y0_star.grid(), options.padding);
  const std::vector<cplx> spec0 = plan.analyse(y0_star);
  check_horizon(plan, spec0, static_cast<double>(y0_star.size()) * y0_star.dx,
                std::max(std::abs(t_grid.start), std::abs(t_grid.back())), diag);
  const UniformGrid x_out = output_grid(options, y0_star.grid());
  Field2D v(x_out, t_grid);
  for (std::size_t n = 0; n < t_grid.count; ++n) {
    std::vector<cplx> spec = spec0;
    plan.propagate(spec, t_grid[n]);
    plan.synthesize(std::move(spec), x_out, v.slice(n));
  }
  return v;
}

EvolutionResult duhamel_with_traces(const Field2D& f_star, std::size_t stride, const EvolutionOptions& options,
                                    Diagnostics* diag) {
  f_star.validate();
  stride = std::max<std::size_t>(stride, 1);
  const PropagatorPlan plan = PropagatorPlan::around(f_star.x, options.padding);
  const UniformGrid x_out = output_grid(options, f_star.x);
  const UniformGrid& t = f_star.t;
  const std::size_t n_out = (t.count - 1) / stride + 1;
  EvolutionResult res;
  res.field = Field2D(x_out, {t.start, t.step * static_cast<double>(stride), n_out});
  const auto& k = plan.wavenumbers();
  const std::size_t nb = k.size();
  std::vector<cplx> step_phase(nb), origin_phase(nb);
  for (std::size_t j = 0; j < nb; ++j) {
    step_phase[j] = plan.multiplier(j, t.step);
    origin_phase[j] = std::polar(1.0, -k[j] * plan.x_start());
  }
  const std::size_t nyquist = nb % 2 == 0 ? nb / 2 : nb;
  auto slice_spectrum = [&](std::size_t n) {
    SpaceProfile p;
    p.x0 = f_star.x.start;
    p.dx = f_star.x.step;
    p.samples.assign(f_star.slice(n).begin(), f_star.slice(n).end());
    return plan.analyse(p);
  };
  std::vector<cplx> z(nb), value(t.count), deriv(t.count);
  std::vector<cplx> f_prev = slice_spectrum(0);
  for (std::size_t n = 0; n < t.count; ++n) {
    if (n > 0) {
      const std::vector<cplx> f_next = slice_spectrum(n);
      const double h = 0.5 * t.step;
      for (std::size_t j = 0; j < nb; ++j) z[j] = step_phase[j] * (z[j] + h * f_prev[j]) + h * f_next[j];
      f_prev = f_next;
    }
    cplx v{}, d{};
    for (std::size_t j = 0; j < nb; ++j) {
      const cplx m = z[j] * origin_phase[j];
      v += m;
      if (j != nyquist) d += I * k[j] * m;
    }
    value[n] = v;
    deriv[n] = d;
    if (n % stride == 0) plan.synthesize(z, x_out, res.field.slice(n / stride));
  }
  if (diag) diag->record("duhamel_box_length", plan.length());
  res.traces.value = make_signal(t, std::move(value));
  res.traces.derivative = make_signal(t, std::move(deriv));
  return res;
}

Field2D duhamel(const Field2D& f_star, const EvolutionOptions& options, Diagnostics* diag) {
  return duhamel_with_traces(f_star, 1, options, diag).field;
}

Traces boundary_traces(const Field2D& u) {
  u.validate();
  if (std::abs(u.x.start) > 1e-12 * u.x.step) throw DomainError("boundary_traces: x-grid must start at 0");
  if (u.x.count < 5) throw ResolutionError("boundary_traces: need at least five points near x = 0");
  std::vector<cplx> value(u.t.count), deriv(u.t.count);
  const double c = 1.0 / (12.0 * u.x.step);
  for (std::size_t n = 0; n < u.t.count; ++n) {
    value[n] = u(n, 0);
    deriv[n] = c * (-25.0 * u(n, 0) + 48.0 * u(n, 1) - 36.0 * u(n, 2) + 16.0 * u(n, 3) - 3.0 * u(n, 4));
  }
  return {make_signal(u.t, std::move(value)), make_signal(u.t, std::move(deriv))};
}

}  // namespace halfline::cauchy
