#pragma once

// Whole-line free propagator e^{-tP} (P = -i d_xx) and the Duhamel integral.

#include <span>
#include <vector>

#include "halfline/types.hpp"

namespace halfline::cauchy {

/// Periodic FFT box with the wavenumbers of its bins. Phases e^{-ik^2 t}
/// are formed on demand, so a plan serves any set of times.
class PropagatorPlan {
 public:
  /// Box of n_box nodes starting at x_start with spacing dx.
  PropagatorPlan(double x_start, double dx, std::size_t n_box);

  /// Box holding the data grid with at least `padding` times its length,
  /// the data placed in the middle.
  static PropagatorPlan around(const UniformGrid& data, int padding);

  std::size_t size() const { return k_.size(); }
  double x_start() const { return x_start_; }
  double dx() const { return dx_; }
  double length() const { return dx_ * static_cast<double>(k_.size()); }
  const std::vector<double>& wavenumbers() const { return k_; }
  cplx multiplier(std::size_t j, double t) const;

  /// Spectrum of samples placed into the box (zero elsewhere), scaled so that
  /// backward() returns point values.
  std::vector<cplx> analyse(const SpaceProfile& f) const;
  /// Propagate a spectrum by time t in place.
  void propagate(std::vector<cplx>& spectrum, double t) const;
  /// Values on an output grid whose nodes coincide with box nodes.
  void synthesize(std::vector<cplx> spectrum, const UniformGrid& x_out, std::span<cplx> out) const;
  /// Value and x-derivative at a point via the exact mode sum.
  cplx value_at(const std::vector<cplx>& spectrum, double x) const;
  cplx derivative_at(const std::vector<cplx>& spectrum, double x) const;

 private:
  double x_start_;
  double dx_;
  std::vector<double> k_;
};

struct EvolutionOptions {
  int padding = 4;
  /// Output x-grid; defaults to the input grid. Nodes must lie on the box lattice.
  UniformGrid x_out{};
};

/// v(., t) = inverse transform of e^{-ik^2 t} y0^*(k) on every node of t_grid.
/// A warning is recorded when waves carrying more than 1e-10 of the energy can
/// cross the periodic box before the last time.
Field2D free_evolution(const SpaceProfile& y0_star, const UniformGrid& t_grid,
                       const EvolutionOptions& options = {}, Diagnostics* diag = nullptr);

/// z(., t_n) = int_0^{t_n} e^{-(t_n - t')P} f*(., t') dt' by the trapezoid rule
/// in t' on the grid of f*, evaluated in multiplier space. z(., 0) = 0.
Field2D duhamel(const Field2D& f_star, const EvolutionOptions& options = {}, Diagnostics* diag = nullptr);

/// Value trace u(0, t) and derivative trace u_x(0, t); the derivative uses the
/// fourth-order one-sided stencil. Requires x-grid starting at 0 with >= 5 nodes.
struct Traces {
  TimeSignal value;
  TimeSignal derivative;
};
Traces boundary_traces(const Field2D& u);

/// Field slices every `stride` steps of the time grid together with spectral
/// traces (value and x-derivative at x = 0, exact mode sums) at every step.
struct EvolutionResult {
  Field2D field;
  Traces traces;
};
EvolutionResult free_evolution_with_traces(const SpaceProfile& y0_star, const UniformGrid& t_grid,
                                           std::size_t stride, const EvolutionOptions& options = {},
                                           Diagnostics* diag = nullptr);
EvolutionResult duhamel_with_traces(const Field2D& f_star, std::size_t stride,
                                    const EvolutionOptions& options = {}, Diagnostics* diag = nullptr);

}  // namespace halfline::cauchy
