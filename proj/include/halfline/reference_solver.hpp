#pragma once

// Crank-Nicolson finite differences for y_t - i y_xx = f on a truncated half
// line, with a complex absorbing layer at the far end. Used only to
// cross-check the spectral solver.

#include <functional>

#include "halfline/types.hpp"
#include "halfline/utm_boundary.hpp"

namespace halfline::reference {

using utm::BoundaryKind;

struct FdScheme {
  double X_max = 60.0;
  double dx = 0.02;
  double dt = 1e-3;
  double layer_fraction = 0.2;   ///< absorbing layer occupies the last fraction of [0, X_max]
  double layer_strength = 20.0;  ///< peak of the quartic potential W
  double reflection_limit = 1e-4;
  bool smooth_corner = false;    ///< blend g toward y0(0) over the first 5 steps
  double dt_over_dx2() const { return dt / (dx * dx); }
};

struct FdReport {
  double reflected_fraction = 0.0;  ///< left-moving energy at X_max/2 over the reference energy
  double dt_over_dx2 = 0.0;
  std::size_t steps = 0;
};

using InitialFn = std::function<cplx(double)>;
using ForcingFn = std::function<cplx(double, double)>;
using BoundaryFn = std::function<cplx(double)>;

/// Field on x_out x t_out (nodes must sit on the scheme lattice). An empty
/// forcing means f = 0. Throws DomainTooSmall when waves reflected by the
/// truncation come back past X_max/2 with more than reflection_limit of the
/// energy.
Field2D crank_nicolson_solve(const InitialFn& y0, const ForcingFn& f, const BoundaryFn& g, BoundaryKind kind,
                             const FdScheme& scheme, const UniformGrid& x_out, const UniformGrid& t_out,
                             FdReport* report = nullptr);

/// Sampled data, read through local cubic interpolation; g is held at its
/// last value past its end, y0 and f vanish outside their grids.
Field2D crank_nicolson_solve(const SpaceProfile& y0, const Field2D& f, const TimeSignal& g, BoundaryKind kind,
                             const FdScheme& scheme, const UniformGrid& x_out, const UniformGrid& t_out,
                             FdReport* report = nullptr);

struct ConvergenceReport {
  double order = 0.0;
  double coarse_difference = 0.0;  ///< |u_h - u_{h/2}|
  double fine_difference = 0.0;    ///< |u_{h/2} - u_{h/4}|
};

/// Observed order from three solves halving dx and dt together.
ConvergenceReport self_convergence(const InitialFn& y0, const ForcingFn& f, const BoundaryFn& g, BoundaryKind kind,
                                   const FdScheme& coarse, const UniformGrid& x_out, const UniformGrid& t_out);

}  // namespace halfline::reference
