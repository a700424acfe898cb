#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "halfline/conventions.hpp"

namespace halfline::quad {

struct Result {
  cplx value{};
  double error_estimate = 0.0;
  std::size_t evaluations = 0;
  bool converged = true;
};

struct AdaptiveOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
  int max_depth = 40;
  std::size_t max_evaluations = 50'000'000;
};

/// Adaptive Gauss-Kronrod (7/15) quadrature of a complex integrand over
/// [a, b], starting from the given break points (sorted, inside [a, b]).
Result gauss_kronrod(const std::function<cplx(double)>& f, double a, double b,
                     const std::vector<double>& breaks = {}, const AdaptiveOptions& opt = {});

/// Composite Gauss-Legendre nodes over consecutive panels [edges[i], edges[i+1]].
struct CompositeRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
CompositeRule composite_gauss_legendre(const std::vector<double>& edges, int order);

/// Break points on [0, k_max] so that the quadratic phase k^2 * t_span changes
/// by at most max_phase per panel; panels also stay at most max_width wide.
std::vector<double> chirp_panels(double k_max, double t_span, double max_phase, double max_width);

}  // namespace halfline::quad
