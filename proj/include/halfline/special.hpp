#pragma once

#include <vector>

#include "halfline/conventions.hpp"

namespace halfline::special {

/// Faddeeva function w(z) = e^{-z^2} erfc(-iz), valid on the whole plane.
/// Upper half-plane evaluation uses Weideman's rational approximation for
/// |z| <= 6 and the Laplace continued fraction beyond; the lower half-plane
/// follows from w(z) = 2 e^{-z^2} - w(-z).
cplx faddeeva(cplx z);

/// C-infinity bump exp(1 - 1/(1 - u^2)) on |u| < 1, normalized to 1 at u = 0.
double mollifier(double u);

/// Derivative of mollifier with respect to u.
double mollifier_derivative(double u);

/// C-infinity step: 1 for t <= a, 0 for t >= b, monotone in between.
double smooth_step_down(double t, double a, double b);

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1].
const QuadratureRule& gauss_legendre(int n);

/// n-point Gauss-Jacobi rule on [-1, 1] for the weight (1-x)^alpha (1+x)^beta,
/// alpha, beta > -1 (Golub-Welsch).
QuadratureRule gauss_jacobi(int n, double alpha, double beta);

}  // namespace halfline::special
