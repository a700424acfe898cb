#pragma once

// Oscillatory kernels of the half-line representation and uniform decay scans.
//
//   F(t, beta)        = int_0^inf e^{itk^2 - beta k} dk,  Re beta >= 0
//   ell(tau; x, t, b) = int_0^b e^{-kx + ik^2 t - ik tau} dk
//   I(tau, t, k)      = ell(tau; 0, t, k)
//   L(x, y, t, s; b)  = 2 pi ell(0; x + y, -(t - s), b)

#include <string>
#include <vector>

#include "halfline/quadrature.hpp"
#include "halfline/types.hpp"

namespace halfline::kernel {

/// F(t, beta) through the Faddeeva function; t != 0 or Re beta > 0.
cplx half_line_fresnel(double t, cplx beta);

cplx kernel_ell(double tau, double x, double t, double b);
cplx fresnel_partial(double k, double tau, double t);
cplx double_kernel_L(double x, double y, double t, double s, double b);

/// Adaptive-quadrature evaluations of the same integrals, for cross-checks.
quad::Result kernel_ell_quadrature(double tau, double x, double t, double b, double tol = 1e-12);
quad::Result fresnel_partial_quadrature(double k, double tau, double t, double tol = 1e-12);

struct KernelSample {
  double tau = 0.0, x = 0.0, t = 0.0, b = 0.0;
  cplx value{};
};

enum class ScanKernel { fresnel, ell, double_kernel };
std::string to_string(ScanKernel k);

struct ScanConfig {
  std::vector<ScanKernel> kernels{ScanKernel::fresnel, ScanKernel::ell, ScanKernel::double_kernel};
  double tau_min = -50.0, tau_max = 50.0;
  std::size_t tau_points = 101;
  double t_min = 1e-2, t_max = 10.0;
  std::size_t t_points = 25;
  std::vector<double> x_values{0.0, 0.1, 1.0, 10.0};
  std::vector<double> b_values{1e2, 1e3, 1e4};
  double k_max = 100.0;  ///< upper end of the Fresnel k-grid
  std::size_t k_points = 101;
  int refine = 2;        ///< factor applied to every grid for the refinement ratio
};

/// Per-kernel scan outcome. The scanned quantity is sqrt|t| |kernel|.
struct DecayReport {
  ScanKernel kernel = ScanKernel::fresnel;
  double sup = 0.0;                ///< sup over the base grids
  double sup_refined = 0.0;        ///< sup with every grid refined
  double refinement_ratio = 0.0;   ///< sup_refined / sup
  double sup_b_doubled = 0.0;      ///< sup with every b (or the k-range) doubled
  double b_ratio = 0.0;            ///< sup_b_doubled / sup
  KernelSample argmax;             ///< where the base sup is attained
  std::vector<double> t_values;    ///< base t-grid
  std::vector<double> sup_per_t;   ///< sup over the other variables at each t
  std::size_t evaluations = 0;
};

/// Runs the requested scans; an empty grid yields reports with no constants.
std::vector<DecayReport> decay_scan(const ScanConfig& config);

/// CSV rows "kernel,t,sup" for every report.
std::string scan_csv(const std::vector<DecayReport>& reports);

}  // namespace halfline::kernel
