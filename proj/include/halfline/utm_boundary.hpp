#pragma once

// Half-line representation of the boundary-forced problem
//     y_t + P y = 0 (x > 0),  y(x, 0) = 0,  B y(0, t) = h(t),
// with B the Dirichlet or Neumann trace, split into
//     u1(x,t) = int_0^inf e^{-kx + ik^2 t} H1^(k) dk           (imaginary leg)
//     u2(x,t) = (1/2pi) int_0^inf e^{ikx - ik^2 t} H2^(k) dk    (real leg)
// where
//     Dirichlet: H1^(k) = (1/pi) k h^(k^2),   H2^(k) = 2k h^(-k^2)
//     Neumann:   H1^(k) = -(1/pi) h^(k^2),    H2^(k) = -2i h^(-k^2)
// for k >= 0 and both vanish for k < 0.

#include <functional>
#include <string>
#include <vector>

#include "halfline/extension_ops.hpp"
#include "halfline/spectral_core.hpp"
#include "halfline/types.hpp"

namespace halfline::utm {

enum class BoundaryKind { dirichlet, neumann };
std::string to_string(BoundaryKind kind);
BoundaryKind parse_kind(const std::string& text);

using SpectralFunction = std::function<cplx(double)>;

/// Transform of the boundary datum with the quantities the evaluators need:
/// h^ at any real argument, the moments int t^n h dt, and the support.
class BoundarySpectrum {
 public:
  explicit BoundarySpectrum(const TimeSignal& h, int padding = 64);

  cplx hat(double tau) const { return interp_(tau); }
  cplx H1(BoundaryKind kind, double k) const;
  cplx H2(BoundaryKind kind, double k) const;
  /// Taylor coefficients of H2^ at k = 0+ (index = power of k).
  std::vector<cplx> H2_taylor(BoundaryKind kind, int order) const;

  const TimeSignal& signal() const { return h_; }
  double support_start() const { return support_start_; }
  double support_end() const { return support_end_; }
  /// Largest k with k^2 inside the resolved band of the samples.
  double k_resolved() const { return std::sqrt(interp_.k_nyquist()); }
  bool is_zero() const { return zero_; }

 private:
  TimeSignal h_;
  spectral::SpectrumInterpolant interp_;
  std::vector<cplx> moments_;
  double support_start_ = 0.0;
  double support_end_ = 0.0;
  bool zero_ = true;
};

struct UtmOptions {
  double k_max = 0.0;             ///< 0 selects it from the tail criterion
  double tail_tolerance = 1e-20;  ///< neglected fraction of (1+k^2)^s |H_i^|^2
  double tail_s = 0.0;
  int quadrature_order = 16;      ///< Gauss-Legendre order per u1 panel
  double max_panel_phase = 10.0;  ///< radians of k^2 phase per u1 panel
  double box_factor = 5.0;        ///< u2 box half-width in units of the x extent
  int euler_maclaurin_terms = 5;  ///< endpoint corrections of the u2 mode sum
  int spectrum_padding = 64;
};

struct UtmGrids {
  UniformGrid x;  ///< half-line grid starting at 0
  UniformGrid t;
};

struct UtmDecomposition {
  Field2D u1;
  Field2D u2;
  SpectralDensity H1;
  SpectralDensity H2;
  Diagnostics diagnostics;

  Field2D total() const;
};

/// Cut-off wavenumber where the neglected tail of (1+k^2)^s |H_i^|^2 drops
/// below tol of its total, and that tail fraction.
struct SpectralTail {
  double k_cut = 0.0;
  double tail_fraction = 0.0;   ///< neglected fraction beyond k_cut
  double unresolved = 0.0;      ///< fraction beyond the resolved band (truncation)
};
SpectralTail spectral_tail(const BoundarySpectrum& spec, BoundaryKind kind, int which, double s, double tol);

/// H_i^ sampled on k_grid; exact zeros at k < 0. One-sided when the grid starts at 0.
SpectralDensity build_H1(const TimeSignal& h, BoundaryKind kind, const UniformGrid& k_grid,
                         Diagnostics* diag = nullptr);
SpectralDensity build_H2(const TimeSignal& h, BoundaryKind kind, const UniformGrid& k_grid,
                         Diagnostics* diag = nullptr);

/// Sobolev norm (1/2pi int (1+k^2)^s |H_i^|^2 dk)^{1/2}, or with |k|^{2s}.
double H_norm(const BoundarySpectrum& spec, BoundaryKind kind, int which, double s, bool homogeneous,
              double k_max = 0.0);
/// L^p norm of H1 on the half line (the function whose Laplace transform is u1).
double H1_spectral_lp(const BoundarySpectrum& spec, BoundaryKind kind, double p, double k_max = 0.0);

/// Fast evaluator: composite Gauss-Legendre in k for u1 (dense products over
/// x and t, skipping nodes where e^{-kx} underflows), and an FFT mode sum with
/// Euler-Maclaurin endpoint corrections on a periodic box for u2.
class UtmEvaluator {
 public:
  UtmEvaluator(const TimeSignal& h, BoundaryKind kind, double x_max, double t_max, const UtmOptions& options = {},
               double dx_hint = 0.05);

  Field2D u1(const UniformGrid& x, const UniformGrid& t) const;
  Field2D u2(const UniformGrid& x, const UniformGrid& t) const;
  cplx u1_at(double x, double t) const;
  cplx u2_at(double x, double t) const;
  /// x-derivatives, for Neumann trace checks.
  cplx u1_x_at(double x, double t) const;
  cplx u2_x_at(double x, double t) const;

  const BoundarySpectrum& spectrum() const { return spec_; }
  BoundaryKind kind() const { return kind_; }
  double k_max_u1() const { return k1_; }
  double k_max_u2() const { return k2_; }
  std::size_t u1_nodes() const { return nodes_.size(); }
  const Diagnostics& diagnostics() const { return diag_; }

 private:
  BoundarySpectrum spec_;
  BoundaryKind kind_;
  UtmOptions opt_;
  double x_max_, t_max_;
  double k1_ = 0.0, k2_ = 0.0;
  std::vector<double> nodes_, weights_;
  std::vector<cplx> h1w_;  // w_q * H1^(k_q)
  double x_box_ = 0.0;      // half-width of the periodic u2 box
  double dk_probe_ = 0.0;   // mode spacing used by the pointwise u2 sums
  std::vector<cplx> h2_modes_;
  std::vector<cplx> taylor_;
  mutable Diagnostics diag_;
};

Field2D evaluate_u1(const SpectralFunction& H1, double k_max, const UniformGrid& x, const UniformGrid& t,
                    double t_span, const UtmOptions& options = {});
/// Interpolates the density with a local cubic before integrating.
Field2D evaluate_u1(const SpectralDensity& H1, const UniformGrid& x, const UniformGrid& t,
                    const UtmOptions& options = {});

/// Cauchy switch: H2 = inverse transform of the one-sided H2^ on a periodic
/// box, evolved freely and restricted to the half-line grid. The optional
/// Taylor coefficients of H2^ at 0+ enable endpoint corrections of the mode sum.
Field2D evaluate_u2(const SpectralFunction& H2, const UniformGrid& x, const UniformGrid& t,
                    const UtmOptions& options = {}, const std::vector<cplx>& taylor = {},
                    Diagnostics* diag = nullptr);
Field2D evaluate_u2(const SpectralDensity& H2, const UniformGrid& x, const UniformGrid& t,
                    const UtmOptions& options = {});

struct ContourValue {
  cplx value{};
  cplx imaginary_leg{};
  cplx real_leg{};
  double error_estimate = 0.0;
  bool converged = true;
};

/// Literal quadrature of both legs of the contour with h~(k^2, T') formed by a
/// time sum at every k. Slow; independent of the interpolated spectrum.
ContourValue direct_contour_eval(const TimeSignal& h, BoundaryKind kind, double x, double t,
                                 double k_max = 0.0, double tol = 1e-11);

UtmDecomposition utm_solve(const TimeSignal& h, BoundaryKind kind, const UtmGrids& grids,
                           const UtmOptions& options = {});

struct InhomogeneousNeumann {
  UtmDecomposition decomposition;      ///< on the requested grid, t <= T'
  extension::MeanZeroExtension extension;
  TimeSignal antiderivative;
  double T_prime = 0.0;
  double h_norm = 0.0;                 ///< |h|_{H^{(2s-1)/4}}
  double H_norm = 0.0;                 ///< |H|_{H^{(2s+3)/4}}
  double H1_norm = 0.0;                ///< |H1|_{H^s}
  double H2_norm = 0.0;                ///< |H2|_{H^s}
};

/// Neumann data with nonzero mean: solve with the mean-zero extension h_e on
/// [0, 2T'+1) and report the norm chain with its (1 + T') bookkeeping.
InhomogeneousNeumann neumann_inhomogeneous_solve(const TimeSignal& h, double T_prime, const UtmGrids& grids,
                                                 double s = 0.5, const UtmOptions& options = {});

struct ReunifyGrids {
  UniformGrid x;          ///< output half-line grid, starts at 0
  UniformGrid t;          ///< output times, a subset of the forcing time grid
  double T = 1.0;         ///< data horizon; T' = 1.25 T
  double dt_boundary = 1e-3;  ///< boundary-signal step when no forcing is given
  int padding = 4;
};

struct ReunifyResult {
  Field2D y;
  Field2D v, z, u;
  TimeSignal h;           ///< boundary datum seen by the boundary solve, after the cutoff
  double T_prime = 0.0;
  Diagnostics diagnostics;
};

/// y = v|_{R+} + z|_{R+} + u with v the free evolution of the extended y0, z
/// the Duhamel integral of the extended forcing, and u the boundary solve for
/// h = g - B v(0,.) - B z(0,.), cut off smoothly on (T, T'). An empty forcing
/// field means f = 0. g shorter than T' is held at its last value.
ReunifyResult reunify_solve(const SpaceProfile& y0, const Field2D& f, const TimeSignal& g, BoundaryKind kind,
                            const ReunifyGrids& grids, const UtmOptions& options = {});

}  // namespace halfline::utm
