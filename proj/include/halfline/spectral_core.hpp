#pragma once

// Fourier transforms, Sobolev and Bessel-potential norms, mixed space-time
// norms. Every estimate in the library is measured through this module.

#include <span>
#include <vector>

#include "halfline/types.hpp"

namespace halfline::spectral {

/// Discrete transform of uniformly sampled data on a zero-padded grid of
/// length >= padding * n. The result is ordered by increasing wavenumber
/// and follows the e^{-ikt} convention, trapezoid-weighted.
SpectralDensity fourier_transform(const TimeSignal& f, int padding = 8);
SpectralDensity fourier_transform(const SpaceProfile& f, int padding = 8);

/// Inverse of fourier_transform sampled at t0 + n dt, n < count. Samples at
/// or beyond support_end are zeroed.
TimeSignal inverse_fourier_transform(const SpectralDensity& f, double t0, double dt,
                                     std::size_t count, double support_end);

/// Direct quadrature of f^(k) = dt * sum_n e^{-ik t_n} f_n at one wavenumber.
cplx transform_at(const TimeSignal& f, double k);

/// Smooth evaluator of the transform of uniformly sampled, compactly supported
/// data at arbitrary wavenumbers. Values, first and second derivatives come
/// from three zero-padded FFTs and are combined by quintic Hermite
/// interpolation; the phase of the support midpoint is factored out first.
class SpectrumInterpolant {
 public:
  SpectrumInterpolant() = default;
  SpectrumInterpolant(std::span<const cplx> samples, double origin, double step, int padding = 64);
  explicit SpectrumInterpolant(const TimeSignal& f, int padding = 64);

  cplx operator()(double k) const;
  /// Largest wavenumber resolved by the sampling (pi / step).
  double k_nyquist() const { return k_nyquist_; }
  double grid_step() const { return dk_; }
  std::size_t grid_size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }

 private:
  std::vector<cplx> values_, first_, second_;  // ordered by increasing k
  double k_min_ = 0.0;
  double dk_ = 1.0;
  double center_ = 0.0;
  double k_nyquist_ = 0.0;
};

/// Inhomogeneous Sobolev norm: sqrt((1/2pi) int (1+k^2)^s |f^|^2 dk).
double sobolev_norm(const TimeSignal& f, double s);
double sobolev_norm(const SpaceProfile& f, double s);

struct HomogeneousNorm {
  double value = 0.0;
  /// Relative change between the fine evaluation and one at half resolution.
  double refinement_change = 0.0;
  /// True when |k|^{2s} is not integrable at k = 0 and f^(0) does not vanish;
  /// value then excludes a neighbourhood of the origin and is only a diagnostic.
  bool singular = false;
};

/// Homogeneous Sobolev norm: sqrt((1/2pi) int |k|^{2s} |f^|^2 dk).
HomogeneousNorm homogeneous_sobolev_norm(const TimeSignal& f, double s);
HomogeneousNorm homogeneous_sobolev_norm(const SpaceProfile& f, double s);

/// Plain grid L^p norm (p = inf gives the max).
double lp_norm(std::span<const cplx> values, double step, double p);

/// How a half-line profile is continued to the whole line before a Fourier
/// multiplier is applied.
enum class Extension {
  automatic,   ///< zero for s < 1/2, even for 1/2 <= s < 3/2, reflection beyond
  zero,        ///< extend by zero
  even,        ///< f(-x) = f(x)
  reflection,  ///< four-term higher-order reflection (C^3 across x = 0)
};

/// Extension used by Extension::automatic at smoothness s.
Extension resolve_extension(Extension requested, double s);

/// Values at x = -m dx, m = 1..count, of the chosen continuation of half-line
/// samples (sample i at x = i dx).
std::vector<cplx> continue_left(std::span<const cplx> half_line, std::size_t count, Extension kind);

/// Coefficients a_j of the reflection f(-x) = sum_j a_j f(j x), j = 1..4.
inline constexpr double kReflectionCoefficients[4] = {10.0, -20.0, 15.0, -4.0};

/// Values at x = -m dx, m = 1..count, of the reflected continuation of
/// half-line samples (sample i at x = i dx). Samples beyond the data are zero.
std::vector<cplx> reflect_left(std::span<const cplx> half_line, std::size_t count);

/// Bessel-potential norm ||(1 - d^2)^{s/2} f||_{L^r}, or ||D^s f||_{L^r} when
/// homogeneous. Accepts any r in [1, inf]. Half-line profiles are continued
/// to the whole line, filtered, and restricted back to x >= 0.
double bessel_lr_norm(const SpaceProfile& f, double s, double r, bool homogeneous = false,
                      Extension extension = Extension::automatic, int padding = kMinPadding);

/// W^{s,r} norm with r >= 2 (DomainError otherwise).
double w_sr_norm(const SpaceProfile& f, double s, const Exponent& r, bool homogeneous = false,
                 Extension extension = Extension::automatic);

/// Evaluates Bessel-potential L^r norms of many slices sharing one x-grid.
class SliceNorm {
 public:
  SliceNorm(UniformGrid x, Domain domain, double s, double r, bool homogeneous,
            Extension extension = Extension::automatic, int padding = kMinPadding);
  double operator()(std::span<const cplx> slice) const;

 private:
  UniformGrid x_;
  Domain domain_;
  double r_;
  Extension extension_;
  std::size_t left_;   // samples prepended for the continuation
  std::size_t n_fft_;
  std::vector<double> multiplier_;
  bool identity_;
};

/// L^lambda over the nodes of t inside [a, b] (trapezoid, max for lambda =
/// inf) of per-node values.
double time_lp(std::span<const double> values, const UniformGrid& t, double lambda, double a, double b);

/// L^lambda in time (trapezoid over the window nodes, max for lambda = inf)
/// of per-slice W^{s,r} norms over t in [a, b].
double mixed_norm(const Field2D& u, const NormSpec& spec, double a, double b,
                  Domain domain = Domain::half_line, bool homogeneous = false);

/// Same with plain real exponents; used for dual norms with exponents below 2.
double mixed_norm(const Field2D& u, double s, double lambda, double r, double a, double b,
                  Domain domain, bool homogeneous = false);

}  // namespace halfline::spectral
