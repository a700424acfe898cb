#pragma once

// Conventions shared by every module.
//
// Fourier transform (time or space):
//     f^(k) = \int e^{-ikt} f(t) dt,      f(t) = (1/2pi) \int e^{ikt} f^(k) dk.
// With this choice the boundary transform over a finite window,
//     h~(k^2, T') = \int_0^{T'} e^{ik^2 s} h(s) ds,
// equals f^(-k^2) whenever supp h lies in [0, T').
//
// Operator: P = -i d^2/dx^2, evolution y_t + P y = 0, so the free propagator
// acts on Fourier modes as e^{-ik^2 t}.
//
// Contour: the boundary of the first quadrant is traversed as the positive
// imaginary axis from i*inf down to 0 (k = i*kappa), then the positive real
// axis from 0 to inf. With this orientation the imaginary leg is u1 and the
// real leg is u2, and both the spectral split and the direct contour
// quadrature produce the same field.
//
// Sobolev norms are normalized so that H^0 is the plain L^2 norm:
//     |f|_{H^s}^2 = (1/2pi) \int (1+k^2)^s |f^(k)|^2 dk.

#include <complex>
#include <numbers>

namespace halfline {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;
inline constexpr cplx I{0.0, 1.0};

/// Ratio of the extended boundary window T' to the data horizon T.
inline constexpr double kTimeWindowFactor = 1.25;

/// Minimum zero-padding factor used by every transform.
inline constexpr int kMinPadding = 4;

}  // namespace halfline
