#pragma once

// Spatial extension of half-line initial data and the mean-zero temporal
// extension used by the inhomogeneous Neumann construction.

#include "halfline/types.hpp"

namespace halfline::extension {

struct ExtensionReport {
  double norm_in = 0.0;
  double norm_out = 0.0;
  double bound_constant = 0.0;  ///< norm_out / norm_in, 0 for zero input
};

struct ExtendedProfile {
  SpaceProfile profile;
  ExtensionReport report;
};

/// The reflected profile alone, without the norm report.
SpaceProfile reflect_profile(const SpaceProfile& y0);

/// Four-term Hestenes reflection y*(-x) = sum_j a_j y(j x) onto [-X, X]. The
/// result agrees with y0 on x >= 0 sample for sample and is C^3 across 0.
/// The report compares H^s(R) of y* with H^s(R+) of y0. Throws for s > 3.
ExtendedProfile extend_initial(const SpaceProfile& y0, double s);

struct MeanZeroExtension {
  TimeSignal he;
  ExtensionReport report;  ///< H^{(2s-1)/4} norms of h_e against h
  double cancelled_mass = 0.0;
};

/// h_e = h on [0, T'), minus a multiple of a C-infinity bump supported on
/// [T' + 1/4, 2T' + 3/4] chosen so that the discrete integral of h_e vanishes.
/// The output lives on [0, 2T' + 1) with the step of h. The report uses the
/// index (2s-1)/4.
MeanZeroExtension mean_zero_extension(const TimeSignal& h, double T_prime, double s = 0.5);

/// H(t) = int_{-inf}^t h_e by fourth-order cumulative quadrature. Throws
/// ContractViolation unless the integral of h_e vanishes.
TimeSignal antiderivative(const TimeSignal& he);

}  // namespace halfline::extension
