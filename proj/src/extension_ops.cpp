#include "halfline/extension_ops.hpp"

#include <cmath>

#include "halfline/errors.hpp"
#include "halfline/spectral_core.hpp"
#include "halfline/special.hpp"

namespace halfline::extension {

SpaceProfile reflect_profile(const SpaceProfile& y0) {
  y0.validate();
  if (y0.domain != Domain::half_line) throw DomainError("reflect_profile: expects a half-line profile");
  const std::size_t n = y0.size();
  const std::size_t left = n - 1;
  SpaceProfile p;
  p.domain = Domain::full_line;
  p.dx = y0.dx;
  p.x0 = -static_cast<double>(left) * y0.dx;
  const auto reflected = spectral::reflect_left(y0.samples, left);
  p.samples.resize(left + n);
  for (std::size_t m = 1; m <= left; ++m) p.samples[left - m] = reflected[m - 1];
  for (std::size_t i = 0; i < n; ++i) p.samples[left + i] = y0.samples[i];
  return p;
}

ExtendedProfile extend_initial(const SpaceProfile& y0, double s) {
  if (y0.domain != Domain::half_line) throw DomainError("extend_initial: expects a half-line profile");
  if (s > 3.0) throw DomainError("extend_initial: reflection order supports s <= 3 only");
  if (s < 0.0) throw DomainError("extend_initial: negative smoothness index");
  ExtendedProfile out;
  out.profile = reflect_profile(y0);
  out.report.norm_in = spectral::sobolev_norm(y0, s);
  out.report.norm_out = spectral::sobolev_norm(out.profile, s);
  out.report.bound_constant = out.report.norm_in > 0.0 ? out.report.norm_out / out.report.norm_in : 0.0;
  return out;
}

MeanZeroExtension mean_zero_extension(const TimeSignal& h, double T_prime, double s) {
  if (!(T_prime > 0.0)) throw DomainError("mean_zero_extension: T' must be positive");
  h.validate();
  if (std::abs(h.t0) > 1e-12 * h.dt) throw DomainError("mean_zero_extension: h must start at t = 0");
  if (h.support_end > T_prime + 1e-12 * h.dt) {
    throw DomainError("mean_zero_extension: supp h must lie in [0, T')");
  }
  const double end = 2.0 * T_prime + 1.0;
  const auto count = static_cast<std::size_t>(std::ceil(end / h.dt - 1e-9));
  MeanZeroExtension out;
  TimeSignal& he = out.he;
  he.t0 = 0.0;
  he.dt = h.dt;
  he.support_end = end;
  he.samples.assign(count, cplx{});
  cplx mass{};
  for (std::size_t i = 0; i < h.size() && i < count; ++i) {
    he.samples[i] = h.samples[i];
    mass += h.samples[i];
  }
  const double a = T_prime + 0.25;
  const double b = 2.0 * T_prime + 0.75;
  const double c = 0.5 * (a + b);
  const double w = 0.5 * (b - a);
  std::vector<double> bump(count);
  double bump_mass = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    bump[i] = special::mollifier((he.time(i) - c) / w);
    bump_mass += bump[i];
  }
  const cplx scale = mass / bump_mass;
  for (std::size_t i = 0; i < count; ++i) he.samples[i] -= scale * bump[i];
  out.cancelled_mass = std::abs(mass) * h.dt;

  const double index = (2.0 * s - 1.0) / 4.0;
  out.report.norm_in = spectral::sobolev_norm(h, index);
  out.report.norm_out = spectral::sobolev_norm(he, index);
  out.report.bound_constant = out.report.norm_in > 0.0 ? out.report.norm_out / out.report.norm_in : 0.0;
  return out;
}

TimeSignal antiderivative(const TimeSignal& he) {
  he.validate();
  cplx total{};
  double scale = 0.0;
  for (const cplx& v : he.samples) {
    total += v;
    scale += std::abs(v);
  }
  if (std::abs(total) > 1e-10 * scale) throw ContractViolation("antiderivative: input does not have mean zero");
  const std::size_t n = he.size();
  auto at = [&](long i) { return (i < 0 || i >= static_cast<long>(n)) ? cplx{} : he.samples[static_cast<std::size_t>(i)]; };
  TimeSignal H;
  H.t0 = he.t0;
  H.dt = he.dt;
  H.support_end = he.support_end;
  H.samples.assign(n, cplx{});
  cplx acc{};
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const long j = static_cast<long>(i);
    acc += he.dt / 24.0 * (-at(j - 1) + 13.0 * at(j) + 13.0 * at(j + 1) - at(j + 2));
    H.samples[i + 1] = acc;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (H.time(i) >= H.support_end - 1e-12 * H.dt) H.samples[i] = 0.0;
  }
  return H;
}

}  // namespace halfline::extension
