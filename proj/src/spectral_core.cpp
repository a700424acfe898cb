#include "halfline/spectral_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "halfline/errors.hpp"
#include "halfline/fft.hpp"
#include "halfline/special.hpp"

namespace halfline::spectral {
namespace {

SpectralDensity transform_samples(std::span<const cplx> samples, double origin, double step,
                                  int padding) {
  if (padding < 1) throw DomainError("fourier_transform: padding must be positive");
  const std::size_t m = samples.size();
  const std::size_t n = fft::good_size(std::max<std::size_t>(m * static_cast<std::size_t>(padding), 2));
  std::vector<cplx> buf(n);
  std::copy(samples.begin(), samples.end(), buf.begin());
  fft::forward(buf);
  const double dk = two_pi / (static_cast<double>(n) * step);
  const long q_min = -static_cast<long>(n / 2);
  SpectralDensity out;
  out.dk = dk;
  out.k_min = static_cast<double>(q_min) * dk;
  out.values.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const long q = q_min + static_cast<long>(j);
    const std::size_t bin = static_cast<std::size_t>((q + static_cast<long>(n)) % static_cast<long>(n));
    const double k = static_cast<double>(q) * dk;
    out.values[j] = step * std::polar(1.0, -k * origin) * buf[bin];
  }
  return out;
}

void check_resolution(const TimeSignal& f) {
  f.validate();
  if (f.support_end <= f.t0) return;
  const double inside = (std::min(f.support_end, f.time(f.size() - 1) + f.dt) - f.t0) / f.dt;
  if (inside < 4.0) throw ResolutionError("fourier_transform: fewer than four samples resolve the support");
}

// Weighted spectral integral (1/2pi) int w(k) |f^(k)|^2 dk over the resolved band.
// The weight is either (1+k^2)^s or |k|^p; the latter is integrated near the
// origin with a Gauss-Jacobi rule so the algebraic singularity costs nothing.
struct WeightedIntegral {
  double value = 0.0;
  double coarse = 0.0;
  bool singular = false;
};

WeightedIntegral weighted_integral(const SpectrumInterpolant& spec, double width, bool homogeneous,
                                   double exponent) {
  WeightedIntegral out;
  const double K = spec.k_nyquist();
  const double w = std::min(K, 6.0 / width);
  auto weight = [&](double k) {
    return homogeneous ? std::pow(std::abs(k), exponent) : std::pow(1.0 + k * k, exponent);
  };
  auto power = [&](double k) { return std::norm(spec(k)); };

  // Outer panels [w, K] and [-K, -w], evaluated at two resolutions.
  auto outer = [&](double panel, int order) {
    const auto& rule = special::gauss_legendre(order);
    const std::size_t count = static_cast<std::size_t>(std::ceil((K - w) / panel - 1e-12));
    double acc = 0.0;
    if (count == 0) return acc;
    const double h = (K - w) / static_cast<double>(count);
    for (std::size_t p = 0; p < count; ++p) {
      const double c = w + (static_cast<double>(p) + 0.5) * h;
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double k = c + 0.5 * h * rule.nodes[i];
        acc += 0.5 * h * rule.weights[i] * weight(k) * (power(k) + power(-k));
      }
    }
    return acc;
  };

  double inner_fine = 0.0, inner_coarse = 0.0;
  if (!homogeneous) {
    for (int order : {24, 12}) {
      const auto& rule = special::gauss_legendre(order);
      double acc = 0.0;
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double k = w * rule.nodes[i];
        acc += w * rule.weights[i] * weight(k) * power(k);
      }
      (order == 24 ? inner_fine : inner_coarse) = acc;
    }
  } else {
    // |k|^p |f^|^2 on [0, w]: with f^(0) = 0 the factor k^2 is absorbed into
    // the Jacobi weight so non-integrable p down to -3 remain usable.
    double peak = 0.0;
    for (int i = 0; i <= 64; ++i) peak = std::max(peak, power(w * i / 64.0));
    const bool mean_zero = power(0.0) <= 1e-24 * std::max(peak, 1e-300);
    double beta = exponent;
    bool divide = false;
    if (exponent <= -1.0) {
      if (!mean_zero || exponent <= -3.0) {
        out.singular = true;
      } else {
        beta = exponent + 2.0;
        divide = true;
      }
    }
    if (!out.singular) {
      for (int order : {24, 12}) {
        const auto rule = special::gauss_jacobi(order, 0.0, beta);
        double acc = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
          const double k = 0.5 * w * (1.0 + rule.nodes[i]);
          double g = power(k) + power(-k);
          if (divide) g /= k * k;
          acc += std::pow(0.5 * w, beta + 1.0) * rule.weights[i] * g;
        }
        (order == 24 ? inner_fine : inner_coarse) = acc;
      }
    }
  }
  out.value = (inner_fine + outer(w, 16)) / two_pi;
  out.coarse = (inner_coarse + outer(2.0 * w, 16)) / two_pi;
  return out;
}

SpaceProfile to_full_line(const SpaceProfile& f, Extension extension, double s) {
  if (f.domain == Domain::full_line) return f;
  const std::size_t n = f.size();
  const std::size_t left = n - 1;
  SpaceProfile g;
  g.domain = Domain::full_line;
  g.dx = f.dx;
  g.x0 = -static_cast<double>(left) * f.dx;
  g.samples.assign(left, cplx{});
  const auto r = continue_left(f.samples, left, resolve_extension(extension, s));
  for (std::size_t m = 1; m <= left; ++m) g.samples[left - m] = r[m - 1];
  g.samples.insert(g.samples.end(), f.samples.begin(), f.samples.end());
  return g;
}

double span_width(std::size_t n, double step) { return static_cast<double>(n) * step; }

}  // namespace

SpectralDensity fourier_transform(const TimeSignal& f, int padding) {
  check_resolution(f);
  return transform_samples(f.samples, f.t0, f.dt, std::max(padding, kMinPadding));
}

SpectralDensity fourier_transform(const SpaceProfile& f, int padding) {
  f.validate();
  const SpaceProfile g = to_full_line(f, Extension::zero, 0.0);
  return transform_samples(g.samples, g.x0, g.dx, std::max(padding, kMinPadding));
}

TimeSignal inverse_fourier_transform(const SpectralDensity& f, double t0, double dt,
                                     std::size_t count, double support_end) {
  f.validate();
  if (dt <= 0.0 || count < 2) throw DomainError("inverse_fourier_transform: invalid target grid");
  const double ratio = two_pi / (f.dk * dt);
  const auto n = static_cast<std::size_t>(std::llround(ratio));
  TimeSignal out;
  out.t0 = t0;
  out.dt = dt;
  out.support_end = support_end;
  out.samples.assign(count, cplx{});
  if (n >= count && std::abs(ratio - static_cast<double>(n)) < 1e-9 * ratio) {
    // f(t_j) = (dk/2pi) e^{i k_min t_j} sum_m F_m e^{i m dk t0} e^{2 pi i m j / n}
    std::vector<cplx> buf(n);
    for (std::size_t m = 0; m < f.size(); ++m) {
      buf[m % n] += f.values[m] * std::polar(1.0, static_cast<double>(m) * f.dk * t0);
    }
    fft::backward(buf);
    for (std::size_t j = 0; j < count; ++j) {
      const double t = t0 + static_cast<double>(j) * dt;
      out.samples[j] = f.dk / two_pi * std::polar(1.0, f.k_min * t) * buf[j];
    }
  } else {
    for (std::size_t j = 0; j < count; ++j) {
      const double t = t0 + static_cast<double>(j) * dt;
      cplx acc{};
      for (std::size_t m = 0; m < f.size(); ++m) acc += f.values[m] * std::polar(1.0, f.wavenumber(m) * t);
      out.samples[j] = f.dk / two_pi * acc;
    }
  }
  for (std::size_t j = 0; j < count; ++j) {
    if (out.time(j) >= support_end) out.samples[j] = 0.0;
  }
  return out;
}

cplx transform_at(const TimeSignal& f, double k) {
  cplx acc{};
  for (std::size_t n = 0; n < f.size(); ++n) acc += f.samples[n] * std::polar(1.0, -k * f.time(n));
  return f.dt * acc;
}

SpectrumInterpolant::SpectrumInterpolant(std::span<const cplx> samples, double origin, double step,
                                         int padding) {
  if (samples.empty() || step <= 0.0) throw DomainError("SpectrumInterpolant: empty or invalid grid");
  const std::size_t m = samples.size();
  const std::size_t n = fft::good_size(std::max<std::size_t>(m * static_cast<std::size_t>(std::max(padding, kMinPadding)), 8));
  const double half = 0.5 * static_cast<double>(m - 1) * step;
  center_ = origin + half;
  dk_ = two_pi / (static_cast<double>(n) * step);
  k_nyquist_ = pi / step;
  std::vector<cplx> a(n), b(n), c(n);
  for (std::size_t j = 0; j < m; ++j) {
    const double u = static_cast<double>(j) * step - half;
    a[j] = samples[j];
    b[j] = -I * u * samples[j];
    c[j] = -u * u * samples[j];
  }
  fft::forward(a);
  fft::forward(b);
  fft::forward(c);
  const long q_lo = -static_cast<long>(n / 2);
  const long q_hi = static_cast<long>(n / 2) + 1;
  k_min_ = static_cast<double>(q_lo) * dk_;
  const std::size_t len = static_cast<std::size_t>(q_hi - q_lo + 1);
  values_.resize(len);
  first_.resize(len);
  second_.resize(len);
  for (std::size_t i = 0; i < len; ++i) {
    const long q = q_lo + static_cast<long>(i);
    const auto bin = static_cast<std::size_t>(((q % static_cast<long>(n)) + static_cast<long>(n)) % static_cast<long>(n));
    const double k = static_cast<double>(q) * dk_;
    const cplx phase = step * std::polar(1.0, k * half);
    values_[i] = phase * a[bin];
    first_[i] = phase * b[bin];
    second_[i] = phase * c[bin];
  }
}

SpectrumInterpolant::SpectrumInterpolant(const TimeSignal& f, int padding)
    : SpectrumInterpolant(f.samples, f.t0, f.dt, padding) {}

cplx SpectrumInterpolant::operator()(double k) const {
  if (values_.empty() || std::abs(k) > k_nyquist_) return 0.0;
  const double u = (k - k_min_) / dk_;
  auto j = static_cast<std::size_t>(std::floor(u));
  if (j + 1 >= values_.size()) j = values_.size() - 2;
  const double x = u - static_cast<double>(j);
  const double x2 = x * x, x3 = x2 * x, x4 = x3 * x, x5 = x4 * x;
  const double h0 = 1.0 - 10.0 * x3 + 15.0 * x4 - 6.0 * x5;
  const double h1 = x - 6.0 * x3 + 8.0 * x4 - 3.0 * x5;
  const double h2 = 0.5 * (x2 - 3.0 * x3 + 3.0 * x4 - x5);
  const double h3 = 10.0 * x3 - 15.0 * x4 + 6.0 * x5;
  const double h4 = -4.0 * x3 + 7.0 * x4 - 3.0 * x5;
  const double h5 = 0.5 * (x3 - 2.0 * x4 + x5);
  const cplx g = h0 * values_[j] + dk_ * h1 * first_[j] + dk_ * dk_ * h2 * second_[j] +
                 h3 * values_[j + 1] + dk_ * h4 * first_[j + 1] + dk_ * dk_ * h5 * second_[j + 1];
  return g * std::polar(1.0, -k * center_);
}

double sobolev_norm(const TimeSignal& f, double s) {
  check_resolution(f);
  const SpectrumInterpolant spec(f);
  return std::sqrt(std::max(0.0, weighted_integral(spec, span_width(f.size(), f.dt), false, s).value));
}

double sobolev_norm(const SpaceProfile& f, double s) {
  f.validate();
  if (f.domain == Domain::half_line) return bessel_lr_norm(f, s, 2.0);
  const SpaceProfile& g = f;
  const SpectrumInterpolant spec(g.samples, g.x0, g.dx);
  return std::sqrt(std::max(0.0, weighted_integral(spec, span_width(g.size(), g.dx), false, s).value));
}

namespace {
HomogeneousNorm homogeneous_from(const SpectrumInterpolant& spec, double width, double s) {
  const WeightedIntegral w = weighted_integral(spec, width, true, 2.0 * s);
  HomogeneousNorm out;
  out.singular = w.singular;
  out.value = std::sqrt(std::max(0.0, w.value));
  const double coarse = std::sqrt(std::max(0.0, w.coarse));
  out.refinement_change = out.value > 0.0 ? std::abs(out.value - coarse) / out.value : 0.0;
  return out;
}
}  // namespace

HomogeneousNorm homogeneous_sobolev_norm(const TimeSignal& f, double s) {
  check_resolution(f);
  const SpectrumInterpolant spec(f);
  return homogeneous_from(spec, span_width(f.size(), f.dt), s);
}

HomogeneousNorm homogeneous_sobolev_norm(const SpaceProfile& f, double s) {
  f.validate();
  if (f.domain == Domain::half_line) {
    // Restriction norm of the continued profile; the multiplier |k|^s needs s >= 0 here.
    HomogeneousNorm out;
    out.value = bessel_lr_norm(f, s, 2.0, true);
    return out;
  }
  const SpectrumInterpolant spec(f.samples, f.x0, f.dx);
  return homogeneous_from(spec, span_width(f.size(), f.dx), s);
}

double lp_norm(std::span<const cplx> values, double step, double p) {
  if (std::isinf(p)) {
    double m = 0.0;
    for (const cplx& v : values) m = std::max(m, std::abs(v));
    return m;
  }
  if (p == 2.0) {
    double acc = 0.0;
    for (const cplx& v : values) acc += std::norm(v);
    return std::sqrt(step * acc);
  }
  double peak = 0.0;
  for (const cplx& v : values) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) return 0.0;
  double acc = 0.0;
  for (const cplx& v : values) acc += std::pow(std::abs(v) / peak, p);
  return peak * std::pow(step * acc, 1.0 / p);
}

std::vector<cplx> reflect_left(std::span<const cplx> half_line, std::size_t count) {
  std::vector<cplx> out(count);
  for (std::size_t m = 1; m <= count; ++m) {
    cplx acc{};
    for (std::size_t j = 1; j <= 4; ++j) {
      const std::size_t idx = j * m;
      if (idx < half_line.size()) acc += kReflectionCoefficients[j - 1] * half_line[idx];
    }
    out[m - 1] = acc;
  }
  return out;
}

Extension resolve_extension(Extension requested, double s) {
  if (requested != Extension::automatic) return requested;
  if (s < 0.5) return Extension::zero;
  return s < 1.5 ? Extension::even : Extension::reflection;
}

std::vector<cplx> continue_left(std::span<const cplx> half_line, std::size_t count, Extension kind) {
  switch (resolve_extension(kind, 0.0)) {
    case Extension::reflection:
      return reflect_left(half_line, count);
    case Extension::even: {
      std::vector<cplx> out(count);
      for (std::size_t m = 1; m <= count && m < half_line.size(); ++m) out[m - 1] = half_line[m];
      return out;
    }
    default:
      return std::vector<cplx>(count);
  }
}

SliceNorm::SliceNorm(UniformGrid x, Domain domain, double s, double r, bool homogeneous,
                     Extension extension, int padding)
    : x_(x), domain_(domain), r_(r) {
  if (x.count < 2 || x.step <= 0.0) throw DomainError("SliceNorm: invalid x-grid");
  if (r < 1.0) throw DomainError("SliceNorm: exponent below 1");
  if (s < 0.0) throw DomainError("SliceNorm: negative smoothness index");
  identity_ = s == 0.0;
  extension_ = domain == Domain::half_line ? resolve_extension(extension, s) : Extension::zero;
  left_ = domain == Domain::half_line ? x.count - 1 : 0;
  n_fft_ = fft::good_size(static_cast<std::size_t>(std::max(padding, kMinPadding)) * (x.count + left_));
  if (identity_) return;
  multiplier_.resize(n_fft_);
  const double dk = two_pi / (static_cast<double>(n_fft_) * x.step);
  for (std::size_t j = 0; j < n_fft_; ++j) {
    const double k = static_cast<double>(fft::signed_index(j, n_fft_)) * dk;
    multiplier_[j] = (homogeneous ? std::pow(std::abs(k), s) : std::pow(1.0 + k * k, 0.5 * s)) /
                     static_cast<double>(n_fft_);
  }
}

double SliceNorm::operator()(std::span<const cplx> slice) const {
  if (slice.size() != x_.count) throw DomainError("SliceNorm: slice length mismatch");
  if (identity_) return lp_norm(slice, x_.step, r_);
  std::vector<cplx> buf(n_fft_);
  // Data occupies [left_, left_ + count); the continuation sits to its left.
  std::copy(slice.begin(), slice.end(), buf.begin() + static_cast<long>(left_));
  if (extension_ != Extension::zero) {
    const auto r = continue_left(slice, left_, extension_);
    for (std::size_t m = 1; m <= left_; ++m) buf[left_ - m] = r[m - 1];
  }
  fft::forward(buf);
  for (std::size_t j = 0; j < n_fft_; ++j) buf[j] *= multiplier_[j];
  fft::backward(buf);
  return lp_norm(std::span<const cplx>(buf).subspan(left_, x_.count), x_.step, r_);
}

double bessel_lr_norm(const SpaceProfile& f, double s, double r, bool homogeneous,
                      Extension extension, int padding) {
  f.validate();
  return SliceNorm(f.grid(), f.domain, s, r, homogeneous, extension, padding)(f.samples);
}

double w_sr_norm(const SpaceProfile& f, double s, const Exponent& r, bool homogeneous,
                 Extension extension) {
  if (r.reciprocal() > 0.5) throw DomainError("w_sr_norm: r must be at least 2");
  return bessel_lr_norm(f, s, r.value(), homogeneous, extension);
}

double time_lp(std::span<const double> values, const UniformGrid& t, double lambda, double a, double b) {
  if (values.size() != t.count) throw DomainError("time_lp: one value per time node expected");
  const double eps = 1e-9 * t.step;
  std::size_t first = t.count, last = 0;
  for (std::size_t i = 0; i < t.count; ++i) {
    if (t[i] >= a - eps && t[i] <= b + eps) {
      first = std::min(first, i);
      last = i;
    }
  }
  if (first == t.count || b < a) throw DomainError("time_lp: empty time window");
  const auto window = values.subspan(first, last - first + 1);
  const double peak = *std::max_element(window.begin(), window.end());
  if (std::isinf(lambda)) return peak;
  if (peak == 0.0 || window.size() < 2) return 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < window.size(); ++i) {
    acc += 0.5 * t.step * (std::pow(window[i] / peak, lambda) + std::pow(window[i + 1] / peak, lambda));
  }
  return peak * std::pow(acc, 1.0 / lambda);
}

double mixed_norm(const Field2D& u, double s, double lambda, double r, double a, double b,
                  Domain domain, bool homogeneous) {
  u.validate();
  const SliceNorm norm(u.x, domain, s, r, homogeneous);
  std::vector<double> values(u.t.count, 0.0);
  const double eps = 1e-9 * u.t.step;
  for (std::size_t i = 0; i < u.t.count; ++i) {
    if (u.t[i] >= a - eps && u.t[i] <= b + eps) values[i] = norm(u.slice(i));
  }
  return time_lp(values, u.t, lambda, a, b);
}

double mixed_norm(const Field2D& u, const NormSpec& spec, double a, double b, Domain domain,
                  bool homogeneous) {
  if (spec.r.reciprocal() > 0.5 || spec.lambda.reciprocal() > 0.5) {
    throw DomainError("mixed_norm: exponents must be at least 2");
  }
  return mixed_norm(u, spec.s, spec.lambda.value(), spec.r.value(), a, b, domain, homogeneous);
}

}  // namespace halfline::spectral
