#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "halfline/conventions.hpp"

namespace halfline {

/// Uniform 1-D grid: node i sits at start + i * step.
struct UniformGrid {
  double start = 0.0;
  double step = 1.0;
  std::size_t count = 0;

  double operator[](std::size_t i) const { return start + static_cast<double>(i) * step; }
  double back() const { return (*this)[count - 1]; }

  /// Grid covering [a, b] with the given step; b is included when it falls on a node.
  static UniformGrid covering(double a, double b, double step);

  bool operator==(const UniformGrid&) const = default;
};

/// Sampled function of time. Samples at t >= support_end are exactly zero.
struct TimeSignal {
  std::vector<cplx> samples;
  double t0 = 0.0;
  double dt = 1.0;
  double support_end = 0.0;

  std::size_t size() const { return samples.size(); }
  double time(std::size_t i) const { return t0 + static_cast<double>(i) * dt; }
  UniformGrid grid() const { return {t0, dt, samples.size()}; }

  /// Throws DomainError when dt <= 0, fewer than two samples, or the support
  /// invariant is broken.
  void validate() const;

  /// Samples fn on n nodes and zeroes everything at or beyond support_end.
  static TimeSignal sample(const std::function<cplx(double)>& fn, double t0, double dt,
                           std::size_t n, double support_end);
};

enum class Domain { full_line, half_line };

/// Sampled function of space. Half-line profiles start at x0 = 0.
struct SpaceProfile {
  std::vector<cplx> samples;
  double x0 = 0.0;
  double dx = 1.0;
  Domain domain = Domain::full_line;

  std::size_t size() const { return samples.size(); }
  double position(std::size_t i) const { return x0 + static_cast<double>(i) * dx; }
  UniformGrid grid() const { return {x0, dx, samples.size()}; }
  void validate() const;

  static SpaceProfile sample(const std::function<cplx(double)>& fn, double x0, double dx,
                             std::size_t n, Domain domain);
};

/// Sampled Fourier transform on k_min + j * dk.
struct SpectralDensity {
  std::vector<cplx> values;
  double k_min = 0.0;
  double dk = 1.0;
  bool one_sided = false;

  std::size_t size() const { return values.size(); }
  double wavenumber(std::size_t j) const { return k_min + static_cast<double>(j) * dk; }
  void validate() const;
};

/// Space-time array indexed (t, x), stored t-major.
struct Field2D {
  UniformGrid x;
  UniformGrid t;
  std::vector<cplx> values;

  Field2D() = default;
  Field2D(UniformGrid x_grid, UniformGrid t_grid);

  cplx& operator()(std::size_t it, std::size_t ix) { return values[it * x.count + ix]; }
  const cplx& operator()(std::size_t it, std::size_t ix) const { return values[it * x.count + ix]; }

  std::span<cplx> slice(std::size_t it) { return {values.data() + it * x.count, x.count}; }
  std::span<const cplx> slice(std::size_t it) const {
    return {values.data() + it * x.count, x.count};
  }

  void validate() const;
  Field2D& operator+=(const Field2D& other);
  Field2D& operator*=(double factor);
};

/// Lebesgue exponent in [1, inf], stored as an exact reciprocal p = den/num
/// so that infinity is simply 1/p = 0.
class Exponent {
 public:
  constexpr Exponent() = default;
  static Exponent infinity() { return Exponent(0, 1); }
  static Exponent rational(std::int64_t numerator, std::int64_t denominator = 1);
  /// Accepts "inf", "8", "8/3" or a terminating decimal such as "2.5".
  static Exponent parse(const std::string& text);

  bool is_infinite() const { return inv_num_ == 0; }
  double value() const;
  double reciprocal() const { return static_cast<double>(inv_num_) / static_cast<double>(inv_den_); }
  /// Hoelder conjugate p' with 1/p + 1/p' = 1.
  Exponent conjugate() const;
  std::string to_string() const;

  std::int64_t inv_num() const { return inv_num_; }
  std::int64_t inv_den() const { return inv_den_; }
  bool operator==(const Exponent&) const = default;

 private:
  Exponent(std::int64_t inv_num, std::int64_t inv_den);
  // 1/p = inv_num_ / inv_den_, reduced, inv_den_ > 0.
  std::int64_t inv_num_ = 1;
  std::int64_t inv_den_ = 2;
};

/// (s, lambda, r) triple for an L^lambda_t W^{s,r}_x norm.
struct NormSpec {
  double s = 0.0;
  Exponent lambda = Exponent::infinity();
  Exponent r = Exponent::rational(2);

  bool admissible() const;
  std::string label() const;
};

/// 1/lambda + 1/(2r) = 1/4 with 2 <= lambda, r <= inf, in exact arithmetic.
bool is_admissible(const Exponent& lambda, const Exponent& r);

/// Numerical side-channel: warnings and named measurements collected during a run.
struct Diagnostics {
  std::vector<std::string> warnings;
  std::map<std::string, double> metrics;

  void warn(std::string message) { warnings.push_back(std::move(message)); }
  void record(const std::string& key, double value) { metrics[key] = value; }
  void merge(const Diagnostics& other, const std::string& prefix = "");
};

}  // namespace halfline
