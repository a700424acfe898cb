#include "halfline/types.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "halfline/errors.hpp"

namespace halfline {

UniformGrid UniformGrid::covering(double a, double b, double step) {
  if (!(step > 0.0)) throw DomainError("grid step must be positive");
  if (b < a) throw DomainError("grid end precedes grid start");
  const auto n = static_cast<std::size_t>(std::floor((b - a) / step + 1e-9)) + 1;
  return {a, step, n};
}

void TimeSignal::validate() const {
  if (!(dt > 0.0)) throw DomainError("TimeSignal: dt must be positive");
  if (samples.size() < 2) throw DomainError("TimeSignal: need at least two samples");
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (time(i) >= support_end - 1e-12 * dt && samples[i] != cplx{}) {
      throw DomainError("TimeSignal: nonzero sample at or beyond support_end");
    }
  }
}

TimeSignal TimeSignal::sample(const std::function<cplx(double)>& fn, double t0, double dt,
                              std::size_t n, double support_end) {
  TimeSignal s;
  s.t0 = t0;
  s.dt = dt;
  s.support_end = support_end;
  s.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = s.time(i);
    s.samples[i] = (t >= support_end - 1e-12 * dt) ? cplx{} : fn(t);
  }
  return s;
}

void SpaceProfile::validate() const {
  if (!(dx > 0.0)) throw DomainError("SpaceProfile: dx must be positive");
  if (samples.empty()) throw DomainError("SpaceProfile: no samples");
  if (domain == Domain::half_line && std::abs(x0) > 1e-12 * dx) {
    throw DomainError("SpaceProfile: half-line profiles must start at x = 0");
  }
}

SpaceProfile SpaceProfile::sample(const std::function<cplx(double)>& fn, double x0, double dx,
                                  std::size_t n, Domain domain) {
  SpaceProfile p;
  p.x0 = x0;
  p.dx = dx;
  p.domain = domain;
  p.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) p.samples[i] = fn(p.position(i));
  return p;
}

void SpectralDensity::validate() const {
  if (!(dk > 0.0)) throw DomainError("SpectralDensity: dk must be positive");
  if (values.empty()) throw DomainError("SpectralDensity: no values");
}

Field2D::Field2D(UniformGrid x_grid, UniformGrid t_grid)
    : x(x_grid), t(t_grid), values(x_grid.count * t_grid.count) {}

void Field2D::validate() const {
  if (values.size() != x.count * t.count) {
    throw DomainError("Field2D: grid descriptors do not match the array shape");
  }
  if (!(x.step > 0.0) || !(t.step > 0.0)) throw DomainError("Field2D: grid steps must be positive");
}

Field2D& Field2D::operator+=(const Field2D& other) {
  if (other.x.count != x.count || other.t.count != t.count) {
    throw DomainError("Field2D: shape mismatch in sum");
  }
  for (std::size_t i = 0; i < values.size(); ++i) values[i] += other.values[i];
  return *this;
}

Field2D& Field2D::operator*=(double factor) {
  for (auto& v : values) v *= factor;
  return *this;
}

Exponent::Exponent(std::int64_t inv_num, std::int64_t inv_den) {
  if (inv_den == 0) throw DomainError("Exponent: zero denominator");
  if (inv_den < 0) {
    inv_num = -inv_num;
    inv_den = -inv_den;
  }
  const std::int64_t g = std::gcd(inv_num < 0 ? -inv_num : inv_num, inv_den);
  inv_num_ = g == 0 ? 0 : inv_num / g;
  inv_den_ = g == 0 ? 1 : inv_den / g;
}

Exponent Exponent::rational(std::int64_t numerator, std::int64_t denominator) {
  if (numerator <= 0 || denominator <= 0) throw DomainError("Exponent: must be positive");
  if (numerator < denominator) throw DomainError("Exponent: must be at least 1");
  return Exponent(denominator, numerator);
}

Exponent Exponent::parse(const std::string& text) {
  if (text == "inf" || text == "infinity" || text == "oo") return infinity();
  const auto slash = text.find('/');
  try {
    if (slash != std::string::npos) {
      return rational(std::stoll(text.substr(0, slash)), std::stoll(text.substr(slash + 1)));
    }
    const auto dot = text.find('.');
    if (dot == std::string::npos) return rational(std::stoll(text));
    const std::string frac = text.substr(dot + 1);
    std::int64_t scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    const std::int64_t whole = std::stoll(text.substr(0, dot).empty() ? "0" : text.substr(0, dot));
    const std::int64_t part = frac.empty() ? 0 : std::stoll(frac);
    return rational(whole * scale + part, scale);
  } catch (const std::invalid_argument&) {
    throw ConfigError("cannot parse exponent '" + text + "'");
  } catch (const std::out_of_range&) {
    throw ConfigError("exponent out of range '" + text + "'");
  }
}

double Exponent::value() const {
  if (is_infinite()) return INFINITY;
  return static_cast<double>(inv_den_) / static_cast<double>(inv_num_);
}

Exponent Exponent::conjugate() const { return Exponent(inv_den_ - inv_num_, inv_den_); }

std::string Exponent::to_string() const {
  if (is_infinite()) return "inf";
  if (inv_den_ % inv_num_ == 0) return std::to_string(inv_den_ / inv_num_);
  return std::to_string(inv_den_) + "/" + std::to_string(inv_num_);
}

bool is_admissible(const Exponent& lambda, const Exponent& r) {
  // Both exponents must lie in [2, inf]: 0 <= 1/p <= 1/2.
  auto in_range = [](const Exponent& p) { return 2 * p.inv_num() <= p.inv_den(); };
  if (!in_range(lambda) || !in_range(r)) return false;
  // a/b + c/(2d) = 1/4  <=>  4(2ad + bc) = 2bd.
  const std::int64_t a = lambda.inv_num(), b = lambda.inv_den();
  const std::int64_t c = r.inv_num(), d = r.inv_den();
  return 4 * (2 * a * d + b * c) == 2 * b * d;
}

bool NormSpec::admissible() const { return is_admissible(lambda, r); }

std::string NormSpec::label() const {
  std::ostringstream out;
  out << "s=" << s << ",lambda=" << lambda.to_string() << ",r=" << r.to_string();
  return out.str();
}

void Diagnostics::merge(const Diagnostics& other, const std::string& prefix) {
  for (const auto& w : other.warnings) warnings.push_back(prefix + w);
  for (const auto& [k, v] : other.metrics) metrics[prefix + k] = v;
}

}  // namespace halfline
