#include "halfline/utm_boundary.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "halfline/cauchy_solver.hpp"
#include "halfline/errors.hpp"
#include "halfline/fft.hpp"
#include "halfline/quadrature.hpp"
#include "halfline/special.hpp"

namespace halfline::utm {
namespace {

// e^{-kx} below this exponent is dropped from the u1 sums.
constexpr double kDampingCutoff = 36.0;
// Bernoulli numbers B_{2m} / (2m) for the Euler-Maclaurin endpoint terms.
constexpr double kEulerMaclaurin[5] = {1.0 / 12.0, -1.0 / 120.0, 1.0 / 252.0, -1.0 / 240.0, 1.0 / 132.0};
// Spectral energy lost to the sampling of h below this fraction is not worth a warning.
constexpr double kUnresolvedWarning = 1e-12;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

double signal_l1(const TimeSignal& h) {
  double acc = 0.0;
  for (const cplx& v : h.samples) acc += std::abs(v);
  return acc * h.dt;
}

// Spectral energy (1+k^2)^s |H_i^|^2 beyond each k on [0, k_resolved],
// sampled finely enough to follow the oscillation of |h^(k^2)| in k and
// accumulated from the top so that tiny tails keep their relative accuracy.
struct TailProfile {
  std::vector<double> k, tail;

  double total() const { return tail.empty() ? 0.0 : tail.front(); }
  double fraction_beyond(double kc) const {
    if (total() <= 0.0) return 0.0;
    const auto it = std::lower_bound(k.begin(), k.end(), kc);
    if (it == k.end()) return 0.0;
    return tail[static_cast<std::size_t>(it - k.begin())] / total();
  }
};

TailProfile tail_profile(const BoundarySpectrum& spec, BoundaryKind kind, int which, double s) {
  TailProfile p;
  const double k_end = spec.k_resolved();
  const double width = std::max(spec.support_end() - spec.support_start(), 4.0 * spec.signal().dt);
  std::vector<double> f;
  double k = 0.0;
  while (true) {
    const cplx v = which == 1 ? spec.H1(kind, k) : spec.H2(kind, k);
    p.k.push_back(k);
    f.push_back(std::pow(1.0 + k * k, s) * std::norm(v));
    if (k >= k_end) break;
    k = std::min(k_end, k + std::min(0.02, 1.0 / (8.0 * width * std::max(k, 1e-9))));
  }
  p.tail.assign(p.k.size(), 0.0);
  for (std::size_t j = p.k.size() - 1; j-- > 0;) {
    p.tail[j] = p.tail[j + 1] + 0.5 * (f[j] + f[j + 1]) * (p.k[j + 1] - p.k[j]);
  }
  return p;
}

// Composite Gauss-Legendre rule for the imaginary leg: each panel carries at
// most max_phase radians of k^2 t phase, and is narrow enough for e^{-kx}
// wherever that factor is not negligible (kx <= 36 means x <= 36/k).
quad::CompositeRule u1_rule(double k_max, double t_span, double x_max, double max_phase, int order,
                            double max_width = 1e300) {
  std::vector<double> edges{0.0};
  double k = 0.0;
  const double decay_width = 10.0 / std::max(x_max, 1e-3);
  while (k < k_max) {
    double w = std::min(max_width, std::max(decay_width, 0.25 * k));
    if (t_span > 0.0) w = std::min(w, std::sqrt(k * k + max_phase / t_span) - k);
    k = std::min(k_max, k + w);
    edges.push_back(k);
  }
  return quad::composite_gauss_legendre(edges, order);
}

// u1 on a grid from nodes k_q and weighted values c_q = w_q H1^(k_q):
// u1(x_i, t_n) = sum_q e^{ik_q^2 t_n} c_q e^{-k_q x_i}, evaluated as two real
// matrix products per block, with nodes dropped where e^{-k x} underflows.
Field2D u1_field(const std::vector<double>& nodes, const std::vector<cplx>& c, const UniformGrid& x,
                 const UniformGrid& t) {
  Field2D out(x, t);
  const std::size_t nq = nodes.size();
  if (nq == 0 || x.count == 0 || t.count == 0) return out;
  constexpr std::size_t kXBlock = 32;
  constexpr std::size_t kTBlock = 32;
  // Damping matrices per x block, truncated to the node prefix that matters.
  struct XBlock {
    std::size_t first, count, q_end;
    Eigen::MatrixXd damping;  // q_end x count
  };
  std::vector<XBlock> blocks;
  for (std::size_t i0 = 0; i0 < x.count; i0 += kXBlock) {
    XBlock b;
    b.first = i0;
    b.count = std::min(kXBlock, x.count - i0);
    const double x_min = std::max(0.0, std::min(x[i0], x[i0 + b.count - 1]));
    b.q_end = nq;
    if (x_min > 0.0) {
      b.q_end = static_cast<std::size_t>(
          std::upper_bound(nodes.begin(), nodes.end(), kDampingCutoff / x_min) - nodes.begin());
    }
    b.damping.resize(static_cast<Eigen::Index>(b.q_end), static_cast<Eigen::Index>(b.count));
    for (std::size_t i = 0; i < b.count; ++i) {
      for (std::size_t q = 0; q < b.q_end; ++q) {
        b.damping(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(i)) = std::exp(-nodes[q] * x[i0 + i]);
      }
    }
    blocks.push_back(std::move(b));
  }
  Eigen::MatrixXd re, im;
  for (std::size_t n0 = 0; n0 < t.count; n0 += kTBlock) {
    const std::size_t nt = std::min(kTBlock, t.count - n0);
    re.resize(static_cast<Eigen::Index>(nt), static_cast<Eigen::Index>(nq));
    im.resize(static_cast<Eigen::Index>(nt), static_cast<Eigen::Index>(nq));
    for (std::size_t q = 0; q < nq; ++q) {
      const double k2 = nodes[q] * nodes[q];
      for (std::size_t n = 0; n < nt; ++n) {
        const cplx v = std::polar(1.0, k2 * t[n0 + n]) * c[q];
        re(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(q)) = v.real();
        im(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(q)) = v.imag();
      }
    }
    for (const XBlock& b : blocks) {
      const auto qe = static_cast<Eigen::Index>(b.q_end);
      const Eigen::MatrixXd pr = re.leftCols(qe) * b.damping;
      const Eigen::MatrixXd pi_ = im.leftCols(qe) * b.damping;
      for (std::size_t n = 0; n < nt; ++n) {
        for (std::size_t i = 0; i < b.count; ++i) {
          out(n0 + n, b.first + i) = {pr(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(i)),
                                      pi_(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(i))};
        }
      }
    }
  }
  return out;
}

cplx u1_point(const std::vector<double>& nodes, const std::vector<cplx>& c, double x, double t, bool derivative) {
  cplx acc{};
  for (std::size_t q = 0; q < nodes.size(); ++q) {
    const double kx = nodes[q] * x;
    if (kx > kDampingCutoff) break;
    cplx term = c[q] * std::polar(std::exp(-kx), nodes[q] * nodes[q] * t);
    if (derivative) term *= -nodes[q];
    acc += term;
  }
  return acc;
}

// Euler-Maclaurin endpoint terms at k = 0 for (1/2pi) int_0^inf G(k) dk with
// G = H2^(k) e^{ikx - ik^2 t}, or its x-derivative (extra factor ik):
// sum_m B_{2m}/(2m)! dk^{2m} G^{(2m-1)}(0) / 2pi.
cplx euler_maclaurin(const std::vector<cplx>& taylor, int terms, double dk, double x, double t, bool derivative) {
  if (taylor.empty() || terms <= 0) return {};
  terms = std::min(terms, 5);
  const int P = 2 * terms - 1;
  // Taylor coefficients of e^{ikx - ik^2 t}.
  std::array<cplx, 10> px{}, pt{}, d{};
  px[0] = pt[0] = 1.0;
  for (int q = 1; q <= P; ++q) {
    px[static_cast<std::size_t>(q)] = px[static_cast<std::size_t>(q - 1)] * (I * x) / static_cast<double>(q);
    pt[static_cast<std::size_t>(q)] = pt[static_cast<std::size_t>(q - 1)] * (-I * t) / static_cast<double>(q);
  }
  for (int q = 0; q <= P; ++q) {
    cplx acc{};
    for (int b = 0; 2 * b <= q; ++b) acc += px[static_cast<std::size_t>(q - 2 * b)] * pt[static_cast<std::size_t>(b)];
    d[static_cast<std::size_t>(q)] = acc;
  }
  auto c = [&](int a) -> cplx {
    if (derivative) {
      if (a == 0) return {};
      return a - 1 < static_cast<int>(taylor.size()) ? I * taylor[static_cast<std::size_t>(a - 1)] : cplx{};
    }
    return a < static_cast<int>(taylor.size()) ? taylor[static_cast<std::size_t>(a)] : cplx{};
  };
  cplx total{};
  double dk_pow = dk * dk;
  for (int m = 1; m <= terms; ++m) {
    const int p = 2 * m - 1;
    cplx g{};
    for (int a = 0; a <= p; ++a) g += c(a) * d[static_cast<std::size_t>(p - a)];
    // G^{(p)}(0) = p! g_p and B_{2m}/(2m)! * p! = B_{2m}/(2m).
    total += kEulerMaclaurin[m - 1] * dk_pow * g;
    dk_pow *= dk * dk;
  }
  return total / two_pi;
}

// Local cubic (four-point Lagrange) interpolation of a sampled density.
SpectralFunction density_function(const SpectralDensity& f) {
  return [f](double k) -> cplx {
    if (f.values.empty()) return {};
    if (f.one_sided && k < 0.0) return {};
    const double u = (k - f.k_min) / f.dk;
    const auto n = static_cast<long>(f.values.size());
    if (u < 0.0 || u > static_cast<double>(n - 1)) return {};
    long j = static_cast<long>(std::floor(u)) - 1;
    j = std::clamp(j, 0L, std::max(0L, n - 4));
    if (n < 4) {
      const long i = std::clamp(static_cast<long>(std::lround(u)), 0L, n - 1);
      return f.values[static_cast<std::size_t>(i)];
    }
    cplx acc{};
    for (long a = 0; a < 4; ++a) {
      double w = 1.0;
      for (long b = 0; b < 4; ++b) {
        if (b != a) w *= (u - static_cast<double>(j + b)) / static_cast<double>(a - b);
      }
      acc += w * f.values[static_cast<std::size_t>(j + a)];
    }
    return acc;
  };
}

struct U2Box {
  double dx = 0.0;
  std::size_t n = 0;
  double dk = 0.0;
  double x_start = 0.0;
};

// Periodic box for u2 on the lattice of x: fine enough for modes up to k_top
// and wide enough that no wave reaches an image before t_max.
U2Box make_box(const UniformGrid& x, double k_top, double t_max, double box_factor) {
  U2Box b;
  const double x_max = std::max(x.count ? x.back() : 0.0, 1.0);
  const int m = std::max(1, static_cast<int>(std::ceil(k_top * x.step / (0.9 * pi))));
  b.dx = x.step / m;
  const double half = std::max(box_factor * x_max, x_max + 1.1 * k_top * std::abs(t_max) + 10.0);
  b.n = fft::good_size(static_cast<std::size_t>(std::ceil(2.0 * half / b.dx)));
  b.dk = two_pi / (static_cast<double>(b.n) * b.dx);
  b.x_start = x.start - static_cast<double>(b.n / 2) * b.dx;
  return b;
}

Field2D u2_field(const SpectralFunction& H2, const U2Box& box, const UniformGrid& x, const UniformGrid& t,
                 const std::vector<cplx>& taylor, int em_terms, Diagnostics* diag) {
  std::vector<cplx> modes(box.n);
  for (std::size_t j = 0; j < (box.n + 1) / 2; ++j) {
    const double k = static_cast<double>(j) * box.dk;
    const double w = j == 0 ? 0.5 : 1.0;
    modes[j] = (box.dk / two_pi) * w * H2(k) * std::polar(1.0, k * box.x_start);
  }
  fft::backward(modes);
  // The inverse transform of the one-sided H2^, as an initial datum on the box.
  SpaceProfile H2_profile{std::move(modes), box.x_start, box.dx, Domain::full_line};
  cauchy::EvolutionOptions opt;
  opt.padding = 1;
  opt.x_out = x;
  // The box is sized by make_box; the compact-support horizon check of the
  // Cauchy solver does not apply to a datum that fills the box.
  Diagnostics evolution;
  Field2D u2 = cauchy::free_evolution(H2_profile, t, opt, &evolution);
  if (diag) diag->record("u2_box_nodes", static_cast<double>(box.n));
  if (!taylor.empty()) {
    for (std::size_t n = 0; n < t.count; ++n) {
      for (std::size_t i = 0; i < x.count; ++i) u2(n, i) += euler_maclaurin(taylor, em_terms, box.dk, x[i], t[n], false);
    }
  }
  return u2;
}

double t_extent(const UniformGrid& t) {
  if (t.count == 0) return 0.0;
  return std::max(std::abs(t.start), std::abs(t.back()));
}

void check_half_line(const UniformGrid& x, const char* who) {
  if (x.count == 0) throw DomainError(std::string(who) + ": empty x-grid");
  if (x.start < 0.0) throw DomainError(std::string(who) + ": x-grid must lie in x >= 0");
}

}  // namespace

std::string to_string(BoundaryKind kind) { return kind == BoundaryKind::dirichlet ? "dirichlet" : "neumann"; }

BoundaryKind parse_kind(const std::string& text) {
  if (text == "dirichlet") return BoundaryKind::dirichlet;
  if (text == "neumann") return BoundaryKind::neumann;
  throw ConfigError("unknown boundary kind '" + text + "' (expected dirichlet or neumann)");
}

BoundarySpectrum::BoundarySpectrum(const TimeSignal& h, int padding) : h_(h) {
  h_.validate();
  std::size_t first = h_.size(), last = 0;
  for (std::size_t i = 0; i < h_.size(); ++i) {
    if (h_.samples[i] != cplx{}) {
      first = std::min(first, i);
      last = i;
    }
  }
  zero_ = first == h_.size();
  support_start_ = zero_ ? h_.t0 : h_.time(first);
  support_end_ = zero_ ? h_.t0 : h_.time(last) + h_.dt;
  interp_ = spectral::SpectrumInterpolant(h_, padding);
  // Moments int t^n h dt with the same rectangle sum that defines h^.
  moments_.assign(10, cplx{});
  for (std::size_t i = first; i <= last && !zero_; ++i) {
    const double t = h_.time(i);
    double tp = 1.0;
    for (auto& m : moments_) {
      m += tp * h_.samples[i];
      tp *= t;
    }
  }
  for (auto& m : moments_) m *= h_.dt;
}

cplx BoundarySpectrum::H1(BoundaryKind kind, double k) const {
  if (k < 0.0) return {};
  const cplx v = interp_(k * k);
  return kind == BoundaryKind::dirichlet ? k * v / pi : -v / pi;
}

cplx BoundarySpectrum::H2(BoundaryKind kind, double k) const {
  if (k < 0.0) return {};
  const cplx v = interp_(-k * k);
  return kind == BoundaryKind::dirichlet ? 2.0 * k * v : -2.0 * I * v;
}

std::vector<cplx> BoundarySpectrum::H2_taylor(BoundaryKind kind, int order) const {
  // h^(-k^2) = sum_n (ik^2)^n m_n / n!.
  std::vector<cplx> c(static_cast<std::size_t>(std::max(order, 0) + 1));
  for (int n = 0; n < static_cast<int>(moments_.size()); ++n) {
    const cplx a = std::pow(I, n) * moments_[static_cast<std::size_t>(n)] / std::tgamma(n + 1.0);
    const int p = kind == BoundaryKind::dirichlet ? 2 * n + 1 : 2 * n;
    if (p > order) break;
    c[static_cast<std::size_t>(p)] = kind == BoundaryKind::dirichlet ? 2.0 * a : -2.0 * I * a;
  }
  return c;
}

Field2D UtmDecomposition::total() const {
  Field2D u = u1;
  u += u2;
  return u;
}

SpectralTail spectral_tail(const BoundarySpectrum& spec, BoundaryKind kind, int which, double s, double tol) {
  SpectralTail out;
  if (spec.is_zero()) return out;
  const TailProfile p = tail_profile(spec, kind, which, s);
  if (p.total() <= 0.0) return out;
  out.k_cut = p.k.back();
  for (std::size_t j = 0; j < p.k.size(); ++j) {
    if (p.tail[j] <= tol * p.total()) {
      out.k_cut = p.k[j];
      break;
    }
  }
  out.tail_fraction = p.fraction_beyond(out.k_cut);
  out.unresolved = p.fraction_beyond(0.9 * p.k.back());
  return out;
}

namespace {

SpectralDensity build_density(const TimeSignal& h, BoundaryKind kind, const UniformGrid& k_grid, int which,
                              Diagnostics* diag) {
  const BoundarySpectrum spec(h);
  SpectralDensity out;
  out.k_min = k_grid.start;
  out.dk = k_grid.step;
  out.one_sided = k_grid.start >= 0.0;
  out.values.resize(k_grid.count);
  for (std::size_t j = 0; j < k_grid.count; ++j) {
    out.values[j] = which == 1 ? spec.H1(kind, k_grid[j]) : spec.H2(kind, k_grid[j]);
  }
  if (diag && !spec.is_zero() && k_grid.count > 0) {
    const TailProfile p = tail_profile(spec, kind, which, 0.0);
    const double beyond = p.fraction_beyond(k_grid.back());
    const std::string name = which == 1 ? "H1" : "H2";
    diag->record(name + "_tail_beyond_grid", beyond);
    if (beyond > 1e-10) {
      diag->warn(name + ": k-grid ends at " + fmt(k_grid.back()) + " below the bandwidth of h; neglected " +
                 "fraction of the spectral energy ~ " + fmt(beyond));
    }
  }
  return out;
}

}  // namespace

SpectralDensity build_H1(const TimeSignal& h, BoundaryKind kind, const UniformGrid& k_grid, Diagnostics* diag) {
  return build_density(h, kind, k_grid, 1, diag);
}

SpectralDensity build_H2(const TimeSignal& h, BoundaryKind kind, const UniformGrid& k_grid, Diagnostics* diag) {
  return build_density(h, kind, k_grid, 2, diag);
}

double H_norm(const BoundarySpectrum& spec, BoundaryKind kind, int which, double s, bool homogeneous,
              double k_max) {
  if (spec.is_zero()) return 0.0;
  if (homogeneous && s <= -0.5) throw DomainError("H_norm: homogeneous index must exceed -1/2");
  const double K = k_max > 0.0 ? k_max : spec.k_resolved();
  const double width = std::max(spec.support_end() - spec.support_start(), 4.0 * spec.signal().dt);
  const auto edges = quad::chirp_panels(K, width, 3.0, 0.25);
  auto value = [&](double k) { return which == 1 ? spec.H1(kind, k) : spec.H2(kind, k); };
  double acc = 0.0;
  const auto& gl = special::gauss_legendre(16);
  for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
    const double a = edges[p], b = edges[p + 1];
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    if (homogeneous && p == 0 && s < 0.0) {
      // k^{2s} on [0, b] via Gauss-Jacobi in the weight (1 + u)^{2s}.
      const auto gj = special::gauss_jacobi(16, 0.0, 2.0 * s);
      for (std::size_t j = 0; j < gj.nodes.size(); ++j) {
        const double k = c + h * gj.nodes[j];
        acc += gj.weights[j] * std::pow(h, 2.0 * s + 1.0) * std::norm(value(k));
      }
      continue;
    }
    for (std::size_t j = 0; j < gl.nodes.size(); ++j) {
      const double k = c + h * gl.nodes[j];
      const double w = homogeneous ? (k > 0.0 ? std::pow(k, 2.0 * s) : 0.0) : std::pow(1.0 + k * k, s);
      acc += h * gl.weights[j] * w * std::norm(value(k));
    }
  }
  return std::sqrt(acc / two_pi);
}

double H1_spectral_lp(const BoundarySpectrum& spec, BoundaryKind kind, double p, double k_max) {
  if (spec.is_zero()) return 0.0;
  if (p < 1.0) throw DomainError("H1_spectral_lp: p must be at least 1");
  const double K = k_max > 0.0 ? k_max : spec.k_resolved();
  const double width = std::max(spec.support_end() - spec.support_start(), 4.0 * spec.signal().dt);
  const auto rule = quad::composite_gauss_legendre(quad::chirp_panels(K, width, 3.0, 0.25), 16);
  double acc = 0.0;
  for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
    const double a = std::abs(spec.H1(kind, rule.nodes[q]));
    if (std::isinf(p)) {
      acc = std::max(acc, a);
    } else {
      acc += rule.weights[q] * std::pow(a, p);
    }
  }
  return std::isinf(p) ? acc : std::pow(acc, 1.0 / p);
}

UtmEvaluator::UtmEvaluator(const TimeSignal& h, BoundaryKind kind, double x_max, double t_max,
                           const UtmOptions& options, double dx_hint)
    : spec_(h, options.spectrum_padding), kind_(kind), opt_(options), x_max_(std::max(x_max, 0.0)),
      t_max_(std::abs(t_max)) {
  if (dx_hint <= 0.0) throw DomainError("UtmEvaluator: dx_hint must be positive");
  if (spec_.is_zero()) return;
  const SpectralTail tail1 = spectral_tail(spec_, kind, 1, opt_.tail_s, opt_.tail_tolerance);
  const SpectralTail tail2 = spectral_tail(spec_, kind, 2, opt_.tail_s, opt_.tail_tolerance);
  k1_ = opt_.k_max > 0.0 ? opt_.k_max : tail1.k_cut;
  k2_ = opt_.k_max > 0.0 ? opt_.k_max : tail2.k_cut;
  diag_.record("k_max_u1", k1_);
  diag_.record("k_max_u2", k2_);
  diag_.record("tail_fraction_u1", tail1.tail_fraction);
  diag_.record("tail_fraction_u2", tail2.tail_fraction);
  const double unresolved = std::max(tail1.unresolved, tail2.unresolved);
  diag_.record("unresolved_fraction", unresolved);
  if (unresolved > std::max(opt_.tail_tolerance, kUnresolvedWarning)) {
    diag_.warn("boundary spectrum truncated at k = " + fmt(spec_.k_resolved()) +
               " by the sampling of h; spectral energy fraction near the cut ~ " + fmt(unresolved));
  }

  const double t_span = t_max_ + std::max(std::abs(spec_.support_end()), std::abs(spec_.support_start()));
  const quad::CompositeRule rule = u1_rule(k1_, t_span, x_max_, opt_.max_panel_phase, opt_.quadrature_order);
  nodes_ = rule.nodes;
  weights_ = rule.weights;
  h1w_.resize(nodes_.size());
  for (std::size_t q = 0; q < nodes_.size(); ++q) h1w_[q] = weights_[q] * spec_.H1(kind, nodes_[q]);
  diag_.record("u1_nodes", static_cast<double>(nodes_.size()));
  {
    // Error estimate at the least damped, most oscillatory point (0, t_max).
    const quad::CompositeRule fine =
        u1_rule(k1_, t_span, x_max_, opt_.max_panel_phase, opt_.quadrature_order + 8);
    std::vector<cplx> c(fine.nodes.size());
    for (std::size_t q = 0; q < c.size(); ++q) c[q] = fine.weights[q] * spec_.H1(kind, fine.nodes[q]);
    const cplx a = u1_point(nodes_, h1w_, 0.0, t_max_, false);
    const cplx b = u1_point(fine.nodes, c, 0.0, t_max_, false);
    diag_.record("u1_quadrature_error", std::abs(a - b));
  }

  // Pointwise u2 sums share the mode spacing of a field box at dx_hint.
  const U2Box box = make_box({0.0, dx_hint, static_cast<std::size_t>(x_max_ / dx_hint) + 1}, k2_, t_max_,
                             opt_.box_factor);
  x_box_ = 0.5 * static_cast<double>(box.n) * box.dx;
  dk_probe_ = box.dk;
  const std::size_t n_modes = static_cast<std::size_t>(std::ceil(1.2 * k2_ / dk_probe_)) + 1;
  h2_modes_.resize(n_modes);
  for (std::size_t j = 0; j < n_modes; ++j) h2_modes_[j] = spec_.H2(kind, static_cast<double>(j) * dk_probe_);
  taylor_ = spec_.H2_taylor(kind, 2 * opt_.euler_maclaurin_terms);
  diag_.record("u2_box_half_width", x_box_);
}

Field2D UtmEvaluator::u1(const UniformGrid& x, const UniformGrid& t) const {
  check_half_line(x, "evaluate_u1");
  return u1_field(nodes_, h1w_, x, t);
}

Field2D UtmEvaluator::u2(const UniformGrid& x, const UniformGrid& t) const {
  check_half_line(x, "evaluate_u2");
  if (spec_.is_zero()) return Field2D(x, t);
  const U2Box box = make_box(x, k2_, std::max(t_max_, t_extent(t)), opt_.box_factor);
  if (k2_ > pi / box.dx) diag_.warn("u2: box spacing cannot resolve the H2 bandwidth");
  auto H2 = [this](double k) { return spec_.H2(kind_, k); };
  return u2_field(H2, box, x, t, taylor_, opt_.euler_maclaurin_terms, &diag_);
}

cplx UtmEvaluator::u1_at(double x, double t) const { return u1_point(nodes_, h1w_, x, t, false); }

cplx UtmEvaluator::u1_x_at(double x, double t) const { return u1_point(nodes_, h1w_, x, t, true); }

cplx UtmEvaluator::u2_at(double x, double t) const {
  if (spec_.is_zero()) return {};
  cplx acc{};
  for (std::size_t j = 0; j < h2_modes_.size(); ++j) {
    const double k = static_cast<double>(j) * dk_probe_;
    const double w = j == 0 ? 0.5 : 1.0;
    acc += w * h2_modes_[j] * std::polar(1.0, k * x - k * k * t);
  }
  return acc * dk_probe_ / two_pi + euler_maclaurin(taylor_, opt_.euler_maclaurin_terms, dk_probe_, x, t, false);
}

cplx UtmEvaluator::u2_x_at(double x, double t) const {
  if (spec_.is_zero()) return {};
  cplx acc{};
  for (std::size_t j = 1; j < h2_modes_.size(); ++j) {
    const double k = static_cast<double>(j) * dk_probe_;
    acc += I * k * h2_modes_[j] * std::polar(1.0, k * x - k * k * t);
  }
  return acc * dk_probe_ / two_pi + euler_maclaurin(taylor_, opt_.euler_maclaurin_terms, dk_probe_, x, t, true);
}

namespace {

Field2D u1_from_function(const SpectralFunction& H1, double k_max, const UniformGrid& x, const UniformGrid& t,
                         double t_span, const UtmOptions& options, double max_width) {
  check_half_line(x, "evaluate_u1");
  if (k_max <= 0.0) return Field2D(x, t);
  const auto rule = u1_rule(k_max, std::max(t_span, t_extent(t)), x.back(), options.max_panel_phase,
                            options.quadrature_order, max_width);
  std::vector<cplx> c(rule.nodes.size());
  for (std::size_t q = 0; q < c.size(); ++q) c[q] = rule.weights[q] * H1(rule.nodes[q]);
  return u1_field(rule.nodes, c, x, t);
}

}  // namespace

Field2D evaluate_u1(const SpectralFunction& H1, double k_max, const UniformGrid& x, const UniformGrid& t,
                    double t_span, const UtmOptions& options) {
  return u1_from_function(H1, k_max, x, t, t_span, options, 1e300);
}

Field2D evaluate_u1(const SpectralDensity& H1, const UniformGrid& x, const UniformGrid& t,
                    const UtmOptions& options) {
  H1.validate();
  if (!H1.one_sided) throw ContractViolation("evaluate_u1: density must be one-sided");
  if (H1.values.empty()) return Field2D(x, t);
  // Panels no wider than the density spacing, so each carries one cubic piece.
  const double k_max = H1.wavenumber(H1.size() - 1);
  return u1_from_function(density_function(H1), k_max, x, t, t_extent(t), options, H1.dk);
}

Field2D evaluate_u2(const SpectralFunction& H2, const UniformGrid& x, const UniformGrid& t,
                    const UtmOptions& options, const std::vector<cplx>& taylor, Diagnostics* diag) {
  check_half_line(x, "evaluate_u2");
  const double t_max = t_extent(t);
  // First pass finds the bandwidth on a box at the x extent, the second sizes
  // the box so that no wave reaches a periodic image.
  U2Box box = make_box(x, 0.0, 0.0, options.box_factor);
  double k_top = 0.0, peak = 0.0;
  std::vector<double> mags((box.n + 1) / 2);
  for (std::size_t j = 0; j < mags.size(); ++j) {
    mags[j] = std::abs(H2(static_cast<double>(j) * box.dk));
    peak = std::max(peak, mags[j]);
  }
  if (peak == 0.0) return Field2D(x, t);
  for (std::size_t j = 0; j < mags.size(); ++j) {
    if (mags[j] > 1e-13 * peak) k_top = static_cast<double>(j + 1) * box.dk;
  }
  box = make_box(x, k_top, t_max, options.box_factor);
  return u2_field(H2, box, x, t, taylor, options.euler_maclaurin_terms, diag);
}

Field2D evaluate_u2(const SpectralDensity& H2, const UniformGrid& x, const UniformGrid& t,
                    const UtmOptions& options) {
  H2.validate();
  if (!H2.one_sided) throw ContractViolation("evaluate_u2: density must be one-sided");
  return evaluate_u2(density_function(H2), x, t, options);
}

ContourValue direct_contour_eval(const TimeSignal& h, BoundaryKind kind, double x, double t, double k_max,
                                 double tol) {
  h.validate();
  ContourValue out;
  if (x < 0.0) throw DomainError("direct_contour_eval: x must be non-negative");
  std::size_t first = h.size(), last = 0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (h.samples[i] != cplx{}) {
      first = std::min(first, i);
      last = i;
    }
  }
  if (first == h.size()) return out;
  if (k_max <= 0.0) {
    const BoundarySpectrum spec(h);
    k_max = std::max(spectral_tail(spec, kind, 1, 0.0, 1e-16).k_cut, spectral_tail(spec, kind, 2, 0.0, 1e-16).k_cut);
  }
  // The time sum is periodic in k^2 with period 2 pi / dt.
  k_max = std::min(k_max, std::sqrt(pi / h.dt));

  // h~(k^2) = int e^{ik^2 s} h(s) ds as a time sum with a recurrent phase.
  auto h_tilde = [&](double k2) {
    const cplx step = std::polar(1.0, k2 * h.dt);
    cplx phase = std::polar(1.0, k2 * h.time(first));
    cplx acc{};
    for (std::size_t i = first; i <= last; ++i) {
      acc += phase * h.samples[i];
      phase *= step;
    }
    return acc * h.dt;
  };
  // Integrand on the boundary of the first quadrant, with the spectral factor
  // 2k (Dirichlet) or -2i (Neumann) and the global 1/2pi.
  auto integrand = [&](cplx k) {
    const cplx m = kind == BoundaryKind::dirichlet ? 2.0 * k : -2.0 * I;
    const cplx k2 = k * k;
    return std::exp(I * k * x - I * k2 * t) * m * h_tilde(k2.real()) / two_pi;
  };
  const double reach = std::abs(t) + std::max(std::abs(h.time(first)), std::abs(h.time(last) + h.dt));
  const auto breaks = quad::chirp_panels(k_max, reach, 6.0, x > 0.0 ? std::max(4.0 / x, 0.05) : 1.0);
  quad::AdaptiveOptions opt;
  opt.rel_tol = tol;
  opt.abs_tol = tol * signal_l1(h) * std::max(1.0, k_max) / two_pi;
  opt.max_evaluations = 4'000'000;
  // Imaginary leg k = i kappa from i inf down to 0: dk = i dkappa, reversed.
  const quad::Result leg1 =
      quad::gauss_kronrod([&](double kappa) { return -I * integrand(I * kappa); }, 0.0, k_max, breaks, opt);
  const quad::Result leg2 = quad::gauss_kronrod([&](double k) { return integrand(k); }, 0.0, k_max, breaks, opt);
  out.imaginary_leg = leg1.value;
  out.real_leg = leg2.value;
  out.value = leg1.value + leg2.value;
  out.error_estimate = leg1.error_estimate + leg2.error_estimate;
  out.converged = leg1.converged && leg2.converged;
  return out;
}

UtmDecomposition utm_solve(const TimeSignal& h, BoundaryKind kind, const UtmGrids& grids, const UtmOptions& options) {
  check_half_line(grids.x, "utm_solve");
  if (grids.t.count == 0) throw DomainError("utm_solve: empty time grid");
  const UtmEvaluator ev(h, kind, grids.x.back(), t_extent(grids.t), options, grids.x.step);
  UtmDecomposition out;
  out.u1 = ev.u1(grids.x, grids.t);
  out.u2 = ev.u2(grids.x, grids.t);
  const double k_top = std::max(ev.k_max_u1(), ev.k_max_u2());
  const UniformGrid k_grid{0.0, k_top > 0.0 ? k_top / 2048.0 : 1.0, 2049};
  out.H1.values.resize(k_grid.count);
  out.H2.values.resize(k_grid.count);
  for (SpectralDensity* d : {&out.H1, &out.H2}) {
    d->k_min = 0.0;
    d->dk = k_grid.step;
    d->one_sided = true;
  }
  for (std::size_t j = 0; j < k_grid.count; ++j) {
    out.H1.values[j] = ev.spectrum().H1(kind, k_grid[j]);
    out.H2.values[j] = ev.spectrum().H2(kind, k_grid[j]);
  }
  out.diagnostics = ev.diagnostics();
  return out;
}

InhomogeneousNeumann neumann_inhomogeneous_solve(const TimeSignal& h, double T_prime, const UtmGrids& grids, double s,
                                                 const UtmOptions& options) {
  InhomogeneousNeumann out;
  out.T_prime = T_prime;
  out.extension = extension::mean_zero_extension(h, T_prime, s);
  out.antiderivative = extension::antiderivative(out.extension.he);
  UtmGrids restricted = grids;
  std::size_t count = 0;
  while (count < grids.t.count && grids.t[count] <= T_prime * (1.0 + 1e-12)) ++count;
  restricted.t.count = count;
  if (count == 0) throw DomainError("neumann_inhomogeneous_solve: no output time in [0, T']");
  out.decomposition = utm_solve(out.extension.he, BoundaryKind::neumann, restricted, options);
  const BoundarySpectrum spec(out.extension.he);
  out.h_norm = spectral::sobolev_norm(h, (2.0 * s - 1.0) / 4.0);
  out.H_norm = spectral::sobolev_norm(out.antiderivative, (2.0 * s + 3.0) / 4.0);
  out.H1_norm = H_norm(spec, BoundaryKind::neumann, 1, s, false);
  out.H2_norm = H_norm(spec, BoundaryKind::neumann, 2, s, false);
  auto& d = out.decomposition.diagnostics;
  d.record("T_prime", T_prime);
  d.record("one_plus_T_prime", 1.0 + T_prime);
  d.record("h_norm", out.h_norm);
  d.record("H_norm", out.H_norm);
  d.record("H1_norm", out.H1_norm);
  d.record("H2_norm", out.H2_norm);
  if (out.h_norm > 0.0) {
    d.record("H1_over_h", out.H1_norm / out.h_norm);
    d.record("H1_over_h_per_one_plus_T_prime", out.H1_norm / (out.h_norm * (1.0 + T_prime)));
  }
  return out;
}

namespace {

// Sample of g at time t: linear interpolation, held at its last value past the end.
cplx sample_boundary(const TimeSignal& g, double t) {
  if (g.size() == 0) return {};
  const double u = (t - g.t0) / g.dt;
  if (u <= 0.0) return g.samples.front();
  const double n_last = static_cast<double>(g.size() - 1);
  if (u >= n_last) return g.samples.back();
  const auto i = static_cast<std::size_t>(std::floor(u));
  const double w = u - static_cast<double>(i);
  return (1.0 - w) * g.samples[i] + w * g.samples[i + 1];
}

}  // namespace

ReunifyResult reunify_solve(const SpaceProfile& y0, const Field2D& f, const TimeSignal& g, BoundaryKind kind,
                            const ReunifyGrids& grids, const UtmOptions& options) {
  y0.validate();
  if (y0.domain != Domain::half_line || std::abs(y0.x0) > 1e-12) {
    throw DomainError("reunify_solve: y0 must be a half-line profile starting at 0");
  }
  check_half_line(grids.x, "reunify_solve");
  if (grids.T <= 0.0) throw DomainError("reunify_solve: T must be positive");
  if (grids.t.count == 0 || std::abs(grids.t.start) > 1e-12) {
    throw DomainError("reunify_solve: output times must start at 0");
  }
  ReunifyResult res;
  res.T_prime = kTimeWindowFactor * grids.T;
  const bool forced = !f.values.empty();
  const double dt_b = forced ? f.t.step : grids.dt_boundary;
  if (forced) {
    f.validate();
    if (std::abs(f.t.start) > 1e-12) throw DomainError("reunify_solve: forcing must start at t = 0");
    if (f.t.back() < res.T_prime - 1e-9 * dt_b) {
      throw DomainError("reunify_solve: forcing must cover [0, T'] with T' = 1.25 T");
    }
  }
  const long stride = std::lround(grids.t.step / dt_b);
  if (grids.t.count > 1 && (stride < 1 || std::abs(static_cast<double>(stride) * dt_b - grids.t.step) > 1e-9 * dt_b)) {
    throw DomainError("reunify_solve: output time step must be a multiple of the boundary step");
  }
  const std::size_t s = static_cast<std::size_t>(std::max(stride, 1L));
  const double t_end = std::max(res.T_prime, grids.t.back());
  const UniformGrid t_b{0.0, dt_b, static_cast<std::size_t>(std::ceil(t_end / dt_b - 1e-9)) + 1};

  cauchy::EvolutionOptions evo;
  evo.padding = grids.padding;
  evo.x_out = grids.x;

  // v: free evolution of the extended initial datum.
  const extension::ExtendedProfile y0s = extension::extend_initial(y0, 1.0);
  cauchy::EvolutionResult v = cauchy::free_evolution_with_traces(y0s.profile, t_b, s, evo, &res.diagnostics);

  // z: Duhamel integral of the extended forcing.
  cauchy::EvolutionResult z;
  if (forced) {
    Field2D f_star;
    for (std::size_t n = 0; n < f.t.count; ++n) {
      SpaceProfile slice{{f.slice(n).begin(), f.slice(n).end()}, f.x.start, f.x.step, Domain::half_line};
      const SpaceProfile ext = extension::reflect_profile(slice);
      if (n == 0) f_star = Field2D(ext.grid(), f.t);
      std::copy(ext.samples.begin(), ext.samples.end(), f_star.slice(n).begin());
    }
    z = cauchy::duhamel_with_traces(f_star, s, evo, &res.diagnostics);
  }

  // Boundary datum for the homogeneous-data problem, cut off on (T, T').
  std::vector<cplx> hb(t_b.count);
  for (std::size_t n = 0; n < t_b.count; ++n) {
    const double t = t_b[n];
    const TimeSignal& bv = kind == BoundaryKind::dirichlet ? v.traces.value : v.traces.derivative;
    cplx val = sample_boundary(g, t) - bv.samples[n];
    if (forced && n < z.traces.value.size()) {
      val -= (kind == BoundaryKind::dirichlet ? z.traces.value : z.traces.derivative).samples[n];
    }
    hb[n] = val * special::smooth_step_down(t, grids.T, res.T_prime);
    if (t >= res.T_prime) hb[n] = 0.0;
  }
  res.h = TimeSignal{std::move(hb), 0.0, dt_b, res.T_prime};
  double h_peak = 0.0;
  for (const cplx& v0 : res.h.samples) h_peak = std::max(h_peak, std::abs(v0));
  res.diagnostics.record("boundary_corner_value", std::abs(res.h.samples.front()));
  if (h_peak > 0.0 && std::abs(res.h.samples.front()) > 1e-3 * h_peak) {
    res.diagnostics.warn("corner data are not compatible at (0, 0): |h(0)| = " + fmt(std::abs(res.h.samples.front())));
  }

  UtmGrids ug{grids.x, grids.t};
  const UtmDecomposition u = utm_solve(res.h, kind, ug, options);
  res.diagnostics.merge(u.diagnostics, "boundary.");
  res.u = u.total();

  auto take = [&](const Field2D& src) {
    Field2D out(grids.x, grids.t);
    for (std::size_t n = 0; n < grids.t.count; ++n) {
      std::copy(src.slice(n).begin(), src.slice(n).end(), out.slice(n).begin());
    }
    return out;
  };
  res.v = take(v.field);
  res.z = forced ? take(z.field) : Field2D(grids.x, grids.t);
  res.y = res.v;
  res.y += res.z;
  res.y += res.u;
  return res;
}

}  // namespace halfline::utm
