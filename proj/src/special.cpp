#include "halfline/special.hpp"

#include <array>
#include <cmath>
#include <map>
#include <mutex>

#include <Eigen/Eigenvalues>

#include "halfline/errors.hpp"

namespace halfline::special {
namespace {

constexpr int kWeidemanTerms = 40;
constexpr double kContinuedFractionRadius = 6.0;

struct WeidemanCoefficients {
  double L;
  std::array<double, kWeidemanTerms> a;  // highest power first

  WeidemanCoefficients() {
    constexpr int N = kWeidemanTerms;
    constexpr int M = 2 * N;
    constexpr int M2 = 2 * M;
    L = std::sqrt(N / std::sqrt(2.0));
    // f sampled at theta_k = k pi / M, k = -M+1 .. M-1, preceded by a zero,
    // then fftshifted; only the real part of its DFT is needed.
    std::array<double, M2> f{};
    for (int k = -M + 1; k <= M - 1; ++k) {
      const double t = L * std::tan(0.5 * k * pi / M);
      f[static_cast<std::size_t>(k + M)] = std::exp(-t * t) * (L * L + t * t);
    }
    // fftshift of length M2 moves index M to 0.
    std::array<double, M2> shifted{};
    for (int i = 0; i < M2; ++i) shifted[static_cast<std::size_t>(i)] = f[static_cast<std::size_t>((i + M) % M2)];
    std::array<double, N + 1> re{};
    for (int j = 0; j <= N; ++j) {
      double acc = 0.0;
      for (int n = 0; n < M2; ++n) {
        acc += shifted[static_cast<std::size_t>(n)] * std::cos(2.0 * pi * j * n / M2);
      }
      re[static_cast<std::size_t>(j)] = acc / M2;
    }
    for (int j = 0; j < N; ++j) a[static_cast<std::size_t>(j)] = re[static_cast<std::size_t>(N - j)];
  }
};

const WeidemanCoefficients& weideman() {
  static const WeidemanCoefficients c;
  return c;
}

cplx faddeeva_upper(cplx z) {
  if (std::abs(z) > kContinuedFractionRadius) {
    const int terms = std::abs(z) < 12.0 ? 40 : 20;
    cplx r{};
    for (int k = terms; k >= 1; --k) r = (0.5 * k) / (z - r);
    return I / std::sqrt(pi) / (z - r);
  }
  const auto& c = weideman();
  const cplx denom = c.L - I * z;
  const cplx Z = (c.L + I * z) / denom;
  cplx p{};
  for (double coeff : c.a) p = p * Z + coeff;
  return 2.0 * p / (denom * denom) + (1.0 / std::sqrt(pi)) / denom;
}

}  // namespace

cplx faddeeva(cplx z) {
  if (z.imag() >= 0.0) return faddeeva_upper(z);
  return 2.0 * std::exp(-z * z) - faddeeva_upper(-z);
}

double mollifier(double u) {
  const double q = 1.0 - u * u;
  if (q <= 0.0) return 0.0;
  return std::exp(1.0 - 1.0 / q);
}

double mollifier_derivative(double u) {
  const double q = 1.0 - u * u;
  if (q <= 0.0) return 0.0;
  return mollifier(u) * (-2.0 * u / (q * q));
}

double smooth_step_down(double t, double a, double b) {
  if (t <= a) return 1.0;
  if (t >= b) return 0.0;
  const double u = (t - a) / (b - a);
  const double left = std::exp(-1.0 / (1.0 - u));
  const double right = std::exp(-1.0 / u);
  return left / (left + right);
}

const QuadratureRule& gauss_legendre(int n) {
  static std::mutex mutex;
  static std::map<int, QuadratureRule> rules;
  std::lock_guard lock(mutex);
  auto it = rules.find(n);
  if (it != rules.end()) return it->second;
  QuadratureRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(n - 1 - i);
    rule.nodes[lo] = -x;
    rule.nodes[hi] = x;
    rule.weights[lo] = w;
    rule.weights[hi] = w;
  }
  return rules.emplace(n, std::move(rule)).first->second;
}

QuadratureRule gauss_jacobi(int n, double alpha, double beta) {
  if (n < 1 || alpha <= -1.0 || beta <= -1.0) throw DomainError("gauss_jacobi: invalid parameters");
  const double ab = alpha + beta;
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const double m = 2.0 * i + ab;
    J(i, i) = i == 0 ? (beta - alpha) / (ab + 2.0)
                     : (beta * beta - alpha * alpha) / (m * (m + 2.0));
    if (i + 1 < n) {
      const double k = i + 1.0;
      const double mk = 2.0 * k + ab;
      const double b = 4.0 * k * (k + alpha) * (k + beta) * (k + ab) /
                       (mk * mk * (mk + 1.0) * (mk - 1.0));
      J(i, i + 1) = J(i + 1, i) = std::sqrt(b);
    }
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(J);
  const double mu0 = std::exp((ab + 1.0) * std::log(2.0) + std::lgamma(alpha + 1.0) +
                              std::lgamma(beta + 1.0) - std::lgamma(ab + 2.0));
  QuadratureRule rule;
  for (int i = 0; i < n; ++i) {
    const double v = eig.eigenvectors()(0, i);
    rule.nodes.push_back(eig.eigenvalues()(i));
    rule.weights.push_back(mu0 * v * v);
  }
  return rule;
}

}  // namespace halfline::special
