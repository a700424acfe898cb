#include "halfline/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>

#include "halfline/special.hpp"

namespace halfline::quad {
namespace {

// Kronrod 15-point nodes (non-negative half) and weights; Gauss 7-point
// weights live on the odd Kronrod nodes.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b;
  cplx value;
  double error;
  int depth;
  bool operator<(const Panel& other) const { return error < other.error; }
};

Panel evaluate_panel(const std::function<cplx(double)>& f, double a, double b, int depth,
                     std::size_t& evals) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const cplx fc = f(c);
  cplx kronrod = fc * kWgk[7];
  cplx gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[static_cast<std::size_t>(j)];
    const cplx s = f(c - dx) + f(c + dx);
    kronrod += kWgk[static_cast<std::size_t>(j)] * s;
    if (j % 2 == 1) gauss += kWg[static_cast<std::size_t>(j / 2)] * s;
  }
  evals += 15;
  kronrod *= h;
  gauss *= h;
  return {a, b, kronrod, std::abs(kronrod - gauss), depth};
}

}  // namespace

Result gauss_kronrod(const std::function<cplx(double)>& f, double a, double b,
                     const std::vector<double>& breaks, const AdaptiveOptions& opt) {
  Result result;
  if (a == b) return result;
  std::vector<double> edges{a};
  for (double x : breaks) {
    if (x > a && x < b) edges.push_back(x);
  }
  edges.push_back(b);
  std::sort(edges.begin(), edges.end());

  std::priority_queue<Panel> queue;
  cplx total{};
  double total_error = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    Panel p = evaluate_panel(f, edges[i], edges[i + 1], 0, result.evaluations);
    total += p.value;
    total_error += p.error;
    queue.push(p);
  }
  while (!queue.empty()) {
    const double tol = std::max(opt.abs_tol, opt.rel_tol * std::abs(total));
    if (total_error <= tol) break;
    Panel worst = queue.top();
    if (worst.depth >= opt.max_depth || result.evaluations >= opt.max_evaluations) {
      result.converged = false;
      break;
    }
    queue.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    Panel left = evaluate_panel(f, worst.a, mid, worst.depth + 1, result.evaluations);
    Panel right = evaluate_panel(f, mid, worst.b, worst.depth + 1, result.evaluations);
    total += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
  }
  // Re-sum to shed the drift accumulated by incremental updates.
  cplx sum{};
  double err = 0.0;
  while (!queue.empty()) {
    sum += queue.top().value;
    err += queue.top().error;
    queue.pop();
  }
  result.value = sum;
  result.error_estimate = err;
  return result;
}

CompositeRule composite_gauss_legendre(const std::vector<double>& edges, int order) {
  const auto& rule = special::gauss_legendre(order);
  CompositeRule out;
  if (edges.size() < 2) return out;
  out.nodes.reserve((edges.size() - 1) * rule.nodes.size());
  out.weights.reserve(out.nodes.capacity());
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const double c = 0.5 * (edges[i] + edges[i + 1]);
    const double h = 0.5 * (edges[i + 1] - edges[i]);
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
      out.nodes.push_back(c + h * rule.nodes[j]);
      out.weights.push_back(h * rule.weights[j]);
    }
  }
  return out;
}

std::vector<double> chirp_panels(double k_max, double t_span, double max_phase, double max_width) {
  std::vector<double> edges{0.0};
  double k = 0.0;
  while (k < k_max) {
    // Phase change across [k, k + w] is t_span * (2 k w + w^2).
    double w = max_width;
    if (t_span > 0.0) {
      const double disc = k * k + max_phase / t_span;
      w = std::min(w, std::sqrt(disc) - k);
    }
    k = std::min(k_max, k + w);
    edges.push_back(k);
  }
  return edges;
}

}  // namespace halfline::quad
