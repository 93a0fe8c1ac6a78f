#include "heisvar/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <string>

#include "heisvar/errors.hpp"

namespace heisvar {

namespace {

// Kronrod 15-point nodes (descending, last is the center) and weights, with
// the embedded 7-point Gauss weights on the odd-indexed nodes.
constexpr std::array<double, 8> kNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Segment& other) const { return error < other.error; }
};

Segment gauss_kronrod(const Integrand& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kNodes[i];
    const double pair = f(center - dx) + f(center + dx);
    kronrod += kKronrodWeights[i] * pair;
    if (i % 2 == 1) gauss += kGaussWeights[i / 2] * pair;
  }
  kronrod *= half;
  gauss *= half;
  return {a, b, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace

void QuadratureSpec::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) {
    throw DomainError("QuadratureSpec: tolerances must be positive");
  }
  if (max_subdivisions < 1) {
    throw DomainError("QuadratureSpec: max_subdivisions must be positive");
  }
}

Estimate integrate_adaptive(const Integrand& f, double a, double b, const QuadratureSpec& q) {
  if (a == b) return {0.0, 0.0};
  std::priority_queue<Segment> pending;
  Segment first = gauss_kronrod(f, a, b);
  double total = first.value;
  double total_error = first.error;
  pending.push(first);
  int splits = 0;
  while (total_error > std::max(q.abs_tol, q.rel_tol * std::abs(total))) {
    if (splits >= q.max_subdivisions) {
      throw ConvergenceError("integrate_adaptive: subdivision limit reached on [" + std::to_string(a) +
                                 ", " + std::to_string(b) + "]",
                             total_error);
    }
    Segment worst = pending.top();
    pending.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    Segment left = gauss_kronrod(f, worst.a, mid);
    Segment right = gauss_kronrod(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    pending.push(left);
    pending.push(right);
    ++splits;
  }
  // Re-sum the leaves so the result does not carry update round-off.
  std::vector<Segment> leaves;
  leaves.reserve(pending.size());
  while (!pending.empty()) {
    leaves.push_back(pending.top());
    pending.pop();
  }
  std::sort(leaves.begin(), leaves.end(), [](const Segment& l, const Segment& r) { return l.a < r.a; });
  double sum = 0.0;
  double err = 0.0;
  for (const auto& s : leaves) {
    sum += s.value;
    err += s.error;
  }
  return {sum, err};
}

Estimate integrate_panels(const Integrand& f, std::span<const double> edges, const QuadratureSpec& q) {
  double err = 0.0;
  auto cumulative = cumulative_panels(f, edges, q, &err);
  return {cumulative.empty() ? 0.0 : cumulative.back(), err};
}

std::vector<double> cumulative_panels(const Integrand& f, std::span<const double> edges,
                                      const QuadratureSpec& q, double* error) {
  std::vector<double> out;
  if (edges.empty()) return out;
  out.reserve(edges.size());
  out.push_back(0.0);
  double running = 0.0;
  double comp = 0.0;
  double err = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const Estimate panel = integrate_adaptive(f, edges[i], edges[i + 1], q);
    const double y = panel.value - comp;
    const double t = running + y;
    comp = (t - running) - y;
    running = t;
    err += panel.error;
    out.push_back(running);
  }
  if (error) *error = err;
  return out;
}

Estimate extrapolate_power_tail(std::span<const double> cutoffs, std::span<const double> partials,
                                double order) {
  const std::size_t n = cutoffs.size();
  if (n != partials.size() || n < 8) {
    throw FitError("extrapolate_power_tail: need at least 8 matching samples");
  }
  constexpr int kBasis = 4;
  const double k0 = cutoffs.front();
  // Normal equations on a tiny, well-scaled basis; solved by Gaussian
  // elimination with partial pivoting.
  std::array<std::array<long double, kBasis + 1>, kBasis> system{};
  for (std::size_t i = 0; i < n; ++i) {
    const double u = k0 / cutoffs[i];
    const std::array<long double, kBasis> phi = {1.0L, std::pow(u, order), std::pow(u, order + 1.0),
                                                 std::pow(u, order + 2.0)};
    for (int r = 0; r < kBasis; ++r) {
      for (int c = 0; c < kBasis; ++c) system[r][c] += phi[r] * phi[c];
      system[r][kBasis] += phi[r] * partials[i];
    }
  }
  for (int col = 0; col < kBasis; ++col) {
    int pivot = col;
    for (int r = col + 1; r < kBasis; ++r) {
      if (std::abs(system[r][col]) > std::abs(system[pivot][col])) pivot = r;
    }
    std::swap(system[col], system[pivot]);
    if (system[col][col] == 0.0L) throw FitError("extrapolate_power_tail: singular fit");
    for (int r = 0; r < kBasis; ++r) {
      if (r == col) continue;
      const long double factor = system[r][col] / system[col][col];
      for (int c = col; c <= kBasis; ++c) system[r][c] -= factor * system[col][c];
    }
  }
  std::array<double, kBasis> coef{};
  for (int r = 0; r < kBasis; ++r) coef[r] = static_cast<double>(system[r][kBasis] / system[r][r]);

  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double u = k0 / cutoffs[i];
    const double model = coef[0] + coef[1] * std::pow(u, order) + coef[2] * std::pow(u, order + 1.0) +
                         coef[3] * std::pow(u, order + 2.0);
    rss += (partials[i] - model) * (partials[i] - model);
  }
  return {coef[0], std::sqrt(rss / static_cast<double>(n))};
}

}  // namespace heisvar
