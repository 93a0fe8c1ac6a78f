#include "heisvar/fourier.hpp"

#include <algorithm>
#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <numbers>
#include <string>

#include "heisvar/errors.hpp"

namespace heisvar {

namespace {

constexpr double kPi = std::numbers::pi;
// exp(-46) ~ 1e-20: Gaussian envelopes are cut where they drop below this.
const double kGaussianCutoff = std::sqrt(46.0);
// Power tails are extrapolated from cutoffs in [K0, 4 K0], K0 this many
// panel widths out.
constexpr double kPowerTailPanels = 4000.0;

void check_dim(int d, const char* who) {
  if (d < 1) throw DomainError(std::string(who) + ": dimension d must be >= 1");
}

void check_radius(double R, const char* who) {
  if (!(R > 0.0) || !std::isfinite(R)) throw DomainError(std::string(who) + ": R must be positive and finite");
}

// 2 pi^{d/2} / Gamma(d/2), the surface area of the unit sphere in R^d.
double sphere_area(int d) { return 2.0 * std::pow(kPi, 0.5 * d) / std::tgamma(0.5 * d); }

// Edges from 0 to `end` with spacing at most `width`, refined so every
// point of `breaks` below `end` is an edge.
std::vector<double> make_edges(double end, double width, const std::vector<double>& breaks) {
  std::vector<double> edges{0.0};
  auto fill_to = [&](double b) {
    const double a = edges.back();
    const int pieces = std::max(1, static_cast<int>(std::ceil((b - a) / width)));
    for (int i = 1; i < pieces; ++i) edges.push_back(a + (b - a) * i / pieces);
    edges.push_back(b);
  };
  for (double b : breaks) {
    if (b >= end) break;
    if (b > edges.back()) fill_to(b);
  }
  if (end > edges.back()) fill_to(end);
  return edges;
}

std::vector<double> kernel_zeros(double nu, double scale, double end) {
  if (scale <= 0.0) return {};
  std::vector<double> z = bessel_j_zeros_below(Order(nu), end * scale);
  for (double& v : z) v /= scale;
  return z;
}

// Integral over [0, inf) of an integrand whose non-oscillating tail decays
// like t^{-(order+1)}: integrate panels out to 4 K0 and extrapolate the
// cumulative integrals sampled on [K0, 4 K0].
Estimate integrate_power_tail(const Integrand& f, double width, double order, const std::vector<double>& breaks,
                              const QuadratureSpec& q) {
  if (!(order > 0.0)) throw DomainError("power tail: integrand is not integrable at infinity");
  const double k0 = kPowerTailPanels * width;
  const std::vector<double> edges = make_edges(4.0 * k0, width, breaks);
  double err = 0.0;
  const std::vector<double> cum = cumulative_panels(f, edges, q, &err);
  std::vector<double> cutoffs, partials;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (edges[i] >= k0) {
      cutoffs.push_back(edges[i]);
      partials.push_back(cum[i]);
    }
  }
  const Estimate lim = extrapolate_power_tail(cutoffs, partials, order);
  return {lim.value, lim.error + err};
}

Estimate integrate_with_decay(const Integrand& f, const Decay& decay, double nu, double kernel_scale,
                              double tail_order_offset, const QuadratureSpec& q) {
  if (std::holds_alternative<std::monostate>(decay)) {
    throw DomainError("radial integral: envelope missing; the profile needs a decay descriptor");
  }
  const double lobe = kernel_scale > 0.0 ? kPi / kernel_scale : 0.0;
  if (const auto* g = std::get_if<GaussianDecay>(&decay)) {
    if (!(g->scale > 0.0)) throw DomainError("GaussianDecay: scale must be positive");
    const double end = g->scale * (kGaussianCutoff + 1.0);
    double width = 0.5 * g->scale;
    if (lobe > 0.0) width = std::min(width, lobe);
    return integrate_panels(f, make_edges(end, width, kernel_zeros(nu, kernel_scale, end)), q);
  }
  if (const auto* c = std::get_if<CompactDecay>(&decay)) {
    if (c->limit < 0.0) throw DomainError("CompactDecay: limit must be nonnegative");
    if (c->limit == 0.0) return {0.0, 0.0};
    double width = c->limit / 8.0;
    if (lobe > 0.0) width = std::min(width, lobe);
    return integrate_panels(f, make_edges(c->limit, width, kernel_zeros(nu, kernel_scale, c->limit)), q);
  }
  const auto& p = std::get<PowerDecay>(decay);
  double width = lobe > 0.0 ? lobe / 2.0 : 1.0;
  if (p.period > 0.0) width = std::min(width, p.period / 4.0);
  return integrate_power_tail(f, width, p.exponent + tail_order_offset, {}, q);
}

// J_nu(x)/x^nu for the kernel order nu = d/2 - 1; closed form for d = 1.
double radial_kernel(int d, double x) {
  if (d == 1) return std::sqrt(2.0 / kPi) * std::cos(x);
  return bessel_j_over_power(Order(0.5 * d - 1.0), x);
}

}  // namespace

double ball_volume(int d, double R) {
  check_dim(d, "ball_volume");
  if (!(R >= 0.0)) throw DomainError("ball_volume: R must be nonnegative");
  if (R == 0.0) return 0.0;
  return std::exp(0.5 * d * std::log(kPi) + d * std::log(R) - std::lgamma(0.5 * d + 1.0));
}

double ball_indicator_ft(int d, double R, double kappa) {
  check_dim(d, "ball_indicator_ft");
  check_radius(R, "ball_indicator_ft");
  if (!(kappa >= 0.0)) throw DomainError("ball_indicator_ft: kappa must be nonnegative");
  if (kappa == 0.0) return ball_volume(d, R);
  // (2 pi)^{d/2} R^d [J_{d/2}(x)/x^{d/2}], x = kappa R.
  return std::pow(2.0 * kPi, 0.5 * d) * std::pow(R, d) * bessel_j_over_power(Order(0.5 * d), kappa * R);
}

double intersection_volume_ft(int d, double R, double kappa) {
  check_dim(d, "intersection_volume_ft");
  check_radius(R, "intersection_volume_ft");
  if (!(kappa >= 0.0)) throw DomainError("intersection_volume_ft: kappa must be nonnegative");
  if (kappa == 0.0) {
    const double v = ball_volume(d, R);
    return v * v;
  }
  const double j = bessel_j_over_power(Order(0.5 * d), kappa * R);
  return std::pow(2.0 * kPi, d) * std::pow(R, 2 * d) * j * j;
}

double intersection_volume_real(int d, double R, double r) {
  check_dim(d, "intersection_volume_real");
  check_radius(R, "intersection_volume_real");
  if (!(r >= 0.0)) throw DomainError("intersection_volume_real: r must be nonnegative");
  if (r >= 2.0 * R) return 0.0;
  if (r == 0.0) return ball_volume(d, R);
  const double h = r / (2.0 * R);
  // 1 - h^2 without cancellation near h = 1.
  const double x = (1.0 - h) * (1.0 + h);
  return ball_volume(d, R) * boost::math::ibeta(0.5 * (d + 1), 0.5, x);
}

double structure_factor_heisenberg(int D, double kappa) {
  if (D < 1) throw DomainError("structure_factor_heisenberg: D must be >= 1");
  if (!(kappa >= 0.0)) throw DomainError("structure_factor_heisenberg: kappa must be nonnegative");
  return -std::expm1(-0.25 * kappa * kappa);
}

RadialProfile heisenberg_structure_profile() {
  return {[](double k) { return -std::expm1(-0.25 * k * k); }, ProfileSpace::fourier_space_s, GaussianDecay{2.0}};
}

RadialProfile heisenberg_correlation_profile() {
  return {[](double r) { return -std::exp(-r * r); }, ProfileSpace::real_space_c, GaussianDecay{1.0}};
}

RadialProfile poisson_structure_profile() {
  return {[](double) { return 1.0; }, ProfileSpace::fourier_space_s, CompactDecay{0.0}};
}

DensityParams heisenberg_density(int D) {
  if (D < 1) throw DomainError("heisenberg_density: D must be >= 1");
  return {std::pow(kPi, -D), 2 * D};
}

Estimate radial_fourier(int d, const RadialProfile& profile, double kappa_or_r, Direction direction,
                        const QuadratureSpec& q) {
  check_dim(d, "radial_fourier");
  q.validate();
  if (!profile.eval) throw DomainError("radial_fourier: profile has no evaluator");
  const double s = kappa_or_r;
  if (!(s >= 0.0) || !std::isfinite(s)) throw DomainError("radial_fourier: argument must be finite and >= 0");

  const Integrand f = [&](double t) {
    if (t == 0.0) return d == 1 ? profile.eval(0.0) * radial_kernel(d, 0.0) : 0.0;
    return profile.eval(t) * radial_kernel(d, s * t) * std::pow(t, d - 1);
  };
  // Non-oscillating tail of f ~ t^{-p + d - 1} (kernel constant at s = 0)
  // or t^{-p + d/2 - 1/2} otherwise; the offset turns p into the order of
  // the tail integral.
  const double offset = s == 0.0 ? -static_cast<double>(d) : -0.5 * d - 0.5;
  const double nu = 0.5 * d - 1.0;
  const Estimate integral = integrate_with_decay(f, profile.decay, nu, s, offset, q);
  const double c = direction == Direction::forward ? std::pow(2.0 * kPi, 0.5 * d) : std::pow(2.0 * kPi, -0.5 * d);
  return {c * integral.value, c * integral.error};
}

VarianceReport variance_quadrature_fourier(DensityParams dens, const RadialProfile& s_hat, double R,
                                           const QuadratureSpec& q) {
  check_dim(dens.d, "variance_quadrature_fourier");
  check_radius(R, "variance_quadrature_fourier");
  if (!(dens.rho_tilde > 0.0)) throw DomainError("variance_quadrature_fourier: density must be positive");
  if (s_hat.space != ProfileSpace::fourier_space_s) {
    throw DomainError("variance_quadrature_fourier: profile must be a structure factor");
  }
  if (std::holds_alternative<std::monostate>(s_hat.decay)) {
    throw DomainError("variance_quadrature_fourier: envelope missing; the profile needs a decay descriptor");
  }
  q.validate();
  const int d = dens.d;
  const double mean = dens.rho_tilde * ball_volume(d, R);
  if (const auto* c = std::get_if<CompactDecay>(&s_hat.decay); c && c->limit == 0.0) {
    // 1 - s vanishes identically: the split leaves 1/d exactly.
    return {mean, mean, 1.0, Route::quadrature, 0.0};
  }

  // J_{d/2}(kappa R)^2 / kappa = R^d kappa^{d-1} [J_{d/2}(x)/x^{d/2}]^2.
  const Order order(0.5 * d);
  const Integrand f = [&](double k) {
    if (k == 0.0) return 0.0;
    const double j = bessel_j_over_power(order, k * R);
    return std::pow(R, d) * std::pow(k, d - 1) * j * j * (1.0 - s_hat.eval(k));
  };
  // Non-oscillating part of J^2/kappa decays like kappa^{-2}.
  const Estimate residual = integrate_with_decay(f, s_hat.decay, 0.5 * d, R, 1.0, q);
  const double pref = sphere_area(d) * dens.rho_tilde * std::pow(R, d);
  const double variance = pref * (1.0 / d - residual.value);
  const double err = pref * residual.error + 4.0 * std::numeric_limits<double>::epsilon() * pref / d;
  return {mean, variance, variance / mean, Route::quadrature, err};
}

VarianceReport variance_quadrature_real(DensityParams dens, const RadialProfile& c, double R,
                                        const QuadratureSpec& q) {
  check_dim(dens.d, "variance_quadrature_real");
  check_radius(R, "variance_quadrature_real");
  if (!(dens.rho_tilde > 0.0)) throw DomainError("variance_quadrature_real: density must be positive");
  if (c.space != ProfileSpace::real_space_c) {
    throw DomainError("variance_quadrature_real: profile must be a real-space correlation function");
  }
  if (!c.eval) throw DomainError("variance_quadrature_real: profile has no evaluator");
  q.validate();
  const int d = dens.d;
  const double vol = ball_volume(d, R);
  const double mean = dens.rho_tilde * vol;

  double end = 2.0 * R;
  double width = R / 4.0;
  if (const auto* g = std::get_if<GaussianDecay>(&c.decay)) {
    end = std::min(end, g->scale * (kGaussianCutoff + 1.0));
    width = std::min(width, 0.5 * g->scale);
  } else if (const auto* cd = std::get_if<CompactDecay>(&c.decay)) {
    end = std::min(end, cd->limit);
  }
  Estimate integral{0.0, 0.0};
  if (end > 0.0) {
    const Integrand f = [&](double r) { return intersection_volume_real(d, R, r) * c.eval(r) * std::pow(r, d - 1); };
    integral = integrate_panels(f, make_edges(end, width, {}), q);
  }
  const double pref = sphere_area(d) * dens.rho_tilde;
  const double variance = dens.rho_tilde * (vol + pref * integral.value);
  const double err = dens.rho_tilde * pref * integral.error + 4.0 * std::numeric_limits<double>::epsilon() * mean;
  return {mean, variance, variance / mean, Route::quadrature, err};
}

Estimate bessel_square_integral(int n, double R, const QuadratureSpec& q) {
  if (n < 1) throw DomainError("bessel_square_integral: n must be >= 1");
  check_radius(R, "bessel_square_integral");
  q.validate();
  const Order order(n);
  const Integrand f = [&](double k) {
    if (k == 0.0) return 0.0;
    const double j = bessel_j_over_power(order, k * R);
    return std::pow(R, 2 * n) * std::pow(k, 2 * n - 1) * j * j;
  };
  return integrate_power_tail(f, kPi / (2.0 * R), 1.0, {}, q);
}

Estimate damped_bessel_square_integral(int n, double R, const QuadratureSpec& q) {
  if (n < 1) throw DomainError("damped_bessel_square_integral: n must be >= 1");
  check_radius(R, "damped_bessel_square_integral");
  q.validate();
  const Order order(n);
  const Integrand f = [&](double k) {
    if (k == 0.0) return 0.0;
    const double j = bessel_j_over_power(order, k * R);
    return std::pow(R, 2 * n) * std::pow(k, 2 * n - 1) * j * j * std::exp(-0.25 * k * k);
  };
  return integrate_with_decay(f, GaussianDecay{2.0}, n, R, 0.0, q);
}

double damped_bessel_square_closed(int n, double R) {
  if (n < 1) throw DomainError("damped_bessel_square_closed: n must be >= 1");
  check_radius(R, "damped_bessel_square_closed");
  // (2R)^{2n} / (2^{2n+1} n^2 Gamma(n)) = R^{2n} / (2 n n!).
  const double pref = std::exp(2.0 * n * std::log(R) - std::lgamma(n + 1.0)) / (2.0 * n);
  const Estimate f = hyp2f2(n, n + 0.5, n + 1.0, 2.0 * n + 1.0, -4.0 * R * R, Accuracy{1e-9, 0.0});
  return pref * f.value;
}

double recurrence_check_An(int D, double R, const QuadratureSpec& q) {
  if (D < 1) throw DomainError("recurrence_check_An: D must be >= 1");
  check_radius(R, "recurrence_check_An");
  const double x = 2.0 * R * R;
  double previous = 0.0;  // A_0 enters with weight 0
  double worst = 0.0;
  for (int n = 1; n <= D; ++n) {
    const double a_n = 1.0 / (2.0 * n) - damped_bessel_square_integral(n, R, q).value;
    const double lhs = n * a_n - (n - 1) * previous;
    const double rhs = 0.5 * (bessel_i_scaled(n - 1, x) + bessel_i_scaled(n, x));
    worst = std::max(worst, std::abs(lhs - rhs));
    previous = a_n;
  }
  return worst;
}

}  // namespace heisvar
