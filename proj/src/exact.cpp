#include "heisvar/exact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "heisvar/errors.hpp"

namespace heisvar {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
const double kInvSqrtPi = 1.0 / std::sqrt(std::numbers::pi);

void validate(HeisenbergParams p, bool allow_zero_radius) {
  if (p.D < 1) throw DomainError("complex dimension D must be >= 1, got " + std::to_string(p.D));
  const bool ok = allow_zero_radius ? p.R >= 0.0 : p.R > 0.0;
  if (!ok || !std::isfinite(p.R)) {
    throw DomainError("window radius R must be " + std::string(allow_zero_radius ? "nonnegative" : "positive") +
                      ", got " + std::to_string(p.R));
  }
}

// e^{-2R^2}[I_0 + 2 sum_{n=1}^{D-1} I_n + I_D](2R^2), i.e. Var/E.
Estimate bessel_bracket(int D, double R) {
  const double x = 2.0 * R * R;
  // For small windows the bracket is 1 - E * 2F2(...) with E tiny; the
  // Bessel sum would round the deficit away. The series has no
  // cancellation here.
  const double mean = std::exp(2.0 * D * std::log(R) - std::lgamma(D + 1.0));
  if (mean <= 1e-3) {
    const Estimate f = hyp2f2(D, D + 0.5, D + 1.0, 2.0 * D + 1.0, -2.0 * x, Accuracy{1e-15, 0.0});
    const long double deficit = static_cast<long double>(mean) * f.value;
    return {static_cast<double>(1.0L - deficit), 4.0 * kEps};
  }
  double sum = 0.0;
  double err = 0.0;
  // Smallest terms first.
  for (int n = D; n >= 0; --n) {
    const Estimate term = bessel_i_scaled_estimate(n, x);
    const double weight = (n == 0 || n == D) ? 1.0 : 2.0;
    sum += weight * term.value;
    err += weight * term.error;
  }
  return {sum, err + 2.0 * (D + 1) * kEps * sum};
}

}  // namespace

std::string_view to_string(Route r) {
  switch (r) {
    case Route::bessel:
      return "bessel";
    case Route::hyp2f2:
      return "hyp2f2";
    case Route::quadrature:
      return "quadrature";
    case Route::spectral:
      return "spectral";
    case Route::montecarlo:
      return "montecarlo";
  }
  return "unknown";
}

std::string_view to_string(HyperuniformityLabel l) {
  switch (l) {
    case HyperuniformityLabel::ClassI:
      return "ClassI";
    case HyperuniformityLabel::ClassII:
      return "ClassII";
    case HyperuniformityLabel::ClassIII:
      return "ClassIII";
    case HyperuniformityLabel::NotHyperuniform:
      return "NotHyperuniform";
  }
  return "unknown";
}

double mean_ball(HeisenbergParams p) {
  validate(p, true);
  if (p.R == 0.0) return 0.0;
  return std::exp(2.0 * p.D * std::log(p.R) - std::lgamma(p.D + 1.0));
}

VarianceReport variance_ball_bessel(HeisenbergParams p) {
  validate(p, true);
  if (p.R == 0.0) return {0.0, 0.0, 1.0, Route::bessel, 0.0};
  const double mean = mean_ball(p);
  const Estimate bracket = bessel_bracket(p.D, p.R);
  const double variance = mean * bracket.value;
  return {mean, variance, bracket.value, Route::bessel, mean * bracket.error + 4.0 * kEps * variance};
}

VarianceReport variance_ball_2f2(HeisenbergParams p, Accuracy acc) {
  validate(p, false);
  acc.validate();
  const double x = -4.0 * p.R * p.R;
  if (x < -kHyp2f2NegativeLimit) {
    throw GuardError("variance_ball_2f2: R = " + std::to_string(p.R) +
                     " is beyond the 2F2 cancellation guard; use the Bessel route");
  }
  Estimate f;
  try {
    f = hyp2f2(p.D, p.D + 0.5, p.D + 1.0, 2.0 * p.D + 1.0, x, acc);
  } catch (const GuardError& e) {
    throw GuardError(std::string(e.what()) + "; use the Bessel route");
  }
  const double mean = mean_ball(p);
  const long double bracket = 1.0L - static_cast<long double>(mean) * f.value;
  const double variance = static_cast<double>(mean * bracket);
  const double err = mean * mean * f.error + 4.0 * kEps * mean;
  return {mean, variance, variance / mean, Route::hyp2f2, err};
}

double ratio(HeisenbergParams p) {
  validate(p, true);
  if (p.R == 0.0) return 1.0;
  return bessel_bracket(p.D, p.R).value;
}

AsymptoticSeries asymptotic_series(int D, int k_max) {
  if (D < 1) throw DomainError("asymptotic_series: D must be >= 1");
  if (k_max < 0) throw DomainError("asymptotic_series: k_max must be >= 0");
  AsymptoticSeries s;
  s.prefactor = D * kInvSqrtPi;
  s.k_max = k_max;
  s.coeffs.reserve(k_max + 1);
  s.coeffs.push_back(1.0);
  for (int k = 1; k <= k_max; ++k) {
    // c_k / c_{k-1} = -(4D^2 - (2k-1)^2)(2k-1) / ((2k+1) k 16)
    const double odd = 2.0 * k - 1.0;
    const double factor = -(4.0 * D * D - odd * odd) * odd / ((2.0 * k + 1.0) * k * 16.0);
    s.coeffs.push_back(s.coeffs.back() * factor);
  }
  return s;
}

AsymptoticResult asymptotic_ratio(HeisenbergParams p, int k_max) {
  validate(p, false);
  AsymptoticSeries full = asymptotic_series(p.D, k_max + 1);
  const double inv_r2 = 1.0 / (p.R * p.R);

  AsymptoticResult out;
  out.series.prefactor = full.prefactor;
  double sum = 0.0;
  double power = 1.0;
  double previous = std::numeric_limits<double>::infinity();
  int used = -1;
  double next_term = 0.0;
  for (int k = 0; k <= k_max + 1; ++k) {
    const double term = full.coeffs[k] * power;
    if (k > k_max || std::abs(term) >= previous) {
      next_term = std::abs(term);
      break;
    }
    sum += term;
    out.series.coeffs.push_back(full.coeffs[k]);
    used = k;
    previous = std::abs(term);
    power *= inv_r2;
  }
  out.series.k_max = used;
  out.series.trunc_error = full.prefactor / p.R * next_term;
  out.value = full.prefactor / p.R * sum;
  return out;
}

// ---------------------------------------------------------------------------

PolydiskSums polydisk_sums(double R, Accuracy trunc) {
  trunc.validate();
  if (!(R >= 0.0)) throw DomainError("polydisk_sums: R must be nonnegative");
  PolydiskSums out;
  if (R == 0.0) return out;
  const double lambda = R * R;
  double s1 = 0.0, s2 = 0.0, s12 = 0.0;
  for (int k = 0;; ++k) {
    const GammaPair pq = reg_gamma_pair(k + 1, lambda);
    s1 += pq.lower;
    s2 += pq.lower * pq.lower;
    s12 += pq.lower * pq.upper;
    out.terms = k + 1;
    if (k > lambda && pq.lower < trunc.abs_tol) {
      // p_{j+1} <= p_j * lambda / (j + 2) for the Poisson tail, so the
      // omitted sum is bounded by a geometric series.
      const double q = lambda / (k + 2.0);
      out.tail_bound = pq.lower * q / (1.0 - q);
      break;
    }
    if (k > 100000000) throw ResourceError("polydisk_sums: R too large");
  }
  out.s1 = s1;
  out.s2 = s2;
  out.s12 = s12;
  return out;
}

double mean_polydisk(HeisenbergParams p, Accuracy trunc) {
  validate(p, true);
  return std::pow(polydisk_sums(p.R, trunc).s1, p.D);
}

VarianceReport variance_polydisk(HeisenbergParams p, Accuracy trunc) {
  validate(p, true);
  const PolydiskSums s = polydisk_sums(p.R, trunc);
  if (s.s1 == 0.0) return {0.0, 0.0, 1.0, Route::spectral, 0.0};
  const double mean = std::pow(s.s1, p.D);
  // 1 - (S2/S1)^D with S2/S1 = 1 - S12/S1, without cancellation.
  const double single = s.s12 / s.s1;
  const double ratio_d = -std::expm1(p.D * std::log1p(-single));
  const double variance = mean * ratio_d;
  const double err = p.D * std::pow(s.s1, p.D - 1) * s.tail_bound * 2.0 + 8.0 * s.terms * kEps * variance;
  return {mean, variance, ratio_d, Route::spectral, err};
}

double polydisk_expansion(int D, double R, int order) {
  if (D < 1 || !(R > 0.0)) throw DomainError("polydisk_expansion: need D >= 1 and R > 0");
  const double sqrt_pi = std::sqrt(std::numbers::pi);
  double bracket = 1.0;
  if (order >= 1) bracket -= (D - 1.0) / (2.0 * sqrt_pi) / R;
  if (order >= 2) bracket += 0.5 * ((D - 1.0) * (D - 2.0) / (3.0 * std::numbers::pi) - 0.125) / (R * R);
  return D / sqrt_pi * bracket;
}

// ---------------------------------------------------------------------------

std::vector<double> log_grid(double r_min, double r_max, int n_points) {
  if (n_points < 2) throw FitError("log_grid: need at least two points");
  if (!(r_min > 0.0) || !(r_max > r_min)) throw FitError("log_grid: radius range collapses");
  std::vector<double> out(n_points);
  const double step = std::log(r_max / r_min) / (n_points - 1);
  for (int i = 0; i < n_points; ++i) out[i] = r_min * std::exp(step * i);
  out.back() = r_max;
  return out;
}

namespace {

// Residual sum of squares of y - (offset fit) after removing the mean.
double centered_rss(const std::vector<double>& resid) {
  const double mean = std::accumulate(resid.begin(), resid.end(), 0.0) / resid.size();
  double rss = 0.0;
  for (double r : resid) rss += (r - mean) * (r - mean);
  return rss;
}

}  // namespace

HyperuniformityClass classify_samples(int d, std::span<const double> radii, std::span<const double> variances,
                                      ClassifyOptions opts) {
  if (d < 1) throw DomainError("classify: dimension must be >= 1");
  if (radii.size() != variances.size()) throw DomainError("classify: radii and variances differ in length");
  const std::size_t n = radii.size();
  if (n < 5) throw DomainError("classify: need at least 5 grid points");

  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(radii[i] > 0.0) || !(variances[i] > 0.0)) {
      throw FitError("classify: radii and variances must be positive");
    }
    x[i] = std::log(radii[i]);
    y[i] = std::log(variances[i]);
  }
  const double xm = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double ym = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - xm) * (x[i] - xm);
    sxy += (x[i] - xm) * (y[i] - ym);
  }
  if (!(sxx > 1e-12 * n)) throw FitError("classify: radius grid collapses, fit is degenerate");

  HyperuniformityClass out;
  out.fitted_exponent = sxy / sxx;
  out.r_min = *std::min_element(radii.begin(), radii.end());
  out.r_max = *std::max_element(radii.begin(), radii.end());

  // Fixed-exponent models, amplitude fitted in log space.
  std::vector<double> resid_i(n), resid_ii(n);
  bool log_model_defined = true;
  for (std::size_t i = 0; i < n; ++i) {
    resid_i[i] = y[i] - (d - 1.0) * x[i];
    if (x[i] > 0.0) {
      resid_ii[i] = resid_i[i] - std::log(x[i]);
    } else {
      log_model_defined = false;
    }
  }
  out.rss_class_i = centered_rss(resid_i);
  out.rss_class_ii = log_model_defined ? centered_rss(resid_ii) : std::numeric_limits<double>::infinity();

  const double b = out.fitted_exponent;
  const double tol = opts.exponent_tol;
  // Free power law, for telling R^{d-1} log R apart from R^{d-alpha}.
  std::vector<double> resid_free(n);
  for (std::size_t i = 0; i < n; ++i) resid_free[i] = y[i] - b * x[i];
  const double rss_free = centered_rss(resid_free);

  if (std::abs(b - d) <= tol || b > d) {
    out.label = HyperuniformityLabel::NotHyperuniform;
  } else if (out.rss_class_ii < out.rss_class_i && out.rss_class_ii < rss_free) {
    out.label = HyperuniformityLabel::ClassII;
  } else if (b <= d - 1.0 + tol) {
    out.label = HyperuniformityLabel::ClassI;
  } else {
    out.label = HyperuniformityLabel::ClassIII;
  }
  return out;
}

HyperuniformityClass classify_function(int d, const std::function<double(double)>& variance, double r_min,
                                       double r_max, int n_points, ClassifyOptions opts) {
  if (!(r_min >= 1.0)) throw DomainError("classify: R_min must be >= 1");
  if (n_points < 5) throw DomainError("classify: need at least 5 grid points");
  const auto radii = log_grid(r_min, r_max, n_points);
  std::vector<double> vars(radii.size());
  for (std::size_t i = 0; i < radii.size(); ++i) vars[i] = variance(radii[i]);
  return classify_samples(d, radii, vars, opts);
}

HyperuniformityClass classify(int D, double r_min, double r_max, int n_points, ClassifyOptions opts) {
  if (D < 1) throw DomainError("classify: D must be >= 1");
  return classify_function(
      2 * D, [D](double R) { return variance_ball_bessel({D, R}).variance; }, r_min, r_max, n_points, opts);
}

}  // namespace heisvar
