#include "heisvar/specfun.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

#include "heisvar/errors.hpp"

namespace heisvar {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kRescaleAbove = 1e200;
constexpr double kRescaleBy = 1e-200;

// Neumaier-compensated running sum.
template <typename T>
struct CompensatedSum {
  T sum = 0;
  T comp = 0;

  void add(T v) {
    T t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      comp += (sum - t) + v;
    } else {
      comp += (v - t) + sum;
    }
    sum = t;
  }
  T value() const { return sum + comp; }
};

// Tail truncation shared by the convergent series: stop after three
// consecutive terms below abs_tol + rel_tol * |partial sum|.
class TailCriterion {
 public:
  TailCriterion(double rel_tol, double abs_tol) : rel_(rel_tol), abs_(abs_tol) {}

  bool done(long double term, long double partial) {
    if (std::abs(term) <= abs_ + rel_ * std::abs(partial)) {
      ++small_;
    } else {
      small_ = 0;
    }
    return small_ >= 3;
  }

 private:
  double rel_;
  double abs_;
  int small_ = 0;
};

void require_nonnegative(double x, const char* what) {
  if (!(x >= 0.0)) {
    throw DomainError(std::string(what) + ": argument must be nonnegative, got " + std::to_string(x));
  }
}

void require_order(double nu, const char* what) {
  if (!(nu > -1.0)) {
    throw DomainError(std::string(what) + ": order must exceed -1, got " + std::to_string(nu));
  }
}

// 1 / (2^nu Gamma(nu + 1)), the value of J_nu(x)/x^nu at x = 0.
double j_over_power_at_zero(double nu) {
  if (nu < 100.0) {
    return 1.0 / (std::pow(2.0, nu) * std::tgamma(nu + 1.0));
  }
  return std::exp(-(nu * std::numbers::ln2 + std::lgamma(nu + 1.0)));
}

// cos and sin of x - pi * shift with x large, reducing the shift exactly.
void shifted_cos_sin(double x, double shift, double& c, double& s) {
  double reduced = std::fmod(shift, 2.0);
  double cp = std::cos(std::numbers::pi * reduced);
  double sp = std::sin(std::numbers::pi * reduced);
  double cx = std::cos(x);
  double sx = std::sin(x);
  c = cx * cp + sx * sp;
  s = sx * cp - cx * sp;
}

bool use_j_series(double nu, double x) { return x * x <= 4.0 * std::max(1.0, nu + 1.0); }

// e^{-x} x^j / j! for integer j >= 0, x > 0.
double poisson_term(int j, double x) {
  if (j <= 400) {
    // Interleave e^{-x/j} with each factor so neither overflows.
    if (j == 0) return std::exp(-x);
    double damp = std::exp(-x / j);
    double t = 1.0;
    for (int i = 1; i <= j; ++i) t *= (x / i) * damp;
    if (t > 0.0 || x / j < 700.0) return t;
  }
  return std::exp(j * std::log(x) - x - std::lgamma(j + 1.0));
}

}  // namespace

void Accuracy::validate() const {
  if (!(rel_tol > 0.0 && rel_tol <= 1e-3)) {
    throw DomainError("Accuracy: rel_tol must lie in (0, 1e-3], got " + std::to_string(rel_tol));
  }
  if (!(abs_tol >= 0.0)) {
    throw DomainError("Accuracy: abs_tol must be nonnegative, got " + std::to_string(abs_tol));
  }
}

// ---------------------------------------------------------------------------
// Bessel J

namespace detail {

double bessel_j_over_power_series(double nu, double x) {
  const long double y = static_cast<long double>(x) * x / 4.0L;
  CompensatedSum<long double> sum;
  long double term = 1.0L;
  sum.add(term);
  TailCriterion stop(1e-19, 0.0);
  for (int n = 1; n < 10000; ++n) {
    term *= -y / (static_cast<long double>(n) * (nu + n));
    sum.add(term);
    if (stop.done(term, sum.value())) break;
  }
  return static_cast<double>(sum.value()) * j_over_power_at_zero(nu);
}

double bessel_j_recurrence(double nu, double x) {
  if (x <= 0.0) {
    throw DomainError("bessel_j_recurrence: x must be positive");
  }
  double nu0;
  int target;
  bool step_down = false;
  if (nu >= 0.0) {
    target = static_cast<int>(std::floor(nu));
    nu0 = nu - target;
  } else {
    nu0 = nu + 1.0;
    target = 0;
    step_down = true;
  }

  const double top = std::max(target + 1.0, x);
  int start = static_cast<int>(top + 20.0 + std::sqrt(60.0 * top));
  if (start % 2 != 0) ++start;

  std::vector<double> f(static_cast<std::size_t>(start) + 2, 0.0);
  f[start] = 1.0;
  for (int k = start; k >= 1; --k) {
    f[k - 1] = (2.0 * (nu0 + k) / x) * f[k] - f[k + 1];
    if (std::abs(f[k - 1]) > kRescaleAbove) {
      for (int i = k - 1; i <= start; ++i) f[i] *= kRescaleBy;
    }
  }

  // sum_k (nu0 + 2k) Gamma(nu0 + k)/k! f_{2k}, accumulated small-to-large.
  const int half = start / 2;
  std::vector<double> weight(static_cast<std::size_t>(half) + 1);
  weight[0] = std::tgamma(nu0 + 1.0);
  double g = std::tgamma(nu0 + 1.0);  // Gamma(nu0 + k)/k! at k = 1
  for (int k = 1; k <= half; ++k) {
    if (k > 1) g *= (nu0 + k - 1.0) / k;
    weight[k] = (nu0 + 2.0 * k) * g;
  }
  CompensatedSum<long double> norm;
  for (int k = half; k >= 0; --k) norm.add(static_cast<long double>(weight[k]) * f[2 * k]);

  const double scale = std::pow(x / 2.0, nu0) / static_cast<double>(norm.value());
  if (step_down) {
    return (2.0 * nu0 / x) * f[0] * scale - f[1] * scale;
  }
  return f[target] * scale;
}

double bessel_j_asymptotic_crossover(double nu) { return std::max(20.0, 2.0 * nu * nu); }

Estimate bessel_j_asymptotic(double nu, double x) {
  const double mu = 4.0 * nu * nu;
  double p = 1.0;
  double q = 0.0;
  double term = 1.0;
  double omitted = 0.0;
  for (int k = 1; k < 2000; ++k) {
    const double odd = 2.0 * k - 1.0;
    const double next = term * (mu - odd * odd) / (k * 8.0 * x);
    if (next == 0.0) {
      omitted = 0.0;
      break;
    }
    if (std::abs(next) >= std::abs(term)) {
      omitted = std::abs(term);
      break;
    }
    term = next;
    const int sign = ((k / 2) % 2 == 0) ? 1 : -1;
    if (k % 2 == 0) {
      p += sign * term;
    } else {
      q += sign * term;
    }
    if (std::abs(term) < 1e-3 * kEps * (std::abs(p) + std::abs(q))) {
      omitted = std::abs(term);
      break;
    }
  }
  double c;
  double s;
  shifted_cos_sin(x, (2.0 * nu + 1.0) / 4.0, c, s);
  const double amp = std::sqrt(2.0 / (std::numbers::pi * x));
  const double value = amp * (p * c - q * s);
  return {value, amp * (omitted + 4.0 * kEps * (std::abs(p) + std::abs(q)))};
}

}  // namespace detail

Estimate bessel_j_estimate(Order order, double x) {
  const double nu = order.value;
  require_order(nu, "bessel_j");
  require_nonnegative(x, "bessel_j");
  if (x == 0.0) {
    if (nu == 0.0) return {1.0, 0.0};
    if (nu > 0.0) return {0.0, 0.0};
    throw DomainError("bessel_j: J_nu(0) is unbounded for negative order");
  }
  if (use_j_series(nu, x)) {
    const double v = std::pow(x, nu) * detail::bessel_j_over_power_series(nu, x);
    return {v, 8.0 * kEps * std::abs(v)};
  }
  if (x >= detail::bessel_j_asymptotic_crossover(nu)) {
    return detail::bessel_j_asymptotic(nu, x);
  }
  const double v = detail::bessel_j_recurrence(nu, x);
  // Miller recurrence is accurate relative to the envelope, not to v itself.
  const double envelope = std::max(std::abs(v), std::sqrt(2.0 / (std::numbers::pi * x)));
  return {v, 32.0 * kEps * envelope};
}

double bessel_j(Order nu, double x) { return bessel_j_estimate(nu, x).value; }

double bessel_j_over_power(Order order, double x) {
  const double nu = order.value;
  require_order(nu, "bessel_j_over_power");
  require_nonnegative(x, "bessel_j_over_power");
  if (x == 0.0) return j_over_power_at_zero(nu);
  if (use_j_series(nu, x)) return detail::bessel_j_over_power_series(nu, x);
  return bessel_j(order, x) / std::pow(x, nu);
}

// ---------------------------------------------------------------------------
// Scaled modified Bessel I_n

namespace detail {

double bessel_i_scaled_series(int n, double x) {
  if (x == 0.0) return n == 0 ? 1.0 : 0.0;
  double prefactor = std::exp(-x);
  for (int j = 1; j <= n; ++j) prefactor *= (x / 2.0) / j;
  const long double y = static_cast<long double>(x) * x / 4.0L;
  long double term = 1.0L;
  long double sum = 1.0L;
  TailCriterion stop(1e-19, 0.0);
  for (int k = 1; k < 10000; ++k) {
    term *= y / (static_cast<long double>(k) * (n + k));
    sum += term;
    if (stop.done(term, sum)) break;
  }
  return prefactor * static_cast<double>(sum);
}

double bessel_i_scaled_recurrence(int n, double x) {
  if (x <= 0.0) throw DomainError("bessel_i_scaled_recurrence: x must be positive");
  const int start = static_cast<int>(std::ceil(std::sqrt(double(n) * n + 100.0 * x))) + 20;
  double above = 0.0;
  double current = 1.0;
  double at_n = (start == n) ? current : 0.0;
  long double norm = 0.0L;
  for (int k = start; k >= 1; --k) {
    norm += (k == 0 ? 1.0L : 2.0L) * current;
    const double below = (2.0 * k / x) * current + above;
    above = current;
    current = below;
    if (k - 1 == n) at_n = current;
    if (std::abs(current) > kRescaleAbove) {
      current *= kRescaleBy;
      above *= kRescaleBy;
      at_n *= kRescaleBy;
      norm *= kRescaleBy;
    }
  }
  norm += current;
  return at_n / static_cast<double>(norm);
}

Estimate bessel_i_scaled_asymptotic(int n, double x) {
  const double mu = 4.0 * double(n) * n;
  CompensatedSum<double> sum;
  sum.add(1.0);
  double term = 1.0;
  double omitted = 0.0;
  for (int k = 1; k < 4000; ++k) {
    const double odd = 2.0 * k - 1.0;
    const double next = -term * (mu - odd * odd) / (k * 8.0 * x);
    if (next == 0.0) break;
    if (std::abs(next) >= std::abs(term)) {
      omitted = std::abs(term);
      break;
    }
    term = next;
    sum.add(term);
    if (std::abs(term) < 1e-3 * kEps * std::abs(sum.value())) {
      omitted = std::abs(term);
      break;
    }
  }
  const double amp = 1.0 / std::sqrt(2.0 * std::numbers::pi * x);
  const double value = amp * sum.value();
  return {value, amp * omitted + 4.0 * kEps * std::abs(value)};
}

}  // namespace detail

Estimate bessel_i_scaled_estimate(int n, double x) {
  if (n < 0) throw DomainError("bessel_i_scaled: order must be nonnegative");
  require_nonnegative(x, "bessel_i_scaled");
  if (x <= detail::kBesselIScaledCrossover) {
    const double v = detail::bessel_i_scaled_series(n, x);
    return {v, 4.0 * kEps * v};
  }
  if (x >= double(n) * n) {
    return detail::bessel_i_scaled_asymptotic(n, x);
  }
  const double v = detail::bessel_i_scaled_recurrence(n, x);
  return {v, 16.0 * kEps * v};
}

double bessel_i_scaled(int n, double x) { return bessel_i_scaled_estimate(n, x).value; }

// ---------------------------------------------------------------------------
// Bessel zeros

namespace {

double mcmahon_guess(double nu, int m) {
  const double beta = (m + nu / 2.0 - 0.25) * std::numbers::pi;
  const double mu = 4.0 * nu * nu;
  const double e = 8.0 * beta;
  return beta - (mu - 1.0) / e - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * e * e * e) -
         32.0 * (mu - 1.0) * (83.0 * mu * mu - 982.0 * mu + 3779.0) / (15.0 * std::pow(e, 5));
}

// Safeguarded Newton on a bracket [a, b] with J(a), J(b) of opposite sign.
double refine_zero(double nu, double a, double b, double fa, double guess) {
  const Order order(nu);
  double x = (guess > a && guess < b) ? guess : 0.5 * (a + b);
  for (int it = 0; it < 200; ++it) {
    const double fx = bessel_j(order, x);
    if (fx == 0.0) return x;
    if ((fx > 0.0) == (fa > 0.0)) {
      a = x;
      fa = fx;
    } else {
      b = x;
    }
    const double deriv = (nu / x) * fx - bessel_j(Order(nu + 1.0), x);
    double next = x - fx / deriv;
    if (!(next > a && next < b)) next = 0.5 * (a + b);
    if (std::abs(next - x) <= 4.0 * kEps * x || (b - a) <= 4.0 * kEps * x) return next;
    x = next;
  }
  throw ConvergenceError("bessel_j_zero: refinement did not converge", b - a);
}

template <typename Stop>
std::vector<double> scan_zeros(double nu, Stop stop) {
  require_order(nu, "bessel_j_zeros");
  const Order order(nu);
  std::vector<double> zeros;
  constexpr double kStep = 0.5;  // below half the minimal zero spacing
  double a = std::max(nu, 0.0) + 1e-3;
  double fa = bessel_j(order, a);
  while (!stop(zeros, a)) {
    const double b = a + kStep;
    const double fb = bessel_j(order, b);
    if ((fa > 0.0) != (fb > 0.0)) {
      const int m = static_cast<int>(zeros.size()) + 1;
      const double z = refine_zero(nu, a, b, fa, mcmahon_guess(nu, m));
      zeros.push_back(z);
      a = z + 1.0;
      fa = bessel_j(order, a);
      continue;
    }
    a = b;
    fa = fb;
  }
  return zeros;
}

}  // namespace

std::vector<double> bessel_j_zeros(Order nu, int count) {
  if (count < 0) throw DomainError("bessel_j_zeros: count must be nonnegative");
  return scan_zeros(nu.value, [count](const std::vector<double>& z, double) {
    return static_cast<int>(z.size()) >= count;
  });
}

std::vector<double> bessel_j_zeros_below(Order nu, double x_max) {
  auto zeros = scan_zeros(nu.value, [x_max](const std::vector<double>&, double a) { return a > x_max; });
  while (!zeros.empty() && zeros.back() > x_max) zeros.pop_back();
  return zeros;
}

double bessel_j_zero(Order nu, int m) {
  if (m < 1) throw DomainError("bessel_j_zero: index must be >= 1");
  return bessel_j_zeros(nu, m).back();
}

// ---------------------------------------------------------------------------
// Incomplete gamma

GammaPair reg_gamma_pair(int shape, double x) {
  if (shape < 1) throw DomainError("reg_lower_gamma: shape must be >= 1");
  require_nonnegative(x, "reg_lower_gamma");
  if (x == 0.0) return {0.0, 1.0};
  if (std::isinf(x)) return {1.0, 0.0};

  CompensatedSum<double> sum;
  if (x < shape) {
    // Poisson tail sum_{j >= shape}; terms decrease from the first one.
    double term = poisson_term(shape, x);
    sum.add(term);
    TailCriterion stop(1e-17, 0.0);
    for (int j = shape; j < shape + 100000; ++j) {
      term *= x / (j + 1);
      sum.add(term);
      if (term == 0.0 || stop.done(term, sum.value())) break;
    }
    const double lower = sum.value();
    return {lower, 1.0 - lower};
  }
  // Finite head sum_{j < shape}, taken from j = shape - 1 downwards.
  double term = poisson_term(shape - 1, x);
  sum.add(term);
  for (int j = shape - 1; j >= 1; --j) {
    term *= j / x;
    if (term == 0.0) break;
    sum.add(term);
  }
  const double upper = sum.value();
  return {1.0 - upper, upper};
}

double reg_lower_gamma(int shape, double x) { return reg_gamma_pair(shape, x).lower; }

double reg_upper_gamma(int shape, double x) { return reg_gamma_pair(shape, x).upper; }

// ---------------------------------------------------------------------------
// 2F2

Estimate hyp2f2(double a1, double a2, double b1, double b2, double x, Accuracy acc) {
  acc.validate();
  for (double b : {b1, b2}) {
    if (b <= 0.0 && b == std::floor(b)) {
      throw DomainError("hyp2f2: lower parameters must not be nonpositive integers");
    }
  }
  if (x < -kHyp2f2NegativeLimit) {
    throw GuardError("hyp2f2: argument " + std::to_string(x) + " below the cancellation guard -" +
                     std::to_string(kHyp2f2NegativeLimit));
  }
  constexpr long double kTailSafety = 1e-3L;
  CompensatedSum<long double> sum;
  long double term = 1.0L;
  long double largest = 1.0L;
  sum.add(term);
  TailCriterion stop(acc.rel_tol * static_cast<double>(kTailSafety), acc.abs_tol);
  bool converged = false;
  for (int n = 0; n < 200000; ++n) {
    term *= (static_cast<long double>(a1) + n) * (static_cast<long double>(a2) + n) /
            ((static_cast<long double>(b1) + n) * (static_cast<long double>(b2) + n)) * x / (n + 1.0L);
    sum.add(term);
    largest = std::max(largest, std::abs(term));
    // Terms only decay once n exceeds |x|; don't stop on an early dip.
    if (term == 0.0L || (n > std::abs(x) && stop.done(term, sum.value()))) {
      converged = true;
      break;
    }
  }
  const long double value = sum.value();
  const double tail = 3.0 * static_cast<double>(std::abs(term));
  if (!converged) throw ConvergenceError("hyp2f2: series did not converge", tail);
  const double cancellation =
      static_cast<double>(4.0L * LDBL_EPSILON * largest / std::max(std::abs(value), LDBL_MIN));
  if (cancellation > acc.rel_tol) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "hyp2f2: cancellation estimate %.3g exceeds requested tolerance %.3g at x = %g",
                  cancellation, acc.rel_tol, x);
    throw GuardError(buf);
  }
  const double v = static_cast<double>(value);
  return {v, cancellation * std::abs(v) + tail + kEps * std::abs(v)};
}

// ---------------------------------------------------------------------------
// alpha_k

std::optional<__int128> alpha_coeff_exact(int k, long long four_nu_squared) {
  if (k < 0) throw DomainError("alpha_coeff: k must be nonnegative");
  __int128 acc = 1;
  for (int l = 1; l <= k; ++l) {
    const __int128 odd = 2 * l - 1;
    const __int128 factor = static_cast<__int128>(four_nu_squared) - odd * odd;
    if (__builtin_mul_overflow(acc, factor, &acc)) return std::nullopt;
  }
  return acc;
}

double alpha_coeff(int k, double nu) {
  if (k < 0) throw DomainError("alpha_coeff: k must be nonnegative");
  const double four_nu_sq = 4.0 * nu * nu;
  if (four_nu_sq == std::floor(four_nu_sq) && four_nu_sq < 9e15) {
    if (auto exact = alpha_coeff_exact(k, static_cast<long long>(four_nu_sq))) {
      return static_cast<double>(*exact);
    }
  }
  double acc = 1.0;
  for (int l = 1; l <= k; ++l) {
    const double odd = 2.0 * l - 1.0;
    acc *= four_nu_sq - odd * odd;
  }
  return acc;
}

}  // namespace heisvar
