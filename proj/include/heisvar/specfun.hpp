#pragma once

// Special functions used by the variance routes: Bessel J_nu, exponentially
// scaled modified Bessel I_n, regularized incomplete gamma for integer shape,
// the 2F2 series and the alpha_k(nu) product coefficients.
//
// All functions are pure and thread-safe.

#include <optional>
#include <vector>

namespace heisvar {

/// Bessel order nu. Operations integrating x^{nu+1} forms require nu > -1.
struct Order {
  double value;
  constexpr explicit Order(double v) : value(v) {}
};

/// Relative tolerance in (0, 1e-3] plus a nonnegative absolute floor.
struct Accuracy {
  double rel_tol = 1e-15;
  double abs_tol = 0.0;

  /// Throws DomainError when the invariants are violated.
  void validate() const;
};

/// A value with an absolute error estimate.
struct Estimate {
  double value = 0.0;
  double error = 0.0;
};

// ---------------------------------------------------------------------------
// Bessel functions

/// J_nu(x) for x >= 0, nu > -1.
double bessel_j(Order nu, double x);
Estimate bessel_j_estimate(Order nu, double x);

/// J_nu(x) / x^nu, finite at x = 0 where it equals 1 / (2^nu Gamma(nu+1)).
double bessel_j_over_power(Order nu, double x);

/// e^{-x} I_n(x) for x >= 0. Does not overflow for x up to 1e6 and beyond.
double bessel_i_scaled(int n, double x);
Estimate bessel_i_scaled_estimate(int n, double x);

/// m-th positive zero of J_nu (m >= 1).
double bessel_j_zero(Order nu, int m);

/// First `count` positive zeros of J_nu, ascending.
std::vector<double> bessel_j_zeros(Order nu, int count);

/// Zeros of J_nu that are <= x_max, ascending.
std::vector<double> bessel_j_zeros_below(Order nu, double x_max);

// ---------------------------------------------------------------------------
// Incomplete gamma, integer shape

/// Both regularized incomplete gamma functions, each computed without
/// cancellation: lower = P(shape, x), upper = Q(shape, x) = 1 - P.
struct GammaPair {
  double lower;
  double upper;
};

GammaPair reg_gamma_pair(int shape, double x);

/// P(shape, x) = gamma(shape, x) / Gamma(shape), shape >= 1.
double reg_lower_gamma(int shape, double x);

/// Q(shape, x) = 1 - P(shape, x), accurate when P is close to 1.
double reg_upper_gamma(int shape, double x);

// ---------------------------------------------------------------------------
// Hypergeometric 2F2

/// Largest |x| accepted for negative arguments of hyp2f2.
inline constexpr double kHyp2f2NegativeLimit = 80.0;

/// sum_n (a1)_n (a2)_n / ((b1)_n (b2)_n) x^n / n!.
///
/// Summed in extended precision with compensated accumulation. The error
/// estimate includes the cancellation magnification max|term|/|sum| for
/// x < 0; a GuardError is thrown when the relative error estimate exceeds
/// acc.rel_tol or when x < -kHyp2f2NegativeLimit.
Estimate hyp2f2(double a1, double a2, double b1, double b2, double x,
                Accuracy acc = Accuracy{1e-13, 0.0});

// ---------------------------------------------------------------------------
// alpha_k(nu) = prod_{l=1}^k (4 nu^2 - (2l-1)^2), alpha_0 = 1

double alpha_coeff(int k, double nu);

/// Exact integer value of alpha_k(nu) given 4 nu^2 as an integer. Empty on
/// 128-bit overflow.
std::optional<__int128> alpha_coeff_exact(int k, long long four_nu_squared);

namespace detail {

// Individual evaluation branches, exposed for branch-consistency tests.

/// Power series of J_nu(x)/x^nu, compensated long double accumulation.
double bessel_j_over_power_series(double nu, double x);

/// Miller backward recurrence normalized by the Neumann sum
/// sum_k (nu0+2k) Gamma(nu0+k)/k! J_{nu0+2k}(x) = (x/2)^{nu0}.
double bessel_j_recurrence(double nu, double x);

/// Hankel asymptotic expansion with optimal truncation.
Estimate bessel_j_asymptotic(double nu, double x);

/// Crossover above which bessel_j uses the asymptotic expansion.
double bessel_j_asymptotic_crossover(double nu);

/// e^{-x} I_n(x) by power series.
double bessel_i_scaled_series(int n, double x);

/// e^{-x} I_n(x) by Miller backward recurrence normalized with
/// e^{-x}(I_0 + 2 sum I_k) = 1.
double bessel_i_scaled_recurrence(int n, double x);

/// e^{-x} I_n(x) by the large-argument expansion with optimal truncation.
Estimate bessel_i_scaled_asymptotic(int n, double x);

inline constexpr double kBesselIScaledCrossover = 30.0;

}  // namespace detail

}  // namespace heisvar
