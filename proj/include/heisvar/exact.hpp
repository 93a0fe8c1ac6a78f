#pragma once

// Closed-form means, variances and asymptotics of the Heisenberg family of
// determinantal point processes on C^D = R^{2D}, for balls B_R^{(2D)} and
// polydisks, plus hyperuniformity classification from variance growth.

#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "heisvar/specfun.hpp"

namespace heisvar {

/// Complex dimension D >= 1 and window radius R > 0.
struct HeisenbergParams {
  int D = 1;
  double R = 1.0;
};

enum class Route { bessel, hyp2f2, quadrature, spectral, montecarlo };

std::string_view to_string(Route r);

struct VarianceReport {
  double mean = 0.0;
  double variance = 0.0;
  double ratio = 0.0;  // variance / mean
  Route route = Route::bessel;
  double err_estimate = 0.0;
};

/// Coefficients c_k of R Var/E ~ prefactor * sum_k c_k R^{-2k}.
struct AsymptoticSeries {
  double prefactor = 0.0;  // D / sqrt(pi)
  std::vector<double> coeffs;
  int k_max = 0;
  double trunc_error = 0.0;
};

struct AsymptoticResult {
  double value = 0.0;
  AsymptoticSeries series;
};

enum class HyperuniformityLabel { ClassI, ClassII, ClassIII, NotHyperuniform };

std::string_view to_string(HyperuniformityLabel l);

struct HyperuniformityClass {
  HyperuniformityLabel label = HyperuniformityLabel::NotHyperuniform;
  double fitted_exponent = 0.0;
  double r_min = 0.0;
  double r_max = 0.0;
  /// Residual sums of squares in log space of the two fixed-exponent models
  /// Var = a R^{d-1} (Class I) and Var = a R^{d-1} log R (Class II).
  double rss_class_i = 0.0;
  double rss_class_ii = 0.0;
};

struct ClassifyOptions {
  double exponent_tol = 0.05;
};

// ---------------------------------------------------------------------------
// Balls

/// E = R^{2D} / D!, evaluated in log space.
double mean_ball(HeisenbergParams p);

/// Var = (R^{2D} e^{-2R^2}/D!) [I_0(2R^2) + 2 sum_{n=1}^{D-1} I_n(2R^2) + I_D(2R^2)].
VarianceReport variance_ball_bessel(HeisenbergParams p);

/// Var = (R^{2D}/D!) [1 - (R^{2D}/D!) 2F2(D, D+1/2; D+1, 2D+1; -4R^2)].
///
/// Throws GuardError where the alternating series loses more than
/// acc.rel_tol to cancellation; use variance_ball_bessel there.
VarianceReport variance_ball_2f2(HeisenbergParams p, Accuracy acc = Accuracy{1e-10, 0.0});

/// Var / E; equals 1 at R = 0 by continuous extension.
double ratio(HeisenbergParams p);

/// (D/sqrt(pi)) R^{-1} sum_{k<=k_max} (-1)^k alpha_k(D) / ((2k+1) k! 2^{4k}) R^{-2k},
/// cut earlier at the smallest term if the series starts to diverge.
AsymptoticResult asymptotic_ratio(HeisenbergParams p, int k_max);

/// Coefficients only (no R), for k = 0..k_max.
AsymptoticSeries asymptotic_series(int D, int k_max);

// ---------------------------------------------------------------------------
// Polydisks

/// Sums S1 = sum_k p_k(R), S2 = sum_k p_k(R)^2 and the cross term
/// S12 = sum_k p_k(R)(1 - p_k(R)), with a bound on the omitted tail.
struct PolydiskSums {
  double s1 = 0.0;
  double s2 = 0.0;
  double s12 = 0.0;
  double tail_bound = 0.0;
  int terms = 0;
};

PolydiskSums polydisk_sums(double R, Accuracy trunc = Accuracy{1e-15, 1e-16});

/// (sum_k p_k(R))^D; analytically R^{2D}.
double mean_polydisk(HeisenbergParams p, Accuracy trunc = Accuracy{1e-15, 1e-16});

/// (sum p_k)^D - (sum p_k^2)^D, with ratio 1 - (sum p_k^2 / sum p_k)^D.
VarianceReport variance_polydisk(HeisenbergParams p, Accuracy trunc = Accuracy{1e-15, 1e-16});

/// Two-term large-R expansion of R Var/E for the polydisk:
/// (D/sqrt pi)[1 - (D-1)/(2 sqrt pi) R^{-1} + ((D-1)(D-2)/(3 pi) - 1/8)/2 R^{-2}].
/// `order` selects how many correction terms (0, 1 or 2) are included.
double polydisk_expansion(int D, double R, int order);

// ---------------------------------------------------------------------------
// Classification

/// Log-spaced radii in [r_min, r_max].
std::vector<double> log_grid(double r_min, double r_max, int n_points);

/// Classifies the variance growth Var(R) of a stationary process in R^d
/// from samples on a radius grid.
HyperuniformityClass classify_samples(int d, std::span<const double> radii, std::span<const double> variances,
                                      ClassifyOptions opts = {});

/// Classifies the Heisenberg family in complex dimension D using the
/// Bessel route on a log-spaced grid.
HyperuniformityClass classify(int D, double r_min, double r_max, int n_points, ClassifyOptions opts = {});

/// Classifies an arbitrary variance function Var(R) in R^d.
HyperuniformityClass classify_function(int d, const std::function<double(double)>& variance, double r_min,
                                       double r_max, int n_points, ClassifyOptions opts = {});

}  // namespace heisvar
