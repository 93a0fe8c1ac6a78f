#pragma once

#include <functional>
#include <span>
#include <vector>

#include "heisvar/specfun.hpp"

namespace heisvar {

/// How the unbounded tail of a radial integral is handled.
enum class TailStrategy {
  /// Integrand is negligible past a cutoff derived from a Gaussian envelope.
  gaussian_cutoff,
  /// Subtract the closed-form integral of x^{-1} J_nu(ax)^2 and integrate
  /// only the damped remainder.
  split_add1,
  /// Power-law tail: panels are integrated over a long range and the limit
  /// is extrapolated by least squares in 1/K.
  power_extrapolate,
};

struct QuadratureSpec {
  double rel_tol = 1e-12;
  double abs_tol = 1e-15;
  int max_subdivisions = 4000;
  TailStrategy tail_strategy = TailStrategy::gaussian_cutoff;

  void validate() const;
};

using Integrand = std::function<double(double)>;

/// Adaptive 7/15-point Gauss-Kronrod on [a, b]. Throws ConvergenceError
/// when the subdivision budget runs out above tolerance.
Estimate integrate_adaptive(const Integrand& f, double a, double b, const QuadratureSpec& q);

/// Integrates f over consecutive panels [edges[i], edges[i+1]] and sums the
/// panel results in index order.
Estimate integrate_panels(const Integrand& f, std::span<const double> edges, const QuadratureSpec& q);

/// Cumulative integrals of f at each edge (first entry 0), with the
/// accumulated error estimate of the last one.
std::vector<double> cumulative_panels(const Integrand& f, std::span<const double> edges,
                                      const QuadratureSpec& q, double* error = nullptr);

/// Limit as K -> infinity of I(K), given samples I(K_i) at increasing K_i
/// and the leading tail order (I(K) - I_inf ~ K^{-order}). Fits
/// I_inf + c1 u^order + c2 u^{order+1} + c3 u^{order+2}, u = K_0 / K, by
/// least squares. Returns the limit and the fit's residual scale.
Estimate extrapolate_power_tail(std::span<const double> cutoffs, std::span<const double> partials,
                                double order);

}  // namespace heisvar
