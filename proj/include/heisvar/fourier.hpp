#pragma once

// Radial Fourier analysis for stationary point processes in R^d: Hankel-type
// transforms of radial functions, the ball indicator and its
// autocorrelation (the intersection volume of two balls), and number
// variances by quadrature in Fourier space or in real space.
//
// Transform convention: f^(k) = int f(x) e^{-i k.x} dx, so for radial f
//   f^(kappa) = (2 pi)^{d/2} int_0^inf f(r) [J_nu(kappa r) / (kappa r)^nu] r^{d-1} dr,
// nu = d/2 - 1, and the inverse carries (2 pi)^{-d}.

#include <functional>
#include <variant>

#include "heisvar/exact.hpp"
#include "heisvar/quadrature.hpp"

namespace heisvar {

enum class ProfileSpace { real_space_c, fourier_space_s };

/// |f(t)| <= A exp(-(t/scale)^2) for some A of order one.
struct GaussianDecay {
  double scale = 1.0;
};

/// |f(t)| = O(t^{-exponent}). `period` is the shortest oscillation length
/// of f itself (0 if f does not oscillate); it sets the panel width.
struct PowerDecay {
  double exponent = 2.0;
  double period = 0.0;
};

/// f(t) = 0 for t > limit.
struct CompactDecay {
  double limit = 0.0;
};

using Decay = std::variant<std::monostate, GaussianDecay, PowerDecay, CompactDecay>;

/// A radial function together with what is known about its decay. For
/// fourier_space_s profiles (structure factors) the decay describes
/// 1 - s(kappa), which is what the variance quadrature integrates.
struct RadialProfile {
  std::function<double(double)> eval;
  ProfileSpace space = ProfileSpace::real_space_c;
  Decay decay;
};

struct DensityParams {
  double rho_tilde = 1.0;
  int d = 2;
};

enum class Direction { forward, inverse };

double ball_volume(int d, double R);

/// Fourier transform of the indicator of B_R in R^d:
/// (2 pi)^{d/2} (R/kappa)^{d/2} J_{d/2}(kappa R); ball_volume at kappa = 0.
double ball_indicator_ft(int d, double R, double kappa);

/// Fourier transform of the intersection volume:
/// (2 pi)^d R^d J_{d/2}(kappa R)^2 / kappa^d.
double intersection_volume_ft(int d, double R, double kappa);

/// vol(B_R cap (B_R + x)) for |x| = r, from the two hyperspherical caps:
/// V_d R^d I_{1 - (r/2R)^2}((d+1)/2, 1/2).
double intersection_volume_real(int d, double R, double r);

/// s(kappa) = 1 - exp(-kappa^2/4), the same for every D.
double structure_factor_heisenberg(int D, double kappa);

/// The Heisenberg structure factor as a profile (decay of 1 - s is Gaussian).
RadialProfile heisenberg_structure_profile();

/// c(r) = -exp(-r^2), the Heisenberg total correlation function.
RadialProfile heisenberg_correlation_profile();

/// s = 1 (Poisson): 1 - s vanishes identically.
RadialProfile poisson_structure_profile();

/// Heisenberg density pi^{-D} in d = 2D.
DensityParams heisenberg_density(int D);

/// Radial transform at kappa (forward) or r (inverse). Lobes between zeros
/// of the kernel are integrated adaptively; the tail follows the profile's
/// decay descriptor.
Estimate radial_fourier(int d, const RadialProfile& profile, double kappa_or_r, Direction direction,
                        const QuadratureSpec& q = {});

/// Var = (2 pi^{d/2} rho / Gamma(d/2)) R^d [1/d - int_0^inf J_{d/2}(kappa R)^2 / kappa (1 - s) dkappa].
/// Throws DomainError if the profile has no decay descriptor.
VarianceReport variance_quadrature_fourier(DensityParams dens, const RadialProfile& s_hat, double R,
                                           const QuadratureSpec& q = {});

/// Var = rho [vol(B_R) + (2 pi^{d/2} rho / Gamma(d/2)) int_0^{2R} I(r) c(r) r^{d-1} dr].
VarianceReport variance_quadrature_real(DensityParams dens, const RadialProfile& c, double R,
                                        const QuadratureSpec& q = {});

/// int_0^inf J_n(kappa R)^2 / kappa dkappa by quadrature with power-tail
/// extrapolation; analytically 1/(2n).
Estimate bessel_square_integral(int n, double R, const QuadratureSpec& q = {});

/// int_0^inf J_n(kappa R)^2 / kappa e^{-kappa^2/4} dkappa by quadrature.
Estimate damped_bessel_square_integral(int n, double R, const QuadratureSpec& q = {});

/// Closed form of the damped integral:
/// (2R)^{2n} / (2^{2n+1} n^2 Gamma(n)) 2F2(n, n+1/2; n+1, 2n+1; -4R^2).
double damped_bessel_square_closed(int n, double R);

/// A_n(R) = int_0^inf J_n(kappa R)^2 / kappa (1 - e^{-kappa^2/4}) dkappa
/// satisfies n A_n - (n-1) A_{n-1} = (e^{-2R^2}/2)[I_{n-1} + I_n](2R^2).
/// Returns the largest residual over n = 1..D.
double recurrence_check_An(int D, double R, const QuadratureSpec& q = {});

}  // namespace heisvar
