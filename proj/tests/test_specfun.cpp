#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <cmath>
#include <numbers>
#include <vector>

#include "heisvar/errors.hpp"
#include "heisvar/specfun.hpp"

using namespace heisvar;

namespace {

// Direct power series of J_nu(x) in 128-bit floating point.
double j_series_oracle(double nu, double x, int terms = 200) {
  __float128 half = static_cast<__float128>(x) / 2;
  __float128 term = 1;
  for (int i = 1; i <= static_cast<int>(nu); ++i) term *= half / i;  // integer nu only
  __float128 sum = term;
  for (int n = 1; n < terms; ++n) {
    term *= -(half * half) / (static_cast<__float128>(n) * (nu + n));
    sum += term;
  }
  return static_cast<double>(sum);
}

// Miller backward recurrence for e^{-x} I_n(x), normalized by
// e^{-x}(I_0 + 2 sum_k I_k) = 1.
double miller_i_scaled_oracle(int n, double x) {
  const int start = 200;
  std::vector<long double> f(start + 2, 0.0L);
  f[start] = 1e-30L;
  for (int k = start; k >= 1; --k) f[k - 1] = (2.0L * k / x) * f[k] + f[k + 1];
  long double norm = f[0];
  for (int k = 1; k <= start; ++k) norm += 2.0L * f[k];
  return static_cast<double>(f[n] / norm);
}

bool close_rel(double a, double b, double tol) { return std::abs(a - b) <= tol * std::abs(b); }

}  // namespace

TEST_CASE("Accuracy validation") {
  CHECK_NOTHROW((Accuracy{1e-3, 0.0}.validate()));
  CHECK_THROWS_AS((Accuracy{0.0, 0.0}.validate()), DomainError);
  CHECK_THROWS_AS((Accuracy{1e-2, 0.0}.validate()), DomainError);
  CHECK_THROWS_AS((Accuracy{1e-6, -1.0}.validate()), DomainError);
}

TEST_CASE("bessel_j examples") {
  CHECK(std::abs(bessel_j(Order(0.5), std::numbers::pi)) <= 1e-12);
  CHECK(bessel_j(Order(0.0), 0.0) == 1.0);

  const double oracle = j_series_oracle(1.0, 5.0);
  CHECK(oracle == doctest::Approx(-0.32757913759146522204).epsilon(1e-15));
  CHECK(close_rel(bessel_j(Order(1.0), 5.0), oracle, 1e-12));
}

TEST_CASE("bessel_j errors") {
  CHECK_THROWS_AS(bessel_j(Order(1.0), -1.0), DomainError);
  CHECK_THROWS_AS(bessel_j(Order(-1.0), 1.0), DomainError);
  CHECK_THROWS_AS(bessel_j(Order(-0.5), 0.0), DomainError);
}

TEST_CASE("bessel_j half-integer closed forms") {
  for (double x : {0.3, 1.7, 4.0, 12.5, 19.0, 25.0, 333.3, 9876.5}) {
    const double amp = std::sqrt(2.0 / (std::numbers::pi * x));
    CHECK(std::abs(bessel_j(Order(0.5), x) - amp * std::sin(x)) <= 1e-13 * amp);
    CHECK(std::abs(bessel_j(Order(-0.5), x) - amp * std::cos(x)) <= 1e-13 * amp);
    CHECK(std::abs(bessel_j(Order(1.5), x) - amp * (std::sin(x) / x - std::cos(x))) <= 1e-13 * amp);
  }
}

TEST_CASE("bessel_j agrees with Boost to 1e-12 relative away from zeros") {
  for (double nu : {0.0, 0.5, 1.0, 2.0, 2.5, 5.0, 10.0, 0.3, -0.4}) {
    for (double x = 0.05; x <= 1e4; x *= 1.37) {
      const double ref = boost::math::cyl_bessel_j(nu, x);
      const double got = bessel_j(Order(nu), x);
      const double envelope = std::min(std::sqrt(2.0 / (std::numbers::pi * x)), 1.0);
      // Relative where the function is not near a zero, absolute-to-envelope otherwise.
      const double scale = std::max(std::abs(ref), 0.1 * envelope);
      INFO("nu=" << nu << " x=" << x << " got=" << got << " ref=" << ref);
      CHECK(std::abs(got - ref) <= 1e-12 * scale);
    }
  }
}

TEST_CASE("bessel_j branch consistency across the asymptotic crossover") {
  for (double nu : {0.0, 0.5, 1.0, 2.0, 5.0, 10.0}) {
    const double xc = detail::bessel_j_asymptotic_crossover(nu);
    for (int i = 0; i < 20; ++i) {
      const double x = xc * (0.9 + 0.01 * i);
      const double below = detail::bessel_j_recurrence(nu, x);
      const double above = detail::bessel_j_asymptotic(nu, x).value;
      const double envelope = std::sqrt(2.0 / (std::numbers::pi * x));
      INFO("nu=" << nu << " x=" << x);
      CHECK(std::abs(below - above) <= 10.0 * 1e-13 * envelope);
    }
  }
}

TEST_CASE("bessel_j series and recurrence agree where both apply") {
  for (double nu : {0.0, 0.5, 1.0, 3.0}) {
    for (double x : {0.5, 1.0, 1.9}) {
      const double s = std::pow(x, nu) * detail::bessel_j_over_power_series(nu, x);
      CHECK(close_rel(detail::bessel_j_recurrence(nu, x), s, 1e-13));
    }
  }
}

TEST_CASE("bessel_j three-term recurrence") {
  for (int nu = 1; nu <= 8; ++nu) {
    for (double x = 0.1; x <= 100.0; x *= 1.11) {
      const double lhs = bessel_j(Order(nu - 1), x) + bessel_j(Order(nu + 1), x);
      const double jn = bessel_j(Order(nu), x);
      const double rhs = (2.0 * nu / x) * jn;
      const double scale = std::max({std::abs(lhs), std::abs(rhs), std::abs(bessel_j(Order(nu - 1), x))});
      INFO("nu=" << nu << " x=" << x);
      CHECK(std::abs(lhs - rhs) <= 1e-10 * scale);
    }
  }
}

TEST_CASE("bessel_j_over_power is smooth through zero") {
  CHECK(bessel_j_over_power(Order(1.0), 0.0) == doctest::Approx(0.5));
  CHECK(bessel_j_over_power(Order(1.0), 1e-8) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(bessel_j_over_power(Order(2.0), 3.0) == doctest::Approx(bessel_j(Order(2.0), 3.0) / 9.0).epsilon(1e-14));
}

TEST_CASE("bessel_i_scaled examples") {
  CHECK(bessel_i_scaled(0, 0.0) == 1.0);
  CHECK(bessel_i_scaled(3, 0.0) == 0.0);
  const double oracle = miller_i_scaled_oracle(1, 2.0);
  CHECK(oracle == doctest::Approx(0.21526928924893765916).epsilon(1e-15));
  CHECK(close_rel(bessel_i_scaled(1, 2.0), oracle, 1e-12));
  CHECK_THROWS_AS(bessel_i_scaled(0, -1.0), DomainError);
}

TEST_CASE("bessel_i_scaled agrees with Boost and stays finite for huge x") {
  for (int n : {0, 1, 2, 5, 8, 20}) {
    for (double x = 0.01; x <= 600.0; x *= 1.29) {
      const double ref = boost::math::cyl_bessel_i(n, x) * std::exp(-x);
      INFO("n=" << n << " x=" << x);
      CHECK(close_rel(bessel_i_scaled(n, x), ref, 1e-12));
    }
  }
  const double big = bessel_i_scaled(2, 1e6);
  CHECK(std::isfinite(big));
  CHECK(close_rel(big, 1.0 / std::sqrt(2.0 * std::numbers::pi * 1e6), 1e-5));
}

TEST_CASE("bessel_i_scaled branches agree at their boundaries") {
  for (int n : {0, 1, 4, 10}) {
    for (double x : {25.0, 30.0, 35.0, 120.0}) {
      const double rec = detail::bessel_i_scaled_recurrence(n, x);
      CHECK(close_rel(detail::bessel_i_scaled_series(n, x), rec, 1e-13));
      if (x >= double(n) * n) CHECK(close_rel(detail::bessel_i_scaled_asymptotic(n, x).value, rec, 1e-13));
    }
  }
}

TEST_CASE("bessel_i_scaled ordering in n") {
  for (double x = 0.05; x <= 500.0; x *= 1.5) {
    for (int n = 0; n < 12; ++n) {
      const double hi = bessel_i_scaled(n, x);
      const double lo = bessel_i_scaled(n + 1, x);
      INFO("n=" << n << " x=" << x);
      CHECK(lo > 0.0);
      CHECK(lo < hi);
    }
  }
}

TEST_CASE("bessel_j zeros") {
  CHECK(bessel_j_zero(Order(1.0), 1) == doctest::Approx(3.8317059702075123156).epsilon(1e-13));
  CHECK(bessel_j_zero(Order(0.0), 3) == doctest::Approx(boost::math::cyl_bessel_j_zero(0.0, 3)).epsilon(1e-13));
  const auto z = bessel_j_zeros(Order(10.0), 5);
  REQUIRE(z.size() == 5);
  for (int m = 0; m < 5; ++m) {
    CHECK(z[m] == doctest::Approx(boost::math::cyl_bessel_j_zero(10.0, m + 1)).epsilon(1e-12));
  }
  const auto half = bessel_j_zeros_below(Order(0.5), 10.0);
  REQUIRE(half.size() == 3);
  CHECK(half[2] == doctest::Approx(3.0 * std::numbers::pi).epsilon(1e-13));
}

TEST_CASE("reg_lower_gamma examples") {
  CHECK(reg_lower_gamma(1, 1.0) == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-15));
  CHECK(reg_lower_gamma(5, 0.0) == 0.0);
  const double quad = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      [](double u) { return u * u * std::exp(-u) / 2.0; }, 0.0, 2.5, 10, 1e-15);
  CHECK(std::abs(reg_lower_gamma(3, 2.5) - quad) <= 1e-12);
  CHECK_THROWS_AS(reg_lower_gamma(1, -0.1), DomainError);
  CHECK_THROWS_AS(reg_lower_gamma(0, 1.0), DomainError);
}

TEST_CASE("reg_lower_gamma monotone with limits") {
  for (int shape : {1, 2, 5, 17, 60, 250}) {
    double prev = 0.0;
    for (double x = 0.0; x <= shape + 40.0 * std::sqrt(shape); x += 0.05 * std::sqrt(shape)) {
      const double p = reg_lower_gamma(shape, x);
      INFO("shape=" << shape << " x=" << x);
      CHECK(p >= prev);
      CHECK(p <= 1.0);
      prev = p;
    }
    CHECK(std::abs(reg_lower_gamma(shape, shape + 40.0 * std::sqrt(shape)) - 1.0) <= 1e-10);
    CHECK(reg_lower_gamma(shape, 0.0) == 0.0);
  }
}

TEST_CASE("reg_gamma_pair complements are accurate in both tails") {
  // Q(1, x) = e^{-x}; P(3, x) ~ x^3/6 for tiny x.
  CHECK(close_rel(reg_upper_gamma(1, 50.0), std::exp(-50.0), 1e-13));
  CHECK(close_rel(reg_lower_gamma(3, 1e-5), 1e-15 / 6.0, 1e-4));
  for (int shape : {1, 3, 30}) {
    for (double x : {0.5, 3.0, 29.0, 31.0, 80.0}) {
      const auto pq = reg_gamma_pair(shape, x);
      CHECK(std::abs(pq.lower + pq.upper - 1.0) <= 4e-16);
    }
  }
}

TEST_CASE("hyp2f2 examples") {
  CHECK(hyp2f2(2.5, 3.0, 4.0, 1.5, 0.0).value == 1.0);
  CHECK(hyp2f2(1, 1, 1, 1, 1.0).value == doctest::Approx(std::exp(1.0)).epsilon(1e-14));

  // Independent 128-bit summation.
  __float128 term = 1;
  __float128 sum = 1;
  for (int n = 0; n < 400; ++n) {
    term *= (__float128(1) + n) * (__float128(1.5) + n) / ((__float128(2) + n) * (__float128(3) + n)) *
            __float128(-4) / (n + 1);
    sum += term;
  }
  const double oracle = static_cast<double>(sum);
  CHECK(oracle == doctest::Approx(0.47622238819739130131).epsilon(1e-15));
  CHECK(std::abs(hyp2f2(1, 1.5, 2, 3, -4.0).value - oracle) <= 1e-10);
}

TEST_CASE("hyp2f2 guards") {
  CHECK_THROWS_AS(hyp2f2(1, 1, 0, 2, 1.0), DomainError);
  CHECK_THROWS_AS(hyp2f2(1, 1, -3, 2, 1.0), DomainError);
  CHECK_THROWS_AS(hyp2f2(1, 1.5, 2, 3, -81.0), GuardError);
  // Cancellation grows like e^{|x|}; a strict tolerance trips the guard first.
  CHECK_THROWS_AS((hyp2f2(1, 1.5, 2, 3, -60.0, Accuracy{1e-12, 0.0})), GuardError);
  const auto loose = hyp2f2(1, 1.5, 2, 3, -10.0, Accuracy{1e-8, 0.0});
  CHECK(loose.error > 0.0);
}

TEST_CASE("alpha_coeff examples and identities") {
  CHECK(alpha_coeff(0, 7.0) == 1.0);
  CHECK(alpha_coeff(1, 1.0) == 3.0);
  CHECK(alpha_coeff(2, 1.0) == -15.0);
  CHECK(alpha_coeff(3, 0.5) == 0.0);

  for (int d = 1; d <= 8; ++d) {
    for (int k = 0; k <= 10; ++k) {
      const auto a = alpha_coeff_exact(k, 4LL * d * d);
      const auto b = alpha_coeff_exact(k, 4LL * (d + 1) * (d + 1));
      REQUIRE(a.has_value());
      REQUIRE(b.has_value());
      CHECK(*a != 0);
      const __int128 num = 2 * d + 2 * k + 1;
      const __int128 den = 2 * d - 2 * k + 1;
      if (den != 0) CHECK(*b * den == *a * num);
    }
  }
  CHECK_FALSE(alpha_coeff_exact(60, 4LL * 50 * 50).has_value());
}
