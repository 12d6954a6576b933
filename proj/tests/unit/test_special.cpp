#include "doctest.h"

#include <cmath>
#include <utility>

#include "blochsim/error.hpp"
#include "blochsim/special.hpp"

using namespace blochsim;

namespace {

// 40-term ascending series in extended precision.
long double series_oracle(int n, long double x, long double sign) {
  long double term = 1.0L;
  for (int k = 1; k <= n; ++k) term *= x / (2.0L * k);
  long double sum = term;
  for (int k = 1; k < 40; ++k) {
    term *= sign * (x / 2.0L) * (x / 2.0L) / (static_cast<long double>(k) * (k + n));
    sum += term;
  }
  return sum;
}

long double j_series_oracle(int n, long double x) { return series_oracle(n, x, -1.0L); }
long double i_series_oracle(int n, long double x) { return series_oracle(n, x, 1.0L); }

// J_n(x) = (1/2pi) \int_0^{2pi} cos(n tau - x sin tau) d tau, trapezoidal in long double.
long double j_integral_oracle(int n, long double x) {
  const int points = 2048;
  long double acc = 0.0L;
  for (int k = 0; k < points; ++k) {
    const long double tau = 2.0L * 3.141592653589793238462643383279L * k / points;
    acc += std::cos(n * tau - x * std::sin(tau));
  }
  return acc / points;
}

// e^{-x} I_n(x) = (1/2pi) \int_0^{2pi} e^{x (cos tau - 1)} cos(n tau) d tau.
long double scaled_i_integral_oracle(int n, long double x) {
  const int points = 4096;
  long double acc = 0.0L;
  for (int k = 0; k < points; ++k) {
    const long double tau = 2.0L * 3.141592653589793238462643383279L * k / points;
    acc += std::exp(x * (std::cos(tau) - 1.0L)) * std::cos(n * tau);
  }
  return acc / points;
}

}  // namespace

TEST_CASE("bessel_j trivial values") {
  CHECK(bessel_j(0, 0.0) == 1.0);
  CHECK(bessel_j(3, 0.0) == 0.0);
  CHECK(bessel_j(-3, 0.0) == 0.0);
  CHECK(std::abs(bessel_j(1, 2.0) - static_cast<double>(j_series_oracle(1, 2.0L))) < 1e-14);
}

TEST_CASE("bessel_j against the oracles over the working range") {
  // The alternating series carries ~1e-12 cancellation error at x = 20 even
  // in extended precision; the integral form is the tighter reference.
  double worst_series = 0.0, worst_integral = 0.0;
  for (int n = 0; n <= 40; ++n) {
    for (double x : {0.1, 0.5, 1.0, 1.9, 2.0, 2.5, 5.0, 7.3, 10.0, 12.5, 15.0, 20.0}) {
      worst_series = std::max(worst_series, std::abs(bessel_j(n, x) - static_cast<double>(j_series_oracle(n, x))));
      worst_integral = std::max(worst_integral, std::abs(bessel_j(n, x) - static_cast<double>(j_integral_oracle(n, x))));
    }
  }
  CHECK(worst_series < 1e-10);
  CHECK(worst_integral < 1e-12);
}

TEST_CASE("bessel_j against the integral representation up to |x| = 100") {
  double worst = 0.0;
  for (int n : {0, 1, 2, 7, 30, 64, 99, 100, 101, 150, 200}) {
    for (double x : {3.3, 25.0, 49.9, 75.0, 99.0, 100.0}) {
      worst = std::max(worst, std::abs(bessel_j(n, x) - static_cast<double>(j_integral_oracle(n, x))));
    }
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("bessel_j parity and recurrence") {
  for (int n = 0; n <= 30; ++n) {
    for (double x : {0.7, 3.0, 11.0, 20.0}) {
      const double sign = n % 2 ? -1.0 : 1.0;
      CHECK(bessel_j(-n, x) == doctest::Approx(sign * bessel_j(n, x)).epsilon(1e-15));
      CHECK(bessel_j(n, -x) == doctest::Approx(sign * bessel_j(n, x)).epsilon(1e-15));
      if (n >= 1) {
        const double lhs = bessel_j(n - 1, x) + bessel_j(n + 1, x);
        CHECK(std::abs(lhs - 2.0 * n / x * bessel_j(n, x)) < 1e-10);
      }
    }
  }
}

TEST_CASE("sum of J_n(x)^2 is one") {
  for (double x : {0.3, 1.0, 5.0, 10.0, 20.0, 33.3, 40.0}) {
    const int top = static_cast<int>(x) + 60;
    BesselWorkspace ws(top);
    const auto j = ws.bessel_j(x);
    double s = j[0] * j[0];
    for (int n = 1; n <= top; ++n) s += 2.0 * j[n] * j[n];
    CHECK(std::abs(s - 1.0) < 1e-10);
  }
}

TEST_CASE("bessel_i values") {
  CHECK(bessel_i(0, 0.0) == 1.0);
  CHECK(bessel_i(2, 0.0) == 0.0);
  CHECK(bessel_i(0, 1.0) == doctest::Approx(static_cast<double>(i_series_oracle(0, 1.0L))).epsilon(1e-14));

  double worst = 0.0;
  for (int n = 0; n <= 40; ++n) {
    for (double x : {0.1, 0.5, 1.0, 1.9, 2.0, 2.5, 5.0, 10.0, 15.0, 20.0}) {
      const double ref = static_cast<double>(i_series_oracle(n, x));
      worst = std::max(worst, std::abs(bessel_i(n, x) / ref - 1.0));
    }
  }
  CHECK(worst < 1e-10);

  // Pairs where e^{-x} I_n(x) is large enough for the integral oracle to resolve.
  for (auto [n, x] : {std::pair{0, 50.0}, {1, 50.0}, {5, 50.0}, {40, 50.0}, {0, 200.0},
                      {40, 200.0}, {0, 699.0}, {40, 699.0}, {120, 699.0}}) {
    const double ref = static_cast<double>(scaled_i_integral_oracle(n, x));
    CHECK(std::abs(bessel_i(n, x) * std::exp(-x) / ref - 1.0) < 1e-10);
  }
  for (int n = 0; n < 10; ++n) {
    CHECK(bessel_i(-n, 3.0) == bessel_i(n, 3.0));
    CHECK(bessel_i(n, -3.0) == doctest::Approx((n % 2 ? -1 : 1) * bessel_i(n, 3.0)));
  }
}

TEST_CASE("Bessel range errors") {
  auto code = [](auto fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::numeric;
  };
  CHECK(code([] { bessel_j(6000, 1.0); }) == ErrorCode::range);
  CHECK(code([] { bessel_j(1, std::nan("")); }) == ErrorCode::range);
  CHECK(code([] { bessel_i(0, 800.0); }) == ErrorCode::range);
}

TEST_CASE("workspace sweep matches the scalar routines") {
  BesselWorkspace ws(60);
  for (double x : {-13.0, -0.5, 0.0, 1.5, 20.0}) {
    const auto j = ws.bessel_j(x);
    for (int n = 0; n <= 60; ++n) CHECK(std::abs(j[n] - bessel_j(n, x)) < 1e-14);
    const auto iv = ws.bessel_i(x);
    for (int n = 0; n <= 60; ++n) {
      CHECK(iv[n] == doctest::Approx(bessel_i(n, x)).epsilon(1e-13));
    }
  }
}

TEST_CASE("periodic quadrature") {
  for (int n : {8, 16, 100}) {
    const double len = 3.0;
    const auto v = periodic_quadrature(
        [&](double x) { return std::polar(1.0, 2.0 * 3.141592653589793 * x / len); }, len, n);
    CHECK(std::abs(v) < 1e-14);
    CHECK(std::abs(periodic_quadrature([](double) { return std::complex<double>(2.0, -1.0); }, len, n) -
                   std::complex<double>(6.0, -3.0)) < 1e-13);
  }
  const double two_pi = 2.0 * 3.141592653589793;
  const auto ecos = periodic_quadrature([](double x) { return std::exp(std::cos(x)); }, two_pi, 64);
  CHECK(std::abs(ecos.real() - two_pi * bessel_i(0, 1.0)) < 1e-13);

  CHECK_THROWS_AS(periodic_quadrature([](double) { return 1.0; }, 1.0, 7), Error);
}

TEST_CASE("periodic quadrature converges spectrally") {
  // exp(R cos x) with R = 12: the trapezoidal error at N points is about
  // 4 pi I_N(R), so the N = 32 error sits above rounding.
  const double two_pi = 2.0 * 3.141592653589793;
  const double r = 12.0;
  const double exact = two_pi * bessel_i(0, r);
  auto err = [&](int n) {
    return std::abs(periodic_quadrature([&](double x) { return std::exp(r * std::cos(x)); }, two_pi, n)
                        .real() - exact) / exact;
  };
  const double e16 = err(16), e32 = err(32);
  CHECK(e16 > 1e-10);
  CHECK(e32 / e16 < 1e-3);
}
