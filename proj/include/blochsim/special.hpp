#pragma once

#include <complex>
#include <span>
#include <vector>

#include "blochsim/error.hpp"

namespace blochsim {

/// Integer-order Bessel function of the first kind. Absolute error below
/// 1e-12 for |n| <= 200, |x| <= 100.
double bessel_j(int n, double x);

/// Integer-order modified Bessel function of the first kind, |x| <= 700.
double bessel_i(int n, double x);

/// Scratch for filling whole order ranges J_0..J_max (or I_0..I_max) with one
/// downward sweep. Per-thread; not shared.
class BesselWorkspace {
 public:
  explicit BesselWorkspace(int max_order);

  int max_order() const { return max_order_; }

  /// Values for orders 0..max_order; negative orders follow from parity.
  std::span<const double> bessel_j(double x);
  std::span<const double> bessel_i(double x);

 private:
  int max_order_;
  std::vector<double> scratch_;
  std::vector<double> out_;
};

/// Trapezoidal rule (L/N) sum_j f(j L / N) for an L-periodic integrand.
/// Spectrally accurate for smooth f. Requires N >= 8.
template <class Fn>
std::complex<double> periodic_quadrature(Fn&& f, double length, int points) {
  if (points < 8) throw Error(ErrorCode::invalid_parameter, "quadrature needs N >= 8");
  std::complex<double> acc{0.0, 0.0};
  const double h = length / points;
  for (int j = 0; j < points; ++j) acc += std::complex<double>(f(j * h));
  return acc * h;
}

}  // namespace blochsim
