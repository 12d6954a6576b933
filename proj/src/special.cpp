#include "blochsim/special.hpp"

#include <algorithm>
#include <cmath>

namespace blochsim {

namespace {

constexpr int kMaxOrder = 5000;
constexpr double kMaxJArgument = 5000.0;
constexpr double kMaxIArgument = 700.0;
constexpr double kRescale = 1e250;

// Ascending series, used where the recurrence start would be wasteful.
double j_series(int n, double x) {
  const double half = 0.5 * x;
  double term = 1.0;
  for (int k = 1; k <= n; ++k) term *= half / k;
  double sum = term;
  const double h2 = half * half;
  for (int k = 1; k < 60; ++k) {
    term *= -h2 / (static_cast<double>(k) * (k + n));
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

double i_series(int n, double x) {
  const double half = 0.5 * x;
  double term = 1.0;
  for (int k = 1; k <= n; ++k) term *= half / k;
  double sum = term;
  const double h2 = half * half;
  for (int k = 1; k < 60; ++k) {
    term *= h2 / (static_cast<double>(k) * (k + n));
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return sum;
}

int miller_start(int n, double ax) {
  const double big = std::max<double>(n, ax);
  int m = static_cast<int>(big + 30.0 + std::sqrt(60.0 * (big + 1.0)));
  return m + (m % 2);
}

// Miller downward recurrence for J_0..J_{nmax}(x), x > 0, normalized with
// J_0 + 2 sum_k J_{2k} = 1.
void fill_j(int nmax, double x, std::vector<double>& scratch, std::vector<double>& out) {
  const int m = miller_start(nmax, x);
  scratch.assign(m + 2, 0.0);
  scratch[m + 1] = 0.0;
  scratch[m] = 1e-300;
  double norm = 0.0;
  for (int k = m; k >= 1; --k) {
    scratch[k - 1] = (2.0 * k / x) * scratch[k] - scratch[k + 1];
    if (std::abs(scratch[k - 1]) > kRescale) {
      for (int j = k - 1; j <= m + 1; ++j) scratch[j] /= kRescale;
      norm /= kRescale;
    }
    if ((k - 1) % 2 == 0 && k - 1 > 0) norm += 2.0 * scratch[k - 1];
  }
  norm += scratch[0];
  out.resize(nmax + 1);
  for (int k = 0; k <= nmax; ++k) out[k] = scratch[k] / norm;
}

// Downward recurrence for I_0..I_{nmax}(x), x > 0, normalized with
// I_0 + 2 sum_{k>=1} I_k = e^x.
void fill_i(int nmax, double x, std::vector<double>& scratch, std::vector<double>& out) {
  const int m = nmax + 40 + static_cast<int>(std::sqrt(120.0 * x));
  scratch.assign(m + 2, 0.0);
  scratch[m] = 1e-300;
  double norm = 0.0;
  for (int k = m; k >= 1; --k) {
    scratch[k - 1] = (2.0 * k / x) * scratch[k] + scratch[k + 1];
    if (scratch[k - 1] > kRescale) {
      for (int j = k - 1; j <= m + 1; ++j) scratch[j] /= kRescale;
      norm /= kRescale;
    }
    if (k - 1 > 0) norm += 2.0 * scratch[k - 1];
  }
  norm += scratch[0];
  // Scale e^x / norm in two factors to stay representable near x = 700.
  const double half = std::exp(0.5 * x);
  out.resize(nmax + 1);
  for (int k = 0; k <= nmax; ++k) out[k] = (scratch[k] / norm) * half * half;
}

void check_range(int n, double x, double xmax, const char* name) {
  if (std::abs(n) > kMaxOrder || !std::isfinite(x) || std::abs(x) > xmax) {
    throw Error(ErrorCode::range, std::string(name) + ": order/argument out of range");
  }
}

}  // namespace

double bessel_j(int n, double x) {
  check_range(n, x, kMaxJArgument, "bessel_j");
  // J_{-n} = (-1)^n J_n and J_n(-x) = (-1)^n J_n(x).
  double sign = 1.0;
  if (n < 0) {
    n = -n;
    if (n % 2) sign = -sign;
  }
  if (x < 0.0) {
    x = -x;
    if (n % 2) sign = -sign;
  }
  if (x == 0.0) return n == 0 ? sign : 0.0;
  if (x < 2.0) return sign * j_series(n, x);
  std::vector<double> scratch, out;
  fill_j(n, x, scratch, out);
  return sign * out[n];
}

double bessel_i(int n, double x) {
  check_range(n, x, kMaxIArgument, "bessel_i");
  n = std::abs(n);
  double sign = 1.0;
  if (x < 0.0) {
    x = -x;
    if (n % 2) sign = -1.0;
  }
  if (x == 0.0) return n == 0 ? 1.0 : 0.0;
  if (x < 2.0) return sign * i_series(n, x);
  std::vector<double> scratch, out;
  fill_i(n, x, scratch, out);
  return sign * out[n];
}

BesselWorkspace::BesselWorkspace(int max_order) : max_order_(max_order) {
  if (max_order < 0) throw Error(ErrorCode::invalid_parameter, "max_order must be >= 0");
  if (max_order > kMaxOrder) throw Error(ErrorCode::range, "max_order too large");
}

std::span<const double> BesselWorkspace::bessel_j(double x) {
  check_range(max_order_, x, kMaxJArgument, "bessel_j");
  const double ax = std::abs(x);
  if (ax == 0.0) {
    out_.assign(max_order_ + 1, 0.0);
    out_[0] = 1.0;
    return out_;
  }
  if (ax < 2.0) {
    out_.resize(max_order_ + 1);
    for (int k = 0; k <= max_order_; ++k) out_[k] = j_series(k, ax);
  } else {
    fill_j(max_order_, ax, scratch_, out_);
  }
  if (x < 0.0) {
    for (int k = 1; k <= max_order_; k += 2) out_[k] = -out_[k];
  }
  return out_;
}

std::span<const double> BesselWorkspace::bessel_i(double x) {
  check_range(max_order_, x, kMaxIArgument, "bessel_i");
  const double ax = std::abs(x);
  if (ax == 0.0) {
    out_.assign(max_order_ + 1, 0.0);
    out_[0] = 1.0;
    return out_;
  }
  if (ax < 2.0) {
    out_.resize(max_order_ + 1);
    for (int k = 0; k <= max_order_; ++k) out_[k] = i_series(k, ax);
  } else {
    fill_i(max_order_, ax, scratch_, out_);
  }
  if (x < 0.0) {
    for (int k = 1; k <= max_order_; k += 2) out_[k] = -out_[k];
  }
  return out_;
}

}  // namespace blochsim
