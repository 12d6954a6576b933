#include "blochsim/model.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "blochsim/error.hpp"

namespace blochsim {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_parameter: return "invalid-parameter";
    case ErrorCode::no_oscillation: return "no-oscillation";
    case ErrorCode::range: return "range";
    case ErrorCode::numeric: return "numeric";
    case ErrorCode::invalid_profile: return "invalid-profile";
    case ErrorCode::unsupported_continuation: return "unsupported-continuation";
    case ErrorCode::singularity: return "singularity";
    case ErrorCode::degenerate: return "degenerate";
    case ErrorCode::step_size: return "step-size";
    case ErrorCode::window_too_small: return "window-too-small";
    case ErrorCode::config: return "config";
  }
  return "unknown";
}

WindowTooSmall::WindowTooSmall(double time, double fraction)
    : Error(ErrorCode::window_too_small,
            "window too small: boundary probability fraction " +
                std::to_string(fraction) + " at t = " + std::to_string(time)),
      time_(time),
      fraction_(fraction) {}

namespace {

double reduce_to_zone(double q, double a) {
  const double zone = 2.0 * kPi / a;
  return q - zone * std::floor((q + kPi / a) / zone);
}

cplx sum_hoppings(std::span<const Hopping> hoppings, double q, double a) {
  const double qr = reduce_to_zone(q, a);
  cplx e{0.0, 0.0};
  for (const auto& h : hoppings) e += h.amplitude * std::polar(1.0, qr * a * h.offset);
  return e;
}

}  // namespace

LatticeModel::LatticeModel(std::vector<Hopping> hoppings, double a, double force,
                           std::string label)
    : a_(a), force_(force), label_(std::move(label)) {
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw Error(ErrorCode::invalid_parameter, "lattice period must be positive");
  }
  if (!std::isfinite(force)) {
    throw Error(ErrorCode::invalid_parameter, "force must be finite");
  }
  std::map<int, cplx> table;
  for (const auto& h : hoppings) {
    if (!std::isfinite(h.amplitude.real()) || !std::isfinite(h.amplitude.imag())) {
      throw Error(ErrorCode::invalid_parameter, "hopping amplitudes must be finite");
    }
    if (h.offset == 0) {
      warnings_.push_back("dropped on-site term kappa_0 (energy bias fixed to zero)");
      continue;
    }
    table[h.offset] += h.amplitude;
  }
  if (table.empty()) {
    throw Error(ErrorCode::invalid_parameter, "hopping table must be non-empty");
  }
  hoppings_.reserve(table.size());
  for (const auto& [offset, amp] : table) hoppings_.push_back({offset, amp});
}

cplx LatticeModel::dispersion(double q) const { return sum_hoppings(hoppings_, q, a_); }

cplx Dispersion::operator()(double q) const { return sum_hoppings(hoppings_, q, a_); }

cplx LatticeModel::band_integral(double from, double to) const {
  // Antiderivative of kappa_l e^{i u a l} is kappa_l e^{i u a l} / (i a l).
  cplx acc{0.0, 0.0};
  for (const auto& h : hoppings_) {
    const double k = a_ * h.offset;
    acc += h.amplitude * (std::polar(1.0, to * k) - std::polar(1.0, from * k)) /
           cplx(0.0, k);
  }
  return acc;
}

bool LatticeModel::is_hermitian() const {
  for (const auto& h : hoppings_) {
    auto partner = std::find_if(hoppings_.begin(), hoppings_.end(),
                                [&](const Hopping& o) { return o.offset == -h.offset; });
    const cplx other = partner == hoppings_.end() ? cplx{} : partner->amplitude;
    if (other != std::conj(h.amplitude)) return false;
  }
  return true;
}

double LatticeModel::bloch_period() const {
  if (force_ == 0.0) {
    throw Error(ErrorCode::no_oscillation, "F = 0: undriven lattice has no Bloch period");
  }
  return 2.0 * kPi / (std::abs(force_) * a_);
}

double LatticeModel::hopping_norm() const {
  double s = 0.0;
  for (const auto& h : hoppings_) s += std::abs(h.amplitude);
  return s;
}

int LatticeModel::max_offset() const {
  int m = 0;
  for (const auto& h : hoppings_) m = std::max(m, std::abs(h.offset));
  return m;
}

LatticeModel LatticeModel::with_force(double force) const {
  LatticeModel copy = *this;
  if (!std::isfinite(force)) {
    throw Error(ErrorCode::invalid_parameter, "force must be finite");
  }
  copy.force_ = force;
  return copy;
}

double LatticeModel::delta_r() const { return builtin_.kappa * std::cosh(builtin_.mu); }
double LatticeModel::delta_i() const { return builtin_.kappa * std::sinh(builtin_.mu); }

LatticeModel make_hatano_nelson(double kappa, double mu, double a, double force) {
  if (!(kappa > 0.0)) throw Error(ErrorCode::invalid_parameter, "kappa must be positive");
  if (!std::isfinite(mu)) throw Error(ErrorCode::invalid_parameter, "mu must be finite");
  LatticeModel m({{1, kappa * std::exp(mu)}, {-1, kappa * std::exp(-mu)}}, a, force,
                 "hatano_nelson");
  m.kind_ = ModelKind::hatano_nelson;
  m.builtin_ = {kappa, mu};
  return m;
}

LatticeModel make_imaginary_hopping(double kappa, double a, double force) {
  if (!(kappa > 0.0)) throw Error(ErrorCode::invalid_parameter, "kappa must be positive");
  LatticeModel m({{1, cplx(0.0, kappa)}, {-1, cplx(0.0, kappa)}}, a, force,
                 "imaginary_hopping");
  m.kind_ = ModelKind::imaginary_hopping;
  m.builtin_ = {kappa, 0.0};
  return m;
}

double bloch_period(const LatticeModel& model) { return model.bloch_period(); }

}  // namespace blochsim
