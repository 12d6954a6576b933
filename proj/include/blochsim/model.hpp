#pragma once

#include <complex>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace blochsim {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

/// One term kappa_l of the hopping table: amplitude for c_{n+offset}.
struct Hopping {
  int offset;
  cplx amplitude;
};

enum class ModelKind { custom, hatano_nelson, imaginary_hopping };

/// Parameters of the two built-in models, kept so the closed-form results
/// can be selected without re-deriving them from the hopping table.
struct BuiltinParams {
  double kappa = 1.0;
  double mu = 0.0;
};

/// Driven single-band tight-binding chain
///   i dc_n/dt = sum_l kappa_l c_{n+l} + n F a c_n   (hbar = 1).
/// Immutable after construction.
class LatticeModel {
 public:
  /// Offset 0 entries are dropped with a warning; duplicate offsets are summed.
  LatticeModel(std::vector<Hopping> hoppings, double a, double force,
               std::string label = {});

  std::span<const Hopping> hoppings() const { return hoppings_; }
  double period() const { return a_; }
  double force() const { return force_; }
  const std::string& label() const { return label_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  ModelKind kind() const { return kind_; }
  const BuiltinParams& builtin() const { return builtin_; }

  /// E(q) = sum_l kappa_l exp(i q a l); q is reduced to the first zone.
  cplx dispersion(double q) const;
  double dispersion_real(double q) const { return dispersion(q).real(); }
  double dispersion_imag(double q) const { return dispersion(q).imag(); }

  /// Exact integral of E(u) du over [from, to], closed term by term.
  cplx band_integral(double from, double to) const;

  bool is_hermitian() const;

  /// T_B = 2 pi / (|F| a). Throws no_oscillation when F == 0.
  double bloch_period() const;

  /// Sum of |kappa_l|.
  double hopping_norm() const;
  int max_offset() const;

  LatticeModel with_force(double force) const;

  // Hatano-Nelson accessors; only meaningful for kind() == hatano_nelson.
  double delta_r() const;
  double delta_i() const;

 private:
  friend LatticeModel make_hatano_nelson(double, double, double, double);
  friend LatticeModel make_imaginary_hopping(double, double, double);

  std::vector<Hopping> hoppings_;
  double a_;
  double force_;
  std::string label_;
  std::vector<std::string> warnings_;
  ModelKind kind_ = ModelKind::custom;
  BuiltinParams builtin_;
};

/// Value view of the band, evaluable without the rest of the model.
class Dispersion {
 public:
  explicit Dispersion(const LatticeModel& model)
      : hoppings_(model.hoppings().begin(), model.hoppings().end()),
        a_(model.period()) {}

  cplx operator()(double q) const;
  double real(double q) const { return (*this)(q).real(); }
  double imag(double q) const { return (*this)(q).imag(); }
  double period() const { return a_; }

 private:
  std::vector<Hopping> hoppings_;
  double a_;
};

/// kappa_{+1} = kappa e^{mu}, kappa_{-1} = kappa e^{-mu}.
LatticeModel make_hatano_nelson(double kappa, double mu, double a, double force);

/// kappa_{+1} = kappa_{-1} = i kappa; E(q) = 2 i kappa cos(qa).
LatticeModel make_imaginary_hopping(double kappa, double a, double force);

double bloch_period(const LatticeModel& model);
inline cplx dispersion(const LatticeModel& model, double q) { return model.dispersion(q); }
inline bool is_hermitian(const LatticeModel& model) { return model.is_hermitian(); }

}  // namespace blochsim
