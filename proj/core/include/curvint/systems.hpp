#pragma once

// Potentials and Hamiltonians in geodesic polar coordinates (r, phi):
//
//   H = (p_r^2 + p_phi^2 / sin_k(r)^2) / 2 - g cos_k(r)/sin_k(r) + F(phi)/sin_k(r)^2
//
// The kinds differ only in the angular function F:
//   FreeGeodesic  g = 0, F = 0
//   Kepler        F = 0
//   Vc            F = F_1 (k_a, k_b play the role of k2, k3)
//   PW            F = F_m,  F_m = (k_a + k_b cos(m phi)) / sin^2(m phi)
//   GenericF      user supplied F and F'

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <string_view>

#include "curvint/kappa_trig.hpp"

namespace curvint {

// Positive rational p/q, always stored in lowest terms.
class Rational {
 public:
  constexpr Rational() = default;
  // Throws std::invalid_argument unless num >= 1 and den >= 1.
  Rational(std::int64_t num, std::int64_t den);

  std::int64_t num() const noexcept { return num_; }
  std::int64_t den() const noexcept { return den_; }
  double value() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }
  // (num * x) / den, without first rounding num/den.
  double times(double x) const noexcept {
    return static_cast<double>(num_) * x / static_cast<double>(den_);
  }

  std::string to_string() const;
  // Accepts "p/q" or "p".
  static Rational parse(std::string_view text);

  friend bool operator==(const Rational&, const Rational&) = default;

 private:
  std::int64_t num_ = 1;
  std::int64_t den_ = 1;
};

struct PhaseState {
  double r = 0.0;
  double phi = 0.0;
  double p_r = 0.0;
  double p_phi = 0.0;

  friend bool operator==(const PhaseState&, const PhaseState&) = default;
};

enum class SystemKind { FreeGeodesic, Kepler, Vc, PW, GenericF };

std::string_view to_string(SystemKind kind);

// Angular function for SystemKind::GenericF. Both members must be set.
struct AngularFunction {
  std::function<double(double)> value;
  std::function<double(double)> derivative;
};

class SystemSpec {
 public:
  static SystemSpec free_geodesic(Curvature kappa);
  static SystemSpec kepler(Curvature kappa, double g);
  // Curved V_c with coefficients k2 (1/sin^2 phi) and k3 (cos phi/sin^2 phi).
  static SystemSpec vc(Curvature kappa, double g, double k2, double k3);
  static SystemSpec pw(Curvature kappa, double g, double k_a, double k_b, Rational m);
  static SystemSpec generic(Curvature kappa, double g, AngularFunction f);

  SystemKind kind() const noexcept { return kind_; }
  Curvature kappa() const noexcept { return kappa_; }
  double g() const noexcept { return g_; }
  double k_a() const noexcept { return k_a_; }
  double k_b() const noexcept { return k_b_; }
  Rational m() const noexcept { return m_; }

  // True when F depends on sin(m phi) and so is singular on sin(m phi) = 0.
  bool has_angular_barrier() const noexcept {
    return kind_ == SystemKind::Vc || kind_ == SystemKind::PW;
  }
  bool is_central() const noexcept {
    return kind_ == SystemKind::FreeGeodesic || kind_ == SystemKind::Kepler;
  }

  // Same system on a surface of different curvature.
  SystemSpec with_kappa(Curvature kappa) const;

  double angular(double phi) const;
  double angular_derivative(double phi) const;

 private:
  SystemSpec() = default;

  SystemKind kind_ = SystemKind::FreeGeodesic;
  Curvature kappa_{};
  double g_ = 0.0;
  double k_a_ = 0.0;
  double k_b_ = 0.0;
  Rational m_{};
  std::shared_ptr<const AngularFunction> generic_;
};

// F_m(phi) = k_a / sin^2(m phi) + k_b cos(m phi) / sin^2(m phi).
// Throws PoleError (PoleKind::Angular) where sin(m phi) vanishes.
double angular_F_m(double phi, double k_a, double k_b, Rational m);
double angular_F_m_derivative(double phi, double k_a, double k_b, Rational m);

struct AngularCoefficients {
  double k_a = 0.0;
  double k_b = 0.0;
};

// Converts the (alpha, beta) form
//   alpha / cos^2(m phi) + beta / sin^2(m phi)
// into the F_{2m} coefficients: k_a = 2(alpha + beta), k_b = 2(beta - alpha).
// Note the Euclidean PW potential carries an extra 1/2 in front of the
// (alpha, beta) bracket; F_m enters H without it, so PW(alpha, beta) with
// that prefactor corresponds to reparam_alpha_beta(alpha/2, beta/2).
AngularCoefficients reparam_alpha_beta(double alpha, double beta);

double potential(const PhaseState& state, const SystemSpec& spec);
double hamiltonian(const PhaseState& state, const SystemSpec& spec);

}  // namespace curvint
