#include "curvint/systems.hpp"

#include <charconv>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "curvint/errors.hpp"

namespace curvint {

namespace {

constexpr double kAngularZeroTol = 8.0 * std::numeric_limits<double>::epsilon();

double sin_m_phi_checked(double phi, Rational m) {
  const double s = std::sin(m.times(phi));
  if (std::abs(s) <= kAngularZeroTol) {
    throw PoleError(PoleKind::Angular, phi,
                    "F_m: sin(m phi) vanishes at phi = " + std::to_string(phi) +
                        " (m = " + m.to_string() + ")");
  }
  return s;
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (num < 1 || den < 1) {
    throw std::invalid_argument("Rational: numerator and denominator must be positive, got " +
                                std::to_string(num) + "/" + std::to_string(den));
  }
  const auto d = std::gcd(num, den);
  num_ = num / d;
  den_ = den / d;
}

std::string Rational::to_string() const {
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::parse(std::string_view text) {
  auto parse_int = [&](std::string_view s) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      throw std::invalid_argument("Rational: cannot parse '" + std::string(text) + "'");
    }
    return v;
  };
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int(text), 1);
  return Rational(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
}

std::string_view to_string(SystemKind kind) {
  switch (kind) {
    case SystemKind::FreeGeodesic: return "free";
    case SystemKind::Kepler: return "kepler";
    case SystemKind::Vc: return "vc";
    case SystemKind::PW: return "pw";
    case SystemKind::GenericF: return "generic";
  }
  return "unknown";
}

SystemSpec SystemSpec::free_geodesic(Curvature kappa) {
  SystemSpec s;
  s.kind_ = SystemKind::FreeGeodesic;
  s.kappa_ = kappa;
  return s;
}

SystemSpec SystemSpec::kepler(Curvature kappa, double g) {
  SystemSpec s;
  s.kind_ = SystemKind::Kepler;
  s.kappa_ = kappa;
  s.g_ = g;
  return s;
}

SystemSpec SystemSpec::vc(Curvature kappa, double g, double k2, double k3) {
  SystemSpec s = pw(kappa, g, k2, k3, Rational(1, 1));
  s.kind_ = SystemKind::Vc;
  return s;
}

SystemSpec SystemSpec::pw(Curvature kappa, double g, double k_a, double k_b, Rational m) {
  if (!std::isfinite(g) || !std::isfinite(k_a) || !std::isfinite(k_b)) {
    throw DomainError("SystemSpec: non-finite coupling constant");
  }
  SystemSpec s;
  s.kind_ = SystemKind::PW;
  s.kappa_ = kappa;
  s.g_ = g;
  s.k_a_ = k_a;
  s.k_b_ = k_b;
  s.m_ = m;
  return s;
}

SystemSpec SystemSpec::generic(Curvature kappa, double g, AngularFunction f) {
  if (!f.value || !f.derivative) {
    throw std::invalid_argument("SystemSpec::generic: F and F' must both be provided");
  }
  SystemSpec s;
  s.kind_ = SystemKind::GenericF;
  s.kappa_ = kappa;
  s.g_ = g;
  s.generic_ = std::make_shared<const AngularFunction>(std::move(f));
  return s;
}

SystemSpec SystemSpec::with_kappa(Curvature kappa) const {
  SystemSpec s = *this;
  s.kappa_ = kappa;
  return s;
}

double SystemSpec::angular(double phi) const {
  switch (kind_) {
    case SystemKind::FreeGeodesic:
    case SystemKind::Kepler: return 0.0;
    case SystemKind::Vc:
    case SystemKind::PW: return angular_F_m(phi, k_a_, k_b_, m_);
    case SystemKind::GenericF: return generic_->value(phi);
  }
  return 0.0;
}

double SystemSpec::angular_derivative(double phi) const {
  switch (kind_) {
    case SystemKind::FreeGeodesic:
    case SystemKind::Kepler: return 0.0;
    case SystemKind::Vc:
    case SystemKind::PW: return angular_F_m_derivative(phi, k_a_, k_b_, m_);
    case SystemKind::GenericF: return generic_->derivative(phi);
  }
  return 0.0;
}

double angular_F_m(double phi, double k_a, double k_b, Rational m) {
  const double s = sin_m_phi_checked(phi, m);
  const double c = std::cos(m.times(phi));
  return (k_a + k_b * c) / (s * s);
}

double angular_F_m_derivative(double phi, double k_a, double k_b, Rational m) {
  const double s = sin_m_phi_checked(phi, m);
  const double c = std::cos(m.times(phi));
  return -m.value() * (k_b * s * s + 2.0 * c * (k_a + k_b * c)) / (s * s * s);
}

AngularCoefficients reparam_alpha_beta(double alpha, double beta) {
  return {2.0 * (alpha + beta), 2.0 * (beta - alpha)};
}

double potential(const PhaseState& state, const SystemSpec& spec) {
  if (spec.kind() == SystemKind::FreeGeodesic) return 0.0;
  const Curvature kappa = spec.kappa();
  const double kepler = -spec.g() * cot_k(kappa, state.r);
  if (spec.is_central()) return kepler;
  const double s = sin_k(kappa, state.r);
  return kepler + spec.angular(state.phi) / (s * s);
}

double hamiltonian(const PhaseState& state, const SystemSpec& spec) {
  const double s = sin_k(spec.kappa(), state.r);
  if (s == 0.0) {
    throw PoleError(PoleKind::Radial, state.r, "hamiltonian: sin_k(r) vanishes");
  }
  const double kinetic = 0.5 * (state.p_r * state.p_r + state.p_phi * state.p_phi / (s * s));
  return kinetic + potential(state, spec);
}

}  // namespace curvint
