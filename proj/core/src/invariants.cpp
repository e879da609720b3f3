#include "curvint/invariants.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "curvint/errors.hpp"

namespace curvint {

namespace {

double checked_sqrt_j2(const PhaseState& state, const SystemSpec& spec) {
  const double value = j2(state, spec);
  if (!(value > 0.0)) throw NegativeCasimirError(value);
  return std::sqrt(value);
}

void require_factorizable(const SystemSpec& spec, const char* who) {
  if (spec.kind() == SystemKind::GenericF) {
    throw std::invalid_argument(std::string(who) + ": not defined for a generic angular function");
  }
}

}  // namespace

double noether_p1(const PhaseState& state, const SystemSpec& spec) {
  const double cot = cot_k(spec.kappa(), state.r);
  return std::cos(state.phi) * state.p_r - cot * std::sin(state.phi) * state.p_phi;
}

double noether_p2(const PhaseState& state, const SystemSpec& spec) {
  const double cot = cot_k(spec.kappa(), state.r);
  return std::sin(state.phi) * state.p_r + cot * std::cos(state.phi) * state.p_phi;
}

double angular_j(const PhaseState& state) { return state.p_phi; }

double j1(const PhaseState& state, const SystemSpec& spec) {
  return 2.0 * hamiltonian(state, spec);
}

double j2(const PhaseState& state, const SystemSpec& spec) {
  return state.p_phi * state.p_phi + 2.0 * spec.angular(state.phi);
}

RungeLenz runge_lenz(const PhaseState& state, const SystemSpec& spec) {
  if (spec.kind() != SystemKind::Kepler) {
    throw std::invalid_argument("runge_lenz: requires a Kepler system");
  }
  const double J = angular_j(state);
  const double g = spec.g();
  return {noether_p2(state, spec) * J - g * std::cos(state.phi),
          noether_p1(state, spec) * J + g * std::sin(state.phi)};
}

VcIntegrals vc_integrals(const PhaseState& state, const SystemSpec& spec) {
  if (spec.kind() != SystemKind::Vc) {
    throw std::invalid_argument("vc_integrals: requires a Vc system");
  }
  const double k2 = spec.k_a();
  const double k3 = spec.k_b();
  const double s = std::sin(state.phi);
  const double c = std::cos(state.phi);
  if (std::abs(s) <= 8.0 * std::numeric_limits<double>::epsilon()) {
    throw PoleError(PoleKind::Angular, state.phi, "vc_integrals: sin(phi) vanishes");
  }
  const double s2 = s * s;
  const double J = angular_j(state);
  const double cot = cot_k(spec.kappa(), state.r);

  VcIntegrals out;
  out.i2 = J * J + 2.0 * k2 / s2 + 2.0 * k3 * c / s2;
  out.i3 = noether_p2(state, spec) * J - spec.g() * c + 2.0 * k2 * cot * (c / s2) +
           k3 * cot * ((1.0 + c * c) / s2);
  return out;
}

ComplexValue m_r(const PhaseState& state, const SystemSpec& spec) {
  const double root = checked_sqrt_j2(state, spec);
  const double cot = cot_k(spec.kappa(), state.r);
  return {state.p_r * root, spec.g() - root * root * cot};
}

ComplexValue n_phi(const PhaseState& state, const SystemSpec& spec) {
  require_factorizable(spec, "n_phi");
  const double root = checked_sqrt_j2(state, spec);
  const double m_phi = spec.m().times(state.phi);
  return {spec.k_b() + root * root * std::cos(m_phi), state.p_phi * root * std::sin(m_phi)};
}

double lambda_k(const PhaseState& state, const SystemSpec& spec) {
  const double root = checked_sqrt_j2(state, spec);
  const double s = sin_k(spec.kappa(), state.r);
  if (s == 0.0) throw PoleError(PoleKind::Radial, state.r, "lambda_k: sin_k(r) vanishes");
  return root / (s * s);
}

ComplexValue ipow(ComplexValue z, unsigned n) {
  ComplexValue result{1.0, 0.0};
  while (n != 0) {
    if (n & 1U) result *= z;
    z *= z;
    n >>= 1U;
  }
  return result;
}

ComplexValue k_constant(const PhaseState& state, const SystemSpec& spec, int p, int q) {
  require_factorizable(spec, "k_constant");
  if (p < 1 || q < 1) throw std::invalid_argument("k_constant: exponents must be positive");
  if (!(Rational(p, q) == spec.m()) || Rational(p, q).num() != p) {
    throw std::invalid_argument("k_constant: " + std::to_string(p) + "/" + std::to_string(q) +
                                " is not m = " + spec.m().to_string() + " in lowest terms");
  }
  const ComplexValue mr = m_r(state, spec);
  const ComplexValue n = n_phi(state, spec);
  return ipow(mr, static_cast<unsigned>(p)) * ipow(std::conj(n), static_cast<unsigned>(q));
}

ComplexValue k_constant(const PhaseState& state, const SystemSpec& spec) {
  return k_constant(state, spec, static_cast<int>(spec.m().num()),
                    static_cast<int>(spec.m().den()));
}

std::vector<NamedInvariant> invariants_for(const SystemSpec& spec) {
  std::vector<NamedInvariant> out;
  out.push_back({"H", [spec](const PhaseState& s) { return hamiltonian(s, spec); }});
  out.push_back({"J2", [spec](const PhaseState& s) { return j2(s, spec); }});
  switch (spec.kind()) {
    case SystemKind::Kepler:
      out.push_back({"I3", [spec](const PhaseState& s) { return runge_lenz(s, spec).i3; }});
      out.push_back({"I4", [spec](const PhaseState& s) { return runge_lenz(s, spec).i4; }});
      break;
    case SystemKind::Vc:
      out.push_back({"I3", [spec](const PhaseState& s) { return vc_integrals(s, spec).i3; }});
      [[fallthrough]];
    case SystemKind::PW:
      out.push_back({"K_re", [spec](const PhaseState& s) { return k_constant(s, spec).real(); }});
      out.push_back({"K_im", [spec](const PhaseState& s) { return k_constant(s, spec).imag(); }});
      break;
    case SystemKind::FreeGeodesic:
    case SystemKind::GenericF: break;
  }
  return out;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj, const SystemSpec& spec) {
  const auto columns = invariants_for(spec);
  os << "t,r,phi,p_r,p_phi";
  for (const auto& c : columns) os << ',' << c.name;
  os << '\n';
  char buf[64];
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const PhaseState& s = traj.states()[i];
    const double row[] = {traj.times()[i], s.r, wrap_angle(s.phi), s.p_r, s.p_phi};
    for (std::size_t j = 0; j < 5; ++j) {
      std::snprintf(buf, sizeof buf, j == 0 ? "%.17g" : ",%.17g", row[j]);
      os << buf;
    }
    for (const auto& c : columns) {
      // K is undefined once J2 <= 0; the row is still a valid state.
      double v = std::numeric_limits<double>::quiet_NaN();
      try {
        v = c.eval(s);
      } catch (const NegativeCasimirError&) {
      }
      std::snprintf(buf, sizeof buf, ",%.17g", v);
      os << buf;
    }
    os << '\n';
  }
}

}  // namespace curvint
