#pragma once

// Constants of motion of the curved Kepler, V_c and PW systems.
//
// The PW integrals come from two complex functions that rotate in phase
// under the flow,
//
//   M_r   = p_r sqrt(J2) + i (g - J2 cot_k(r)),     dM_r/dt   = i lambda M_r
//   N_phi = (k_b + J2 cos(m phi)) + i p_phi sqrt(J2) sin(m phi),
//                                                   dN_phi/dt = i m lambda N_phi
//
// with lambda = sqrt(J2) / sin_k(r)^2. For m = p/q the product
// M_r^p conj(N_phi)^q is therefore conserved; for q = 1 it is K_m.

#include <complex>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "curvint/dynamics.hpp"
#include "curvint/systems.hpp"

namespace curvint {

using ComplexValue = std::complex<double>;

// Noether momenta of the isometry group (p_x, p_y when kappa = 0).
double noether_p1(const PhaseState& state, const SystemSpec& spec);
double noether_p2(const PhaseState& state, const SystemSpec& spec);

// Angular momentum J = sin_k(r)^2 dphi/dt = p_phi.
double angular_j(const PhaseState& state);

// J1 = 2H and J2 = p_phi^2 + 2F(phi).
double j1(const PhaseState& state, const SystemSpec& spec);
double j2(const PhaseState& state, const SystemSpec& spec);

struct RungeLenz {
  double i3 = 0.0;
  double i4 = 0.0;
};

// I3 = P2 J - g cos(phi), I4 = P1 J + g sin(phi). Requires a Kepler spec.
RungeLenz runge_lenz(const PhaseState& state, const SystemSpec& spec);

struct VcIntegrals {
  double i2 = 0.0;
  double i3 = 0.0;
};

// The two quadratic integrals of curved V_c, with k2 = k_a and k3 = k_b.
// Requires a Vc spec.
VcIntegrals vc_integrals(const PhaseState& state, const SystemSpec& spec);

// The following need J2 > 0 (NegativeCasimirError otherwise). N_phi and K
// are defined for every kind except GenericF; Kepler and FreeGeodesic use
// m = 1, k_a = k_b = 0.
ComplexValue m_r(const PhaseState& state, const SystemSpec& spec);
ComplexValue n_phi(const PhaseState& state, const SystemSpec& spec);
double lambda_k(const PhaseState& state, const SystemSpec& spec);

// M_r^p * conj(N_phi)^q. p/q must equal spec.m() (std::invalid_argument
// otherwise). Powers are taken by repeated multiplication.
ComplexValue k_constant(const PhaseState& state, const SystemSpec& spec, int p, int q);
// Uses p/q = spec.m().
ComplexValue k_constant(const PhaseState& state, const SystemSpec& spec);

// Integer power by binary exponentiation; exact exponent, no branch cut.
ComplexValue ipow(ComplexValue z, unsigned n);

// A named phase-space function, used for drift reports and CSV columns.
struct NamedInvariant {
  std::string name;
  std::function<double(const PhaseState&)> eval;
};

// Columns appended to trajectory CSV output, per kind:
//   FreeGeodesic, GenericF: H, J2
//   Kepler: H, J2, I3, I4
//   Vc: H, J2, I3, K_re, K_im
//   PW: H, J2, K_re, K_im
std::vector<NamedInvariant> invariants_for(const SystemSpec& spec);

// Trajectory CSV with the invariant columns of invariants_for(spec). Cells
// that need sqrt(J2) are written as nan where J2 <= 0.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj, const SystemSpec& spec);

}  // namespace curvint
