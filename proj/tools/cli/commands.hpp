#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "cli/run_config.hpp"

namespace curvint::cli {

enum ExitCode : int {
  kOk = 0,
  kVerificationFailed = 1,
  kUsageError = 2,
  kSingularInitialState = 3,
  kHitRadialPole = 4,
  kHitAngularSingularity = 5,
  kStepUnderflow = 6,
};

int exit_code_for(Termination t);

// Writes the trajectory CSV (t, r, phi, p_r, p_phi and the invariants of
// the system) to `out`; diagnostics go to `err`.
int run_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err);

// Writes the verification CSV to `out` and a summary to `err`. With
// cfg.verify_grid the suite runs over kappa in {-1, 0, 1} and
// m in {1, 2, 1/2, 3/2}, each cell starting from a seeded random state.
int run_verify(const RunConfig& cfg, std::uint64_t seed, std::ostream& out, std::ostream& err);

struct PotentialRow {
  double r = 0.0;
  double u_sphere = 0.0;      // kappa = 1
  double u_flat = 0.0;        // kappa = 0
  double u_hyperbolic = 0.0;  // kappa = -1
};

// Kepler potential -g cot_k(r) on `samples` evenly spaced radii.
// Throws std::invalid_argument unless 0 < r_min < r_max < pi and samples >= 2.
std::vector<PotentialRow> potential_curve(double g, double r_min, double r_max, int samples);
int run_potential_curve(double g, double r_min, double r_max, int samples, std::ostream& out,
                        std::ostream& err);

}  // namespace curvint::cli
