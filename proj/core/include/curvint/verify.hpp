#pragma once

// Numerical cross-checks that do not reuse the analytic derivatives of the
// dynamics module: finite-difference Poisson brackets, drift along
// integrated trajectories, finite-difference rotation laws, phase-space
// recurrence and kappa -> 0 scans.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "curvint/dynamics.hpp"
#include "curvint/invariants.hpp"
#include "curvint/systems.hpp"

namespace curvint {

using PhaseFunction = std::function<double(const PhaseState&)>;

struct BracketEstimate {
  double value = 0.0;
  // Sum of |df/dq dg/dp| + |df/dp dg/dq| over both pairs; the size of the
  // terms that cancel when the bracket vanishes.
  double scale = 0.0;
};

// Central-difference {f, g} over (r, p_r) and (phi, p_phi). The step for
// each coordinate is h * max(1, |coordinate|). A singular point inside the
// stencil raises StencilError.
BracketEstimate poisson_bracket_fd_scaled(const PhaseFunction& f, const PhaseFunction& g,
                                          const PhaseState& state, double h = 1e-5);
double poisson_bracket_fd(const PhaseFunction& f, const PhaseFunction& g, const PhaseState& state,
                          double h = 1e-5);

struct DriftReport {
  std::string name;
  double initial = 0.0;
  double max_abs_deviation = 0.0;
  // max_abs_deviation / (1 + |initial|)
  double relative_drift = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

using TimedFunction = std::function<double(double t, const PhaseState&)>;

// Throws std::invalid_argument on an empty trajectory.
DriftReport drift(const Trajectory& traj, const NamedInvariant& invariant, double threshold);
DriftReport drift(const Trajectory& traj, const std::string& name, const TimedFunction& f,
                  double threshold);

struct RotationOptions {
  // Multiplies lambda in the expected law; -1 gives a negative control.
  double lambda_sign = 1.0;
  double threshold = 1e-5;
  double min_samples_per_period = 100.0;
};

struct RotationReport {
  // max |dM_r/dt - i lambda M_r| / max(lambda |M_r|)
  double m_residual = 0.0;
  // max |dN_phi/dt - i m lambda N_phi| / max(m lambda |N_phi|)
  double n_residual = 0.0;
  double samples_per_period = 0.0;
  std::size_t samples = 0;
  double threshold = 0.0;
  bool pass = false;
};

// Derivatives are five-point differences of the dense output taken inside
// each accepted step. Throws Error when the trajectory has fewer than
// min_samples_per_period accepted steps per 2 pi of M_r phase.
RotationReport rotation_check(const Trajectory& traj, const SystemSpec& spec,
                              const RotationOptions& opts = {});

// `base` with max_step capped so that a re-run of `traj` advances the M_r
// phase by at most 2 pi / samples_per_period per step (lambda taken at its
// largest sampled value).
IntegratorConfig rotation_sampling_config(const Trajectory& traj, const IntegratorConfig& base,
                                          double samples_per_period = 150.0);

enum class ClosureStatus { Found, NotFound, NotApplicable };

struct ClosureResult {
  ClosureStatus status = ClosureStatus::NotFound;
  double period = 0.0;
  // max over coordinates of |state(T) - state(0)|, phi taken mod 2 pi.
  double mismatch = 0.0;
};

// max-norm phase-space distance with phi compared modulo 2 pi.
double phase_mismatch(const PhaseState& a, const PhaseState& b);

// Smallest T > 0 with phase_mismatch(state(T), state(0)) < tol. A start
// above the escape energy (is_bounded false) yields NotApplicable.
ClosureResult closure_detect(const Trajectory& traj, double tol = 1e-6);

struct LimitRow {
  std::string quantity;
  double value_at_zero = 0.0;
  // |f(+-1e-8) - f(0)|, the larger of the two signs.
  double diff_at_1e8 = 0.0;
  // max over the scan of |f(kappa) - f(0)| / (|kappa| scale)
  double rate_constant = 0.0;
  double scale = 0.0;
  bool pass = false;
};

struct LimitReport {
  std::vector<LimitRow> rows;
  bool pass = false;
};

// Evaluates H, J2, M_r, N_phi and lambda at kappa = +-10^-k, k = 4..12, and
// checks |f(kappa) - f(0)| <= C |kappa| scale with C fixed by the coarsest
// point, plus |f(1e-8) - f(0)| <= 1e-7 scale.
LimitReport euclidean_limit_scan(const SystemSpec& spec, const PhaseState& state);

struct ModuliResidual {
  double m_residual = 0.0;  // ||M_r|^2 - ((2H - kappa J2) J2 + g^2)|
  double m_scale = 0.0;
  double n_residual = 0.0;  // ||N_phi|^2 - (J2^2 - 2 k_a J2 + k_b^2)|
  double n_scale = 0.0;
};

ModuliResidual moduli_residual(const PhaseState& state, const SystemSpec& spec);

// Random-state generation for verification grids.
using Rng = std::mt19937_64;

// Reads CURVINT_SEED, falling back to `fallback` when unset or unparsable.
std::uint64_t seed_from_env(std::uint64_t fallback = 20140601);

// Interior state: sin_k(r) and |sin(m phi)| well away from zero, and
// J2 > 0 for every kind except GenericF.
PhaseState sample_interior_state(const SystemSpec& spec, Rng& rng);

// Energy below the escape threshold of the radial motion. For kappa > 0
// every interior state qualifies; for kappa <= 0 the radial effective
// potential tends to -g sqrt(-kappa) and bounded motion needs H below it.
bool is_bounded(const PhaseState& state, const SystemSpec& spec);

// Rejection sampling over sample_interior_state; nullopt when no bounded
// state turns up in max_attempts draws.
std::optional<PhaseState> sample_bounded_state(const SystemSpec& spec, Rng& rng,
                                               int max_attempts = 20000);

// One row of a verification report.
struct CheckRow {
  std::string check;
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

class VerificationReport {
 public:
  void add(CheckRow row) { rows_.push_back(std::move(row)); }
  void append(const VerificationReport& other);

  const std::vector<CheckRow>& rows() const noexcept { return rows_; }
  bool all_pass() const noexcept;

  // Header "check,name,value,threshold,pass".
  void write_csv(std::ostream& os) const;
  void write_summary(std::ostream& os) const;

 private:
  std::vector<CheckRow> rows_;
};

struct SuiteOptions {
  double t_end = 100.0;
  IntegratorConfig integrator{};
  int random_states = 100;
  std::uint64_t seed = 20140601;
  // Adds checks on corrupted invariants (J2 + t drift, J2 + r bracket)
  // that are expected to fail.
  bool negative_control = false;
  // Prefix for every row name, e.g. "kappa=1,m=2/1".
  std::string label;
};

// Drift, bracket, rotation, moduli and Euclidean-limit checks appropriate
// to spec.kind(), starting from `state0`.
VerificationReport run_verification_suite(const SystemSpec& spec, const PhaseState& state0,
                                          const SuiteOptions& opts);

// Runs fn(0) ... fn(n - 1) on up to hardware_concurrency threads and
// returns the results in index order. The first exception is rethrown.
template <class Fn>
auto parallel_map(std::size_t n, Fn fn) -> std::vector<decltype(fn(std::size_t{}))> {
  using R = decltype(fn(std::size_t{}));
  std::vector<std::optional<R>> slots(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        slots[i].emplace(fn(i));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers = std::min(n, static_cast<std::size_t>(hw));
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  std::vector<R> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    out.push_back(std::move(*slots[i]));
  }
  return out;
}

}  // namespace curvint
