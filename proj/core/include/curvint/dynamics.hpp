#pragma once

#include <array>
#include <iosfwd>
#include <limits>
#include <string_view>
#include <utility>
#include <vector>

#include "curvint/systems.hpp"

namespace curvint {

// Time derivatives of (r, phi, p_r, p_phi).
struct PhaseRates {
  double dr = 0.0;
  double dphi = 0.0;
  double dp_r = 0.0;
  double dp_phi = 0.0;
};

// Hamilton's equations for H = (p_r^2 + p_phi^2/sin_k^2)/2 - g cot_k(r) + F(phi)/sin_k^2:
//   dr/dt     = p_r
//   dphi/dt   = p_phi / sin_k^2
//   dp_r/dt   = (p_phi^2 + 2F) cos_k / sin_k^3 - g / sin_k^2
//   dp_phi/dt = -F'(phi) / sin_k^2
PhaseRates eom(const PhaseState& state, const SystemSpec& spec);

enum class Termination { Completed, HitRadialPole, HitAngularSingularity, StepUnderflow };

std::string_view to_string(Termination t);

struct IntegratorConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double max_step = std::numeric_limits<double>::infinity();
  // Lower bound on sin_k(r) and, for barrier potentials, |sin(m phi)|.
  double singularity_margin = 1e-6;

  // Throws std::invalid_argument on non-positive tolerances or a margin
  // outside (0, 1).
  void validate() const;
};

// One accepted step: start point, size and f(start). Any point inside the
// step is recovered by re-taking a partial step from the start, which is
// a polynomial in the elapsed time and as accurate as the step itself.
struct DenseSegment {
  double t0 = 0.0;
  double h = 0.0;
  std::array<double, 4> y0{};
  std::array<double, 4> f0{};
};

class Trajectory {
 public:
  explicit Trajectory(SystemSpec spec) : spec_(std::move(spec)) {}

  const SystemSpec& spec() const noexcept { return spec_; }
  const std::vector<double>& times() const noexcept { return times_; }
  const std::vector<PhaseState>& states() const noexcept { return states_; }
  const std::vector<DenseSegment>& segments() const noexcept { return segments_; }
  Termination termination() const noexcept { return termination_; }

  std::size_t size() const noexcept { return times_.size(); }
  bool empty() const noexcept { return times_.empty(); }
  double t_begin() const { return times_.front(); }
  double t_end() const { return times_.back(); }

  // Interpolated state; t is clamped to [t_begin, t_end].
  PhaseState state_at(double t) const;
  // State at time t reached from the start of segment i; t need not lie
  // inside the segment but accuracy is only controlled there.
  PhaseState segment_state(std::size_t i, double t) const;

  void push_initial(double t, const PhaseState& s);
  void push_step(const DenseSegment& seg, double t, const PhaseState& s);
  void set_termination(Termination t) noexcept { termination_ = t; }

 private:
  SystemSpec spec_;
  std::vector<double> times_;
  std::vector<PhaseState> states_;
  std::vector<DenseSegment> segments_;
  Termination termination_ = Termination::Completed;
};

// Dormand-Prince 8(5,3) with per-component error control
//   |err_i| <= abs_tol + rel_tol * max(|y_i|, |y_i_new|),
// err_i being the blended fifth/third-order estimate of the step.
// phi is never wrapped.
// Throws std::invalid_argument if state0 is within singularity_margin of a
// pole or t_end <= 0.
Trajectory integrate(const PhaseState& state0, const SystemSpec& spec, double t_end,
                     const IntegratorConfig& cfg = {});

// The initial-state check integrate() performs. Returns the termination
// tag the state would trigger, or Completed if the state is admissible.
Termination check_interior(const PhaseState& state, const SystemSpec& spec, double margin);

// Wraps an angle into [0, 2 pi).
double wrap_angle(double phi);

// Header "t,r,phi,p_r,p_phi"; 17 significant digits; phi wrapped.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

}  // namespace curvint
