#include "cli/commands.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>

#include "curvint/invariants.hpp"
#include "curvint/verify.hpp"

namespace curvint::cli {

int exit_code_for(Termination t) {
  switch (t) {
    case Termination::Completed: return kOk;
    case Termination::HitRadialPole: return kHitRadialPole;
    case Termination::HitAngularSingularity: return kHitAngularSingularity;
    case Termination::StepUnderflow: return kStepUnderflow;
  }
  return kStepUnderflow;
}

int run_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const SystemSpec spec = cfg.system();
  cfg.integrator.validate();
  if (!(cfg.t_end > 0.0)) throw ConfigError("<config>", 0, "t_end must be positive");

  Termination start = Termination::Completed;
  try {
    start = check_interior(cfg.initial, spec, cfg.integrator.singularity_margin);
  } catch (const Error& e) {
    err << "error: initial state: " << e.what() << '\n';
    return kSingularInitialState;
  }
  if (start != Termination::Completed) {
    err << "error: initial state is singular (" << to_string(start) << ")\n";
    return kSingularInitialState;
  }

  const Trajectory traj = integrate(cfg.initial, spec, cfg.t_end, cfg.integrator);
  write_trajectory_csv(out, traj, spec);
  if (traj.termination() != Termination::Completed) {
    err << "integration stopped at t = " << traj.t_end() << ": " << to_string(traj.termination())
        << '\n';
  }
  return exit_code_for(traj.termination());
}

int run_verify(const RunConfig& cfg, std::uint64_t seed, std::ostream& out, std::ostream& err) {
  const SystemSpec base = cfg.system();
  cfg.integrator.validate();

  SuiteOptions opts;
  opts.t_end = cfg.t_end;
  opts.integrator = cfg.integrator;
  opts.random_states = cfg.random_states;
  opts.seed = seed;
  opts.negative_control = cfg.negative_control;

  VerificationReport report;
  if (cfg.verify_grid) {
    if (base.kind() != SystemKind::PW) {
      throw ConfigError("<config>", 0, "verify_grid requires kind = pw");
    }
    const double kappas[] = {-1.0, 0.0, 1.0};
    const Rational ms[] = {{1, 1}, {2, 1}, {1, 2}, {3, 2}};
    struct Cell {
      SystemSpec spec;
      std::uint64_t seed;
    };
    std::vector<Cell> cells;
    for (double k : kappas) {
      for (const auto& m : ms) {
        cells.push_back({SystemSpec::pw(Curvature(k), base.g(), base.k_a(), base.k_b(), m),
                         seed + cells.size()});
      }
    }
    const auto reports = parallel_map(cells.size(), [&](std::size_t i) {
      const Cell& cell = cells[i];
      Rng rng(cell.seed);
      const auto bounded = sample_bounded_state(cell.spec, rng);
      const PhaseState s0 = bounded ? *bounded : sample_interior_state(cell.spec, rng);
      SuiteOptions o = opts;
      o.seed = cell.seed;
      char label[64];
      std::snprintf(label, sizeof label, "kappa=%g,m=%s", cell.spec.kappa().value(),
                    cell.spec.m().to_string().c_str());
      o.label = label;
      return run_verification_suite(cell.spec, s0, o);
    });
    for (const auto& r : reports) report.append(r);
  } else {
    Termination start = Termination::Completed;
    try {
      start = check_interior(cfg.initial, base, cfg.integrator.singularity_margin);
    } catch (const Error& e) {
      err << "error: initial state: " << e.what() << '\n';
      return kSingularInitialState;
    }
    if (start != Termination::Completed) {
      err << "error: initial state is singular (" << to_string(start) << ")\n";
      return kSingularInitialState;
    }
    report = run_verification_suite(base, cfg.initial, opts);
  }

  report.write_csv(out);
  report.write_summary(err);
  return report.all_pass() ? kOk : kVerificationFailed;
}

std::vector<PotentialRow> potential_curve(double g, double r_min, double r_max, int samples) {
  if (!(std::isfinite(g) && r_min > 0.0 && r_min < r_max && r_max < std::numbers::pi)) {
    throw std::invalid_argument("potential-curve needs 0 < r_min < r_max < pi");
  }
  if (samples < 2) throw std::invalid_argument("potential-curve needs at least 2 samples");

  const SystemSpec sphere = SystemSpec::kepler(Curvature(1.0), g);
  const SystemSpec flat = SystemSpec::kepler(Curvature(0.0), g);
  const SystemSpec hyper = SystemSpec::kepler(Curvature(-1.0), g);
  std::vector<PotentialRow> rows;
  rows.reserve(static_cast<std::size_t>(samples));
  for (int i = 0; i < samples; ++i) {
    const double r = i + 1 == samples ? r_max : r_min + (r_max - r_min) * i / (samples - 1);
    const PhaseState s{r, 0.0, 0.0, 0.0};
    rows.push_back({r, potential(s, sphere), potential(s, flat), potential(s, hyper)});
  }
  return rows;
}

int run_potential_curve(double g, double r_min, double r_max, int samples, std::ostream& out,
                        std::ostream& err) {
  std::vector<PotentialRow> rows;
  try {
    rows = potential_curve(g, r_min, r_max, samples);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }
  out << "r,U1,U0,Um1\n";
  char buf[128];
  for (const auto& row : rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", row.r, row.u_sphere, row.u_flat,
                  row.u_hyperbolic);
    out << buf;
  }
  return kOk;
}

}  // namespace curvint::cli
