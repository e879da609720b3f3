#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "cli/commands.hpp"
#include "cli/run_config.hpp"
#include "curvint/verify.hpp"

namespace {

using curvint::cli::RunConfig;

struct Overrides {
  std::string config;
  std::string out;
  std::optional<double> kappa, g, k_a, k_b, t_end, rel_tol, abs_tol;
  std::string m;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "run configuration file (key = value)");
  cmd->add_option("--out", o.out, "output file (default: stdout)");
  cmd->add_option("--kappa", o.kappa, "curvature");
  cmd->add_option("--m", o.m, "angular index p/q");
  cmd->add_option("--g", o.g, "Kepler coupling");
  cmd->add_option("--ka", o.k_a, "angular coefficient k_a");
  cmd->add_option("--kb", o.k_b, "angular coefficient k_b");
  cmd->add_option("--t-end", o.t_end, "integration time");
  cmd->add_option("--rel-tol", o.rel_tol, "relative tolerance");
  cmd->add_option("--abs-tol", o.abs_tol, "absolute tolerance");
}

RunConfig resolve(const Overrides& o, bool keep_out = true) {
  RunConfig cfg = o.config.empty() ? RunConfig{} : curvint::cli::load_config(o.config);
  if (o.kappa) cfg.kappa = *o.kappa;
  if (o.g) cfg.g = *o.g;
  if (o.k_a) cfg.k_a = *o.k_a;
  if (o.k_b) cfg.k_b = *o.k_b;
  if (o.t_end) cfg.t_end = *o.t_end;
  if (o.rel_tol) cfg.integrator.rel_tol = *o.rel_tol;
  if (o.abs_tol) cfg.integrator.abs_tol = *o.abs_tol;
  if (!o.m.empty()) {
    try {
      const auto m = curvint::Rational::parse(o.m);
      cfg.m_num = m.num();
      cfg.m_den = m.den();
    } catch (const std::exception& e) {
      throw curvint::cli::ConfigError("--m", 0, e.what());
    }
  }
  if (keep_out && !o.out.empty()) cfg.out = o.out;
  return cfg;
}

// Runs fn with stdout or the named file as the output stream.
template <class Fn>
int with_output(const std::string& path, Fn fn) {
  if (path.empty() || path == "-") return fn(std::cout);
  std::ofstream file(path);
  if (!file) {
    std::cerr << "error: cannot open " << path << " for writing\n";
    return curvint::cli::kUsageError;
  }
  return fn(file);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Superintegrable motion on constant-curvature surfaces"};
  app.require_subcommand(1);

  Overrides sim_o, ver_o, dump_o;
  auto* simulate = app.add_subcommand("simulate", "integrate one trajectory and write CSV");
  add_common(simulate, sim_o);
  auto* verify = app.add_subcommand("verify", "run the verification suite");
  add_common(verify, ver_o);
  bool grid = false;
  bool negative_control = false;
  verify->add_flag("--grid", grid, "sweep kappa in {-1,0,1} and m in {1,2,1/2,3/2}");
  verify->add_flag("--negative-control", negative_control, "add checks expected to fail");
  auto* dump = app.add_subcommand("dump-config", "print the resolved configuration");
  add_common(dump, dump_o);

  double pc_g = 1.0, r_min = 0.1, r_max = 3.0;
  int samples = 200;
  std::string pc_out;
  auto* curve = app.add_subcommand("potential-curve", "tabulate -g cot_k(r) for kappa = 1, 0, -1");
  curve->add_option("--g", pc_g, "Kepler coupling");
  curve->add_option("--r-min", r_min, "smallest radius");
  curve->add_option("--r-max", r_max, "largest radius (< pi)");
  curve->add_option("--samples", samples, "number of radii");
  curve->add_option("--out", pc_out, "output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : curvint::cli::kUsageError;
  }

  try {
    if (*curve) {
      return with_output(pc_out, [&](std::ostream& os) {
        return curvint::cli::run_potential_curve(pc_g, r_min, r_max, samples, os, std::cerr);
      });
    }
    if (*dump) {
      // --out names the dump file here, not the run output.
      const RunConfig cfg = resolve(dump_o, false);
      (void)cfg.system();
      return with_output(dump_o.out, [&](std::ostream& os) {
        curvint::cli::write_config(os, cfg);
        return 0;
      });
    }
    if (*simulate) {
      const RunConfig cfg = resolve(sim_o);
      return with_output(cfg.out, [&](std::ostream& os) {
        return curvint::cli::run_simulate(cfg, os, std::cerr);
      });
    }
    if (*verify) {
      RunConfig cfg = resolve(ver_o);
      if (grid) cfg.verify_grid = true;
      if (negative_control) cfg.negative_control = true;
      const auto seed = curvint::seed_from_env();
      return with_output(cfg.out, [&](std::ostream& os) {
        return curvint::cli::run_verify(cfg, seed, os, std::cerr);
      });
    }
  } catch (const curvint::cli::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return curvint::cli::kUsageError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return curvint::cli::kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return curvint::cli::kUsageError;
  }
  return 0;
}
