#include "curvint/verify.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string_view>

#include "curvint/errors.hpp"

namespace curvint {

namespace {

using Coords = std::array<double, 4>;  // r, phi, p_r, p_phi

Coords coords(const PhaseState& s) { return {s.r, s.phi, s.p_r, s.p_phi}; }
PhaseState from_coords(const Coords& c) { return {c[0], c[1], c[2], c[3]}; }

Coords gradient_fd(const PhaseFunction& f, const PhaseState& state, double h) {
  const Coords x = coords(state);
  Coords grad{};
  for (std::size_t i = 0; i < 4; ++i) {
    const double step = h * std::max(1.0, std::abs(x[i]));
    Coords plus = x;
    Coords minus = x;
    plus[i] += step;
    minus[i] -= step;
    double fp = 0.0;
    double fm = 0.0;
    try {
      fp = f(from_coords(plus));
      fm = f(from_coords(minus));
    } catch (const Error& e) {
      throw StencilError(std::string("poisson_bracket_fd: stencil hits a singular point (") +
                         e.what() + ")");
    }
    grad[i] = (fp - fm) / (plus[i] - minus[i]);
  }
  return grad;
}

double wrapped_difference(double a, double b) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double d = std::remainder(a - b, two_pi);
  return d;
}

std::string join_label(const std::string& label, const std::string& name) {
  return label.empty() ? name : label + ":" + name;
}

}  // namespace

BracketEstimate poisson_bracket_fd_scaled(const PhaseFunction& f, const PhaseFunction& g,
                                          const PhaseState& state, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("poisson_bracket_fd: h must be positive");
  const Coords df = gradient_fd(f, state, h);
  const Coords dg = gradient_fd(g, state, h);
  // Pairs (r, p_r) = (0, 2) and (phi, p_phi) = (1, 3).
  const double a_r = df[0] * dg[2];
  const double b_r = df[2] * dg[0];
  const double a_phi = df[1] * dg[3];
  const double b_phi = df[3] * dg[1];
  BracketEstimate out;
  out.value = (a_r - b_r) + (a_phi - b_phi);
  out.scale = std::abs(a_r) + std::abs(b_r) + std::abs(a_phi) + std::abs(b_phi);
  return out;
}

double poisson_bracket_fd(const PhaseFunction& f, const PhaseFunction& g, const PhaseState& state,
                          double h) {
  return poisson_bracket_fd_scaled(f, g, state, h).value;
}

DriftReport drift(const Trajectory& traj, const NamedInvariant& invariant, double threshold) {
  const auto& eval = invariant.eval;
  return drift(traj, invariant.name, [&eval](double, const PhaseState& s) { return eval(s); },
               threshold);
}

DriftReport drift(const Trajectory& traj, const std::string& name, const TimedFunction& f,
                  double threshold) {
  if (traj.empty()) throw std::invalid_argument("drift: empty trajectory");
  DriftReport rep;
  rep.name = name;
  rep.threshold = threshold;
  rep.initial = f(traj.times().front(), traj.states().front());
  for (std::size_t i = 1; i < traj.size(); ++i) {
    const double dev = std::abs(f(traj.times()[i], traj.states()[i]) - rep.initial);
    rep.max_abs_deviation = std::max(rep.max_abs_deviation, dev);
  }
  rep.relative_drift = rep.max_abs_deviation / (1.0 + std::abs(rep.initial));
  rep.pass = rep.relative_drift < threshold;
  return rep;
}

RotationReport rotation_check(const Trajectory& traj, const SystemSpec& spec,
                              const RotationOptions& opts) {
  if (spec.kind() == SystemKind::GenericF) {
    throw std::invalid_argument("rotation_check: N_phi undefined for a generic angular function");
  }
  if (traj.segments().empty()) throw Error("rotation_check: trajectory has no accepted steps");

  const double m = spec.m().value();
  const ComplexValue i_unit{0.0, 1.0};
  double m_res = 0.0, m_scale = 0.0, n_res = 0.0, n_scale = 0.0, phase = 0.0;

  for (std::size_t i = 0; i < traj.segments().size(); ++i) {
    const DenseSegment& seg = traj.segments()[i];
    const double tm = seg.t0 + 0.5 * seg.h;
    const double d = seg.h / 8.0;
    std::array<ComplexValue, 4> ms, ns;
    const std::array<double, 4> offsets{-2.0 * d, -d, d, 2.0 * d};
    for (std::size_t k = 0; k < 4; ++k) {
      const PhaseState s = traj.segment_state(i, tm + offsets[k]);
      ms[k] = m_r(s, spec);
      ns[k] = n_phi(s, spec);
    }
    const ComplexValue dm = (ms[0] - 8.0 * ms[1] + 8.0 * ms[2] - ms[3]) / (12.0 * d);
    const ComplexValue dn = (ns[0] - 8.0 * ns[1] + 8.0 * ns[2] - ns[3]) / (12.0 * d);

    const PhaseState mid = traj.segment_state(i, tm);
    const double lambda = lambda_k(mid, spec);
    const ComplexValue mv = m_r(mid, spec);
    const ComplexValue nv = n_phi(mid, spec);
    const double rate = opts.lambda_sign * lambda;

    m_res = std::max(m_res, std::abs(dm - i_unit * rate * mv));
    n_res = std::max(n_res, std::abs(dn - i_unit * m * rate * nv));
    m_scale = std::max(m_scale, lambda * std::abs(mv));
    n_scale = std::max(n_scale, m * lambda * std::abs(nv));
    phase += lambda * seg.h;
  }

  RotationReport rep;
  rep.samples = traj.segments().size();
  const double periods = phase / (2.0 * std::numbers::pi);
  rep.samples_per_period = periods > 0.0 ? static_cast<double>(rep.samples) / periods : 0.0;
  if (rep.samples_per_period < opts.min_samples_per_period) {
    throw Error("rotation_check: trajectory too sparse (" + std::to_string(rep.samples_per_period) +
                " samples per period)");
  }
  rep.m_residual = m_scale > 0.0 ? m_res / m_scale : m_res;
  rep.n_residual = n_scale > 0.0 ? n_res / n_scale : n_res;
  rep.threshold = opts.threshold;
  rep.pass = rep.m_residual <= opts.threshold && rep.n_residual <= opts.threshold;
  return rep;
}

double phase_mismatch(const PhaseState& a, const PhaseState& b) {
  return std::max({std::abs(a.r - b.r), std::abs(wrapped_difference(a.phi, b.phi)),
                   std::abs(a.p_r - b.p_r), std::abs(a.p_phi - b.p_phi)});
}

ClosureResult closure_detect(const Trajectory& traj, double tol) {
  ClosureResult result;
  const auto& states = traj.states();
  const auto& times = traj.times();
  if (states.size() < 3) {
    result.status = ClosureStatus::NotApplicable;
    return result;
  }

  if (!is_bounded(states.front(), traj.spec())) {
    result.status = ClosureStatus::NotApplicable;
    return result;
  }

  const PhaseState& s0 = states.front();
  auto dist2 = [&](const PhaseState& s) {
    const double dr = s.r - s0.r;
    const double dphi = wrapped_difference(s.phi, s0.phi);
    const double dpr = s.p_r - s0.p_r;
    const double dpphi = s.p_phi - s0.p_phi;
    return dr * dr + dphi * dphi + dpr * dpr + dpphi * dpphi;
  };

  // Skip the initial neighbourhood of t = 0.
  const double escape = std::max(1e3 * tol, 1e-3);
  std::size_t start = 1;
  while (start < states.size() && phase_mismatch(states[start], s0) < escape) ++start;

  std::vector<double> d2(states.size());
  for (std::size_t i = 0; i < states.size(); ++i) d2[i] = dist2(states[i]);

  for (std::size_t j = std::max<std::size_t>(start, 1); j + 1 < states.size(); ++j) {
    if (!(d2[j] <= d2[j - 1] && d2[j] <= d2[j + 1])) continue;
    // Golden-section refinement on the dense output.
    double a = times[j - 1];
    double b = times[j + 1];
    constexpr double inv_phi = 0.6180339887498949;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = dist2(traj.state_at(c));
    double fd = dist2(traj.state_at(d));
    for (int it = 0; it < 200 && (b - a) > 1e-14 * std::max(1.0, std::abs(b)); ++it) {
      if (fc < fd) {
        b = d;
        d = c;
        fd = fc;
        c = b - inv_phi * (b - a);
        fc = dist2(traj.state_at(c));
      } else {
        a = c;
        c = d;
        fc = fd;
        d = a + inv_phi * (b - a);
        fd = dist2(traj.state_at(d));
      }
    }
    const double t_star = 0.5 * (a + b);
    const double mismatch = phase_mismatch(traj.state_at(t_star), s0);
    if (mismatch < tol) {
      result.status = ClosureStatus::Found;
      result.period = t_star - times.front();
      result.mismatch = mismatch;
      return result;
    }
  }
  result.status = ClosureStatus::NotFound;
  return result;
}

LimitReport euclidean_limit_scan(const SystemSpec& spec, const PhaseState& state) {
  using Eval = std::function<ComplexValue(const SystemSpec&)>;
  struct Quantity {
    std::string name;
    Eval eval;
  };
  std::vector<Quantity> quantities{
      {"H", [&](const SystemSpec& s) { return ComplexValue(hamiltonian(state, s)); }},
      {"J2", [&](const SystemSpec& s) { return ComplexValue(j2(state, s)); }},
  };
  const SystemSpec flat = spec.with_kappa(Curvature(0.0));
  if (j2(state, flat) > 0.0) {
    quantities.push_back({"M_r", [&](const SystemSpec& s) { return m_r(state, s); }});
    if (spec.kind() != SystemKind::GenericF) {
      quantities.push_back({"N_phi", [&](const SystemSpec& s) { return n_phi(state, s); }});
    }
    quantities.push_back(
        {"lambda", [&](const SystemSpec& s) { return ComplexValue(lambda_k(state, s)); }});
  }

  LimitReport report;
  report.pass = true;
  for (const auto& q : quantities) {
    LimitRow row;
    row.quantity = q.name;
    const ComplexValue f0 = q.eval(flat);
    row.value_at_zero = std::abs(f0);
    row.scale = 1.0 + std::abs(f0);

    std::vector<std::pair<double, double>> diffs;  // (|kappa|, |f - f0|)
    for (int k = 4; k <= 12; ++k) {
      const double mag = std::pow(10.0, -k);
      for (double sign : {1.0, -1.0}) {
        const double diff = std::abs(q.eval(spec.with_kappa(Curvature(sign * mag))) - f0);
        diffs.emplace_back(mag, diff);
        if (k == 8) row.diff_at_1e8 = std::max(row.diff_at_1e8, diff);
        row.rate_constant = std::max(row.rate_constant, diff / (mag * row.scale));
      }
    }
    // Linear-rate envelope fixed by the coarsest point; rounding floor 1e-13.
    double c_coarse = 0.0;
    for (std::size_t i = 0; i < 2; ++i) {
      c_coarse = std::max(c_coarse, diffs[i].second / (diffs[i].first * row.scale));
    }
    bool linear = true;
    for (const auto& [mag, diff] : diffs) {
      linear = linear && diff <= (2.0 * c_coarse * mag + 1e-13) * row.scale;
    }
    row.pass = linear && row.diff_at_1e8 <= 1e-7 * row.scale;
    report.pass = report.pass && row.pass;
    report.rows.push_back(row);
  }
  return report;
}

ModuliResidual moduli_residual(const PhaseState& state, const SystemSpec& spec) {
  const double kappa = spec.kappa().value();
  const double g = spec.g();
  const double J2 = j2(state, spec);
  const double H = hamiltonian(state, spec);
  const ComplexValue M = m_r(state, spec);
  const ComplexValue N = n_phi(state, spec);

  const double s = sin_k(spec.kappa(), state.r);
  const double cot = cot_k(spec.kappa(), state.r);
  const double two_h_terms = state.p_r * state.p_r +
                             (state.p_phi * state.p_phi + 2.0 * std::abs(spec.angular(state.phi))) /
                                 (s * s) +
                             2.0 * std::abs(g * cot);

  ModuliResidual out;
  out.m_residual = std::abs(std::norm(M) - ((2.0 * H - kappa * J2) * J2 + g * g));
  out.m_scale = std::max(std::norm(M), (two_h_terms + std::abs(kappa * J2)) * std::abs(J2) + g * g);
  const double ka = spec.k_a();
  const double kb = spec.k_b();
  out.n_residual = std::abs(std::norm(N) - (J2 * J2 - 2.0 * ka * J2 + kb * kb));
  out.n_scale = std::max(std::norm(N), J2 * J2 + 2.0 * std::abs(ka * J2) + kb * kb);
  return out;
}

std::uint64_t seed_from_env(std::uint64_t fallback) {
  const char* env = std::getenv("CURVINT_SEED");
  if (env == nullptr) return fallback;
  const std::string_view text(env);
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) return fallback;
  return value;
}

PhaseState sample_interior_state(const SystemSpec& spec, Rng& rng) {
  auto uniform = [&rng](double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); };
  const double kappa = spec.kappa().value();
  for (;;) {
    PhaseState s;
    if (kappa > 0.0) {
      const double antipode = std::numbers::pi / std::sqrt(kappa);
      s.r = uniform(0.2 * antipode, 0.8 * antipode);
    } else {
      s.r = uniform(0.3, 3.0);
    }
    if (spec.has_angular_barrier()) {
      s.phi = uniform(0.25 * std::numbers::pi, 0.75 * std::numbers::pi) / spec.m().value();
    } else {
      s.phi = uniform(0.0, 2.0 * std::numbers::pi);
    }
    s.p_r = uniform(-1.0, 1.0);
    s.p_phi = uniform(-1.5, 1.5);
    if (spec.is_central() && std::abs(s.p_phi) < 0.2) continue;
    if (spec.kind() != SystemKind::GenericF && !(j2(s, spec) > 0.0)) continue;
    return s;
  }
}

bool is_bounded(const PhaseState& state, const SystemSpec& spec) {
  const double kappa = spec.kappa().value();
  if (kappa > 0.0) return true;
  const double escape_energy = -spec.g() * std::sqrt(-kappa);
  return hamiltonian(state, spec) < escape_energy;
}

std::optional<PhaseState> sample_bounded_state(const SystemSpec& spec, Rng& rng,
                                               int max_attempts) {
  for (int i = 0; i < max_attempts; ++i) {
    const PhaseState s = sample_interior_state(spec, rng);
    if (is_bounded(s, spec)) return s;
  }
  return std::nullopt;
}

void VerificationReport::append(const VerificationReport& other) {
  rows_.insert(rows_.end(), other.rows_.begin(), other.rows_.end());
}

bool VerificationReport::all_pass() const noexcept {
  return std::all_of(rows_.begin(), rows_.end(), [](const CheckRow& r) { return r.pass; });
}

void VerificationReport::write_csv(std::ostream& os) const {
  os << "check,name,value,threshold,pass\n";
  char buf[96];
  for (const auto& r : rows_) {
    std::snprintf(buf, sizeof buf, ",%.17g,%.17g,", r.value, r.threshold);
    // Names may contain commas (labels such as "kappa=1,m=2/1").
    os << r.check << ",\"" << r.name << '"' << buf << (r.pass ? "true" : "false") << '\n';
  }
}

void VerificationReport::write_summary(std::ostream& os) const {
  std::size_t failed = 0;
  char buf[64];
  for (const auto& r : rows_) {
    if (!r.pass) ++failed;
    std::snprintf(buf, sizeof buf, "%.3e <= %.1e", r.value, r.threshold);
    os << (r.pass ? "[PASS] " : "[FAIL] ") << r.check << ' ' << r.name << ": " << buf << '\n';
  }
  os << rows_.size() - failed << '/' << rows_.size() << " checks passed\n";
}

IntegratorConfig rotation_sampling_config(const Trajectory& traj, const IntegratorConfig& base,
                                          double samples_per_period) {
  double lambda_max = 0.0;
  for (const auto& s : traj.states()) lambda_max = std::max(lambda_max, lambda_k(s, traj.spec()));
  IntegratorConfig cfg = base;
  if (lambda_max > 0.0 && std::isfinite(lambda_max)) {
    cfg.max_step = std::min(cfg.max_step, 2.0 * std::numbers::pi / (lambda_max * samples_per_period));
  }
  return cfg;
}

VerificationReport run_verification_suite(const SystemSpec& spec, const PhaseState& state0,
                                          const SuiteOptions& opts) {
  VerificationReport report;
  const auto name = [&](const std::string& n) { return join_label(opts.label, n); };
  const bool factorizable = spec.kind() != SystemKind::GenericF;

  // Drift along one trajectory.
  const Trajectory traj = integrate(state0, spec, opts.t_end, opts.integrator);
  report.add({"integrate", name("t_reached"), traj.t_end(), opts.t_end,
              traj.termination() == Termination::Completed});

  std::vector<std::pair<NamedInvariant, double>> tracked;
  for (auto& inv : invariants_for(spec)) {
    const bool is_k = inv.name == "K_re" || inv.name == "K_im";
    tracked.emplace_back(inv, is_k ? 1e-7 : 1e-8);
  }
  if (spec.is_central()) {
    tracked.push_back({{"J", [](const PhaseState& s) { return angular_j(s); }}, 1e-10});
  }
  if (spec.kind() == SystemKind::FreeGeodesic) {
    tracked.push_back({{"P1", [spec](const PhaseState& s) { return noether_p1(s, spec); }}, 1e-8});
    tracked.push_back({{"P2", [spec](const PhaseState& s) { return noether_p2(s, spec); }}, 1e-8});
  }
  for (const auto& [inv, threshold] : tracked) {
    const DriftReport d = drift(traj, inv, threshold);
    report.add({"drift", name(d.name), d.relative_drift, threshold, d.pass});
  }
  if (opts.negative_control) {
    const DriftReport d = drift(
        traj, "J2+t", [&spec](double t, const PhaseState& s) { return j2(s, spec) + t; }, 1e-8);
    report.add({"drift", name("J2+t (negative control)"), d.relative_drift, 1e-8, d.pass});
  }

  // Rotation laws on a re-run dense enough for finite differences.
  if (factorizable && traj.segments().size() > 0) {
    try {
      const Trajectory dense =
          integrate(state0, spec, opts.t_end, rotation_sampling_config(traj, opts.integrator));
      const RotationReport rot = rotation_check(dense, spec);
      report.add({"rotation", name("M_r"), rot.m_residual, rot.threshold,
                  rot.m_residual <= rot.threshold});
      report.add({"rotation", name("N_phi"), rot.n_residual, rot.threshold,
                  rot.n_residual <= rot.threshold});
    } catch (const Error& e) {
      report.add({"rotation", name(std::string("error: ") + e.what()), 0.0, 1e-5, false});
    }
  }

  // Brackets and moduli at random interior states.
  Rng rng(opts.seed);
  std::vector<PhaseState> states;
  states.reserve(static_cast<std::size_t>(opts.random_states));
  for (int i = 0; i < opts.random_states; ++i) states.push_back(sample_interior_state(spec, rng));

  const PhaseFunction H = [spec](const PhaseState& s) { return hamiltonian(s, spec); };
  std::vector<std::pair<std::string, PhaseFunction>> bracketed;
  for (const auto& inv : invariants_for(spec)) {
    if (inv.name != "H") bracketed.emplace_back(inv.name, inv.eval);
  }
  if (spec.kind() == SystemKind::FreeGeodesic) {
    bracketed.emplace_back("P1", [spec](const PhaseState& s) { return noether_p1(s, spec); });
    bracketed.emplace_back("P2", [spec](const PhaseState& s) { return noether_p2(s, spec); });
  }
  if (spec.is_central()) bracketed.emplace_back("p_phi", [](const PhaseState& s) { return s.p_phi; });
  if (opts.negative_control) {
    bracketed.emplace_back("J2+r (negative control)",
                           [spec](const PhaseState& s) { return j2(s, spec) + s.r; });
  }
  for (const auto& [bname, f] : bracketed) {
    double worst = 0.0;
    for (const auto& s : states) {
      const BracketEstimate b = poisson_bracket_fd_scaled(f, H, s);
      worst = std::max(worst, std::abs(b.value) / std::max(1.0, b.scale));
    }
    report.add({"bracket", name("{" + bname + ",H}"), worst, 1e-6, worst <= 1e-6});
  }

  if (factorizable && !states.empty()) {
    double worst_m = 0.0;
    double worst_n = 0.0;
    for (const auto& s : states) {
      const ModuliResidual res = moduli_residual(s, spec);
      worst_m = std::max(worst_m, res.m_residual / res.m_scale);
      worst_n = std::max(worst_n, res.n_residual / res.n_scale);
    }
    report.add({"moduli", name("|M_r|^2"), worst_m, 1e-10, worst_m <= 1e-10});
    report.add({"moduli", name("|N_phi|^2"), worst_n, 1e-10, worst_n <= 1e-10});
  }

  const LimitReport limit = euclidean_limit_scan(spec, state0);
  for (const auto& row : limit.rows) {
    report.add({"limit", name(row.quantity), row.diff_at_1e8 / row.scale, 1e-7, row.pass});
  }
  return report;
}

}  // namespace curvint
