#include "curvint/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "curvint/errors.hpp"

namespace curvint {

namespace {

using Vec = std::array<double, 4>;

Vec to_vec(const PhaseState& s) { return {s.r, s.phi, s.p_r, s.p_phi}; }
PhaseState to_state(const Vec& v) { return {v[0], v[1], v[2], v[3]}; }

Vec rhs(const Vec& y, const SystemSpec& spec) {
  const PhaseRates d = eom(to_state(y), spec);
  return {d.dr, d.dphi, d.dp_r, d.dp_phi};
}

// Dormand-Prince 8(5,3) tableau.
namespace dop853 {
constexpr std::size_t kStages = 12;
constexpr std::array<double, kStages> c{0.0, 0.526001519587677318785587544488e-01, 0.789002279381515978178381316732e-01, 0.118350341907227396726757197510, 0.281649658092772603273242802490, 0.333333333333333333333333333333, 0.25, 0.307692307692307692307692307692, 0.651282051282051282051282051282, 0.6, 0.857142857142857142857142857142, 1.0};
constexpr std::array<std::array<double, kStages>, kStages> a{{
    {},
    {5.26001519587677318785587544488e-2},
    {1.97250569845378994544595329183e-2, 5.91751709536136983633785987549e-2},
    {2.95875854768068491816892993775e-2, 0.0, 8.87627564304205475450678981324e-2},
    {2.41365134159266685502369798665e-1, 0.0, -8.84549479328286085344864962717e-1, 9.24834003261792003115737966543e-1},
    {3.7037037037037037037037037037e-2, 0.0, 0.0, 1.70828608729473871279604482173e-1, 1.25467687566822425016691814123e-1},
    {3.7109375e-2, 0.0, 0.0, 1.70252211019544039314978060272e-1, 6.02165389804559606850219397283e-2, -1.7578125e-2},
    {3.70920001185047927108779319836e-2, 0.0, 0.0, 1.70383925712239993810214054705e-1, 1.07262030446373284651809199168e-1, -1.53194377486244017527936158236e-2, 8.27378916381402288758473766002e-3},
    {6.24110958716075717114429577812e-1, 0.0, 0.0, -3.36089262944694129406857109825, -8.68219346841726006818189891453e-1, 2.75920996994467083049415600797e1, 2.01540675504778934086186788979e1, -4.34898841810699588477366255144e1},
    {4.77662536438264365890433908527e-1, 0.0, 0.0, -2.48811461997166764192642586468, -5.90290826836842996371446475743e-1, 2.12300514481811942347288949897e1, 1.52792336328824235832596922938e1, -3.32882109689848629194453265587e1, -2.03312017085086261358222928593e-2},
    {-9.3714243008598732571704021658e-1, 0.0, 0.0, 5.18637242884406370830023853209, 1.09143734899672957818500254654, -8.14978701074692612513997267357, -1.85200656599969598641566180701e1, 2.27394870993505042818970056734e1, 2.49360555267965238987089396762, -3.0467644718982195003823669022},
    {2.27331014751653820792359768449, 0.0, 0.0, -1.05344954667372501984066689879e1, -2.00087205822486249909675718444, -1.79589318631187989172765950534e1, 2.79488845294199600508499808837e1, -2.85899827713502369474065508674, -8.87285693353062954433549289258, 1.23605671757943030647266201528e1, 6.43392746015763530355970484046e-1},
}};
// Eighth-order weights.
constexpr std::array<double, kStages> b{5.42937341165687622380535766363e-2, 0.0, 0.0, 0.0, 0.0, 4.45031289275240888144113950566, 1.89151789931450038304281599044, -5.8012039600105847814672114227, 3.1116436695781989440891606237e-1, -1.52160949662516078556178806805e-1, 2.01365400804030348374776537501e-1, 4.47106157277725905176885569043e-2};
// Fifth-order error weights.
constexpr std::array<double, kStages> e5{0.1312004499419488073250102996e-1, 0.0, 0.0, 0.0, 0.0, -0.1225156446376204440720569753e+1, -0.4957589496572501915214079952, 0.1664377182454986536961530415e+1, -0.3503288487499736816886487290, 0.3341791187130174790297318841, 0.8192320648511571246570742613e-1, -0.2235530786388629525884427845e-1};
// b minus the third-order weights: corrections at stages 1, 9 and 12.
constexpr double e3_1 = 0.244094488188976377952755905512, e3_9 = 0.733846688281611857341361741547, e3_12 = 0.220588235294117647058823529412e-1;
}  // namespace dop853

// Size used for the relative part of the tolerance. phi is unwrapped, and
// phi + 2 pi n is the same point, so its size is capped at pi; otherwise the
// angle tolerance would loosen with every winding.
double magnitude(std::size_t component, double abs_value) {
  return component == 1 ? std::min(abs_value, std::numbers::pi) : abs_value;
}

struct StepResult {
  Vec y_new;
  double err = 0.0;
};

// One DOP853 step of size h from y with f(y) = f0. The error estimate
// blends the fifth- and third-order embedded solutions.
StepResult dop853_step(const Vec& y, const Vec& f0, double h, const SystemSpec& spec,
                       const IntegratorConfig* cfg) {
  using namespace dop853;
  std::array<Vec, kStages> k;
  k[0] = f0;
  for (std::size_t s = 1; s < kStages; ++s) {
    Vec ys = y;
    for (std::size_t i = 0; i < 4; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < s; ++j) acc += a[s][j] * k[j][i];
      ys[i] += h * acc;
    }
    k[s] = rhs(ys, spec);
  }

  StepResult out;
  Vec incr{};
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < kStages; ++j) incr[i] += b[j] * k[j][i];
    out.y_new[i] = y[i] + h * incr[i];
  }
  if (cfg != nullptr) {
    double err = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
      double err5 = 0.0;
      for (std::size_t j = 0; j < kStages; ++j) err5 += e5[j] * k[j][i];
      const double err3 = incr[i] - e3_1 * k[0][i] - e3_9 * k[8][i] - e3_12 * k[11][i];
      const double sc = cfg->abs_tol + cfg->rel_tol * magnitude(i, std::max(std::abs(y[i]),
                                                                            std::abs(out.y_new[i])));
      const double e5s = err5 / sc;
      const double e3s = err3 / sc;
      const double den = e5s * e5s + 0.01 * e3s * e3s;
      if (den > 0.0) err = std::max(err, std::abs(h) * e5s * e5s / std::sqrt(den));
    }
    out.err = err;
  }
  return out;
}

double scaled_norm(const Vec& v, const Vec& y, const IntegratorConfig& cfg) {
  double acc = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    const double sc = cfg.abs_tol + cfg.rel_tol * magnitude(i, std::abs(y[i]));
    acc = std::max(acc, std::abs(v[i]) / sc);
  }
  return acc;
}

// Starting step from the size of y and f(y), after Hairer, Norsett & Wanner.
double initial_step(const Vec& y, const Vec& f, double t_end, const SystemSpec& spec,
                    const IntegratorConfig& cfg) {
  const double d0 = scaled_norm(y, y, cfg);
  const double d1 = scaled_norm(f, y, cfg);
  double h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
  h = std::min({h, cfg.max_step, t_end});
  try {
    Vec y1 = y;
    for (std::size_t i = 0; i < 4; ++i) y1[i] += h * f[i];
    const Vec f1 = rhs(y1, spec);
    Vec df;
    for (std::size_t i = 0; i < 4; ++i) df[i] = (f1[i] - f[i]) / h;
    const double d2 = scaled_norm(df, y, cfg);
    const double dmax = std::max(d1, d2);
    const double h1 = dmax <= 1e-15 ? std::max(1e-6, h * 1e-3) : std::pow(0.01 / dmax, 1.0 / 8.0);
    return std::min({100.0 * h, h1, cfg.max_step, t_end});
  } catch (const PoleError&) {
    return h;
  }
}

Termination termination_for(PoleKind kind) {
  return kind == PoleKind::Angular ? Termination::HitAngularSingularity
                                   : Termination::HitRadialPole;
}

}  // namespace

PhaseRates eom(const PhaseState& state, const SystemSpec& spec) {
  const Curvature kappa = spec.kappa();
  const double s = sin_k(kappa, state.r);
  if (s == 0.0) throw PoleError(PoleKind::Radial, state.r, "eom: sin_k(r) vanishes");
  const double c = cos_k(kappa, state.r);
  const double inv_s2 = 1.0 / (s * s);

  const double F = spec.angular(state.phi);
  const double dF = spec.angular_derivative(state.phi);
  // d/dr(-g cot_k) = g / sin_k^2 and d/dr(F / sin_k^2) = -2 F cos_k / sin_k^3.
  const double radial_force = (state.p_phi * state.p_phi + 2.0 * F) * c * inv_s2 / s;

  PhaseRates d;
  d.dr = state.p_r;
  d.dphi = state.p_phi * inv_s2;
  d.dp_r = radial_force - spec.g() * inv_s2;
  d.dp_phi = -dF * inv_s2;
  return d;
}

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::Completed: return "Completed";
    case Termination::HitRadialPole: return "HitRadialPole";
    case Termination::HitAngularSingularity: return "HitAngularSingularity";
    case Termination::StepUnderflow: return "StepUnderflow";
  }
  return "Unknown";
}

void IntegratorConfig::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) {
    throw std::invalid_argument("IntegratorConfig: tolerances must be positive");
  }
  if (!(max_step > 0.0)) throw std::invalid_argument("IntegratorConfig: max_step must be positive");
  if (!(singularity_margin > 0.0 && singularity_margin < 1.0)) {
    throw std::invalid_argument("IntegratorConfig: singularity_margin must lie in (0, 1)");
  }
}

PhaseState Trajectory::segment_state(std::size_t i, double t) const {
  const DenseSegment& seg = segments_.at(i);
  const double dt = t - seg.t0;
  if (dt == 0.0) return to_state(seg.y0);
  return to_state(dop853_step(seg.y0, seg.f0, dt, spec_, nullptr).y_new);
}

PhaseState Trajectory::state_at(double t) const {
  if (times_.empty()) throw std::logic_error("Trajectory::state_at on empty trajectory");
  if (t <= times_.front()) return states_.front();
  if (t >= times_.back()) return states_.back();
  // segments_[i] spans [times_[i], times_[i + 1]].
  const auto it = std::upper_bound(times_.begin(), times_.end(), t);
  const auto idx = static_cast<std::size_t>(std::distance(times_.begin(), it)) - 1;
  return segment_state(idx, t);
}

void Trajectory::push_initial(double t, const PhaseState& s) {
  times_.assign(1, t);
  states_.assign(1, s);
  segments_.clear();
}

void Trajectory::push_step(const DenseSegment& seg, double t, const PhaseState& s) {
  times_.push_back(t);
  states_.push_back(s);
  segments_.push_back(seg);
}

Termination check_interior(const PhaseState& state, const SystemSpec& spec, double margin) {
  if (!std::isfinite(state.r) || !std::isfinite(state.phi) || !std::isfinite(state.p_r) ||
      !std::isfinite(state.p_phi)) {
    throw DomainError("non-finite phase state");
  }
  if (!(sin_k(spec.kappa(), state.r) >= margin)) return Termination::HitRadialPole;
  if (spec.has_angular_barrier() && !(std::abs(std::sin(spec.m().times(state.phi))) >= margin)) {
    return Termination::HitAngularSingularity;
  }
  return Termination::Completed;
}

Trajectory integrate(const PhaseState& state0, const SystemSpec& spec, double t_end,
                     const IntegratorConfig& cfg) {
  cfg.validate();
  if (!(t_end > 0.0) || !std::isfinite(t_end)) {
    throw std::invalid_argument("integrate: t_end must be positive and finite");
  }
  const Termination initial = check_interior(state0, spec, cfg.singularity_margin);
  if (initial != Termination::Completed) {
    throw std::invalid_argument(std::string("integrate: initial state violates the singularity "
                                            "margin (") +
                                std::string(to_string(initial)) + ")");
  }

  Trajectory traj(spec);
  traj.push_initial(0.0, state0);

  Vec y = to_vec(state0);
  Vec k1 = rhs(y, spec);
  double t = 0.0;
  double h = initial_step(y, k1, t_end, spec, cfg);
  const double h_min = 1e3 * std::numeric_limits<double>::epsilon() * t_end;
  constexpr double kSafety = 0.9;
  constexpr double kMinFactor = 0.2;
  constexpr double kMaxFactor = 5.0;

  while (t < t_end) {
    if (h < h_min) {
      traj.set_termination(Termination::StepUnderflow);
      return traj;
    }
    const bool last = t + h >= t_end;
    const double step = last ? t_end - t : h;

    StepResult res;
    try {
      res = dop853_step(y, k1, step, spec, &cfg);
    } catch (const PoleError& e) {
      // A stage landed on a singular point: shrink and retry, or give up.
      h = step * 0.25;
      if (h < h_min) {
        traj.set_termination(termination_for(e.kind()));
        return traj;
      }
      continue;
    }

    if (!(res.err <= 1.0)) {
      const double factor =
          std::isfinite(res.err) ? std::max(kMinFactor, kSafety * std::pow(res.err, -1.0 / 8.0))
                                 : kMinFactor;
      h = step * std::min(1.0, factor);
      continue;
    }

    const PhaseState next = to_state(res.y_new);
    const Termination guard = check_interior(next, spec, cfg.singularity_margin);
    if (guard != Termination::Completed) {
      traj.set_termination(guard);
      return traj;
    }

    const DenseSegment seg{t, step, y, k1};
    t = last ? t_end : t + step;
    y = res.y_new;
    traj.push_step(seg, t, next);
    try {
      k1 = rhs(y, spec);
    } catch (const PoleError& e) {
      traj.set_termination(termination_for(e.kind()));
      return traj;
    }

    const double factor =
        res.err == 0.0 ? kMaxFactor
                       : std::clamp(kSafety * std::pow(res.err, -1.0 / 8.0), kMinFactor, kMaxFactor);
    h = std::min(step * factor, cfg.max_step);
  }
  traj.set_termination(Termination::Completed);
  return traj;
}

double wrap_angle(double phi) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double w = std::fmod(phi, two_pi);
  if (w < 0.0) w += two_pi;
  if (w >= two_pi) w = 0.0;
  return w;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  os << "t,r,phi,p_r,p_phi\n";
  char buf[160];
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const PhaseState& s = traj.states()[i];
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", traj.times()[i], s.r,
                  wrap_angle(s.phi), s.p_r, s.p_phi);
    os << buf;
  }
}

}  // namespace curvint
