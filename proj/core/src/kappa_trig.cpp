#include "curvint/kappa_trig.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "curvint/errors.hpp"

namespace curvint {

namespace {

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) {
    throw DomainError(std::string(what) + ": non-finite argument");
  }
}

bool series_regime(double k, double x) { return std::abs(k) * x * x < kSeriesThreshold; }

// Tolerance for treating cos_k / sin_k as an exact zero.
constexpr double kZeroTol = 8.0 * std::numeric_limits<double>::epsilon();

}  // namespace

Curvature::Curvature(double kappa) : kappa_(kappa) { require_finite(kappa, "Curvature"); }

double cos_k(Curvature kappa, double x) {
  require_finite(x, "cos_k");
  const double k = kappa.value();
  if (series_regime(k, x)) return 1.0 - 0.5 * k * x * x;
  if (k > 0.0) return std::cos(std::sqrt(k) * x);
  return std::cosh(std::sqrt(-k) * x);
}

double sin_k(Curvature kappa, double x) {
  require_finite(x, "sin_k");
  const double k = kappa.value();
  if (series_regime(k, x)) return x * (1.0 - k * x * x / 6.0);
  if (k > 0.0) {
    const double s = std::sqrt(k);
    return std::sin(s * x) / s;
  }
  const double s = std::sqrt(-k);
  return std::sinh(s * x) / s;
}

double tan_k(Curvature kappa, double x) {
  require_finite(x, "tan_k");
  const double k = kappa.value();
  if (series_regime(k, x)) return x * (1.0 + k * x * x / 3.0);
  if (k > 0.0) {
    const double s = std::sqrt(k);
    if (std::abs(std::cos(s * x)) <= kZeroTol) {
      throw PoleError(PoleKind::Tangent, x,
                      "tan_k: cos_k vanishes at x = " + std::to_string(x) +
                          " (kappa = " + std::to_string(k) + ")");
    }
    return std::tan(s * x) / s;
  }
  const double s = std::sqrt(-k);
  return std::tanh(s * x) / s;
}

double cot_k(Curvature kappa, double x) {
  const double s = sin_k(kappa, x);
  // sin_k(x) ~ x near the pole, so scale the zero test by the argument.
  if (std::abs(s) <= kZeroTol * std::max(1.0, std::abs(x)) || s == 0.0) {
    throw PoleError(PoleKind::Radial, x, "cot_k: sin_k vanishes at x = " + std::to_string(x));
  }
  return cos_k(kappa, x) / s;
}

Interval r_domain(Curvature kappa) {
  if (kappa.spherical()) return {0.0, std::numbers::pi / std::sqrt(kappa.value()), true};
  return {};
}

}  // namespace curvint
