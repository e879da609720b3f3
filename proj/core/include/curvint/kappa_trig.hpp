#pragma once

// Curvature-dependent trigonometry. One set of formulas covers the sphere
// (kappa > 0), the Euclidean plane (kappa == 0) and the hyperbolic plane
// (kappa < 0):
//
//   cos_k(x) = cos(sqrt(k) x)          | 1 | cosh(sqrt(-k) x)
//   sin_k(x) = sin(sqrt(k) x)/sqrt(k)  | x | sinh(sqrt(-k) x)/sqrt(-k)
//
// with cos_k^2 + k sin_k^2 = 1, d sin_k/dx = cos_k, d cos_k/dx = -k sin_k.

#include <limits>

namespace curvint {

// Gaussian curvature of the configuration surface, in 1/length^2.
class Curvature {
 public:
  constexpr Curvature() = default;
  // Throws DomainError for non-finite values.
  explicit Curvature(double kappa);

  constexpr double value() const noexcept { return kappa_; }
  constexpr bool spherical() const noexcept { return kappa_ > 0.0; }
  constexpr bool flat() const noexcept { return kappa_ == 0.0; }
  constexpr bool hyperbolic() const noexcept { return kappa_ < 0.0; }

  friend constexpr bool operator==(Curvature, Curvature) = default;

 private:
  double kappa_ = 0.0;
};

// Below this value of |kappa| x^2 the truncated Taylor series is used.
inline constexpr double kSeriesThreshold = 1e-8;

double cos_k(Curvature kappa, double x);
double sin_k(Curvature kappa, double x);
// Throws PoleError (PoleKind::Tangent) where cos_k vanishes.
double tan_k(Curvature kappa, double x);
// cos_k / sin_k. Finite across the equator of the sphere, where tan_k has
// its pole; throws PoleError (PoleKind::Radial) where sin_k vanishes.
double cot_k(Curvature kappa, double x);

struct Interval {
  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
  bool hi_open = true;

  bool contains(double x) const noexcept {
    return x >= lo && (hi_open ? x < hi : x <= hi);
  }
};

// Admissible geodesic radius: [0, pi/sqrt(k)) on the sphere, [0, inf)
// otherwise. The antipode is excluded since sin_k vanishes there.
Interval r_domain(Curvature kappa);

}  // namespace curvint
