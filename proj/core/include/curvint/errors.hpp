#pragma once

#include <stdexcept>
#include <string>

namespace curvint {

// Root of every error the library raises.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Non-finite argument handed to a numerical primitive.
class DomainError : public Error {
 public:
  using Error::Error;
};

enum class PoleKind { Radial, Angular, Tangent };

// Evaluation at (or numerically on top of) a singular point of a formula.
class PoleError : public Error {
 public:
  PoleError(PoleKind kind, double location, const std::string& what)
      : Error(what), kind_(kind), location_(location) {}

  PoleKind kind() const noexcept { return kind_; }
  // The coordinate value at which the singularity was hit.
  double location() const noexcept { return location_; }

 private:
  PoleKind kind_;
  double location_;
};

// J2 <= 0: the square root entering M_r, N_phi and lambda is not real.
class NegativeCasimirError : public Error {
 public:
  explicit NegativeCasimirError(double j2)
      : Error("J2 = " + std::to_string(j2) + " is not positive; sqrt(J2) undefined"),
        j2_(j2) {}
  double j2() const noexcept { return j2_; }

 private:
  double j2_;
};

// A finite-difference stencil touched a singular point.
class StencilError : public Error {
 public:
  using Error::Error;
};

}  // namespace curvint
