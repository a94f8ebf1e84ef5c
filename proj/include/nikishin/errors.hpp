#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace nikishin {

/// Raised when an object is in a state the operation cannot work with
/// (e.g. a positive-mass component with an empty support).
class InvalidState : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Evaluation point too close to a declared pole of some V'.
class PoleProximity : public std::invalid_argument {
 public:
  PoleProximity(const std::string& what, double pole)
      : std::invalid_argument(what), pole_(pole) {}
  double pole() const { return pole_; }

 private:
  double pole_;
};

/// Neither global sign yields nonnegative recovered densities.
class ConventionFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Root matching stayed ambiguous at the smallest allowed sweep step.
class BranchCollision : public std::runtime_error {
 public:
  BranchCollision(const std::string& what, double lo, double hi)
      : std::runtime_error(what), lo_(lo), hi_(hi) {}
  double lo() const { return lo_; }
  double hi() const { return hi_; }

 private:
  double lo_;
  double hi_;
};

/// Curve branches on a claimed support carry no complex-conjugate pair.
class CurveInconsistency : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace nikishin
