#pragma once

#include <stdexcept>
#include <string>

namespace shorted {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed or non-finite input (bad dimensions, NaN/Inf entries, bad files).
class InvalidInput : public Error {
 public:
  explicit InvalidInput(const std::string& what) : Error(what) {}
};

// A Douglas-type equation D Z = C has no solution: R(C) is not contained in
// R(D) at the working tolerance. Carries the residual ||D Z - C|| that was
// seen (the gate itself compares it against eq_rtol * (1 + ||C||)).
class RangeInclusionFailed : public Error {
 public:
  RangeInclusionFailed(const std::string& what, double residual)
      : Error(what + " (residual " + std::to_string(residual) + ")"),
        residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

// An operation that requires a Complementable verdict saw NotComplementable.
class NotComplementableError : public Error {
 public:
  explicit NotComplementableError(const std::string& what) : Error(what) {}
};

// An operation that requires a Complementable verdict saw IllPosedSchur
// (the one-sided inclusion holds but the reduced solution is not unique in
// the directions that matter, so the shorted operator is not well defined).
class IllPosedSchurError : public Error {
 public:
  explicit IllPosedSchurError(const std::string& what) : Error(what) {}
};

// A range hypothesis of the block pseudoinverse factorization failed.
// Carries which inclusion failed and the observed defect.
class HypothesisFailed : public Error {
 public:
  HypothesisFailed(const std::string& which, double defect)
      : Error("hypothesis failed: " + which + " (defect " +
              std::to_string(defect) + ")"),
        which_(which),
        defect_(defect) {}
  const std::string& which() const { return which_; }
  double defect() const { return defect_; }

 private:
  std::string which_;
  double defect_;
};

}  // namespace shorted
