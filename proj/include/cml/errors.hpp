#pragma once

#include <stdexcept>
#include <string>

namespace cml {

// Every failure mode the library can report. Callers that want to branch on
// the cause catch cml::Error and switch on kind(); the message carries the
// quantitative context (residuals, margins, offending indices).
enum class ErrorKind {
  InvalidInput,        // precondition violation: degrees, sizes, flags
  NonConvergence,      // root iteration exhausted its budget
  NotSquareFree,       // polynomial has (numerically) repeated roots
  NotDistinct,         // configuration has coincident points
  ProjectionCollision, // torsion projection x + tau*y is not injective
  PathHitsDiscriminant, // a path sample has repeated roots
  TrackingAmbiguity,   // continuation cannot separate roots at max refinement
  AmbiguousMatching,   // endpoint matching has no 2x nearest-distance margin
  CardinalityMismatch, // a torsion/stratum set has the wrong size
  IllConditioned,      // clustering/dedup is ambiguous at tolerance
  FlexNotOnCurve,      // supplied base point is not a flex of the curve
  CertificateFailed,   // a certification clause did not hold
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace cml
