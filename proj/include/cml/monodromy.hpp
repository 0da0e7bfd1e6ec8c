#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cml/certificate.hpp"
#include "cml/errors.hpp"
#include "cml/poly.hpp"

namespace cml {

// Piecewise-linear path in the space of monic square-free polynomials of a
// fixed degree. Coefficients are interpolated linearly between consecutive
// waypoints; samples_per_segment sets the base step grid for tracking.
class CoefficientPath {
 public:
  CoefficientPath(std::vector<MonicPolynomial> waypoints, int samples_per_segment,
                  const TolerancePolicy& tol = {});

  int degree() const { return waypoints_.front().degree(); }
  const std::vector<MonicPolynomial>& waypoints() const { return waypoints_; }
  int samples_per_segment() const { return samples_per_segment_; }

  // Closure is exact coefficient equality, not approximate: loops must be
  // built so the last waypoint is bit-identical to the first.
  bool closed() const { return waypoints_.front() == waypoints_.back(); }

  CoefficientPath reversed() const;
  CoefficientPath concatenated(const CoefficientPath& tail) const;

 private:
  std::vector<MonicPolynomial> waypoints_;
  int samples_per_segment_;
};

class Permutation {
 public:
  explicit Permutation(std::vector<int> images);
  static Permutation identity(int n);

  int size() const { return static_cast<int>(images_.size()); }
  int operator()(int i) const { return images_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& images() const { return images_; }

  bool is_identity() const;
  Permutation then(const Permutation& next) const;  // apply *this first, then next
  Permutation inverse() const;
  std::string cycle_string() const;

  bool operator==(const Permutation& other) const { return images_ == other.images_; }

 private:
  std::vector<int> images_;
};

struct MonodromyResult {
  Permutation permutation;
  double min_separation_along_path = 0.0;
  double max_step_contraction = 1.0;
};

// Continues the ordered start configuration along the path; returns the
// ordered configuration at the end. Throws PathHitsDiscriminant when roots
// genuinely collide along the way and TrackingAmbiguity when step control
// collapses without evidence of a collision.
Configuration track_path(const CoefficientPath& path, const Configuration& start,
                         const TolerancePolicy& tol = {});

// Tracks the canonical root order of the first waypoint around a closed path
// and reports the induced permutation of the root labels.
MonodromyResult loop_permutation(const CoefficientPath& path, const TolerancePolicy& tol = {});

// Closed loop that swaps the i-th and (i+1)-st basepoint roots (1-based i) by
// rotating them half a turn around their midpoint. The basepoint must be a
// strictly increasing real configuration.
CoefficientPath elementary_braid_loop(int n, int i, const Configuration& basepoint,
                                      int samples_per_segment = 64,
                                      const TolerancePolicy& tol = {});

// Certifies that pushing the three standard generator loops of the quartic
// configuration space through the resolvent map produces the nontrivial
// surjection onto the symmetric group on three letters.
Certificate certify_exceptional_surjection(const TolerancePolicy& tol = {},
                                           int samples_per_segment = 64);

}  // namespace cml
