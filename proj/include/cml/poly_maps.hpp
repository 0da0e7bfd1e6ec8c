#pragma once

#include <cstdint>
#include <vector>

#include "cml/errors.hpp"
#include "cml/poly.hpp"

namespace cml {

struct ResolventResult {
  MonicPolynomial output;
  Configuration b_values;          // unordered configuration {b1, b2, b3}
  ComplexScalar input_discriminant;
};

// Cubic resolvent of a monic square-free quartic: for roots a1..a4 the three
// outputs are b1 = ((a1-a2-a3+a4)/2)^2, b2 = ((a1-a2+a3-a4)/2)^2 and
// b3 = ((a1+a2-a3-a4)/2)^2. The unordered b-set does not depend on how the
// roots were labeled, and distinct a's force distinct b's.
ResolventResult resolve_quartic(const MonicPolynomial& f, const TolerancePolicy& tol = {});

// Twisted resolvent: scales the b-configuration by the d-th power of the
// quartic discriminant before rebuilding the cubic. Nonzero scaling preserves
// distinctness, so the output stays square-free; d = 0 is the plain resolvent.
MonicPolynomial resolvent_d(const MonicPolynomial& f, int d, const TolerancePolicy& tol = {});

// Disjoining map: appends the real point (sum of |z_i|) + 1, which strictly
// dominates every modulus already present, so distinctness is preserved for
// free and the new point never collides with the old ones.
Configuration phi_disjoin(const Configuration& c);

struct TorsionMapSpec {
  std::int64_t k = 2;
  ComplexScalar projection_tau = ComplexScalar(1.0);
};

// Sends a distinct triple of branch values to the nonzero k-torsion of the
// double cover y^2 = (x-l1)(x-l2)(x-l3), each point flattened to the complex
// number x + tau*y. For k = 2 all torsion has y = 0 and the image is exactly
// the input triple. A tau that identifies two points raises
// ProjectionCollision; the caller should perturb it.
Configuration psi_torsion(const Configuration& lambda, const TorsionMapSpec& spec,
                          const TolerancePolicy& tol = {});

}  // namespace cml
