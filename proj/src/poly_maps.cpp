#include "cml/poly_maps.hpp"

#include <algorithm>
#include <cmath>

#include "cml/plane_curves.hpp"

namespace cml {

namespace {

Configuration b_triple(const Configuration& a) {
  const auto& r = a.points();
  const ComplexScalar b1 = (r[0] - r[1] - r[2] + r[3]) / 2.0;
  const ComplexScalar b2 = (r[0] - r[1] + r[2] - r[3]) / 2.0;
  const ComplexScalar b3 = (r[0] + r[1] - r[2] - r[3]) / 2.0;
  return Configuration({b1 * b1, b2 * b2, b3 * b3}, false);
}

}  // namespace

ResolventResult resolve_quartic(const MonicPolynomial& f, const TolerancePolicy& tol) {
  tol.validate();
  if (f.degree() != 4)
    throw Error(ErrorKind::InvalidInput, "resolvent needs a degree 4 input");
  const auto sf = is_square_free(f, tol);
  if (!sf.square_free)
    throw Error(ErrorKind::NotSquareFree, "resolvent input has a repeated root");
  const Configuration a = roots(f, tol);
  const Configuration b = b_triple(a);
  const ComplexScalar disc = discriminant(f);
  return ResolventResult{from_roots(b), b, disc};
}

MonicPolynomial resolvent_d(const MonicPolynomial& f, int d, const TolerancePolicy& tol) {
  if (d < 0) throw Error(ErrorKind::InvalidInput, "twist exponent must be nonnegative");
  const ResolventResult base = resolve_quartic(f, tol);
  if (d == 0) return base.output;
  ComplexScalar factor(1.0);
  for (int i = 0; i < d; ++i) factor *= base.input_discriminant;
  if (!is_finite(factor) || factor == ComplexScalar(0.0))
    throw Error(ErrorKind::IllConditioned, "discriminant power overflowed or vanished");
  std::vector<ComplexScalar> scaled;
  scaled.reserve(base.b_values.points().size());
  for (const auto& b : base.b_values.points()) scaled.push_back(factor * b);
  return from_roots(Configuration(scaled, false));
}

Configuration phi_disjoin(const Configuration& c) {
  if (c.size() < 1) throw Error(ErrorKind::InvalidInput, "disjoining map needs a nonempty input");
  if (!(c.separation() > 0.0))
    throw Error(ErrorKind::NotDistinct, "disjoining map input has coincident points");
  double sum = 0.0;
  for (const auto& z : c.points()) sum += std::abs(z);
  auto pts = c.points();
  pts.emplace_back(sum + 1.0, 0.0);
  return Configuration(pts, false);
}

Configuration psi_torsion(const Configuration& lambda, const TorsionMapSpec& spec,
                          const TolerancePolicy& tol) {
  tol.validate();
  if (spec.k < 2) throw Error(ErrorKind::InvalidInput, "torsion order must be >= 2");
  const WeierstrassCurve curve(lambda, tol);  // validates the distinct triple
  const auto pts = torsion_points(curve, spec.k, tol);

  std::vector<ComplexScalar> flat;
  flat.reserve(pts.size());
  for (const auto& p : pts) flat.push_back(p.x + spec.projection_tau * p.y);

  Configuration out(flat, false);
  if (out.separation() <= tol.distinct_tol * out.diameter())
    throw Error(ErrorKind::ProjectionCollision,
                "projection identified two torsion points; perturb tau");
  return out;
}

}  // namespace cml
