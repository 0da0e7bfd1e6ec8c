#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "cml/poly.hpp"

namespace cml {

// Homogeneous form in three variables (x, y, z) with complex coefficients.
// Terms are kept sorted by descending exponent triple with exact-zero
// coefficients dropped; a form must keep at least one term. Degree 0
// (a nonzero constant) is allowed so that Hessians of conics are
// representable; curve operations require degree >= 2 themselves.
class TernaryForm {
 public:
  struct Term {
    std::array<int, 3> exp;  // exponents of x, y, z; sums to the degree
    ComplexScalar c;
  };

  TernaryForm(int degree, std::vector<Term> terms);

  int degree() const { return degree_; }
  const std::vector<Term>& terms() const { return terms_; }
  ComplexScalar coefficient(int i, int j, int k) const;

  ComplexScalar operator()(ComplexScalar x, ComplexScalar y, ComplexScalar z) const;

  TernaryForm operator+(const TernaryForm& other) const;
  TernaryForm operator*(const TernaryForm& other) const;
  TernaryForm scaled(ComplexScalar factor) const;
  TernaryForm partial(int axis) const;  // may be the zero form of degree-1... see below
  bool is_zero() const;

  // F(M * q): composition with the linear change of coordinates M (row-major
  // 3x3), i.e. each variable is replaced by the corresponding row form.
  TernaryForm substituted(const std::array<std::array<ComplexScalar, 3>, 3>& m) const;

  double coeff_norm() const;  // max |c| over terms

  // Internal representation allows the zero form (empty term list) so that
  // partials of forms missing a variable stay well-defined.
  static TernaryForm zero(int degree);

 private:
  int degree_;
  std::vector<Term> terms_;
};

// Point of the complex projective plane, canonically normalized: the first
// coordinate of maximal modulus is scaled to exactly 1.
struct ProjectivePoint {
  std::array<ComplexScalar, 3> coords;

  static ProjectivePoint from(ComplexScalar x, ComplexScalar y, ComplexScalar z);
};

// Scale-invariant (Fubini-Study chordal) distance in [0, 1].
double projective_distance(const ProjectivePoint& a, const ProjectivePoint& b);
bool projective_less(const ProjectivePoint& a, const ProjectivePoint& b);

// y^2 = (x - l1)(x - l2)(x - l3) with distinct branch points, together with
// the depressed short form Y^2 = X^3 + A X + B reached by X = x + c2/3
// (c2 = -(l1+l2+l3)). Division polynomials live on the short form; points
// returned by the torsion routines live in the lambda coordinates.
class WeierstrassCurve {
 public:
  WeierstrassCurve(const Configuration& lambda, const TolerancePolicy& tol = {});

  // Reconstructs branch points from a short form by solving X^3 + AX + B.
  static WeierstrassCurve from_short_form(ComplexScalar a, ComplexScalar b,
                                          const TolerancePolicy& tol = {});

  const Configuration& lambda() const { return lambda_; }
  ComplexScalar a() const { return a_; }
  ComplexScalar b() const { return b_; }

  ComplexScalar rhs(ComplexScalar x) const;  // (x-l1)(x-l2)(x-l3)
  ComplexScalar c2() const { return c2_; }
  ComplexScalar c1() const { return c1_; }
  ComplexScalar c0() const { return c0_; }
  ComplexScalar short_to_lambda(ComplexScalar x_short) const { return x_short - c2_ / 3.0; }

 private:
  WeierstrassCurve() : lambda_({ComplexScalar(0.0)}, false) {}

  Configuration lambda_;
  ComplexScalar c2_, c1_, c0_;
  ComplexScalar a_, b_;
};

// Affine curve point or the point at infinity (the group identity).
struct CurvePoint {
  bool inf = true;
  ComplexScalar x{0.0};
  ComplexScalar y{0.0};

  static CurvePoint infinity() { return {}; }
  static CurvePoint affine(ComplexScalar x, ComplexScalar y) { return {false, x, y}; }
};

double on_curve_residual(const WeierstrassCurve& e, const CurvePoint& p);

// Chord-tangent group law. Vertical chords (x1 = x2, y1 = -y2 to tolerance)
// and vertical tangents (doubling with y = 0) return Infinity.
CurvePoint ec_add(const WeierstrassCurve& e, const CurvePoint& p, const CurvePoint& q);
CurvePoint ec_neg(const CurvePoint& p);
CurvePoint scalar_mul(const WeierstrassCurve& e, std::int64_t k, const CurvePoint& p);

// Univariate polynomial in the short-form X whose roots are exactly the
// X-coordinates of the nonzero k-torsion. Odd k: the classical psi_k of
// degree (k^2-1)/2 with leading coefficient k. Even k: the 2-torsion cubic
// X^3 + AX + B times the odd factor of psi_k, so k = 2 returns the curve
// cubic itself.
Polynomial division_polynomial(const WeierstrassCurve& e, std::int64_t k);

// All k^2 - 1 points P != O with [k]P = O, in lambda coordinates. Composite
// k is assembled from its prime-power parts via the group law; every point
// is verified to satisfy [k-1]P = -P with residual <= 1e-8.
std::vector<CurvePoint> torsion_points(const WeierstrassCurve& e, std::int64_t k,
                                       const TolerancePolicy& tol = {});

// det of the 3x3 matrix of second partials; degree 3(d-2), constant for d=2.
TernaryForm hessian(const TernaryForm& f);

// True iff the three partials have no common projective zero, decided by
// bivariate resultant elimination in a random unitary frame plus margin
// thresholds on polished candidates.
bool is_smooth(const TernaryForm& f, const TolerancePolicy& tol = {});

struct FlexPoint {
  ProjectivePoint point;
  int multiplicity;
};

// Intersection of the curve with its Hessian curve: at most 3d(d-2) points
// whose multiplicities sum to exactly 3d(d-2). Requires f smooth, 2 <= d <= 4.
// A smooth conic yields the empty list; a smooth cubic has 9 simple flexes.
std::vector<FlexPoint> flex_points(const TernaryForm& f, const TolerancePolicy& tol = {});

// The 9k^2 points of 3k-torsion of a smooth plane cubic, using the given
// flex as origin: the curve is moved to Weierstrass form (flex to (0:1:0),
// flex tangent to the line at infinity), full 3k-torsion is computed there
// and pulled back. k = 1 returns exactly the 9 flexes.
std::vector<ProjectivePoint> cubic_torsion(const TernaryForm& f, std::int64_t k,
                                           const ProjectivePoint& flex,
                                           const TolerancePolicy& tol = {});

// Points of 3m-torsion that are not 3d-torsion for any proper divisor d of m;
// there are exactly 9 * jordan_totient(m) of them (m = 1 gives the 9 flexes).
std::vector<ProjectivePoint> torsion_stratum(const TernaryForm& f, std::int64_t m,
                                             const ProjectivePoint& flex,
                                             const TolerancePolicy& tol = {});

// J_2(m) = m^2 prod_{p | m} (1 - p^-2), in exact integer arithmetic.
std::int64_t jordan_totient(std::int64_t m);

// n = 9 * sum_{m in I} J_2(m) for a finite set I of distinct positive
// integers; index_set is one witness I (deterministically chosen).
struct MultisectionSize {
  std::int64_t n;
  std::vector<std::int64_t> index_set;
};

// All admissible n <= bound, sorted ascending, one witness each.
std::vector<MultisectionSize> admissible_sizes(std::int64_t bound);

// Sorted distinct values 18 * J_2(m) <= bound over m >= 4.
std::vector<std::int64_t> banerjee_chen_sizes(std::int64_t bound);

}  // namespace cml
