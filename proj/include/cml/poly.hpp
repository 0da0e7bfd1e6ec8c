#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "cml/errors.hpp"

namespace cml {

using ComplexScalar = std::complex<double>;

bool is_finite(ComplexScalar z);

// Strict total order on doubles and complex scalars (sign-aware, so -0.0
// sorts before +0.0). Canonical sorting with this order is what makes
// from_roots bit-identical under permutations of its input.
std::uint64_t total_order_key(double d);
bool scalar_less(ComplexScalar a, ComplexScalar b);

// Shared numerical knobs. root_tol gates residuals of root finding,
// distinct_tol separates "distinct" from "coincident" relative to the
// diameter of the point set under discussion.
struct TolerancePolicy {
  double root_tol = 1e-12;
  double distinct_tol = 1e-9;
  int max_iterations = 500;

  void validate() const;  // throws InvalidInput unless 0 < root_tol < distinct_tol
};

// Monic P(Z) = Z^n + a1 Z^{n-1} + ... + an, n >= 1, stored as [a1, ..., an]
// (the implicit leading 1 is not stored; the constant term sits last).
class MonicPolynomial {
 public:
  explicit MonicPolynomial(std::vector<ComplexScalar> coeffs);

  int degree() const { return static_cast<int>(coeffs_.size()); }
  const std::vector<ComplexScalar>& coeffs() const { return coeffs_; }

  bool operator==(const MonicPolynomial& other) const { return coeffs_ == other.coeffs_; }
  bool operator!=(const MonicPolynomial& other) const { return !(*this == other); }

 private:
  std::vector<ComplexScalar> coeffs_;
};

// General dense polynomial with explicit leading coefficient, stored
// leading-first. Exact leading zeros are trimmed on construction; the zero
// polynomial is represented by the single coefficient 0.
class Polynomial {
 public:
  Polynomial() : coeffs_{ComplexScalar(0.0)} {}
  explicit Polynomial(std::vector<ComplexScalar> coeffs_leading_first);
  explicit Polynomial(const MonicPolynomial& p);

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const;
  ComplexScalar leading() const { return coeffs_.front(); }
  const std::vector<ComplexScalar>& coeffs() const { return coeffs_; }
  ComplexScalar coeff_of(int power) const;  // 0 outside range

  ComplexScalar operator()(ComplexScalar z) const;
  Polynomial derivative() const;

  Polynomial operator+(const Polynomial& other) const;
  Polynomial operator-(const Polynomial& other) const;
  Polynomial operator*(const Polynomial& other) const;
  Polynomial scaled(ComplexScalar factor) const;
  Polynomial pow(int exponent) const;

  // Divides through by the leading coefficient. Requires a nonzero polynomial.
  MonicPolynomial monic() const;

 private:
  std::vector<ComplexScalar> coeffs_;
};

// Finite multiset of points in the complex plane. `ordered` marks tuples
// whose positions carry meaning (tracked root tuples); unordered
// configurations compare equal under any permutation of their points.
class Configuration {
 public:
  Configuration(std::vector<ComplexScalar> points, bool ordered);

  int size() const { return static_cast<int>(points_.size()); }
  const std::vector<ComplexScalar>& points() const { return points_; }
  bool ordered() const { return ordered_; }

  // Minimum pairwise distance; +infinity for a single point, 0 for repeats.
  double separation() const { return separation_; }
  // Maximum pairwise distance; 0 for a single point.
  double diameter() const { return diameter_; }

  std::vector<ComplexScalar> sorted_points() const;

  bool operator==(const Configuration& other) const;
  bool operator!=(const Configuration& other) const { return !(*this == other); }

 private:
  std::vector<ComplexScalar> points_;
  bool ordered_;
  double separation_;
  double diameter_;
};

// P evaluated by Horner's rule.
ComplexScalar evaluate(const MonicPolynomial& p, ComplexScalar z);

// Formal derivative; degree n-1 with leading coefficient n.
Polynomial derivative(const MonicPolynomial& p);

// All n roots with multiplicity, via Ehrlich-Aberth simultaneous iteration
// started on a circle of radius 1 + max|a_k|, then Newton polishing. Each
// returned root satisfies |P(r)| <= root_tol * (1 + |r|)^n, otherwise
// NonConvergence is thrown. Output is unordered.
Configuration roots(const MonicPolynomial& p, const TolerancePolicy& tol = {});

// Roots of a general polynomial after substituting x = sX with s chosen to
// balance coefficient magnitudes, then mapping back and Newton-polishing on
// the original. High-degree polynomials with mixed-scale coefficients
// (division polynomials, elimination resultants) stay solvable this way when
// the direct monic solve would be hopelessly ill-conditioned. The residual
// certificate applies to the balanced polynomial; callers are expected to
// certify downstream (order checks, on-curve residuals).
Configuration balanced_roots(const Polynomial& p, const TolerancePolicy& tol = {});

// Expands prod (Z - z_i) over the canonically sorted points, so the result
// is bit-identical for any permutation of c. Inverse of roots up to
// numerical error.
MonicPolynomial from_roots(const Configuration& c);

// Determinant of the Sylvester matrix of P and Q (both of degree >= 1),
// computed by LU factorization with partial pivoting on complex entries.
ComplexScalar resultant(const Polynomial& p, const Polynomial& q);

// disc(P) = (-1)^{n(n-1)/2} Res(P, P'), n = deg P >= 2. For monic P this
// equals prod_{i<j} (r_i - r_j)^2 over the roots.
ComplexScalar discriminant(const MonicPolynomial& p);

struct SquareFreeResult {
  bool square_free;
  double margin;  // |disc(P)|, the quantity compared against the threshold
};

// True iff the discriminant clears a scale-aware threshold and the computed
// roots are pairwise separated by more than distinct_tol * diameter.
SquareFreeResult is_square_free(const MonicPolynomial& p, const TolerancePolicy& tol = {});

}  // namespace cml
