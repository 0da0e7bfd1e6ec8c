#include "cml/poly.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <sstream>

namespace cml {

bool is_finite(ComplexScalar z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

std::uint64_t total_order_key(double d) {
  const auto bits = std::bit_cast<std::uint64_t>(d);
  // Flip negative values entirely, set the sign bit on positives: the result
  // compares like the IEEE totalOrder predicate (NaNs excluded by callers).
  return (bits & 0x8000000000000000ULL) ? ~bits : (bits | 0x8000000000000000ULL);
}

bool scalar_less(ComplexScalar a, ComplexScalar b) {
  const auto ar = total_order_key(a.real()), br = total_order_key(b.real());
  if (ar != br) return ar < br;
  return total_order_key(a.imag()) < total_order_key(b.imag());
}

void TolerancePolicy::validate() const {
  if (!(root_tol > 0.0) || !(distinct_tol > 0.0) || max_iterations <= 0)
    throw Error(ErrorKind::InvalidInput, "tolerances must be strictly positive");
  if (!(root_tol < distinct_tol))
    throw Error(ErrorKind::InvalidInput, "root_tol must be smaller than distinct_tol");
}

MonicPolynomial::MonicPolynomial(std::vector<ComplexScalar> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty())
    throw Error(ErrorKind::InvalidInput, "monic polynomial needs degree >= 1");
  for (const auto& c : coeffs_)
    if (!is_finite(c)) throw Error(ErrorKind::InvalidInput, "non-finite coefficient");
}

Polynomial::Polynomial(std::vector<ComplexScalar> coeffs_leading_first)
    : coeffs_(std::move(coeffs_leading_first)) {
  if (coeffs_.empty()) coeffs_.push_back(ComplexScalar(0.0));
  for (const auto& c : coeffs_)
    if (!is_finite(c)) throw Error(ErrorKind::InvalidInput, "non-finite coefficient");
  std::size_t first = 0;
  while (first + 1 < coeffs_.size() && coeffs_[first] == ComplexScalar(0.0)) ++first;
  coeffs_.erase(coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(first));
}

Polynomial::Polynomial(const MonicPolynomial& p) {
  coeffs_.reserve(static_cast<std::size_t>(p.degree()) + 1);
  coeffs_.push_back(ComplexScalar(1.0));
  coeffs_.insert(coeffs_.end(), p.coeffs().begin(), p.coeffs().end());
}

bool Polynomial::is_zero() const {
  return coeffs_.size() == 1 && coeffs_[0] == ComplexScalar(0.0);
}

ComplexScalar Polynomial::coeff_of(int power) const {
  const int d = degree();
  if (power < 0 || power > d) return ComplexScalar(0.0);
  return coeffs_[static_cast<std::size_t>(d - power)];
}

ComplexScalar Polynomial::operator()(ComplexScalar z) const {
  ComplexScalar v(0.0);
  for (const auto& c : coeffs_) v = v * z + c;
  return v;
}

Polynomial Polynomial::derivative() const {
  const int d = degree();
  if (d <= 0) return Polynomial();
  std::vector<ComplexScalar> out(static_cast<std::size_t>(d));
  for (int k = 0; k < d; ++k)
    out[static_cast<std::size_t>(k)] = coeffs_[static_cast<std::size_t>(k)] * ComplexScalar(d - k);
  return Polynomial(std::move(out));
}

Polynomial Polynomial::operator+(const Polynomial& other) const {
  const int d = std::max(degree(), other.degree());
  std::vector<ComplexScalar> out(static_cast<std::size_t>(d) + 1, ComplexScalar(0.0));
  for (int k = 0; k <= d; ++k)
    out[static_cast<std::size_t>(d - k)] = coeff_of(k) + other.coeff_of(k);
  return Polynomial(std::move(out));
}

Polynomial Polynomial::operator-(const Polynomial& other) const {
  return *this + other.scaled(ComplexScalar(-1.0));
}

Polynomial Polynomial::operator*(const Polynomial& other) const {
  if (is_zero() || other.is_zero()) return Polynomial();
  const auto& a = coeffs_;
  const auto& b = other.coeffs_;
  std::vector<ComplexScalar> out(a.size() + b.size() - 1, ComplexScalar(0.0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return Polynomial(std::move(out));
}

Polynomial Polynomial::scaled(ComplexScalar factor) const {
  std::vector<ComplexScalar> out = coeffs_;
  for (auto& c : out) c *= factor;
  return Polynomial(std::move(out));
}

Polynomial Polynomial::pow(int exponent) const {
  if (exponent < 0) throw Error(ErrorKind::InvalidInput, "negative polynomial power");
  Polynomial result(std::vector<ComplexScalar>{ComplexScalar(1.0)});
  for (int i = 0; i < exponent; ++i) result = result * *this;
  return result;
}

MonicPolynomial Polynomial::monic() const {
  if (is_zero()) throw Error(ErrorKind::InvalidInput, "zero polynomial has no monic form");
  std::vector<ComplexScalar> out(coeffs_.begin() + 1, coeffs_.end());
  for (auto& c : out) c /= coeffs_.front();
  return MonicPolynomial(std::move(out));
}

Configuration::Configuration(std::vector<ComplexScalar> points, bool ordered)
    : points_(std::move(points)), ordered_(ordered) {
  if (points_.empty()) throw Error(ErrorKind::InvalidInput, "empty configuration");
  for (const auto& p : points_)
    if (!is_finite(p)) throw Error(ErrorKind::InvalidInput, "non-finite point");
  separation_ = std::numeric_limits<double>::infinity();
  diameter_ = 0.0;
  for (std::size_t i = 0; i < points_.size(); ++i)
    for (std::size_t j = i + 1; j < points_.size(); ++j) {
      const double d = std::abs(points_[i] - points_[j]);
      separation_ = std::min(separation_, d);
      diameter_ = std::max(diameter_, d);
    }
}

std::vector<ComplexScalar> Configuration::sorted_points() const {
  std::vector<ComplexScalar> out = points_;
  std::sort(out.begin(), out.end(), scalar_less);
  return out;
}

bool Configuration::operator==(const Configuration& other) const {
  if (ordered_ != other.ordered_ || points_.size() != other.points_.size()) return false;
  if (ordered_) return points_ == other.points_;
  return sorted_points() == other.sorted_points();
}

ComplexScalar evaluate(const MonicPolynomial& p, ComplexScalar z) {
  ComplexScalar v(1.0);
  for (const auto& c : p.coeffs()) v = v * z + c;
  return v;
}

Polynomial derivative(const MonicPolynomial& p) {
  return Polynomial(p).derivative();
}

namespace {

// Horner evaluation of the monic polynomial and its derivative in one pass,
// together with the majorant sum |z|^n + sum |a_k| |z|^(n-k). A residual at
// or below machine epsilon times the majorant certifies a backward-stable
// zero regardless of how the coefficient magnitudes are distributed.
void eval_both(const std::vector<ComplexScalar>& a, ComplexScalar z,
               ComplexScalar& value, ComplexScalar& deriv, double& majorant) {
  value = ComplexScalar(1.0);
  deriv = ComplexScalar(0.0);
  majorant = 1.0;
  const double az = std::abs(z);
  for (const auto& c : a) {
    deriv = deriv * z + value;
    value = value * z + c;
    majorant = majorant * az + std::abs(c);
  }
}

double residual_bound(double root_tol, ComplexScalar r, int n) {
  return root_tol * std::pow(1.0 + std::abs(r), n);
}

// All roots lie within both the Cauchy bound 1 + max|a_k| and the Fujiwara
// bound 2 max_k |a_k|^{1/k}; the latter is far tighter when high-degree
// polynomials carry coefficients of wildly mixed magnitude (division
// polynomials reach 1e18 while keeping unit-scale roots).
double initial_radius(const std::vector<ComplexScalar>& a) {
  double cauchy = 0.0;
  for (const auto& c : a) cauchy = std::max(cauchy, std::abs(c));
  cauchy += 1.0;
  double fujiwara = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double m = std::abs(a[k]);
    if (m > 0.0)
      fujiwara = std::max(fujiwara, std::pow(m, 1.0 / static_cast<double>(k + 1)));
  }
  fujiwara *= 2.0;
  if (fujiwara == 0.0) return 1.0;  // x^n: any circle around the origin works
  return std::min(cauchy, fujiwara);
}

}  // namespace

Configuration roots(const MonicPolynomial& p, const TolerancePolicy& tol) {
  tol.validate();
  const int n = p.degree();
  const auto& a = p.coeffs();
  if (n == 1) return Configuration({-a[0]}, false);

  const double radius = initial_radius(a);

  // Equispaced starting points with a fixed angular offset so that real-root
  // symmetry cannot trap the iteration.
  std::vector<ComplexScalar> z(static_cast<std::size_t>(n));
  const double two_pi = 2.0 * M_PI;
  for (int i = 0; i < n; ++i) {
    const double angle = two_pi * (i + 0.5) / n + 0.4;
    z[static_cast<std::size_t>(i)] = radius * ComplexScalar(std::cos(angle), std::sin(angle));
  }

  ComplexScalar v, dv;
  double maj = 0.0;
  for (int iter = 0; iter < tol.max_iterations; ++iter) {
    double max_rel_step = 0.0;
    for (int i = 0; i < n; ++i) {
      ComplexScalar& zi = z[static_cast<std::size_t>(i)];
      eval_both(a, zi, v, dv, maj);
      if (!is_finite(v) || !is_finite(dv)) {
        // Evaluation overflowed; contract toward the origin and retry.
        zi *= 0.5;
        max_rel_step = 1.0;
        continue;
      }
      // Settled points: either within the target residual or at the
      // backward-stable floor of double evaluation. The majorant keeps this
      // test meaningful in regions where the polynomial is far smaller than
      // unit coefficients would make it; an absolute gate there freezes
      // several iterates onto one root.
      const double res = std::abs(v);
      if (res <= residual_bound(tol.root_tol, zi, n) * 0.01 &&
          res <= 1e-15 * maj)
        continue;
      if (dv == ComplexScalar(0.0)) {
        // Stationary point; nudge off it deterministically.
        zi += radius * 1e-6 * ComplexScalar(std::cos(0.7 * (i + 1)), std::sin(0.7 * (i + 1)));
        max_rel_step = 1.0;
        continue;
      }
      const ComplexScalar newton = v / dv;
      ComplexScalar repulsion(0.0);
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        const ComplexScalar diff = zi - z[static_cast<std::size_t>(j)];
        if (diff == ComplexScalar(0.0)) continue;  // handled by the nudge above
        repulsion += ComplexScalar(1.0) / diff;
      }
      const ComplexScalar den = ComplexScalar(1.0) - newton * repulsion;
      const ComplexScalar step = (std::abs(den) < 1e-14) ? newton : newton / den;
      zi -= step;
      max_rel_step = std::max(max_rel_step, std::abs(step) / (1.0 + std::abs(zi)));
    }
    if (max_rel_step <= tol.root_tol) break;
  }

  // Newton polish; for multiple roots this stalls harmlessly once the
  // residual stops improving.
  for (int i = 0; i < n; ++i) {
    ComplexScalar& zi = z[static_cast<std::size_t>(i)];
    double best = std::numeric_limits<double>::infinity();
    ComplexScalar best_z = zi;
    for (int iter = 0; iter < 60; ++iter) {
      eval_both(a, zi, v, dv, maj);
      const double res = std::abs(v);
      if (res < best) {
        best = res;
        best_z = zi;
      }
      if (res == 0.0 || dv == ComplexScalar(0.0)) break;
      const ComplexScalar step = v / dv;
      if (std::abs(step) <= 1e-17 * (1.0 + std::abs(zi))) break;
      zi -= step;
    }
    zi = best_z;
  }

  for (int i = 0; i < n; ++i) {
    const ComplexScalar zi = z[static_cast<std::size_t>(i)];
    eval_both(a, zi, v, dv, maj);
    const double res = std::abs(v);
    const double bound = residual_bound(tol.root_tol, zi, n);
    if (!is_finite(zi) || !std::isfinite(res) || !std::isfinite(bound) || res > bound) {
      std::ostringstream msg;
      msg << "root " << i << " residual " << std::abs(v) << " exceeds bound after "
          << tol.max_iterations << " iterations";
      throw Error(ErrorKind::NonConvergence, msg.str());
    }
  }
  return Configuration(std::move(z), false);
}

Configuration balanced_roots(const Polynomial& p, const TolerancePolicy& tol) {
  tol.validate();
  if (p.is_zero() || p.degree() < 1)
    throw Error(ErrorKind::InvalidInput, "balanced_roots requires degree >= 1");
  const int n = p.degree();
  const ComplexScalar lead = p.leading();
  std::vector<ComplexScalar> a(static_cast<std::size_t>(n));
  for (int k = 1; k <= n; ++k)
    a[static_cast<std::size_t>(k - 1)] = p.coeffs()[static_cast<std::size_t>(k)] / lead;

  // Root-magnitude estimate: the balanced substitution x = sX keeps every
  // coefficient of the transformed monic polynomial at most 1 in modulus.
  double s = 0.0;
  for (int k = 1; k <= n; ++k) {
    const double m = std::abs(a[static_cast<std::size_t>(k - 1)]);
    if (m > 0.0) s = std::max(s, std::pow(m, 1.0 / static_cast<double>(k)));
  }
  if (s == 0.0) s = 1.0;

  std::vector<ComplexScalar> b(a.size());
  double pw = 1.0;
  for (int k = 1; k <= n; ++k) {
    pw *= s;
    b[static_cast<std::size_t>(k - 1)] = a[static_cast<std::size_t>(k - 1)] / pw;
  }
  Configuration scaled = roots(MonicPolynomial(std::move(b)), tol);

  // Map back and polish against the original coefficients; near a simple root
  // the division of same-scale residual and derivative keeps full relative
  // precision even when the coefficients themselves are enormous.
  std::vector<ComplexScalar> out;
  out.reserve(scaled.points().size());
  for (ComplexScalar z : scaled.points()) {
    z *= s;
    for (int iter = 0; iter < 40; ++iter) {
      ComplexScalar v(0.0), dv(0.0);
      for (const auto& c : p.coeffs()) {
        dv = dv * z + v;
        v = v * z + c;
      }
      if (!is_finite(v) || !is_finite(dv) || dv == ComplexScalar(0.0)) break;
      const ComplexScalar step = v / dv;
      if (!is_finite(z - step)) break;
      z -= step;
      if (std::abs(step) <= 1e-16 * (1.0 + std::abs(z))) break;
    }
    out.push_back(z);
  }
  return Configuration(std::move(out), false);
}

MonicPolynomial from_roots(const Configuration& c) {
  const auto pts = c.sorted_points();
  // coef holds the monic expansion leading-first, starting from the constant 1.
  std::vector<ComplexScalar> coef{ComplexScalar(1.0)};
  for (const auto& r : pts) {
    coef.push_back(ComplexScalar(0.0));
    for (std::size_t k = coef.size() - 1; k >= 1; --k) coef[k] -= r * coef[k - 1];
  }
  return MonicPolynomial(std::vector<ComplexScalar>(coef.begin() + 1, coef.end()));
}

ComplexScalar resultant(const Polynomial& p, const Polynomial& q) {
  const int m = p.degree();
  const int n = q.degree();
  if (m < 1 || n < 1)
    throw Error(ErrorKind::InvalidInput, "resultant requires degrees >= 1");

  Eigen::MatrixXcd syl = Eigen::MatrixXcd::Zero(m + n, m + n);
  for (int r = 0; r < n; ++r)
    for (int j = 0; j <= m; ++j) syl(r, r + j) = p.coeffs()[static_cast<std::size_t>(j)];
  for (int r = 0; r < m; ++r)
    for (int j = 0; j <= n; ++j) syl(n + r, r + j) = q.coeffs()[static_cast<std::size_t>(j)];
  return Eigen::PartialPivLU<Eigen::MatrixXcd>(syl).determinant();
}

ComplexScalar discriminant(const MonicPolynomial& p) {
  const int n = p.degree();
  if (n < 2) throw Error(ErrorKind::InvalidInput, "discriminant requires degree >= 2");
  const ComplexScalar res = resultant(Polynomial(p), derivative(p));
  return ((n * (n - 1) / 2) % 2 == 0) ? res : -res;
}

SquareFreeResult is_square_free(const MonicPolynomial& p, const TolerancePolicy& tol) {
  tol.validate();
  const int n = p.degree();
  if (n < 2) throw Error(ErrorKind::InvalidInput, "square-freeness requires degree >= 2");

  const double margin = std::abs(discriminant(p));
  const Configuration cfg = roots(p, tol);
  const auto& pts = cfg.points();

  // disc(P) = prod_{i<j} (r_i - r_j)^2. Replacing the closest pair's factor
  // by (distinct_tol * diameter)^2 gives the discriminant magnitude at which
  // that pair would sit exactly on the distinctness threshold, so both gates
  // below measure the same thing.
  double rest = 1.0;
  double closest = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const double d = std::abs(pts[i] - pts[j]);
      if (d < closest) {
        if (std::isfinite(closest)) rest *= closest * closest;
        closest = d;
      } else {
        rest *= d * d;
      }
    }
  const double gate = tol.distinct_tol * cfg.diameter();
  const double threshold = gate * gate * rest;
  const bool separated = cfg.separation() > gate;
  return {separated && margin > threshold, margin};
}

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput: return "invalid input";
    case ErrorKind::NonConvergence: return "root iteration did not converge";
    case ErrorKind::NotSquareFree: return "polynomial is not square-free";
    case ErrorKind::NotDistinct: return "points are not distinct";
    case ErrorKind::ProjectionCollision: return "torsion projection collision";
    case ErrorKind::PathHitsDiscriminant: return "path hits the discriminant";
    case ErrorKind::TrackingAmbiguity: return "tracking ambiguity";
    case ErrorKind::AmbiguousMatching: return "ambiguous endpoint matching";
    case ErrorKind::CardinalityMismatch: return "cardinality mismatch";
    case ErrorKind::IllConditioned: return "ill-conditioned clustering";
    case ErrorKind::FlexNotOnCurve: return "base point is not a flex of the curve";
    case ErrorKind::CertificateFailed: return "certification clause failed";
  }
  return "unknown error";
}

}  // namespace cml
