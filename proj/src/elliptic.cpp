#include "cml/plane_curves.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cml {

namespace {

constexpr double kVerticalTol = 1e-9;

Configuration sorted_branch_values(const Configuration& lambda, const TolerancePolicy& tol) {
  tol.validate();
  if (lambda.size() != 3)
    throw Error(ErrorKind::InvalidInput, "curve needs exactly three branch values");
  const double gate = tol.distinct_tol * lambda.diameter();
  if (!(lambda.separation() > gate))
    throw Error(ErrorKind::NotDistinct, "branch values are not pairwise distinct");
  return Configuration(lambda.sorted_points(), false);
}

}  // namespace

WeierstrassCurve::WeierstrassCurve(const Configuration& lambda, const TolerancePolicy& tol)
    : lambda_(sorted_branch_values(lambda, tol)) {
  const auto& l = lambda_.points();
  c2_ = -(l[0] + l[1] + l[2]);
  c1_ = l[0] * l[1] + l[0] * l[2] + l[1] * l[2];
  c0_ = -(l[0] * l[1] * l[2]);
  // Short form data for the shift x = X - c2/3.
  a_ = c1_ - c2_ * c2_ / 3.0;
  b_ = c0_ - c1_ * c2_ / 3.0 + 2.0 * c2_ * c2_ * c2_ / 27.0;
}

WeierstrassCurve WeierstrassCurve::from_short_form(ComplexScalar a, ComplexScalar b,
                                                   const TolerancePolicy& tol) {
  if (!is_finite(a) || !is_finite(b))
    throw Error(ErrorKind::InvalidInput, "non-finite short form coefficient");
  const MonicPolynomial cubic({ComplexScalar(0.0), a, b});
  const Configuration lam = roots(cubic, tol);
  return WeierstrassCurve(lam, tol);
}

ComplexScalar WeierstrassCurve::rhs(ComplexScalar x) const {
  const auto& l = lambda_.points();
  return (x - l[0]) * (x - l[1]) * (x - l[2]);
}

double on_curve_residual(const WeierstrassCurve& curve, const CurvePoint& p) {
  if (p.inf) return 0.0;
  return std::abs(p.y * p.y - curve.rhs(p.x));
}

CurvePoint ec_neg(const CurvePoint& p) {
  if (p.inf) return CurvePoint::infinity();
  return CurvePoint::affine(p.x, -p.y);
}

CurvePoint ec_add(const WeierstrassCurve& curve, const CurvePoint& p, const CurvePoint& q) {
  if (p.inf) return q;
  if (q.inf) return p;
  if (!is_finite(p.x) || !is_finite(p.y) || !is_finite(q.x) || !is_finite(q.y))
    throw Error(ErrorKind::InvalidInput, "non-finite curve point");
  const double scale = 1.0 + std::max(std::max(std::abs(p.x), std::abs(q.x)),
                                      std::max(std::abs(p.y), std::abs(q.y)));
  ComplexScalar slope;
  if (std::abs(p.x - q.x) <= kVerticalTol * scale) {
    // Same x fiber: either the chord is vertical (sum is the origin) or the
    // points coincide and the tangent slope applies.
    if (std::abs(p.y + q.y) <= kVerticalTol * scale) return CurvePoint::infinity();
    slope = (3.0 * p.x * p.x + 2.0 * curve.c2() * p.x + curve.c1()) / (2.0 * p.y);
  } else {
    slope = (q.y - p.y) / (q.x - p.x);
  }
  const ComplexScalar x3 = slope * slope - curve.c2() - p.x - q.x;
  const ComplexScalar y3 = -(p.y + slope * (x3 - p.x));
  if (!is_finite(x3) || !is_finite(y3))
    throw Error(ErrorKind::IllConditioned, "group law overflowed");
  return CurvePoint::affine(x3, y3);
}

CurvePoint scalar_mul(const WeierstrassCurve& curve, std::int64_t k, const CurvePoint& p) {
  if (k == 0 || p.inf) return CurvePoint::infinity();
  if (k < 0) return ec_neg(scalar_mul(curve, -k, p));
  CurvePoint acc = CurvePoint::infinity();
  CurvePoint base = p;
  std::uint64_t n = static_cast<std::uint64_t>(k);
  while (n != 0) {
    if (n & 1u) acc = ec_add(curve, acc, base);
    n >>= 1u;
    if (n != 0) base = ec_add(curve, base, base);
  }
  return acc;
}

namespace {

// Table of the y-free division polynomial parts F_m on Y^2 = X^3 + aX + b:
// psi_m = F_m for odd m and psi_m = y * F_m for even m. Everything here is a
// univariate polynomial in X.
std::vector<Polynomial> division_parts(ComplexScalar a, ComplexScalar b, int up_to) {
  const Polynomial f({ComplexScalar(1.0), ComplexScalar(0.0), a, b});  // X^3 + aX + b
  const Polynomial f2 = f * f;
  std::vector<Polynomial> fs;
  fs.reserve(static_cast<std::size_t>(std::max(up_to, 4)) + 1);
  fs.emplace_back();                                                     // F_0 = 0
  fs.emplace_back(std::vector<ComplexScalar>{ComplexScalar(1.0)});       // F_1 = 1
  fs.emplace_back(std::vector<ComplexScalar>{ComplexScalar(2.0)});       // F_2 = 2
  fs.emplace_back(std::vector<ComplexScalar>{ComplexScalar(3.0), ComplexScalar(0.0),
                                             6.0 * a, 12.0 * b, -(a * a)});
  fs.emplace_back(Polynomial(std::vector<ComplexScalar>{
                      ComplexScalar(1.0), ComplexScalar(0.0), 5.0 * a, 20.0 * b,
                      -5.0 * a * a, -4.0 * a * b, -(8.0 * b * b + a * a * a)})
                      .scaled(ComplexScalar(4.0)));
  for (int idx = 5; idx <= up_to; ++idx) {
    if (idx % 2 == 1) {
      const int m = (idx - 1) / 2;
      const Polynomial lead = fs[static_cast<std::size_t>(m + 2)] *
                              fs[static_cast<std::size_t>(m)].pow(3);
      const Polynomial tail = fs[static_cast<std::size_t>(m - 1)] *
                              fs[static_cast<std::size_t>(m + 1)].pow(3);
      fs.push_back(m % 2 == 0 ? f2 * lead - tail : lead - f2 * tail);
    } else {
      const int m = idx / 2;
      const Polynomial diff =
          fs[static_cast<std::size_t>(m + 2)] * fs[static_cast<std::size_t>(m - 1)] *
              fs[static_cast<std::size_t>(m - 1)] -
          fs[static_cast<std::size_t>(m - 2)] * fs[static_cast<std::size_t>(m + 1)] *
              fs[static_cast<std::size_t>(m + 1)];
      fs.push_back((fs[static_cast<std::size_t>(m)] * diff).scaled(ComplexScalar(0.5)));
    }
  }
  return fs;
}

struct PrimePower {
  std::int64_t p;
  int e;
  std::int64_t q;
};

std::vector<PrimePower> prime_power_split(std::int64_t k) {
  std::vector<PrimePower> out;
  std::int64_t rest = k;
  for (std::int64_t p = 2; p * p <= rest; ++p) {
    if (rest % p != 0) continue;
    PrimePower pp{p, 0, 1};
    while (rest % p == 0) {
      rest /= p;
      ++pp.e;
      pp.q *= p;
    }
    out.push_back(pp);
  }
  if (rest > 1) out.push_back({rest, 1, rest});
  return out;
}

// All k^2 points of the k-torsion subgroup for a prime power k, including the
// origin (represented by the infinite point).
std::vector<CurvePoint> prime_power_torsion(const WeierstrassCurve& curve, std::int64_t q,
                                            const TolerancePolicy& tol) {
  std::vector<CurvePoint> out;
  out.push_back(CurvePoint::infinity());
  const auto& lams = curve.lambda().points();
  if (q % 2 == 0)
    for (const auto& l : lams) out.push_back(CurvePoint::affine(l, ComplexScalar(0.0)));
  if (q == 2) return out;

  // x-coordinates beyond the 2-torsion come from the division polynomial part
  // F_q over the short form, shifted back by c2/3.
  const auto fs = division_parts(curve.a(), curve.b(), static_cast<int>(q));
  const Polynomial& part = fs[static_cast<std::size_t>(q)];
  const Configuration xs = balanced_roots(part, tol);
  const ComplexScalar shift = curve.c2() / 3.0;
  for (const auto& xshort : xs.points()) {
    const ComplexScalar x = xshort - shift;
    const ComplexScalar y = std::sqrt(curve.rhs(x));
    out.push_back(CurvePoint::affine(x, y));
    out.push_back(CurvePoint::affine(x, -y));
  }
  return out;
}

std::string point_to_string(const CurvePoint& p) {
  if (p.inf) return "origin";
  std::ostringstream os;
  os << "(" << p.x.real() << "+" << p.x.imag() << "i, " << p.y.real() << "+" << p.y.imag() << "i)";
  return os.str();
}

}  // namespace

Polynomial division_polynomial(const WeierstrassCurve& curve, std::int64_t k) {
  if (k < 1) throw Error(ErrorKind::InvalidInput, "division polynomial index must be >= 1");
  if (k > 64) throw Error(ErrorKind::InvalidInput, "division polynomial index too large");
  const auto fs = division_parts(curve.a(), curve.b(), static_cast<int>(std::max<std::int64_t>(k, 4)));
  const Polynomial& part = fs[static_cast<std::size_t>(k)];
  if (k % 2 == 1) return part;
  // Even k: fold the y factor of psi_k = y * F_k back in as y^2 = X^3+aX+b,
  // so the roots are exactly the x-coordinates of the nonzero k-torsion
  // (2-torsion from the cubic factor, the rest from F_k). For k = 2 this is
  // the curve cubic itself.
  const Polynomial f({ComplexScalar(1.0), ComplexScalar(0.0), curve.a(), curve.b()});
  return f * part.scaled(ComplexScalar(0.5));
}

std::vector<CurvePoint> torsion_points(const WeierstrassCurve& curve, std::int64_t k,
                                       const TolerancePolicy& tol) {
  tol.validate();
  if (k < 2) throw Error(ErrorKind::InvalidInput, "torsion order must be >= 2");
  if (k > 36) throw Error(ErrorKind::InvalidInput, "torsion order too large for dense solve");

  std::vector<CurvePoint> acc{CurvePoint::infinity()};
  for (const auto& pp : prime_power_split(k)) {
    const auto part = prime_power_torsion(curve, pp.q, tol);
    std::vector<CurvePoint> next;
    next.reserve(acc.size() * part.size());
    for (const auto& p : acc)
      for (const auto& q : part) next.push_back(ec_add(curve, p, q));
    acc = std::move(next);
  }

  std::vector<CurvePoint> out;
  for (const auto& p : acc)
    if (!p.inf) out.push_back(p);

  const std::int64_t expected = k * k - 1;
  if (static_cast<std::int64_t>(out.size()) != expected) {
    std::ostringstream os;
    os << "expected " << expected << " nonzero torsion points, assembled " << out.size();
    throw Error(ErrorKind::CardinalityMismatch, os.str());
  }

  double scale = 1.0;
  for (const auto& p : out) scale = std::max(scale, std::abs(p.x) + std::abs(p.y));
  for (std::size_t i = 0; i < out.size(); ++i)
    for (std::size_t j = i + 1; j < out.size(); ++j) {
      const double d = std::abs(out[i].x - out[j].x) + std::abs(out[i].y - out[j].y);
      if (d <= tol.distinct_tol * scale)
        throw Error(ErrorKind::CardinalityMismatch, "assembled torsion points collide");
    }

  // Order check: [k-1]P must be the negative of P for every member.
  for (const auto& p : out) {
    const CurvePoint q = scalar_mul(curve, k - 1, p);
    if (q.inf)
      throw Error(ErrorKind::CardinalityMismatch,
                  "point of lower order in assembled torsion: " + point_to_string(p));
    const double res = std::abs(q.x - p.x) + std::abs(q.y + p.y);
    if (res > 1e-8 * (1.0 + std::abs(p.x) + std::abs(p.y)))
      throw Error(ErrorKind::CardinalityMismatch,
                  "order check failed at " + point_to_string(p));
  }

  std::sort(out.begin(), out.end(), [](const CurvePoint& a, const CurvePoint& b) {
    if (a.x != b.x) return scalar_less(a.x, b.x);
    return scalar_less(a.y, b.y);
  });
  return out;
}

}  // namespace cml
