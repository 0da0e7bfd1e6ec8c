#include "cml/plane_curves.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace cml {

namespace {

struct FlexFrame {
  WeierstrassCurve curve;
  Eigen::Matrix3cd back;      // columns map (u, v, w) chart coordinates to the original frame
  ComplexScalar alpha;        // u = alpha * X
  ComplexScalar shift;        // X = X' - shift undoes the depression
  ComplexScalar a_quad;       // coefficient of v^2 w
  ComplexScalar b1, b2;       // v-linear coefficients b1 u + b2 (times w)
  ProjectivePoint origin;     // the flex, image of the group origin
};

ComplexScalar eval_grad(const TernaryForm& f, int axis, const ProjectivePoint& p) {
  return f.partial(axis)(p.coords[0], p.coords[1], p.coords[2]);
}

// Builds the coordinate change taking `flex` to (0:1:0) with tangent line
// {w = 0}, reads off the Weierstrass model, and keeps everything needed to
// map group elements back to the original coordinates.
FlexFrame make_flex_frame(const TernaryForm& f, const ProjectivePoint& flex,
                          const TolerancePolicy& tol) {
  if (f.degree() != 3)
    throw Error(ErrorKind::InvalidInput, "torsion construction needs a cubic form");
  const double fscale = f.coeff_norm();
  const double fval = std::abs(f(flex.coords[0], flex.coords[1], flex.coords[2]));
  if (fval > 1e-6 * fscale)
    throw Error(ErrorKind::FlexNotOnCurve, "claimed flex does not lie on the curve");
  const TernaryForm hess = hessian(f);
  const double hval = std::abs(hess(flex.coords[0], flex.coords[1], flex.coords[2]));
  if (hval > 1e-6 * hess.coeff_norm())
    throw Error(ErrorKind::FlexNotOnCurve, "claimed flex is not an inflection point");
  if (!is_smooth(f, tol))
    throw Error(ErrorKind::InvalidInput, "torsion construction needs a smooth cubic");

  // Row w: the gradient at the flex (cuts out the tangent line, contains p by
  // the Euler relation). Row v: anything with v(p) != 0; the conjugate works.
  // Row u: a vector annihilating p, straightened against w.
  Eigen::Vector3cd p(flex.coords[0], flex.coords[1], flex.coords[2]);
  Eigen::Vector3cd w(eval_grad(f, 0, flex), eval_grad(f, 1, flex), eval_grad(f, 2, flex));
  if (w.norm() < 1e-9 * fscale)
    throw Error(ErrorKind::InvalidInput, "gradient vanishes at the flex (singular point)");
  w /= w.norm();
  Eigen::Vector3cd v = p.conjugate();
  v /= v.norm();

  const std::array<Eigen::Vector3cd, 3> candidates{
      Eigen::Vector3cd(-p(1), p(0), ComplexScalar(0.0)),
      Eigen::Vector3cd(ComplexScalar(0.0), -p(2), p(1)),
      Eigen::Vector3cd(-p(2), ComplexScalar(0.0), p(0)),
  };
  Eigen::Vector3cd u = Eigen::Vector3cd::Zero();
  double best = 0.0;
  for (const auto& cand : candidates) {
    // Bilinear annihilation of p survives subtracting any multiple of w, so a
    // Hermitian projection is safe here.
    Eigen::Vector3cd trial = cand - w.dot(cand) * w;
    if (trial.norm() > best) {
      best = trial.norm();
      u = trial;
    }
  }
  if (best < 1e-9)
    throw Error(ErrorKind::IllConditioned, "could not build a frame at the flex");
  u /= u.norm();

  Eigen::Matrix3cd rows;
  rows.row(0) = u.transpose();
  rows.row(1) = v.transpose();
  rows.row(2) = w.transpose();
  if (std::abs(rows.determinant()) < 1e-6)
    throw Error(ErrorKind::IllConditioned, "flex frame is nearly degenerate");
  const Eigen::Matrix3cd back = rows.inverse();

  std::array<std::array<ComplexScalar, 3>, 3> m;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) m[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = back(r, c);
  const TernaryForm g = f.substituted(m);

  const double gscale = g.coeff_norm();
  // In the new frame the flex is (0:1:0) with tangent {w = 0}; that forces
  // the v^3, u v^2 and u^2 v coefficients to vanish. They are only zero to
  // roundoff, so certify and then drop them.
  const std::array<std::array<int, 3>, 3> forbidden{{{0, 3, 0}, {1, 2, 0}, {2, 1, 0}}};
  for (const auto& exp : forbidden) {
    const double leak = std::abs(g.coefficient(exp[0], exp[1], exp[2]));
    if (leak > 1e-6 * gscale)
      throw Error(ErrorKind::FlexNotOnCurve,
                  "flex normalization leaked a forbidden cubic coefficient");
  }
  const ComplexScalar a = g.coefficient(0, 2, 1);
  const ComplexScalar b1 = g.coefficient(1, 1, 1);
  const ComplexScalar b2 = g.coefficient(0, 1, 2);
  const ComplexScalar c30 = g.coefficient(3, 0, 0);
  const ComplexScalar c21 = g.coefficient(2, 0, 1);
  const ComplexScalar c12 = g.coefficient(1, 0, 2);
  const ComplexScalar c03 = g.coefficient(0, 0, 3);
  if (std::abs(a) < 1e-8 * gscale || std::abs(c30) < 1e-8 * gscale)
    throw Error(ErrorKind::IllConditioned, "degenerate cubic model at the flex");

  // Affine chart w = 1: a v^2 + (b1 u + b2) v + (cubic in u) = 0. Completing
  // the square in v gives V^2 = e3 u^3 + e2 u^2 + e1 u + e0 after scaling by
  // -4a, then u = alpha X with alpha^3 e3 = 1 and a final depression in X.
  const ComplexScalar e3 = -4.0 * a * c30;
  const ComplexScalar e2 = b1 * b1 - 4.0 * a * c21;
  const ComplexScalar e1 = 2.0 * b1 * b2 - 4.0 * a * c12;
  const ComplexScalar e0 = b2 * b2 - 4.0 * a * c03;
  const ComplexScalar alpha = std::pow(e3, ComplexScalar(-1.0 / 3.0));
  const ComplexScalar p2 = e2 * alpha * alpha;
  const ComplexScalar p1 = e1 * alpha;
  const ComplexScalar p0 = e0;
  const ComplexScalar shift = p2 / 3.0;
  const ComplexScalar short_a = p1 - p2 * p2 / 3.0;
  const ComplexScalar short_b = p0 - p1 * p2 / 3.0 + 2.0 * p2 * p2 * p2 / 27.0;

  WeierstrassCurve curve = WeierstrassCurve::from_short_form(short_a, short_b, tol);
  return FlexFrame{std::move(curve), back, alpha, shift, a, b1, b2, flex};
}

ProjectivePoint map_back(const FlexFrame& frame, const CurvePoint& p) {
  if (p.inf) return frame.origin;
  const ComplexScalar x = p.x - frame.shift;
  const ComplexScalar u = frame.alpha * x;
  const ComplexScalar v = (p.y - (frame.b1 * u + frame.b2)) / (2.0 * frame.a_quad);
  const Eigen::Vector3cd chart(u, v, ComplexScalar(1.0));
  const Eigen::Vector3cd orig = frame.back * chart;
  return ProjectivePoint::from(orig(0), orig(1), orig(2));
}

void verify_on_curve(const TernaryForm& f, const std::vector<ProjectivePoint>& pts) {
  const double scale = f.coeff_norm();
  for (const auto& pt : pts) {
    const double r = std::abs(f(pt.coords[0], pt.coords[1], pt.coords[2]));
    if (r > 1e-7 * scale)
      throw Error(ErrorKind::IllConditioned, "mapped torsion point drifted off the curve");
  }
}

void verify_distinct(const std::vector<ProjectivePoint>& pts, double gate) {
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      if (projective_distance(pts[i], pts[j]) <= gate)
        throw Error(ErrorKind::CardinalityMismatch, "computed torsion points collide");
}

std::vector<std::int64_t> proper_divisors(std::int64_t m) {
  std::vector<std::int64_t> out;
  for (std::int64_t d = 1; d < m; ++d)
    if (m % d == 0) out.push_back(d);
  return out;
}

}  // namespace

std::vector<ProjectivePoint> cubic_torsion(const TernaryForm& f, std::int64_t k,
                                           const ProjectivePoint& flex,
                                           const TolerancePolicy& tol) {
  tol.validate();
  if (k < 1 || k > 6) throw Error(ErrorKind::InvalidInput, "multisection order must be in [1, 6]");
  const FlexFrame frame = make_flex_frame(f, flex, tol);

  std::vector<CurvePoint> group{CurvePoint::infinity()};
  for (const auto& p : torsion_points(frame.curve, 3 * k, tol)) group.push_back(p);

  std::vector<ProjectivePoint> out;
  out.reserve(group.size());
  for (const auto& p : group) out.push_back(map_back(frame, p));
  verify_on_curve(f, out);
  verify_distinct(out, tol.distinct_tol);

  if (static_cast<std::int64_t>(out.size()) != 9 * k * k) {
    std::ostringstream os;
    os << "expected " << 9 * k * k << " points, produced " << out.size();
    throw Error(ErrorKind::CardinalityMismatch, os.str());
  }
  std::sort(out.begin(), out.end(), projective_less);
  return out;
}

std::vector<ProjectivePoint> torsion_stratum(const TernaryForm& f, std::int64_t m,
                                             const ProjectivePoint& flex,
                                             const TolerancePolicy& tol) {
  tol.validate();
  if (m < 1 || m > 6) throw Error(ErrorKind::InvalidInput, "stratum order must be in [1, 6]");
  const FlexFrame frame = make_flex_frame(f, flex, tol);

  std::vector<CurvePoint> group{CurvePoint::infinity()};
  for (const auto& p : torsion_points(frame.curve, 3 * m, tol)) group.push_back(p);

  // Keep the points of exact level m: the ones killed by 3m but by no proper
  // 3d with d | m.
  const auto divisors = proper_divisors(m);
  std::vector<CurvePoint> exact;
  for (const auto& p : group) {
    bool lower = false;
    for (const auto d : divisors)
      if (scalar_mul(frame.curve, 3 * d, p).inf) {
        lower = true;
        break;
      }
    if (!lower) exact.push_back(p);
  }

  const std::int64_t expected = 9 * jordan_totient(m);
  if (static_cast<std::int64_t>(exact.size()) != expected) {
    std::ostringstream os;
    os << "stratum size should be " << expected << ", sieved " << exact.size();
    throw Error(ErrorKind::CardinalityMismatch, os.str());
  }

  std::vector<ProjectivePoint> out;
  out.reserve(exact.size());
  for (const auto& p : exact) out.push_back(map_back(frame, p));
  verify_on_curve(f, out);
  verify_distinct(out, tol.distinct_tol);
  std::sort(out.begin(), out.end(), projective_less);
  return out;
}

}  // namespace cml
