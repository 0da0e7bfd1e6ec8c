#include "cml/plane_curves.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "cml/rng.hpp"

namespace cml {

namespace {

using Matrix3 = std::array<std::array<ComplexScalar, 3>, 3>;

ComplexScalar cpow(ComplexScalar base, int e) {
  ComplexScalar r(1.0);
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

}  // namespace

TernaryForm::TernaryForm(int degree, std::vector<Term> terms) : degree_(degree) {
  if (degree < 0) throw Error(ErrorKind::InvalidInput, "negative form degree");
  std::map<std::array<int, 3>, ComplexScalar> acc;
  for (const auto& t : terms) {
    if (t.exp[0] < 0 || t.exp[1] < 0 || t.exp[2] < 0 ||
        t.exp[0] + t.exp[1] + t.exp[2] != degree)
      throw Error(ErrorKind::InvalidInput, "term exponents do not match form degree");
    if (!is_finite(t.c)) throw Error(ErrorKind::InvalidInput, "non-finite coefficient");
    acc[t.exp] += t.c;
  }
  for (auto it = acc.rbegin(); it != acc.rend(); ++it)
    if (it->second != ComplexScalar(0.0)) terms_.push_back({it->first, it->second});
  if (terms_.empty())
    throw Error(ErrorKind::InvalidInput, "form has no nonzero coefficient");
}

TernaryForm TernaryForm::zero(int degree) {
  TernaryForm f(degree, {Term{{degree, 0, 0}, ComplexScalar(1.0)}});
  f.terms_.clear();
  return f;
}

bool TernaryForm::is_zero() const { return terms_.empty(); }

ComplexScalar TernaryForm::coefficient(int i, int j, int k) const {
  for (const auto& t : terms_)
    if (t.exp[0] == i && t.exp[1] == j && t.exp[2] == k) return t.c;
  return ComplexScalar(0.0);
}

ComplexScalar TernaryForm::operator()(ComplexScalar x, ComplexScalar y, ComplexScalar z) const {
  ComplexScalar v(0.0);
  for (const auto& t : terms_) v += t.c * cpow(x, t.exp[0]) * cpow(y, t.exp[1]) * cpow(z, t.exp[2]);
  return v;
}

TernaryForm TernaryForm::operator+(const TernaryForm& other) const {
  if (degree_ != other.degree_)
    throw Error(ErrorKind::InvalidInput, "form degrees differ in addition");
  TernaryForm out = zero(degree_);
  std::map<std::array<int, 3>, ComplexScalar> acc;
  for (const auto& t : terms_) acc[t.exp] += t.c;
  for (const auto& t : other.terms_) acc[t.exp] += t.c;
  for (auto it = acc.rbegin(); it != acc.rend(); ++it)
    if (it->second != ComplexScalar(0.0)) out.terms_.push_back({it->first, it->second});
  return out;
}

TernaryForm TernaryForm::operator*(const TernaryForm& other) const {
  TernaryForm out = zero(degree_ + other.degree_);
  if (is_zero() || other.is_zero()) return out;
  std::map<std::array<int, 3>, ComplexScalar> acc;
  for (const auto& s : terms_)
    for (const auto& t : other.terms_) {
      std::array<int, 3> e{s.exp[0] + t.exp[0], s.exp[1] + t.exp[1], s.exp[2] + t.exp[2]};
      acc[e] += s.c * t.c;
    }
  for (auto it = acc.rbegin(); it != acc.rend(); ++it)
    if (it->second != ComplexScalar(0.0)) out.terms_.push_back({it->first, it->second});
  return out;
}

TernaryForm TernaryForm::scaled(ComplexScalar factor) const {
  TernaryForm out = zero(degree_);
  if (factor == ComplexScalar(0.0)) return out;
  for (const auto& t : terms_) out.terms_.push_back({t.exp, t.c * factor});
  return out;
}

TernaryForm TernaryForm::partial(int axis) const {
  if (axis < 0 || axis > 2) throw Error(ErrorKind::InvalidInput, "partial axis out of range");
  if (degree_ == 0) return zero(0);
  TernaryForm out = zero(degree_ - 1);
  for (const auto& t : terms_) {
    if (t.exp[static_cast<std::size_t>(axis)] == 0) continue;
    auto e = t.exp;
    const double k = e[static_cast<std::size_t>(axis)];
    e[static_cast<std::size_t>(axis)] -= 1;
    out.terms_.push_back({e, t.c * k});
  }
  std::sort(out.terms_.begin(), out.terms_.end(),
            [](const Term& a, const Term& b) { return a.exp > b.exp; });
  return out;
}

TernaryForm TernaryForm::substituted(const Matrix3& m) const {
  // Memoized powers of the three substituted linear forms.
  std::array<std::vector<TernaryForm>, 3> pows;
  for (int v = 0; v < 3; ++v) {
    std::vector<TernaryForm::Term> lin;
    for (int c = 0; c < 3; ++c) {
      std::array<int, 3> e{0, 0, 0};
      e[static_cast<std::size_t>(c)] = 1;
      lin.push_back({e, m[static_cast<std::size_t>(v)][static_cast<std::size_t>(c)]});
    }
    TernaryForm base = zero(1);
    for (const auto& t : lin)
      if (t.c != ComplexScalar(0.0)) base = base.is_zero() ? TernaryForm(1, {t}) : base + TernaryForm(1, {t});
    TernaryForm one(0, {Term{{0, 0, 0}, ComplexScalar(1.0)}});
    pows[static_cast<std::size_t>(v)].push_back(one);
    for (int e = 1; e <= degree_; ++e) {
      const auto& prev = pows[static_cast<std::size_t>(v)].back();
      pows[static_cast<std::size_t>(v)].push_back(prev * base);
    }
  }
  TernaryForm out = zero(degree_);
  for (const auto& t : terms_) {
    TernaryForm mono = pows[0][static_cast<std::size_t>(t.exp[0])] *
                       pows[1][static_cast<std::size_t>(t.exp[1])] *
                       pows[2][static_cast<std::size_t>(t.exp[2])];
    out = out + mono.scaled(t.c);
  }
  return out;
}

double TernaryForm::coeff_norm() const {
  double n = 0.0;
  for (const auto& t : terms_) n = std::max(n, std::abs(t.c));
  return n;
}

ProjectivePoint ProjectivePoint::from(ComplexScalar x, ComplexScalar y, ComplexScalar z) {
  std::array<ComplexScalar, 3> c{x, y, z};
  for (const auto& v : c)
    if (!is_finite(v)) throw Error(ErrorKind::InvalidInput, "non-finite projective coordinate");
  int best = -1;
  double best_abs = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double a = std::abs(c[static_cast<std::size_t>(i)]);
    if (a > best_abs) {
      best_abs = a;
      best = i;
    }
  }
  if (best < 0) throw Error(ErrorKind::InvalidInput, "projective point cannot be (0:0:0)");
  const ComplexScalar pivot = c[static_cast<std::size_t>(best)];
  for (auto& v : c) v /= pivot;
  c[static_cast<std::size_t>(best)] = ComplexScalar(1.0);  // exact after division
  return ProjectivePoint{c};
}

double projective_distance(const ProjectivePoint& a, const ProjectivePoint& b) {
  // sin of the Fubini-Study angle. Lagrange's identity gives
  // |a|^2 |b|^2 - |<a,b>|^2 = sum_{i<j} |a_i b_j - a_j b_i|^2, and the
  // right-hand side avoids the cancellation that makes the 1 - cos^2 form
  // bottom out near sqrt(eps) for nearly identical points.
  double cross = 0.0, na = 0.0, nb = 0.0;
  for (int i = 0; i < 3; ++i) {
    na += std::norm(a.coords[static_cast<std::size_t>(i)]);
    nb += std::norm(b.coords[static_cast<std::size_t>(i)]);
    for (int j = i + 1; j < 3; ++j) {
      const auto& ai = a.coords[static_cast<std::size_t>(i)];
      const auto& aj = a.coords[static_cast<std::size_t>(j)];
      const auto& bi = b.coords[static_cast<std::size_t>(i)];
      const auto& bj = b.coords[static_cast<std::size_t>(j)];
      cross += std::norm(ai * bj - aj * bi);
    }
  }
  return std::min(1.0, std::sqrt(cross / (na * nb)));
}

bool projective_less(const ProjectivePoint& a, const ProjectivePoint& b) {
  for (int i = 0; i < 3; ++i) {
    const auto& x = a.coords[static_cast<std::size_t>(i)];
    const auto& y = b.coords[static_cast<std::size_t>(i)];
    if (x != y) return scalar_less(x, y);
  }
  return false;
}

TernaryForm hessian(const TernaryForm& f) {
  if (f.degree() < 2)
    throw Error(ErrorKind::InvalidInput, "hessian requires a form of degree >= 2");
  std::array<std::array<TernaryForm, 3>, 3> h{{
      {TernaryForm::zero(0), TernaryForm::zero(0), TernaryForm::zero(0)},
      {TernaryForm::zero(0), TernaryForm::zero(0), TernaryForm::zero(0)},
      {TernaryForm::zero(0), TernaryForm::zero(0), TernaryForm::zero(0)},
  }};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) h[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = f.partial(i).partial(j);
  // det via the cofactor expansion of the symmetric 3x3 matrix.
  auto minor_det = [&](int r0, int r1, int c0, int c1) {
    return h[static_cast<std::size_t>(r0)][static_cast<std::size_t>(c0)] * h[static_cast<std::size_t>(r1)][static_cast<std::size_t>(c1)] +
           (h[static_cast<std::size_t>(r0)][static_cast<std::size_t>(c1)] * h[static_cast<std::size_t>(r1)][static_cast<std::size_t>(c0)]).scaled(-1.0);
  };
  TernaryForm det = h[0][0] * minor_det(1, 2, 1, 2) +
                    (h[0][1] * minor_det(1, 2, 0, 2)).scaled(-1.0) +
                    h[0][2] * minor_det(1, 2, 0, 1);
  if (det.is_zero())
    throw Error(ErrorKind::InvalidInput, "hessian vanishes identically (degenerate form)");
  return det;
}

// ---------------------------------------------------------------------------
// Chart / elimination helpers shared by is_smooth and flex_points.
// ---------------------------------------------------------------------------

namespace {

// Polynomial in two affine variables (x, y): by_ydeg[j] is the coefficient of
// y^j as a univariate Polynomial in x. Constructed from a form on the chart
// z = 1 (coordinate 0 -> x, coordinate 1 -> y).
struct Bivariate {
  std::vector<Polynomial> by_ydeg;

  int ydeg() const {
    for (int j = static_cast<int>(by_ydeg.size()) - 1; j >= 0; --j)
      if (!by_ydeg[static_cast<std::size_t>(j)].is_zero()) return j;
    return -1;  // zero polynomial
  }

  ComplexScalar eval(ComplexScalar x, ComplexScalar y) const {
    ComplexScalar v(0.0);
    ComplexScalar yp(1.0);
    for (const auto& c : by_ydeg) {
      v += c(x) * yp;
      yp *= y;
    }
    return v;
  }

  // Coefficients (leading-first) of the fiber polynomial in y at fixed x,
  // using the formal degree `formal_ydeg`.
  std::vector<ComplexScalar> fiber_at(ComplexScalar x, int formal_ydeg) const {
    std::vector<ComplexScalar> out(static_cast<std::size_t>(formal_ydeg) + 1, ComplexScalar(0.0));
    for (int j = 0; j <= formal_ydeg; ++j) {
      const ComplexScalar cj = (j < static_cast<int>(by_ydeg.size()))
                                   ? by_ydeg[static_cast<std::size_t>(j)](x)
                                   : ComplexScalar(0.0);
      out[static_cast<std::size_t>(formal_ydeg - j)] = cj;
    }
    return out;
  }
};

Bivariate dehomogenize_z(const TernaryForm& f) {
  const int d = f.degree();
  // coeff of y^j is a polynomial in x of degree <= d - j; build ascending in x
  // then flip to the leading-first layout Polynomial expects.
  std::vector<std::vector<ComplexScalar>> asc(static_cast<std::size_t>(d) + 1,
                                              std::vector<ComplexScalar>(static_cast<std::size_t>(d) + 1, ComplexScalar(0.0)));
  for (const auto& t : f.terms())
    asc[static_cast<std::size_t>(t.exp[1])][static_cast<std::size_t>(t.exp[0])] += t.c;
  Bivariate out;
  for (int j = 0; j <= d; ++j) {
    std::vector<ComplexScalar> desc(asc[static_cast<std::size_t>(j)].rbegin(), asc[static_cast<std::size_t>(j)].rend());
    out.by_ydeg.emplace_back(std::move(desc));
  }
  return out;
}

ComplexScalar sylvester_det(const std::vector<ComplexScalar>& a_desc,
                            const std::vector<ComplexScalar>& b_desc) {
  const int m = static_cast<int>(a_desc.size()) - 1;
  const int n = static_cast<int>(b_desc.size()) - 1;
  Eigen::MatrixXcd syl = Eigen::MatrixXcd::Zero(m + n, m + n);
  for (int r = 0; r < n; ++r)
    for (int j = 0; j <= m; ++j) syl(r, r + j) = a_desc[static_cast<std::size_t>(j)];
  for (int r = 0; r < m; ++r)
    for (int j = 0; j <= n; ++j) syl(n + r, r + j) = b_desc[static_cast<std::size_t>(j)];
  return Eigen::PartialPivLU<Eigen::MatrixXcd>(syl).determinant();
}

// Res_y(a, b) as a polynomial in x, recovered by sampling the Sylvester
// determinant (with fixed formal y-degrees) on the unit circle and inverting
// the DFT. degree_bound must bound deg_x of the result; total-degree product
// always works.
Polynomial eliminate_y(const Bivariate& a, const Bivariate& b, int degree_bound) {
  const int ma = a.ydeg();
  const int mb = b.ydeg();
  if (ma < 0 || mb < 0) return Polynomial();
  if (ma == 0 && mb == 0) return Polynomial(std::vector<ComplexScalar>{ComplexScalar(1.0)});
  if (ma == 0) return a.by_ydeg[0].pow(mb);
  if (mb == 0) return b.by_ydeg[0].pow(ma);

  const int m_samples = degree_bound + 1;
  std::vector<ComplexScalar> values(static_cast<std::size_t>(m_samples));
  for (int s = 0; s < m_samples; ++s) {
    const double angle = 2.0 * M_PI * s / m_samples;
    const ComplexScalar xs(std::cos(angle), std::sin(angle));
    values[static_cast<std::size_t>(s)] = sylvester_det(a.fiber_at(xs, ma), b.fiber_at(xs, mb));
  }
  std::vector<ComplexScalar> asc(static_cast<std::size_t>(m_samples), ComplexScalar(0.0));
  for (int t = 0; t < m_samples; ++t) {
    ComplexScalar acc(0.0);
    for (int s = 0; s < m_samples; ++s) {
      const double angle = -2.0 * M_PI * s * t / m_samples;
      acc += values[static_cast<std::size_t>(s)] * ComplexScalar(std::cos(angle), std::sin(angle));
    }
    asc[static_cast<std::size_t>(t)] = acc / static_cast<double>(m_samples);
  }
  double top = 0.0;
  for (const auto& c : asc) top = std::max(top, std::abs(c));
  if (top == 0.0) return Polynomial();
  // Snap coefficients that are pure sampling noise to zero so the structural
  // degree comes out right.
  for (auto& c : asc)
    if (std::abs(c) < 1e-12 * top) c = ComplexScalar(0.0);
  return Polynomial(std::vector<ComplexScalar>(asc.rbegin(), asc.rend()));
}

// Random unitary 3x3 matrix (Gram-Schmidt on a seeded complex Gaussian-ish
// draw). Unitary frames keep all the chart algebra at unit scale and make
// the inverse an adjoint.
Matrix3 random_unitary(Rng& rng) {
  while (true) {
    std::array<Eigen::Vector3cd, 3> v;
    for (auto& col : v)
      col = Eigen::Vector3cd(ComplexScalar(rng.uniform(-1, 1), rng.uniform(-1, 1)),
                             ComplexScalar(rng.uniform(-1, 1), rng.uniform(-1, 1)),
                             ComplexScalar(rng.uniform(-1, 1), rng.uniform(-1, 1)));
    bool ok = true;
    for (int i = 0; i < 3 && ok; ++i) {
      for (int j = 0; j < i; ++j) v[static_cast<std::size_t>(i)] -= v[static_cast<std::size_t>(j)].dot(v[static_cast<std::size_t>(i)]) * v[static_cast<std::size_t>(j)];
      const double n = v[static_cast<std::size_t>(i)].norm();
      if (n < 1e-3) {
        ok = false;
        break;
      }
      v[static_cast<std::size_t>(i)] /= n;
    }
    if (!ok) continue;
    Matrix3 m;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) m[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = v[static_cast<std::size_t>(c)](r);
    return m;
  }
}

ProjectivePoint apply_frame(const Matrix3& t, ComplexScalar x, ComplexScalar y, ComplexScalar z) {
  std::array<ComplexScalar, 3> out{};
  const std::array<ComplexScalar, 3> in{x, y, z};
  for (int r = 0; r < 3; ++r) {
    ComplexScalar acc(0.0);
    for (int c = 0; c < 3; ++c) acc += t[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] * in[static_cast<std::size_t>(c)];
    out[static_cast<std::size_t>(r)] = acc;
  }
  return ProjectivePoint::from(out[0], out[1], out[2]);
}

// Roots of a sampled Polynomial; balanced against coefficient magnitude
// spread, which elimination resultants of scaled curves produce routinely.
Configuration poly_roots(const Polynomial& p, const TolerancePolicy& tol) {
  return balanced_roots(p, tol);
}

// Newton iteration for the 2x2 system (f, g) = 0 from a starting point.
bool polish_pair(const Bivariate& f, const Bivariate& fx, const Bivariate& fy,
                 const Bivariate& g, const Bivariate& gx, const Bivariate& gy,
                 ComplexScalar& x, ComplexScalar& y) {
  for (int it = 0; it < 40; ++it) {
    const ComplexScalar fv = f.eval(x, y), gv = g.eval(x, y);
    Eigen::Matrix2cd jac;
    jac << fx.eval(x, y), fy.eval(x, y), gx.eval(x, y), gy.eval(x, y);
    if (std::abs(jac.determinant()) < 1e-14) return it > 0;
    const Eigen::Vector2cd rhs(fv, gv);
    const Eigen::Vector2cd step = jac.partialPivLu().solve(rhs);
    x -= step(0);
    y -= step(1);
    if (step.norm() <= 1e-15 * (1.0 + std::abs(x) + std::abs(y))) return true;
  }
  return true;
}

constexpr std::uint64_t kFrameSeed = 0x5bd1e995u;
constexpr int kMaxFrames = 12;

// Chordal-distance radius within which polished flex candidates are treated
// as one point of higher multiplicity.
constexpr double kFlexMergeDistance = 1e-6;

}  // namespace

bool is_smooth(const TernaryForm& f, const TolerancePolicy& tol) {
  tol.validate();
  const int d = f.degree();
  if (d < 2) throw Error(ErrorKind::InvalidInput, "smoothness requires degree >= 2");

  Rng frame_rng(kFrameSeed);
  int informative_frames = 0;
  for (int attempt = 0; attempt < kMaxFrames; ++attempt) {
    const Matrix3 t = random_unitary(frame_rng);
    const TernaryForm g = f.substituted(t);
    const std::array<TernaryForm, 3> grad{g.partial(0), g.partial(1), g.partial(2)};
    if (grad[0].is_zero() || grad[1].is_zero()) continue;  // only for degenerate forms; a generic frame spreads every variable
    const Bivariate gu = dehomogenize_z(grad[0]);
    const Bivariate gv = dehomogenize_z(grad[1]);
    const Bivariate gw = dehomogenize_z(grad[2]);
    const Bivariate gux = dehomogenize_z(grad[0].partial(0)),
                    guy = dehomogenize_z(grad[0].partial(1));
    const Bivariate gvx = dehomogenize_z(grad[1].partial(0)),
                    gvy = dehomogenize_z(grad[1].partial(1));

    const Polynomial res = eliminate_y(gu, gv, (d - 1) * (d - 1));
    if (res.is_zero()) continue;  // partials share a chart component; retry a frame
    ++informative_frames;
    if (res.degree() == 0) return true;  // no affine intersection, nothing at infinity (generic frame)

    Configuration xs({ComplexScalar(0.0)}, false);
    try {
      xs = poly_roots(res, tol);
    } catch (const Error&) {
      continue;
    }
    const double scale = f.coeff_norm();
    bool singular = false;
    for (const auto& x0 : xs.points()) {
      // Collect fiber candidates from whichever partial is nondegenerate here.
      std::vector<ComplexScalar> ys;
      for (const Bivariate* fib : {&gu, &gv}) {
        const int fd = fib->ydeg();
        if (fd <= 0) continue;
        auto fiber = fib->fiber_at(x0, fd);
        double top = 0.0;
        for (const auto& c : fiber) top = std::max(top, std::abs(c));
        if (top == 0.0 || std::abs(fiber.front()) < 1e-8 * top) continue;
        try {
          const Configuration fy = poly_roots(Polynomial(fiber), tol);
          for (const auto& y : fy.points()) ys.push_back(y);
        } catch (const Error&) {
        }
        break;
      }
      for (ComplexScalar y0 : ys) {
        ComplexScalar x = x0, y = y0;
        polish_pair(gu, gux, guy, gv, gvx, gvy, x, y);
        const double local = scale * std::pow(1.0 + std::abs(x) + std::abs(y), d - 1);
        const double r0 = std::abs(gu.eval(x, y));
        const double r1 = std::abs(gv.eval(x, y));
        const double r2 = std::abs(gw.eval(x, y));
        if (r0 <= 1e-7 * local && r1 <= 1e-7 * local && r2 <= 1e-7 * local) singular = true;
      }
    }
    if (singular) return false;
    return true;
  }
  if (informative_frames > 0)
    throw Error(ErrorKind::IllConditioned, "smoothness test could not resolve partial zeros");
  // Every frame produced an identically vanishing resultant: the two partials
  // share a curve component, which forces a positive-dimensional singular locus.
  return false;
}

std::vector<FlexPoint> flex_points(const TernaryForm& f, const TolerancePolicy& tol) {
  tol.validate();
  const int d = f.degree();
  if (d < 2 || d > 4)
    throw Error(ErrorKind::InvalidInput, "flex computation supports 2 <= degree <= 4");
  if (!is_smooth(f, tol)) throw Error(ErrorKind::InvalidInput, "curve must be smooth");
  if (d == 2) return {};

  const int total = 3 * d * (d - 2);
  const TernaryForm hess = hessian(f);

  Rng frame_rng(kFrameSeed);
  std::string last_failure = "no frame attempted";
  for (int attempt = 0; attempt < kMaxFrames; ++attempt) {
    const Matrix3 t = random_unitary(frame_rng);
    const TernaryForm g = f.substituted(t);
    const TernaryForm h = hess.substituted(t);
    const Bivariate gc = dehomogenize_z(g);
    const Bivariate hc = dehomogenize_z(h);
    if (gc.ydeg() != d || hc.ydeg() != hess.degree()) {
      last_failure = "chart lost degree";
      continue;
    }
    const Polynomial res = eliminate_y(gc, hc, total);
    if (res.degree() != total) {
      last_failure = "resultant degree drop (flex at infinity)";
      continue;
    }

    Configuration xs({ComplexScalar(0.0)}, false);
    try {
      xs = poly_roots(res, tol);
    } catch (const Error&) {
      last_failure = "resultant root finding failed";
      continue;
    }

    const Bivariate gx = dehomogenize_z(g.partial(0)), gy = dehomogenize_z(g.partial(1));
    const Bivariate hx = dehomogenize_z(h.partial(0)), hy = dehomogenize_z(h.partial(1));
    const double gnorm = g.coeff_norm();
    const double hnorm = h.coeff_norm();

    // Polish every resultant root to a solution of g = h = 0. A non-transverse
    // intersection (hyperflex of a quartic) shows up as a multiple root of the
    // resultant whose copies all polish to the same point; multiplicities are
    // recovered below by clustering the polished points.
    struct Candidate {
      ProjectivePoint point;
      double residual;
    };
    std::vector<Candidate> polished;
    bool frame_ok = true;
    for (const auto& x0 : xs.points()) {
      // Fiber of the curve over this x-candidate.
      auto fiber = gc.fiber_at(x0, d);
      double top = 0.0;
      for (const auto& c : fiber) top = std::max(top, std::abs(c));
      if (top == 0.0 || std::abs(fiber.front()) < 1e-8 * top) {
        frame_ok = false;
        last_failure = "degenerate curve fiber";
        break;
      }
      Configuration fy({ComplexScalar(0.0)}, false);
      try {
        fy = poly_roots(Polynomial(fiber), tol);
      } catch (const Error&) {
        frame_ok = false;
        last_failure = "fiber root finding failed";
        break;
      }
      // The Hessian must vanish at exactly one fiber point for a generic
      // frame (the x-projection is injective on flexes).
      std::vector<double> hvals;
      for (const auto& yv : fy.points()) hvals.push_back(std::abs(hc.eval(x0, yv)));
      int best = 0;
      for (int i = 1; i < fy.size(); ++i)
        if (hvals[static_cast<std::size_t>(i)] < hvals[static_cast<std::size_t>(best)]) best = i;
      ComplexScalar x = x0, y = fy.points()[static_cast<std::size_t>(best)];
      const double hscale = hnorm * std::pow(1.0 + std::abs(x) + std::abs(y), hess.degree());
      if (hvals[static_cast<std::size_t>(best)] > 1e-4 * hscale) {
        frame_ok = false;
        last_failure = "no Hessian zero on fiber";
        break;
      }
      bool shared_fiber = false;
      for (int i = 0; i < fy.size(); ++i) {
        if (i == best) continue;
        const ComplexScalar ys = fy.points()[static_cast<std::size_t>(i)];
        const double s = hnorm * std::pow(1.0 + std::abs(x0) + std::abs(ys), hess.degree());
        if (hvals[static_cast<std::size_t>(i)] < 1e-4 * s) shared_fiber = true;
      }
      if (shared_fiber) {
        frame_ok = false;
        last_failure = "two flexes share an x fiber";
        break;
      }
      polish_pair(gc, gx, gy, hc, hx, hy, x, y);
      const double gres = std::abs(gc.eval(x, y));
      const double hres = std::abs(hc.eval(x, y));
      const double gpow = std::pow(1.0 + std::abs(x) + std::abs(y), d);
      const double hpow = std::pow(1.0 + std::abs(x) + std::abs(y), hess.degree());
      if (gres > 1e-6 * gnorm * gpow || hres > 1e-5 * hnorm * hpow) {
        frame_ok = false;
        last_failure = "candidate failed residual check";
        break;
      }
      polished.push_back({apply_frame(t, x, y, ComplexScalar(1.0)),
                          gres / (gnorm * gpow) + hres / (hnorm * hpow)});
    }
    if (!frame_ok) continue;

    // Single-linkage clustering in the chordal metric; the cluster size is
    // the reported multiplicity and the lowest-residual member represents the
    // cluster. Polished copies of one double point sit within ~1e-8 of each
    // other, far inside the merge radius.
    const int n = static_cast<int>(polished.size());
    std::vector<int> comp(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) comp[static_cast<std::size_t>(i)] = i;
    bool changed = true;
    while (changed) {
      changed = false;
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
          if (projective_distance(polished[static_cast<std::size_t>(i)].point,
                                  polished[static_cast<std::size_t>(j)].point) <= kFlexMergeDistance &&
              comp[static_cast<std::size_t>(i)] != comp[static_cast<std::size_t>(j)]) {
            const int from = std::max(comp[static_cast<std::size_t>(i)], comp[static_cast<std::size_t>(j)]);
            const int to = std::min(comp[static_cast<std::size_t>(i)], comp[static_cast<std::size_t>(j)]);
            for (auto& c : comp)
              if (c == from) c = to;
            changed = true;
          }
    }
    std::vector<FlexPoint> found;
    for (int c = 0; c < n; ++c) {
      int size = 0, rep = -1;
      for (int i = 0; i < n; ++i)
        if (comp[static_cast<std::size_t>(i)] == c) {
          ++size;
          if (rep < 0 || polished[static_cast<std::size_t>(i)].residual <
                             polished[static_cast<std::size_t>(rep)].residual)
            rep = i;
        }
      if (size > 0) found.push_back({polished[static_cast<std::size_t>(rep)].point, size});
    }
    // Margin check: distinct flexes must sit well outside the merge radius.
    bool separated = true;
    for (std::size_t i = 0; i < found.size() && separated; ++i)
      for (std::size_t j = i + 1; j < found.size() && separated; ++j)
        if (projective_distance(found[i].point, found[j].point) < 10.0 * kFlexMergeDistance)
          separated = false;
    if (!separated) {
      last_failure = "flex clusters not separated";
      continue;
    }

    int mult_sum = 0;
    for (const auto& fp : found) mult_sum += fp.multiplicity;
    if (mult_sum != total) {
      last_failure = "multiplicities do not sum to 3d(d-2)";
      continue;
    }
    std::sort(found.begin(), found.end(),
              [](const FlexPoint& a, const FlexPoint& b) { return projective_less(a.point, b.point); });
    return found;
  }
  throw Error(ErrorKind::IllConditioned, "flex computation failed: " + last_failure);
}

}  // namespace cml
