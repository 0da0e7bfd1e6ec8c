#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include <doctest.h>

#include "cml/poly.hpp"
#include "cml/poly_maps.hpp"
#include "cml/rng.hpp"

using namespace cml;

namespace {

const ComplexScalar kI(0.0, 1.0);

double match_error(std::vector<ComplexScalar> want, std::vector<ComplexScalar> got) {
  if (want.size() != got.size()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  std::vector<bool> used(got.size(), false);
  for (const auto& w : want) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t bi = 0;
    for (std::size_t i = 0; i < got.size(); ++i) {
      if (used[i]) continue;
      const double d = std::abs(w - got[i]);
      if (d < best) {
        best = d;
        bi = i;
      }
    }
    used[bi] = true;
    worst = std::max(worst, best);
  }
  return worst;
}

MonicPolynomial random_square_free_quartic(Rng& rng) {
  while (true) {
    std::vector<ComplexScalar> cs;
    for (int i = 0; i < 4; ++i) cs.push_back(rng.unit_disk());
    const MonicPolynomial f(cs);
    if (is_square_free(f).square_free && roots(f).separation() > 1e-3) return f;
  }
}

}  // namespace

TEST_CASE("resolve_quartic sends z^4 - 1 to z^3 + 4z") {
  const MonicPolynomial f({0.0, 0.0, 0.0, -1.0});
  const ResolventResult r = resolve_quartic(f);

  CHECK(r.output.degree() == 3);
  CHECK(std::abs(r.output.coeffs()[0]) < 1e-10);
  CHECK(std::abs(r.output.coeffs()[1] - ComplexScalar(4.0)) < 1e-10);
  CHECK(std::abs(r.output.coeffs()[2]) < 1e-10);

  CHECK(match_error({0.0, 2.0 * kI, -2.0 * kI}, r.b_values.points()) < 1e-10);
  CHECK(std::abs(r.input_discriminant - ComplexScalar(-256.0)) < 1e-8);
}

TEST_CASE("resolve_quartic on roots {0,1,2,3} yields roots {0,1,4}") {
  const MonicPolynomial f = from_roots(Configuration({0.0, 1.0, 2.0, 3.0}, false));
  const ResolventResult r = resolve_quartic(f);
  CHECK(match_error({0.0, 1.0, 4.0}, r.b_values.points()) < 1e-9);
  // z^3 - 5z^2 + 4z
  CHECK(std::abs(r.output.coeffs()[0] - ComplexScalar(-5.0)) < 1e-9);
  CHECK(std::abs(r.output.coeffs()[1] - ComplexScalar(4.0)) < 1e-9);
  CHECK(std::abs(r.output.coeffs()[2]) < 1e-9);
}

TEST_CASE("resolve_quartic matches the coefficient-level resolvent cubic") {
  // Independent oracle: the b-values are translation invariant, and for a
  // depressed quartic z^4 + pz^2 + qz + r they are the roots of
  // z^3 + 2p z^2 + (p^2 - 4r) z - q^2. Depress a general quartic by the
  // shift z -> z - a/4 and compare coefficients.
  Rng rng(314159);
  for (int trial = 0; trial < 300; ++trial) {
    const MonicPolynomial f = random_square_free_quartic(rng);
    const ComplexScalar a = f.coeffs()[0], b = f.coeffs()[1], c = f.coeffs()[2],
                        d = f.coeffs()[3];
    const ComplexScalar p = b - 3.0 * a * a / 8.0;
    const ComplexScalar q = c - a * b / 2.0 + a * a * a / 8.0;
    const ComplexScalar r =
        d - a * c / 4.0 + a * a * b / 16.0 - 3.0 * a * a * a * a / 256.0;

    const MonicPolynomial got = resolve_quartic(f).output;
    const ComplexScalar want1 = 2.0 * p;
    const ComplexScalar want2 = p * p - 4.0 * r;
    const ComplexScalar want3 = -q * q;
    const double scale = std::max({1.0, std::abs(want1), std::abs(want2), std::abs(want3)});
    CHECK(std::abs(got.coeffs()[0] - want1) <= 1e-8 * scale);
    CHECK(std::abs(got.coeffs()[1] - want2) <= 1e-8 * scale);
    CHECK(std::abs(got.coeffs()[2] - want3) <= 1e-8 * scale);
  }
}

TEST_CASE("resolvent b-set is invariant under root relabeling") {
  Rng rng(271828);
  for (int trial = 0; trial < 100; ++trial) {
    const MonicPolynomial f = random_square_free_quartic(rng);
    auto a = roots(f).points();
    auto bset = [](const std::vector<ComplexScalar>& x) {
      const ComplexScalar b1 = (x[0] - x[1] - x[2] + x[3]) / 2.0;
      const ComplexScalar b2 = (x[0] - x[1] + x[2] - x[3]) / 2.0;
      const ComplexScalar b3 = (x[0] + x[1] - x[2] - x[3]) / 2.0;
      return std::vector<ComplexScalar>{b1 * b1, b2 * b2, b3 * b3};
    };
    const auto base = bset(a);
    double scale = 1.0;
    for (const auto& z : base) scale = std::max(scale, std::abs(z));
    std::reverse(a.begin(), a.end());
    CHECK(match_error(base, bset(a)) < 1e-10 * scale);
  }
}

TEST_CASE("resolvent distinctness certificate: b1 - b2 factors exactly") {
  // b1 - b2 = (a4 - a3)(a1 - a2), so distinct quartic roots force distinct
  // b-values; verified numerically on seeded samples.
  Rng rng(161803);
  for (int trial = 0; trial < 200; ++trial) {
    const MonicPolynomial f = random_square_free_quartic(rng);
    const auto a = roots(f).points();
    const ComplexScalar b1 = std::pow((a[0] - a[1] - a[2] + a[3]) / 2.0, 2);
    const ComplexScalar b2 = std::pow((a[0] - a[1] + a[2] - a[3]) / 2.0, 2);
    const ComplexScalar want = (a[3] - a[2]) * (a[0] - a[1]);
    CHECK(std::abs((b1 - b2) - want) <= 1e-9 * std::max(1.0, std::abs(want)));

    const ResolventResult r = resolve_quartic(f);
    CHECK(r.b_values.separation() > 0.0);
    CHECK(is_square_free(r.output).square_free);
  }
}

TEST_CASE("resolve_quartic rejects repeated roots") {
  // (z^2 - 1)^2 = z^4 - 2z^2 + 1
  const MonicPolynomial f({0.0, -2.0, 0.0, 1.0});
  CHECK_THROWS_AS(resolve_quartic(f), Error);
  try {
    resolve_quartic(f);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotSquareFree);
  }
}

TEST_CASE("resolvent_d with d = 0 is exactly the plain resolvent") {
  Rng rng(55);
  for (int trial = 0; trial < 20; ++trial) {
    const MonicPolynomial f = random_square_free_quartic(rng);
    CHECK(resolvent_d(f, 0) == resolve_quartic(f).output);
  }
}

TEST_CASE("resolvent_d twists z^4 - 1 into z^3 + 262144 z") {
  // Discriminant of z^4 - 1 is -256; scaling roots {0, +-2i} by -256 gives
  // {0, -+512i}, whose cubic is z^3 + 262144 z.
  const MonicPolynomial f({0.0, 0.0, 0.0, -1.0});
  const MonicPolynomial t = resolvent_d(f, 1);
  CHECK(std::abs(t.coeffs()[0]) < 1e-6);
  CHECK(std::abs(t.coeffs()[1] - ComplexScalar(262144.0)) < 1e-3);
  CHECK(std::abs(t.coeffs()[2]) < 1e-6);
}

TEST_CASE("resolvent_d scales the b-configuration by powers of the discriminant") {
  Rng rng(808);
  for (int trial = 0; trial < 50; ++trial) {
    const MonicPolynomial f = random_square_free_quartic(rng);
    const ResolventResult base = resolve_quartic(f);
    for (int d = 0; d <= 2; ++d) {
      ComplexScalar factor(1.0);
      for (int i = 0; i < d; ++i) factor *= base.input_discriminant;
      std::vector<ComplexScalar> want;
      double scale = 1.0;
      for (const auto& b : base.b_values.points()) {
        want.push_back(factor * b);
        scale = std::max(scale, std::abs(factor * b));
      }
      const auto got = balanced_roots(Polynomial(resolvent_d(f, d))).points();
      CHECK(match_error(want, got) <= 1e-9 * scale);
    }
  }
}

TEST_CASE("phi_disjoin appends a strictly dominating real point") {
  const Configuration a = phi_disjoin(Configuration({ComplexScalar(0.0)}, false));
  CHECK(match_error({0.0, 1.0}, a.points()) < 1e-15);

  const Configuration b = phi_disjoin(Configuration({1.0, -1.0}, false));
  CHECK(match_error({1.0, -1.0, 3.0}, b.points()) < 1e-15);

  const Configuration c = phi_disjoin(Configuration({2.0 * kI}, false));
  CHECK(match_error({2.0 * kI, ComplexScalar(3.0)}, c.points()) < 1e-15);
}

TEST_CASE("phi_disjoin preserves distinctness on seeded inputs") {
  Rng rng(10101);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = rng.uniform_int(1, 10);
    std::vector<ComplexScalar> pts;
    while (static_cast<int>(pts.size()) < n) {
      const ComplexScalar z = rng.unit_disk();
      bool ok = true;
      for (const auto& p : pts)
        if (std::abs(p - z) < 1e-3) ok = false;
      if (ok) pts.push_back(z);
    }
    const Configuration out = phi_disjoin(Configuration(pts, false));
    CHECK(out.size() == n + 1);
    CHECK(out.separation() > 0.0);
    double maxmod = 0.0;
    for (const auto& z : pts) maxmod = std::max(maxmod, std::abs(z));
    CHECK(out.points().back().real() > maxmod);
    CHECK(out.points().back().imag() == 0.0);
  }
}

TEST_CASE("psi_torsion for k = 2 reproduces the branch values") {
  const Configuration lam({-1.0, 0.0, 1.0}, false);
  TorsionMapSpec spec;
  spec.k = 2;
  const Configuration out = psi_torsion(lam, spec);
  CHECK(out.size() == 3);
  CHECK(match_error(lam.points(), out.points()) < 1e-10);
}

TEST_CASE("psi_torsion has k^2 - 1 distinct images for generic tau") {
  const Configuration lam({-1.0, 0.0, 1.0}, false);
  for (std::int64_t k = 3; k <= 5; ++k) {
    TorsionMapSpec spec;
    spec.k = k;
    spec.projection_tau = ComplexScalar(0.73, 0.41);
    const Configuration out = psi_torsion(lam, spec);
    CHECK(out.size() == static_cast<int>(k * k - 1));
    CHECK(out.separation() > 0.0);
  }
}

TEST_CASE("psi_torsion flags a collision-inducing tau") {
  // On the symmetric branch triple, real tau identifies conjugate 4-torsion
  // points; the projection must refuse instead of silently merging.
  const Configuration lam({-1.0, 0.0, 1.0}, false);
  TorsionMapSpec spec;
  spec.k = 4;
  spec.projection_tau = ComplexScalar(1.0);
  try {
    psi_torsion(lam, spec);
    FAIL("expected ProjectionCollision");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ProjectionCollision);
  }
}

TEST_CASE("psi_torsion rejects degenerate branch triples") {
  TorsionMapSpec spec;
  spec.k = 2;
  try {
    psi_torsion(Configuration({0.0, 0.0, 1.0}, false), spec);
    FAIL("expected NotDistinct");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotDistinct);
  }
}
