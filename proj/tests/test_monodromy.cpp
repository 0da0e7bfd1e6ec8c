#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <doctest.h>

#include "cml/monodromy.hpp"
#include "cml/poly.hpp"

using namespace cml;

namespace {

// Closed loop z^2 - w(t) with w running once around the unit circle,
// piecewise linear through `segments` chords. The chords stay well away from
// w = 0, so every waypoint and every interpolated sample is square-free.
CoefficientPath square_root_loop(int segments, int samples) {
  std::vector<MonicPolynomial> wps;
  for (int s = 0; s <= segments; ++s) {
    const double t = static_cast<double>(s % segments) / segments;
    const ComplexScalar w = std::polar(1.0, 2.0 * std::numbers::pi * t);
    wps.push_back(MonicPolynomial({ComplexScalar(0.0), -w}));
  }
  return CoefficientPath(std::move(wps), samples);
}

}  // namespace

TEST_CASE("permutation algebra: composition, inverse, cycle notation") {
  const Permutation id = Permutation::identity(3);
  CHECK(id.is_identity());
  CHECK(id.cycle_string() == "()");

  const Permutation swap01({1, 0, 2});
  const Permutation swap12({0, 2, 1});
  CHECK_FALSE(swap01.is_identity());
  CHECK(swap01.cycle_string() == "(0 1)");

  // Apply swap01 first, then swap12: 0 -> 1 -> 2, giving the 3-cycle (0 2 1).
  const Permutation comp = swap01.then(swap12);
  CHECK(comp == Permutation({2, 0, 1}));
  CHECK(comp.cycle_string() == "(0 2 1)");
  CHECK(comp.inverse() == Permutation({1, 2, 0}));
  CHECK(comp.then(comp.inverse()).is_identity());

  CHECK_THROWS_AS(Permutation({0, 0, 1}), Error);  // not a bijection
}

TEST_CASE("coefficient path construction validates waypoints") {
  const MonicPolynomial a({0.0, -1.0});
  const MonicPolynomial b({0.0, 4.0, 0.0});
  CHECK_THROWS_AS(CoefficientPath({a, b}, 16), Error);  // mixed degrees

  const MonicPolynomial sq({0.0, 0.0});  // z^2, repeated root
  try {
    CoefficientPath({a, sq}, 16);
    FAIL("expected PathHitsDiscriminant");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::PathHitsDiscriminant);
  }

  const CoefficientPath open({a, MonicPolynomial({0.0, -2.0})}, 16);
  CHECK_FALSE(open.closed());
  const CoefficientPath closed({a, MonicPolynomial({0.0, -2.0}), a}, 16);
  CHECK(closed.closed());
}

TEST_CASE("tracking a constant path returns the start configuration") {
  const MonicPolynomial f({0.0, -1.0});
  const CoefficientPath path({f, f}, 8);
  const Configuration start({1.0, -1.0}, true);
  const Configuration end = track_path(path, start);
  REQUIRE(end.size() == 2);
  CHECK(std::abs(end.points()[0] - ComplexScalar(1.0)) < 1e-12);
  CHECK(std::abs(end.points()[1] - ComplexScalar(-1.0)) < 1e-12);
}

TEST_CASE("tracking z^2 - e^{2 pi i t} swaps the two square roots") {
  const CoefficientPath loop = square_root_loop(16, 32);
  const Configuration start({1.0, -1.0}, true);
  const Configuration end = track_path(loop, start);
  REQUIRE(end.size() == 2);
  // Roots move as +-e^{i pi t}: the tuple (1, -1) continues to (-1, 1).
  CHECK(std::abs(end.points()[0] - ComplexScalar(-1.0)) < 1e-6);
  CHECK(std::abs(end.points()[1] - ComplexScalar(1.0)) < 1e-6);

  const MonodromyResult m = loop_permutation(square_root_loop(16, 32));
  CHECK(m.permutation == Permutation({1, 0}));
  CHECK(m.min_separation_along_path > 1.0);  // roots stay antipodal, distance ~2
}

TEST_CASE("tracking detects a mid-segment discriminant crossing") {
  // Straight segment from z^2 - 1 to z^2 + 1 passes through z^2 at its
  // midpoint even though both endpoints are square-free.
  const CoefficientPath path(
      {MonicPolynomial({0.0, -1.0}), MonicPolynomial({0.0, 1.0})}, 64);
  const Configuration start({1.0, -1.0}, true);
  try {
    track_path(path, start);
    FAIL("expected a collision error");
  } catch (const Error& e) {
    const bool collision = e.kind() == ErrorKind::PathHitsDiscriminant ||
                           e.kind() == ErrorKind::TrackingAmbiguity;
    CHECK(collision);
  }
}

TEST_CASE("track_path rejects a start tuple that is not the first fiber") {
  const CoefficientPath path = square_root_loop(16, 32);
  CHECK_THROWS_AS(track_path(path, Configuration({2.0, -2.0}, true)), Error);
}

TEST_CASE("elementary braid loops induce adjacent transpositions") {
  const Configuration base2({-1.0, 1.0}, false);
  const CoefficientPath swap_loop = elementary_braid_loop(2, 1, base2);
  CHECK(loop_permutation(swap_loop).permutation == Permutation({1, 0}));

  const Configuration base4({0.0, 1.0, 2.0, 3.0}, false);
  for (int i = 1; i <= 3; ++i) {
    const CoefficientPath loop = elementary_braid_loop(4, i, base4);
    std::vector<int> expect{0, 1, 2, 3};
    std::swap(expect[static_cast<std::size_t>(i - 1)], expect[static_cast<std::size_t>(i)]);
    CHECK(loop_permutation(loop).permutation == Permutation(expect));
  }
}

TEST_CASE("a braid generator squared is the full twist, i.e. trivial") {
  const Configuration base({0.0, 1.0, 2.0, 3.0}, false);
  const CoefficientPath sigma = elementary_braid_loop(4, 2, base);
  const MonodromyResult m = loop_permutation(sigma.concatenated(sigma));
  CHECK(m.permutation.is_identity());
}

TEST_CASE("loop reversal inverts the permutation") {
  const Configuration base({0.0, 1.0, 2.0}, false);
  const CoefficientPath s1 = elementary_braid_loop(3, 1, base);
  const CoefficientPath s2 = elementary_braid_loop(3, 2, base);
  const CoefficientPath cycle = s1.concatenated(s2);  // 3-cycle, not self-inverse

  const Permutation forward = loop_permutation(cycle).permutation;
  const Permutation backward = loop_permutation(cycle.reversed()).permutation;
  CHECK_FALSE(forward.is_identity());
  CHECK(backward == forward.inverse());
  CHECK_FALSE(backward == forward);
}

TEST_CASE("concatenation composes permutations") {
  const Configuration base({0.0, 1.0, 2.0}, false);
  const CoefficientPath s1 = elementary_braid_loop(3, 1, base);
  const CoefficientPath s2 = elementary_braid_loop(3, 2, base);
  const Permutation p1 = loop_permutation(s1).permutation;
  const Permutation p2 = loop_permutation(s2).permutation;
  CHECK(loop_permutation(s1.concatenated(s2)).permutation == p1.then(p2));
  CHECK(loop_permutation(s2.concatenated(s1)).permutation == p2.then(p1));
  // s1 and s2 do not commute, so the two orders disagree.
  CHECK_FALSE(p1.then(p2) == p2.then(p1));
}

TEST_CASE("doubling the sample rate never changes an accepted permutation") {
  const Configuration base({0.0, 1.0, 2.0, 3.0}, false);
  for (int i = 1; i <= 3; ++i) {
    const Permutation coarse =
        loop_permutation(elementary_braid_loop(4, i, base, 32)).permutation;
    const Permutation fine =
        loop_permutation(elementary_braid_loop(4, i, base, 64)).permutation;
    CHECK(coarse == fine);
  }
}

TEST_CASE("the resolvent pushes braid generators onto the symmetric group on three letters") {
  const Certificate cert = certify_exceptional_surjection();
  CHECK(cert.passed());

  // The certificate must pin all three clauses: generation, the tau1 = tau3
  // coincidence killing the Klein four-group, and trivial squares.
  bool saw_generation = false, saw_agreement = false, saw_klein = false, saw_squares = false;
  for (const auto& c : cert.checks) {
    if (c.name == "images_generate_s3") saw_generation = true;
    if (c.name == "tau1_equals_tau3") saw_agreement = true;
    if (c.name.find("klein") != std::string::npos) saw_klein = true;
    if (c.name.find("squared") != std::string::npos) saw_squares = true;
  }
  CHECK(saw_generation);
  CHECK(saw_agreement);
  CHECK(saw_klein);
  CHECK(saw_squares);
}
