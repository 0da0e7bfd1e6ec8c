#include "cml/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <sstream>
#include <thread>

#include "cml/json_io.hpp"
#include "cml/monodromy.hpp"
#include "cml/plane_curves.hpp"
#include "cml/poly_maps.hpp"
#include "cml/rng.hpp"

namespace cml {

namespace {

struct TrialResult {
  bool passed = true;
  double measured = 0.0;  // property-specific figure of merit (usually worst error)
  std::string detail;
};

struct Property {
  const char* name;
  bool expensive;
  std::function<TrialResult(Rng&, const TolerancePolicy&)> run;
};

// --- shared generators ------------------------------------------------------

std::vector<ComplexScalar> random_points(Rng& rng, int n, double min_rel_sep) {
  while (true) {
    std::vector<ComplexScalar> pts;
    pts.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) pts.push_back(2.0 * rng.unit_disk());
    double diam = 1.0, sep = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t j = i + 1; j < pts.size(); ++j) {
        const double d = std::abs(pts[i] - pts[j]);
        diam = std::max(diam, d);
        sep = std::min(sep, d);
      }
    if (n < 2 || sep > min_rel_sep * diam) return pts;
  }
}

MonicPolynomial random_monic(Rng& rng, int n) {
  std::vector<ComplexScalar> a;
  a.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) a.push_back(rng.unit_disk());
  return MonicPolynomial(std::move(a));
}

MonicPolynomial random_square_free_quartic(Rng& rng, const TolerancePolicy& tol) {
  while (true) {
    MonicPolynomial f = random_monic(rng, 4);
    if (is_square_free(f, tol).square_free && roots(f, tol).separation() > 1e-3) return f;
  }
}

Configuration random_lambda(Rng& rng) {
  return Configuration(random_points(rng, 3, 1e-2), false);
}

double rel_err(ComplexScalar got, ComplexScalar want) {
  return std::abs(got - want) / std::max(1.0, std::abs(want));
}

// Worst pointwise distance after canonically sorting both sides; the cheap
// way to compare unordered configurations that are supposed to agree.
double sorted_match_error(const std::vector<ComplexScalar>& a,
                          const std::vector<ComplexScalar>& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  // Greedy nearest matching is robust to canonical-order flips between nearly
  // equal values: match each a-point to its closest unused b-point.
  std::vector<bool> used(b.size(), false);
  double worst = 0.0;
  for (const auto& x : a) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t arg = 0;
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (used[j]) continue;
      const double d = std::abs(x - b[j]);
      if (d < best) {
        best = d;
        arg = j;
      }
    }
    used[arg] = true;
    worst = std::max(worst, best);
  }
  return worst;
}

TrialResult fail(double measured, std::string detail) { return {false, measured, std::move(detail)}; }

// --- properties -------------------------------------------------------------

TrialResult prop_roots_round_trip(Rng& rng, const TolerancePolicy& tol) {
  const int n = rng.uniform_int(1, 12);
  const Configuration c(random_points(rng, n, 1e-3), false);
  const Configuration back = roots(from_roots(c), tol);
  double scale = 1.0;
  for (const auto& z : c.points()) scale = std::max(scale, std::abs(z));
  const double err = sorted_match_error(c.points(), back.points()) / scale;
  if (err > 1e-9) return fail(err, "root round trip drifted");
  return {true, err, ""};
}

TrialResult prop_discriminant_oracle(Rng& rng, const TolerancePolicy& tol) {
  const int n = rng.uniform_int(2, 8);
  const MonicPolynomial p = random_monic(rng, n);
  const Configuration r = roots(p, tol);
  if (r.separation() < 1e-4) return {true, 0.0, ""};  // skip near-discriminant draws
  ComplexScalar prod(1.0);
  const auto& pts = r.points();
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const ComplexScalar d = pts[i] - pts[j];
      prod *= d * d;
    }
  const double err = rel_err(discriminant(p), prod);
  if (err > 1e-8) return fail(err, "discriminant disagrees with the root-product oracle");
  return {true, err, ""};
}

TrialResult prop_viete_permutation_invariance(Rng& rng, const TolerancePolicy&) {
  const int n = rng.uniform_int(2, 10);
  std::vector<ComplexScalar> pts = random_points(rng, n, 1e-6);
  const MonicPolynomial base = from_roots(Configuration(pts, false));
  for (std::size_t i = pts.size(); i > 1; --i)
    std::swap(pts[i - 1], pts[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(i) - 1))]);
  const MonicPolynomial shuffled = from_roots(Configuration(pts, false));
  if (!(base == shuffled)) return fail(1.0, "coefficients changed under input permutation");
  return {true, 0.0, ""};
}

TrialResult prop_delta2_closed_form(Rng& rng, const TolerancePolicy&) {
  const ComplexScalar b = 2.0 * rng.unit_disk(), c = 2.0 * rng.unit_disk();
  const ComplexScalar want = b * b - 4.0 * c;
  const double err = rel_err(discriminant(MonicPolynomial({b, c})), want);
  if (err > 1e-12) return fail(err, "quadratic discriminant formula violated");
  return {true, err, ""};
}

TrialResult prop_delta3_closed_form(Rng& rng, const TolerancePolicy&) {
  const ComplexScalar b = rng.unit_disk(), c = rng.unit_disk(), d = rng.unit_disk();
  const ComplexScalar want = b * b * c * c - 4.0 * c * c * c - 4.0 * b * b * b * d -
                             27.0 * d * d + 18.0 * b * c * d;
  const double err = rel_err(discriminant(MonicPolynomial({b, c, d})), want);
  if (err > 1e-10) return fail(err, "cubic discriminant formula violated");
  return {true, err, ""};
}

TrialResult prop_resolvent_miracle(Rng& rng, const TolerancePolicy& tol) {
  const MonicPolynomial f = random_square_free_quartic(rng, tol);
  const ResolventResult res = resolve_quartic(f, tol);
  if (!is_square_free(res.output, tol).square_free)
    return fail(0.0, "resolvent output not square-free");
  const auto a = roots(f, tol).points();
  const auto& b = res.b_values.points();
  const ComplexScalar lhs = b[0] - b[1];
  const ComplexScalar rhs = (a[3] - a[2]) * (a[0] - a[1]);
  const double err = rel_err(lhs, rhs);
  if (err > 1e-9) return fail(err, "difference identity b1-b2 = (a4-a3)(a1-a2) violated");
  return {true, err, ""};
}

TrialResult prop_resolvent_s4_invariance(Rng& rng, const TolerancePolicy& tol) {
  const MonicPolynomial f = random_square_free_quartic(rng, tol);
  std::vector<ComplexScalar> a = roots(f, tol).points();
  auto bset = [](const std::vector<ComplexScalar>& r) {
    const ComplexScalar b1 = (r[0] - r[1] - r[2] + r[3]) / 2.0;
    const ComplexScalar b2 = (r[0] - r[1] + r[2] - r[3]) / 2.0;
    const ComplexScalar b3 = (r[0] + r[1] - r[2] - r[3]) / 2.0;
    return std::vector<ComplexScalar>{b1 * b1, b2 * b2, b3 * b3};
  };
  const auto base = bset(a);
  for (std::size_t i = a.size(); i > 1; --i)
    std::swap(a[i - 1], a[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(i) - 1))]);
  const auto shuffled = bset(a);
  double scale = 1.0;
  for (const auto& z : base) scale = std::max(scale, std::abs(z));
  const double err = sorted_match_error(base, shuffled) / scale;
  if (err > 1e-10) return fail(err, "b-set changed under root relabeling");
  return {true, err, ""};
}

TrialResult prop_resolvent_d_scaling(Rng& rng, const TolerancePolicy& tol) {
  const MonicPolynomial f = random_square_free_quartic(rng, tol);
  const int d = rng.uniform_int(0, 2);
  const ResolventResult base = resolve_quartic(f, tol);
  ComplexScalar factor(1.0);
  for (int i = 0; i < d; ++i) factor *= base.input_discriminant;
  std::vector<ComplexScalar> want;
  for (const auto& b : base.b_values.points()) want.push_back(factor * b);
  // The twist multiplies roots by powers of the discriminant, so coefficients
  // can span many orders of magnitude; extract through the balanced solver.
  const auto got = balanced_roots(Polynomial(resolvent_d(f, d, tol)), tol).points();
  double scale = 1.0;
  for (const auto& z : want) scale = std::max(scale, std::abs(z));
  const double err = sorted_match_error(want, got) / scale;
  if (err > 1e-9) return fail(err, "twisted resolvent roots are not the scaled b-values");
  return {true, err, ""};
}

TrialResult prop_psi_cardinality(Rng& rng, const TolerancePolicy& tol) {
  const std::int64_t k = rng.uniform_int(2, 5);
  const Configuration lam = random_lambda(rng);
  TorsionMapSpec spec;
  spec.k = k;
  spec.projection_tau = ComplexScalar(0.73, 0.41);  // generic fixed direction
  Configuration out = psi_torsion(lam, spec, tol);
  if (out.size() != static_cast<int>(k * k - 1))
    return fail(static_cast<double>(out.size()), "torsion image has wrong cardinality");
  if (!(out.separation() > 0.0)) return fail(0.0, "torsion image has coincident points");
  if (k == 2) {
    const double err = sorted_match_error(out.points(), lam.points());
    if (err > 1e-10) return fail(err, "2-torsion image is not the branch triple");
    return {true, err, ""};
  }
  return {true, 0.0, ""};
}

TrialResult prop_phi_separation(Rng& rng, const TolerancePolicy&) {
  const int n = rng.uniform_int(1, 10);
  const Configuration c(random_points(rng, n, 1e-3), false);
  const Configuration out = phi_disjoin(c);
  if (out.size() != n + 1) return fail(static_cast<double>(out.size()), "wrong output size");
  if (!(out.separation() > 0.0)) return fail(0.0, "output separation not positive");
  double maxmod = 0.0;
  for (const auto& z : c.points()) maxmod = std::max(maxmod, std::abs(z));
  const ComplexScalar added = out.points().back();
  if (!(added.real() > maxmod)) return fail(added.real(), "appended point does not dominate");
  return {true, out.separation(), ""};
}

TrialResult prop_braid_transposition(Rng& rng, const TolerancePolicy& tol) {
  const int n = rng.uniform_int(2, 6);
  const int i = rng.uniform_int(1, n - 1);
  std::vector<ComplexScalar> base;
  for (int j = 0; j < n; ++j) base.emplace_back(static_cast<double>(j), 0.0);
  const CoefficientPath loop = elementary_braid_loop(n, i, Configuration(base, false), 32, tol);
  const MonodromyResult res = loop_permutation(loop, tol);
  std::vector<int> expect(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) expect[static_cast<std::size_t>(j)] = j;
  std::swap(expect[static_cast<std::size_t>(i - 1)], expect[static_cast<std::size_t>(i)]);
  if (!(res.permutation == Permutation(expect)))
    return fail(0.0, "braid generator did not induce the adjacent transposition " +
                         res.permutation.cycle_string());
  return {true, res.min_separation_along_path, ""};
}

TrialResult prop_loop_inverse_law(Rng& rng, const TolerancePolicy& tol) {
  const int n = rng.uniform_int(2, 5);
  const int i = rng.uniform_int(1, n - 1);
  std::vector<ComplexScalar> base;
  for (int j = 0; j < n; ++j) base.emplace_back(static_cast<double>(j), 0.0);
  const CoefficientPath loop = elementary_braid_loop(n, i, Configuration(base, false), 32, tol);
  const Permutation forward = loop_permutation(loop, tol).permutation;
  const Permutation backward = loop_permutation(loop.reversed(), tol).permutation;
  if (!(backward == forward.inverse())) return fail(0.0, "reverse loop is not the inverse");
  return {true, 0.0, ""};
}

TrialResult prop_loop_concat_law(Rng& rng, const TolerancePolicy& tol) {
  const int n = rng.uniform_int(3, 5);
  const int i = rng.uniform_int(1, n - 1);
  const int j = rng.uniform_int(1, n - 1);
  std::vector<ComplexScalar> base;
  for (int s = 0; s < n; ++s) base.emplace_back(static_cast<double>(s), 0.0);
  const Configuration bc(base, false);
  const CoefficientPath a = elementary_braid_loop(n, i, bc, 32, tol);
  const CoefficientPath b = elementary_braid_loop(n, j, bc, 32, tol);
  const Permutation pa = loop_permutation(a, tol).permutation;
  const Permutation pb = loop_permutation(b, tol).permutation;
  const Permutation pc = loop_permutation(a.concatenated(b), tol).permutation;
  if (!(pc == pa.then(pb))) return fail(0.0, "concatenation law violated");
  return {true, 0.0, ""};
}

TrialResult prop_sampling_invariance(Rng& rng, const TolerancePolicy& tol) {
  const int n = rng.uniform_int(2, 5);
  const int i = rng.uniform_int(1, n - 1);
  std::vector<ComplexScalar> base;
  for (int j = 0; j < n; ++j) base.emplace_back(static_cast<double>(j), 0.0);
  const Configuration bc(base, false);
  const Permutation coarse =
      loop_permutation(elementary_braid_loop(n, i, bc, 16, tol), tol).permutation;
  const Permutation fine =
      loop_permutation(elementary_braid_loop(n, i, bc, 32, tol), tol).permutation;
  if (!(coarse == fine)) return fail(0.0, "permutation changed when sampling was doubled");
  return {true, 0.0, ""};
}

TernaryForm random_quartic_form(Rng& rng) {
  std::vector<TernaryForm::Term> terms;
  for (int i = 0; i <= 4; ++i)
    for (int j = 0; i + j <= 4; ++j)
      terms.push_back({{i, j, 4 - i - j}, rng.unit_disk()});
  return TernaryForm(4, std::move(terms));
}

TrialResult prop_flex_count(Rng& rng, const TolerancePolicy& tol) {
  for (int attempt = 0; attempt < 8; ++attempt) {
    const TernaryForm f = random_quartic_form(rng);
    try {
      if (!is_smooth(f, tol)) continue;
      const auto flexes = flex_points(f, tol);
      int sum = 0;
      for (const auto& fp : flexes) sum += fp.multiplicity;
      if (sum != 24) return fail(static_cast<double>(sum), "flex multiplicities do not sum to 24");
      return {true, static_cast<double>(flexes.size()), ""};
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::IllConditioned) continue;  // degenerate draw, resample
      throw;
    }
  }
  return fail(0.0, "no smooth quartic draw in eight attempts");
}

CurvePoint random_curve_point(Rng& rng, const WeierstrassCurve& curve) {
  const ComplexScalar x = 2.0 * rng.unit_disk();
  return CurvePoint::affine(x, std::sqrt(curve.rhs(x)));
}

TrialResult prop_group_axioms(Rng& rng, const TolerancePolicy& tol) {
  const WeierstrassCurve curve(random_lambda(rng), tol);
  const CurvePoint p = random_curve_point(rng, curve);
  const CurvePoint q = random_curve_point(rng, curve);
  const CurvePoint r = random_curve_point(rng, curve);
  const CurvePoint lhs = ec_add(curve, ec_add(curve, p, q), r);
  const CurvePoint rhs = ec_add(curve, p, ec_add(curve, q, r));
  if (lhs.inf != rhs.inf) return fail(1.0, "associativity produced mismatched origin flags");
  double assoc = 0.0;
  if (!lhs.inf) {
    const double scale = 1.0 + std::abs(lhs.x) + std::abs(lhs.y);
    assoc = (std::abs(lhs.x - rhs.x) + std::abs(lhs.y - rhs.y)) / scale;
    if (assoc > 1e-7) return fail(assoc, "associativity residual too large");
  }
  const CurvePoint ident = ec_add(curve, p, CurvePoint::infinity());
  if (ident.inf || std::abs(ident.x - p.x) + std::abs(ident.y - p.y) > 1e-10)
    return fail(1.0, "identity law violated");
  if (!ec_add(curve, p, ec_neg(p)).inf) return fail(1.0, "inverse law violated");
  return {true, assoc, ""};
}

TrialResult prop_torsion_cardinality(Rng& rng, const TolerancePolicy& tol) {
  const std::int64_t k = rng.uniform_int(2, 5);
  const WeierstrassCurve curve(random_lambda(rng), tol);
  const auto pts = torsion_points(curve, k, tol);  // throws CardinalityMismatch on failure
  if (static_cast<std::int64_t>(pts.size()) != k * k - 1)
    return fail(static_cast<double>(pts.size()), "torsion cardinality off");
  return {true, static_cast<double>(pts.size()), ""};
}

TernaryForm fermat_cubic() {
  return TernaryForm(3, {{{3, 0, 0}, ComplexScalar(1.0)},
                         {{0, 3, 0}, ComplexScalar(1.0)},
                         {{0, 0, 3}, ComplexScalar(1.0)}});
}

TrialResult prop_stratification_partition(Rng& rng, const TolerancePolicy& tol) {
  const std::int64_t m = rng.uniform_int(1, 4);
  const TernaryForm f = fermat_cubic();
  const auto flexes = flex_points(f, tol);
  const ProjectivePoint flex = flexes.front().point;
  const auto all = cubic_torsion(f, m, flex, tol);

  std::vector<ProjectivePoint> stitched;
  std::int64_t size_sum = 0;
  for (std::int64_t d = 1; d <= m; ++d) {
    if (m % d != 0) continue;
    const auto stratum = torsion_stratum(f, d, flex, tol);
    if (static_cast<std::int64_t>(stratum.size()) != 9 * jordan_totient(d))
      return fail(static_cast<double>(stratum.size()), "stratum has wrong size");
    size_sum += static_cast<std::int64_t>(stratum.size());
    stitched.insert(stitched.end(), stratum.begin(), stratum.end());
  }
  if (size_sum != 9 * m * m)
    return fail(static_cast<double>(size_sum), "strata sizes do not sum to 9m^2");

  // The union of the strata must be the full 3m-torsion as a point set.
  double worst = 0.0;
  for (const auto& p : all) {
    double best = 1.0;
    for (const auto& q : stitched) best = std::min(best, projective_distance(p, q));
    worst = std::max(worst, best);
  }
  if (worst > 1e-7) return fail(worst, "strata union misses a torsion point");
  return {true, worst, ""};
}

TrialResult prop_flex_origin_independence(Rng& rng, const TolerancePolicy& tol) {
  const TernaryForm f = fermat_cubic();
  const auto flexes = flex_points(f, tol);
  const int a = rng.uniform_int(0, static_cast<int>(flexes.size()) - 1);
  const int b = rng.uniform_int(0, static_cast<int>(flexes.size()) - 1);
  const auto ta = cubic_torsion(f, 2, flexes[static_cast<std::size_t>(a)].point, tol);
  const auto tb = cubic_torsion(f, 2, flexes[static_cast<std::size_t>(b)].point, tol);
  double hausdorff = 0.0;
  for (const auto& p : ta) {
    double best = 1.0;
    for (const auto& q : tb) best = std::min(best, projective_distance(p, q));
    hausdorff = std::max(hausdorff, best);
  }
  if (hausdorff > 1e-7) return fail(hausdorff, "torsion sets differ across flex choices");
  return {true, hausdorff, ""};
}

TrialResult prop_admissible_witnesses(Rng& rng, const TolerancePolicy&) {
  const std::int64_t bound = rng.uniform_int(9, 3000);
  const auto sizes = admissible_sizes(bound);
  std::int64_t prev = 0;
  for (const auto& item : sizes) {
    if (item.n <= prev) return fail(static_cast<double>(item.n), "sizes not strictly sorted");
    if (item.n > bound) return fail(static_cast<double>(item.n), "size exceeds bound");
    prev = item.n;
    std::int64_t sum = 0;
    for (std::size_t i = 0; i < item.index_set.size(); ++i) {
      if (i > 0 && item.index_set[i] == item.index_set[i - 1])
        return fail(static_cast<double>(item.n), "witness repeats an index");
      sum += jordan_totient(item.index_set[i]);
    }
    if (9 * sum != item.n) return fail(static_cast<double>(item.n), "witness identity violated");
  }
  return {true, static_cast<double>(sizes.size()), ""};
}

TrialResult prop_jordan_divisor_sum(Rng& rng, const TolerancePolicy&) {
  const std::int64_t m = rng.uniform_int(1, 500);
  std::int64_t sum = 0;
  for (std::int64_t d = 1; d <= m; ++d)
    if (m % d == 0) sum += jordan_totient(d);
  if (sum != m * m) return fail(static_cast<double>(sum), "divisor sums of J2 are not squares");
  return {true, 0.0, ""};
}

TrialResult prop_certificate_determinism(Rng& rng, const TolerancePolicy& tol) {
  Certificate cert;
  cert.construction = "determinism_probe";
  cert.tolerances = tol;
  cert.seed = rng.next_u64();
  const MonicPolynomial p = random_monic(rng, 5);
  cert.inputs["poly"] = encode_polynomial(p);
  cert.outputs["roots"] = encode_configuration(roots(p, tol));
  cert.add_check("finite", true, "", 0.0);
  const std::string once = to_pretty_string(encode_certificate(cert));
  const std::string twice = to_pretty_string(encode_certificate(cert));
  if (once != twice) return fail(1.0, "serialization is not deterministic");
  const Certificate back = decode_certificate(Json::parse(once));
  if (to_pretty_string(encode_certificate(back)) != once)
    return fail(1.0, "certificate does not round-trip");
  return {true, 0.0, ""};
}

std::vector<Property> registry() {
  return {
      {"roots_from_roots_round_trip", false, prop_roots_round_trip},
      {"discriminant_root_product_oracle", false, prop_discriminant_oracle},
      {"viete_permutation_invariance", false, prop_viete_permutation_invariance},
      {"quadratic_discriminant_closed_form", false, prop_delta2_closed_form},
      {"cubic_discriminant_closed_form", false, prop_delta3_closed_form},
      {"resolvent_miracle_identity", false, prop_resolvent_miracle},
      {"resolvent_s4_invariance", false, prop_resolvent_s4_invariance},
      {"twisted_resolvent_root_scaling", false, prop_resolvent_d_scaling},
      {"torsion_projection_cardinality", true, prop_psi_cardinality},
      {"disjoining_map_separation", false, prop_phi_separation},
      {"braid_generator_transposition", true, prop_braid_transposition},
      {"loop_inverse_law", true, prop_loop_inverse_law},
      {"loop_concatenation_law", true, prop_loop_concat_law},
      {"sampling_refinement_invariance", true, prop_sampling_invariance},
      {"flex_count_conservation", true, prop_flex_count},
      {"elliptic_group_axioms", true, prop_group_axioms},
      {"torsion_cardinality", true, prop_torsion_cardinality},
      {"stratification_partition", true, prop_stratification_partition},
      {"flex_origin_independence", true, prop_flex_origin_independence},
      {"admissible_size_witnesses", false, prop_admissible_witnesses},
      {"jordan_totient_divisor_sum", false, prop_jordan_divisor_sum},
      {"certificate_determinism", false, prop_certificate_determinism},
  };
}

struct PropertyOutcome {
  bool passed = true;
  int trials = 0;
  double worst = 0.0;
  std::string first_failure;
};

PropertyOutcome run_property(const Property& prop, std::uint64_t master, int trials,
                             const TolerancePolicy& tol) {
  PropertyOutcome out;
  out.trials = trials;
  for (int t = 0; t < trials; ++t) {
    Rng rng(derive_seed(master, static_cast<std::uint64_t>(t)));
    TrialResult res;
    try {
      res = prop.run(rng, tol);
    } catch (const Error& e) {
      res = {false, 0.0, std::string("unexpected error: ") + e.what()};
    }
    out.worst = std::max(out.worst, res.measured);
    if (!res.passed && out.passed) {
      out.passed = false;
      std::ostringstream os;
      os << "trial " << t << ": " << res.detail;
      out.first_failure = os.str();
    }
  }
  return out;
}

}  // namespace

Certificate run_suite(const SuiteConfig& cfg) {
  if (cfg.trials < 1) throw Error(ErrorKind::InvalidInput, "trials must be >= 1");
  if (cfg.parallelism < 1) throw Error(ErrorKind::InvalidInput, "parallelism must be >= 1");
  cfg.tolerances.validate();

  const auto props = registry();
  std::vector<PropertyOutcome> outcomes(props.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= props.size()) return;
      const int trials = props[i].expensive ? std::max(1, cfg.trials / 10) : cfg.trials;
      outcomes[i] = run_property(props[i], derive_seed(cfg.seed, i), trials, cfg.tolerances);
    }
  };
  if (cfg.parallelism == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    const int nthreads = std::min<int>(cfg.parallelism, static_cast<int>(props.size()));
    pool.reserve(static_cast<std::size_t>(nthreads));
    for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  Certificate cert;
  cert.construction = "property_suite";
  cert.seed = cfg.seed;
  cert.tolerances = cfg.tolerances;
  cert.inputs["trials"] = cfg.trials;
  cert.inputs["parallelism"] = cfg.parallelism;
  Json summary = Json::array();
  for (std::size_t i = 0; i < props.size(); ++i) {
    const auto& o = outcomes[i];
    cert.add_check(props[i].name, o.passed,
                   o.passed ? "all trials passed" : o.first_failure, o.worst);
    Json row = Json::object();
    row["name"] = props[i].name;
    row["trials"] = o.trials;
    row["worst_measured"] = o.worst;
    row["passed"] = o.passed;
    summary.push_back(std::move(row));
  }
  cert.outputs["properties"] = std::move(summary);
  return cert;
}

}  // namespace cml
