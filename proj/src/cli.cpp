#include "cml/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "cml/json_io.hpp"
#include "cml/monodromy.hpp"
#include "cml/plane_curves.hpp"
#include "cml/poly_maps.hpp"
#include "cml/verify.hpp"

namespace cml {

namespace {

std::uint64_t default_seed() {
  const char* env = std::getenv("CML_SEED");
  if (env == nullptr || *env == '\0') return 42;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (end == nullptr || *end != '\0')
    throw Error(ErrorKind::InvalidInput, "CML_SEED must be a nonnegative integer");
  return static_cast<std::uint64_t>(v);
}

Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidInput, "cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::InvalidInput, path + ": " + e.what());
  }
}

double rel_err(ComplexScalar got, ComplexScalar want) {
  return std::abs(got - want) / std::max(1.0, std::abs(want));
}

double matched_error(const std::vector<ComplexScalar>& a, const std::vector<ComplexScalar>& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
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

Certificate base_cert(const std::string& construction, std::uint64_t seed,
                      const TolerancePolicy& tol) {
  Certificate cert;
  cert.construction = construction;
  cert.seed = seed;
  cert.tolerances = tol;
  return cert;
}

// --- per-subcommand builders ------------------------------------------------

Certificate cmd_discriminant(const MonicPolynomial& p, std::uint64_t seed,
                             const TolerancePolicy& tol) {
  Certificate cert = base_cert("discriminant", seed, tol);
  cert.inputs["poly"] = encode_polynomial(p);
  const ComplexScalar disc = discriminant(p);
  cert.outputs["discriminant"] = encode_complex(disc);
  cert.add_check("value_is_finite", is_finite(disc), "", std::abs(disc));
  if (p.degree() >= 2) {
    const Configuration r = roots(p, tol);
    ComplexScalar prod(1.0);
    const auto& pts = r.points();
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t j = i + 1; j < pts.size(); ++j) {
        const ComplexScalar d = pts[i] - pts[j];
        prod *= d * d;
      }
    const double err = rel_err(disc, prod);
    cert.add_check("matches_root_product_oracle", err <= 1e-8,
                   "relative error vs product of squared root differences", err);
  } else {
    cert.add_check("matches_root_product_oracle", disc == ComplexScalar(1.0),
                   "degree 1 discriminant is the empty product", std::abs(disc - 1.0));
  }
  return cert;
}

Certificate cmd_roots(const MonicPolynomial& p, std::uint64_t seed, const TolerancePolicy& tol) {
  Certificate cert = base_cert("roots", seed, tol);
  cert.inputs["poly"] = encode_polynomial(p);
  const Configuration r = roots(p, tol);
  cert.outputs["roots"] = encode_configuration(r);
  double worst = 0.0;
  for (const auto& z : r.points()) {
    const double res = std::abs(evaluate(p, z)) / std::pow(1.0 + std::abs(z), p.degree());
    worst = std::max(worst, res);
  }
  cert.add_check("residual_bound", worst <= tol.root_tol, "max scaled |P(root)|", worst);
  const MonicPolynomial back = from_roots(r);
  double scale = 1.0, diff = 0.0;
  for (int i = 0; i < p.degree(); ++i) {
    scale = std::max(scale, std::abs(p.coeffs()[static_cast<std::size_t>(i)]));
    diff = std::max(diff, std::abs(p.coeffs()[static_cast<std::size_t>(i)] -
                                   back.coeffs()[static_cast<std::size_t>(i)]));
  }
  cert.add_check("viete_round_trip", diff / scale <= 1e-9,
                 "coefficient drift after rebuilding from roots", diff / scale);
  return cert;
}

Certificate cmd_viete(const Configuration& c, std::uint64_t seed, const TolerancePolicy& tol) {
  Certificate cert = base_cert("viete", seed, tol);
  cert.inputs["points"] = encode_configuration(c);
  const MonicPolynomial p = from_roots(c);
  cert.outputs["poly"] = encode_polynomial(p);
  const Configuration back = roots(p, tol);
  double scale = 1.0;
  for (const auto& z : c.points()) scale = std::max(scale, std::abs(z));
  const double err = matched_error(c.points(), back.points()) / scale;
  cert.add_check("roots_round_trip", err <= 1e-9, "max point drift after re-solving", err);
  return cert;
}

Certificate cmd_resolve_quartic(const MonicPolynomial& f, std::uint64_t seed,
                                const TolerancePolicy& tol) {
  Certificate cert = base_cert("resolve_quartic", seed, tol);
  cert.inputs["poly"] = encode_polynomial(f);
  const ResolventResult res = resolve_quartic(f, tol);
  cert.outputs["resolvent"] = encode_resolvent_result(res);

  const auto sf = is_square_free(res.output, tol);
  cert.add_check("output_square_free", sf.square_free, "discriminant margin", sf.margin);

  const auto a = roots(f, tol).points();
  const auto& b = res.b_values.points();
  const double miracle = rel_err(b[0] - b[1], (a[3] - a[2]) * (a[0] - a[1]));
  cert.add_check("difference_identity", miracle <= 1e-9,
                 "b1-b2 = (a4-a3)(a1-a2) relative error", miracle);

  // Relabel the roots (reverse order) and rebuild the b-set; the unordered
  // set must be unchanged.
  std::vector<ComplexScalar> rev(a.rbegin(), a.rend());
  const ComplexScalar c1 = (rev[0] - rev[1] - rev[2] + rev[3]) / 2.0;
  const ComplexScalar c2 = (rev[0] - rev[1] + rev[2] - rev[3]) / 2.0;
  const ComplexScalar c3 = (rev[0] + rev[1] - rev[2] - rev[3]) / 2.0;
  double scale = 1.0;
  for (const auto& z : b) scale = std::max(scale, std::abs(z));
  const double inv = matched_error({c1 * c1, c2 * c2, c3 * c3}, b) / scale;
  cert.add_check("relabeling_invariance", inv <= 1e-10,
                 "b-set drift under root relabeling", inv);
  return cert;
}

Certificate cmd_resolvent_d(const MonicPolynomial& f, int d, std::uint64_t seed,
                            const TolerancePolicy& tol) {
  Certificate cert = base_cert("resolvent_d", seed, tol);
  cert.inputs["poly"] = encode_polynomial(f);
  cert.inputs["d"] = d;
  const MonicPolynomial out = resolvent_d(f, d, tol);
  const ResolventResult base = resolve_quartic(f, tol);
  cert.outputs["poly"] = encode_polynomial(out);
  cert.outputs["input_discriminant"] = encode_complex(base.input_discriminant);

  const auto sf = is_square_free(out, tol);
  cert.add_check("output_square_free", sf.square_free, "discriminant margin", sf.margin);

  ComplexScalar factor(1.0);
  for (int i = 0; i < d; ++i) factor *= base.input_discriminant;
  std::vector<ComplexScalar> want;
  for (const auto& z : base.b_values.points()) want.push_back(factor * z);
  double scale = 1.0;
  for (const auto& z : want) scale = std::max(scale, std::abs(z));
  const double err = matched_error(want, roots(out, tol).points()) / scale;
  cert.add_check("root_scaling_law", err <= 1e-9,
                 "roots equal discriminant-power times the plain b-values", err);
  return cert;
}

Certificate cmd_phi(const Configuration& c, std::uint64_t seed, const TolerancePolicy& tol) {
  Certificate cert = base_cert("phi_disjoin", seed, tol);
  cert.inputs["points"] = encode_configuration(c);
  const Configuration out = phi_disjoin(c);
  cert.outputs["points"] = encode_configuration(out);
  cert.add_check("separation_positive", out.separation() > 0.0, "output separation",
                 out.separation());
  double maxmod = 0.0;
  for (const auto& z : c.points()) maxmod = std::max(maxmod, std::abs(z));
  const ComplexScalar added = out.points().back();
  cert.add_check("appended_point_dominates", added.real() > maxmod,
                 "new point exceeds every input modulus", added.real() - maxmod);
  return cert;
}

Certificate cmd_psi_torsion(const Configuration& lambda, std::int64_t k, ComplexScalar tau,
                            std::uint64_t seed, const TolerancePolicy& tol) {
  Certificate cert = base_cert("psi_torsion", seed, tol);
  cert.inputs["lambda"] = encode_configuration(lambda);
  cert.inputs["k"] = k;
  cert.inputs["tau"] = encode_complex(tau);
  TorsionMapSpec spec;
  spec.k = k;
  spec.projection_tau = tau;
  const Configuration out = psi_torsion(lambda, spec, tol);
  cert.outputs["points"] = encode_configuration(out);
  cert.add_check("cardinality", out.size() == static_cast<int>(k * k - 1),
                 "expected k^2-1 points", static_cast<double>(out.size()));
  cert.add_check("separation_positive", out.separation() > 0.0, "output separation",
                 out.separation());
  if (k == 2) {
    const double err = matched_error(out.points(), lambda.points());
    cert.add_check("two_torsion_reproduces_branch_values", err <= 1e-10,
                   "distance between image and branch triple", err);
  }
  return cert;
}

Certificate cmd_monodromy(const CoefficientPath& path, std::uint64_t seed,
                          const TolerancePolicy& tol) {
  Certificate cert = base_cert("monodromy", seed, tol);
  cert.inputs["path"] = encode_path(path);
  const MonodromyResult res = loop_permutation(path, tol);
  cert.outputs["permutation"] = encode_permutation(res.permutation);
  cert.outputs["min_separation_along_path"] = res.min_separation_along_path;
  cert.outputs["max_step_contraction"] = res.max_step_contraction;
  cert.add_check("separation_positive", res.min_separation_along_path > 0.0,
                 "minimum root separation along the loop", res.min_separation_along_path);
  const MonodromyResult rev = loop_permutation(path.reversed(), tol);
  cert.add_check("inverse_law", rev.permutation == res.permutation.inverse(),
                 "reverse loop acts as the inverse permutation", 0.0);
  return cert;
}

Certificate cmd_flexes(const TernaryForm& f, std::uint64_t seed, const TolerancePolicy& tol) {
  Certificate cert = base_cert("flexes", seed, tol);
  cert.inputs["curve"] = encode_ternary_form(f);
  const auto flexes = flex_points(f, tol);
  Json arr = Json::array();
  int mult_sum = 0;
  double worst = 0.0;
  for (const auto& fp : flexes) {
    Json row = Json::object();
    row["point"] = encode_projective_point(fp.point);
    row["multiplicity"] = fp.multiplicity;
    arr.push_back(std::move(row));
    mult_sum += fp.multiplicity;
    worst = std::max(worst, std::abs(f(fp.point.coords[0], fp.point.coords[1],
                                       fp.point.coords[2])) / f.coeff_norm());
  }
  cert.outputs["flexes"] = std::move(arr);
  const int expect = 3 * f.degree() * (f.degree() - 2);
  cert.add_check("multiplicity_sum", mult_sum == expect,
                 "flex multiplicities sum to 3d(d-2)", static_cast<double>(mult_sum));
  cert.add_check("on_curve_residuals", worst <= 1e-6, "max scaled |F(flex)|", worst);
  return cert;
}

Certificate cmd_cubic_torsion(const TernaryForm& f, std::int64_t k, std::uint64_t seed,
                              const TolerancePolicy& tol) {
  Certificate cert = base_cert("cubic_torsion", seed, tol);
  cert.inputs["curve"] = encode_ternary_form(f);
  cert.inputs["k"] = k;
  const auto flexes = flex_points(f, tol);
  const ProjectivePoint flex = flexes.front().point;
  cert.inputs["flex"] = encode_projective_point(flex);
  const auto pts = cubic_torsion(f, k, flex, tol);
  Json arr = Json::array();
  double worst = 0.0;
  for (const auto& p : pts) {
    arr.push_back(encode_projective_point(p));
    worst = std::max(worst, std::abs(f(p.coords[0], p.coords[1], p.coords[2])) / f.coeff_norm());
  }
  cert.outputs["points"] = std::move(arr);
  cert.add_check("cardinality", static_cast<std::int64_t>(pts.size()) == 9 * k * k,
                 "expected 9k^2 points", static_cast<double>(pts.size()));
  cert.add_check("on_curve_residuals", worst <= 1e-7, "max scaled |F(point)|", worst);
  double min_dist = 1.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      min_dist = std::min(min_dist, projective_distance(pts[i], pts[j]));
  cert.add_check("pairwise_distinct", min_dist > tol.distinct_tol,
                 "minimum projective distance", min_dist);
  return cert;
}

Certificate cmd_stratum(const TernaryForm& f, std::int64_t m, std::uint64_t seed,
                        const TolerancePolicy& tol) {
  Certificate cert = base_cert("torsion_stratum", seed, tol);
  cert.inputs["curve"] = encode_ternary_form(f);
  cert.inputs["m"] = m;
  const auto flexes = flex_points(f, tol);
  const ProjectivePoint flex = flexes.front().point;
  cert.inputs["flex"] = encode_projective_point(flex);
  const auto pts = torsion_stratum(f, m, flex, tol);
  Json arr = Json::array();
  for (const auto& p : pts) arr.push_back(encode_projective_point(p));
  cert.outputs["points"] = std::move(arr);
  const std::int64_t expect = 9 * jordan_totient(m);
  cert.add_check("cardinality", static_cast<std::int64_t>(pts.size()) == expect,
                 "expected 9*J2(m) points", static_cast<double>(pts.size()));
  std::int64_t partition = 0;
  for (std::int64_t d = 1; d <= m; ++d)
    if (m % d == 0) partition += 9 * jordan_totient(d);
  cert.add_check("partition_identity", partition == 9 * m * m,
                 "sum of 9*J2(d) over divisors equals 9m^2", static_cast<double>(partition));
  return cert;
}

Certificate cmd_jordan(std::int64_t m, std::uint64_t seed, const TolerancePolicy& tol) {
  Certificate cert = base_cert("jordan_totient", seed, tol);
  cert.inputs["m"] = m;
  const std::int64_t j = jordan_totient(m);
  cert.outputs["value"] = j;
  std::int64_t sum = 0;
  for (std::int64_t d = 1; d <= m; ++d)
    if (m % d == 0) sum += jordan_totient(d);
  cert.add_check("divisor_sum_identity", sum == m * m,
                 "sum of J2 over divisors equals m^2", static_cast<double>(sum));
  return cert;
}

Certificate cmd_sizes(std::int64_t bound, std::uint64_t seed, const TolerancePolicy& tol) {
  Certificate cert = base_cert("admissible_sizes", seed, tol);
  cert.inputs["bound"] = bound;
  const auto sizes = admissible_sizes(bound);
  Json arr = Json::array();
  bool witnesses_ok = true, sorted_ok = true;
  std::int64_t prev = 0;
  for (const auto& item : sizes) {
    Json row = Json::object();
    row["n"] = item.n;
    Json witness = Json::array();
    std::int64_t sum = 0;
    for (const auto idx : item.index_set) {
      witness.push_back(idx);
      sum += jordan_totient(idx);
    }
    row["index_set"] = std::move(witness);
    arr.push_back(std::move(row));
    witnesses_ok = witnesses_ok && (9 * sum == item.n);
    sorted_ok = sorted_ok && (item.n > prev) && (item.n <= bound);
    prev = item.n;
  }
  cert.outputs["sizes"] = std::move(arr);
  cert.add_check("witness_identities", witnesses_ok, "every n equals 9 * sum of J2 over its witness",
                 static_cast<double>(sizes.size()));
  cert.add_check("sorted_within_bound", sorted_ok, "strictly increasing and bounded", 0.0);
  return cert;
}

Certificate cmd_bc_sizes(std::int64_t bound, std::uint64_t seed, const TolerancePolicy& tol) {
  Certificate cert = base_cert("banerjee_chen_sizes", seed, tol);
  cert.inputs["bound"] = bound;
  const auto sizes = banerjee_chen_sizes(bound);
  Json arr = Json::array();
  bool sorted_ok = true, witnessed = true;
  std::int64_t prev = 0;
  for (const auto n : sizes) {
    arr.push_back(n);
    sorted_ok = sorted_ok && (n > prev) && (n <= bound);
    prev = n;
    bool found = false;
    for (std::int64_t m = 4; 9 * m * m <= 2 * bound && !found; ++m)
      found = (18 * jordan_totient(m) == n);
    witnessed = witnessed && found;
  }
  cert.outputs["sizes"] = std::move(arr);
  cert.add_check("sorted_distinct_within_bound", sorted_ok, "strictly increasing and bounded", 0.0);
  cert.add_check("each_value_witnessed", witnessed, "every value is 18*J2(m) for some m >= 4",
                 static_cast<double>(sizes.size()));
  return cert;
}

void print_summary(const Certificate& cert) {
  int ok = 0;
  for (const auto& c : cert.checks) ok += c.passed ? 1 : 0;
  std::cerr << cert.construction << ": " << (cert.passed() ? "PASS" : "FAIL") << " (" << ok
            << "/" << cert.checks.size() << " checks)\n";
  for (const auto& c : cert.checks)
    if (!c.passed) std::cerr << "  failed: " << c.name << " — " << c.detail << "\n";
}

int emit(const Certificate& cert, const std::string& out_path) {
  const std::string text = to_pretty_string(encode_certificate(cert));
  std::cout << text;
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) {
      std::cerr << "cannot write " << out_path << "\n";
      return 2;
    }
    out << text;
  }
  print_summary(cert);
  return cert.passed() ? 0 : 1;
}

}  // namespace

int run_subcommand(const std::vector<std::string>& args) {
  CLI::App app{"constructive maps between spaces of square-free polynomials and plane cubics"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  TolerancePolicy tol;
  std::string poly_file, points_file, path_file, curve_file, out_file;
  std::int64_t k = 2, m = 1, bound = 110;
  int d = 1, trials = 1000, parallelism = 1, samples = 64;
  std::vector<double> tau{1.0, 0.0};

  try {
    seed = default_seed();
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", seed, "random seed (CML_SEED overrides the default)")
        ->capture_default_str();
    sub->add_option("--tol-root", tol.root_tol, "root residual tolerance")->capture_default_str();
    sub->add_option("--tol-distinct", tol.distinct_tol, "relative distinctness tolerance")
        ->capture_default_str();
    sub->add_option("--out", out_file, "also write the certificate JSON to this file");
  };

  auto* c_disc = app.add_subcommand("discriminant", "discriminant of a monic polynomial");
  c_disc->add_option("--poly", poly_file, "polynomial JSON file")->required();
  add_common(c_disc);

  auto* c_roots = app.add_subcommand("roots", "all roots of a monic polynomial");
  c_roots->add_option("--poly", poly_file, "polynomial JSON file")->required();
  add_common(c_roots);

  auto* c_viete = app.add_subcommand("viete", "monic polynomial with a given root configuration");
  c_viete->add_option("--points", points_file, "configuration JSON file")->required();
  add_common(c_viete);

  auto* c_rq = app.add_subcommand("resolve-quartic", "cubic resolvent of a square-free quartic");
  c_rq->add_option("--poly", poly_file, "quartic JSON file")->required();
  add_common(c_rq);

  auto* c_rd = app.add_subcommand("resolvent-d", "discriminant-twisted cubic resolvent");
  c_rd->add_option("--poly", poly_file, "quartic JSON file")->required();
  c_rd->add_option("--d", d, "twist exponent")->capture_default_str();
  add_common(c_rd);

  auto* c_phi = app.add_subcommand("phi", "append a dominating point to a configuration");
  c_phi->add_option("--points", points_file, "configuration JSON file")->required();
  add_common(c_phi);

  auto* c_psi = app.add_subcommand("psi-torsion", "project the k-torsion of a branched double cover");
  c_psi->add_option("--points", points_file, "branch triple JSON file")->required();
  c_psi->add_option("--k", k, "torsion order")->capture_default_str();
  c_psi->add_option("--tau", tau, "projection direction as re im")->expected(2);
  add_common(c_psi);

  auto* c_mono = app.add_subcommand("monodromy", "permutation induced by a closed coefficient loop");
  c_mono->add_option("--path", path_file, "path JSON file")->required();
  add_common(c_mono);

  auto* c_cert = app.add_subcommand("certify-s4s3",
                                    "certify the resolvent's exceptional monodromy surjection");
  c_cert->add_option("--samples", samples, "samples per path segment")->capture_default_str();
  add_common(c_cert);

  auto* c_flex = app.add_subcommand("flexes", "inflection points of a smooth plane curve");
  c_flex->add_option("--curve", curve_file, "ternary form JSON file")->required();
  add_common(c_flex);

  auto* c_ct = app.add_subcommand("cubic-torsion", "3k-torsion multisection of a smooth cubic");
  c_ct->add_option("--curve", curve_file, "ternary form JSON file")->required();
  c_ct->add_option("--k", k, "multisection order (3k-torsion)")->capture_default_str();
  add_common(c_ct);

  auto* c_st = app.add_subcommand("stratum", "exact-order torsion stratum of a smooth cubic");
  c_st->add_option("--curve", curve_file, "ternary form JSON file")->required();
  c_st->add_option("--m", m, "stratum order")->capture_default_str();
  add_common(c_st);

  auto* c_j = app.add_subcommand("jordan", "second Jordan totient");
  c_j->add_option("--m", m, "argument")->required();
  add_common(c_j);

  auto* c_sz = app.add_subcommand("sizes", "admissible multisection sizes with witnesses");
  c_sz->add_option("--bound", bound, "upper bound")->required();
  add_common(c_sz);

  auto* c_bc = app.add_subcommand("bc-sizes", "smooth multisection sizes 18*J2(m), m >= 4");
  c_bc->add_option("--bound", bound, "upper bound")->required();
  add_common(c_bc);

  auto* c_verify = app.add_subcommand("verify", "run the seeded property suite");
  c_verify->add_option("--trials", trials, "trials per property")->capture_default_str();
  c_verify->add_option("--parallelism", parallelism, "number of worker threads")
      ->capture_default_str();
  add_common(c_verify);

  std::vector<const char*> argv;
  argv.push_back("cml");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  try {
    Certificate cert;
    if (app.got_subcommand(c_disc)) {
      cert = cmd_discriminant(decode_polynomial(load_json(poly_file)), seed, tol);
    } else if (app.got_subcommand(c_roots)) {
      cert = cmd_roots(decode_polynomial(load_json(poly_file)), seed, tol);
    } else if (app.got_subcommand(c_viete)) {
      cert = cmd_viete(decode_configuration(load_json(points_file)), seed, tol);
    } else if (app.got_subcommand(c_rq)) {
      cert = cmd_resolve_quartic(decode_polynomial(load_json(poly_file)), seed, tol);
    } else if (app.got_subcommand(c_rd)) {
      cert = cmd_resolvent_d(decode_polynomial(load_json(poly_file)), d, seed, tol);
    } else if (app.got_subcommand(c_phi)) {
      cert = cmd_phi(decode_configuration(load_json(points_file)), seed, tol);
    } else if (app.got_subcommand(c_psi)) {
      cert = cmd_psi_torsion(decode_configuration(load_json(points_file)), k,
                             ComplexScalar(tau[0], tau[1]), seed, tol);
    } else if (app.got_subcommand(c_mono)) {
      cert = cmd_monodromy(decode_path(load_json(path_file), tol), seed, tol);
    } else if (app.got_subcommand(c_cert)) {
      cert = certify_exceptional_surjection(tol, samples);
      cert.seed = seed;
    } else if (app.got_subcommand(c_flex)) {
      cert = cmd_flexes(decode_ternary_form(load_json(curve_file)), seed, tol);
    } else if (app.got_subcommand(c_ct)) {
      cert = cmd_cubic_torsion(decode_ternary_form(load_json(curve_file)), k, seed, tol);
    } else if (app.got_subcommand(c_st)) {
      cert = cmd_stratum(decode_ternary_form(load_json(curve_file)), m, seed, tol);
    } else if (app.got_subcommand(c_j)) {
      cert = cmd_jordan(m, seed, tol);
    } else if (app.got_subcommand(c_sz)) {
      cert = cmd_sizes(bound, seed, tol);
    } else if (app.got_subcommand(c_bc)) {
      cert = cmd_bc_sizes(bound, seed, tol);
    } else if (app.got_subcommand(c_verify)) {
      SuiteConfig cfg;
      cfg.seed = seed;
      cfg.trials = trials;
      cfg.parallelism = parallelism;
      cfg.tolerances = tol;
      cert = run_suite(cfg);
    } else {
      std::cerr << "no subcommand selected\n";
      return 2;
    }
    return emit(cert, out_file);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::InvalidInput) {
      std::cerr << e.what() << "\n";
      return 2;
    }
    Certificate failure = base_cert("error", seed, tol);
    failure.add_check("construction_succeeded", false, e.what(), 0.0);
    emit(failure, out_file);
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace cml
