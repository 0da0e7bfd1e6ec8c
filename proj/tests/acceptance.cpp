// Acceptance gate for the whole pipeline: one criterion per line, [PASS] or
// [FAIL], nonzero exit if anything fails. Tolerances and time budgets are
// pinned here rather than shared with library defaults so a silent change in
// either is caught.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "cml/json_io.hpp"
#include "cml/rng.hpp"
#include "cml/verify.hpp"

using namespace cml;

namespace {

namespace fs = std::filesystem;

constexpr std::uint64_t kSeed = 20240814;

constexpr double kResolventCoeffTol = 1e-10;
constexpr double kResolventIdentityTol = 1e-9;
constexpr double kFlexClosedFormTol = 1e-8;
constexpr double kTorsionReproduceTol = 1e-10;
constexpr double kHausdorffTol = 1e-7;
constexpr double kDiscOracleTol = 1e-8;
constexpr double kVieteTol = 1e-9;

constexpr double kResolventBudgetSec = 10.0;
constexpr double kSurjectionBudgetSec = 30.0;
constexpr double kFlexBudgetSec = 60.0;
constexpr double kSuiteBudgetSec = 300.0;

const ComplexScalar kI(0.0, 1.0);

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

bool report(const std::string& name, bool ok, const std::string& detail) {
  std::cout << (ok ? "[PASS] " : "[FAIL] ") << name << ": " << detail << "\n";
  return ok;
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(3) << v;
  return os.str();
}

fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() / "cml_acceptance";
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

int run_cli(const std::string& args, std::string* stdout_text = nullptr) {
  static int counter = 0;
  const fs::path out = scratch_dir() / ("out_" + std::to_string(counter++) + ".json");
  const std::string cmd =
      std::string("\"") + CML_CLI_PATH + "\" " + args + " > \"" + out.string() + "\" 2>/dev/null";
  const int status = std::system(cmd.c_str());
  if (stdout_text) *stdout_text = slurp(out);
  if (!WIFEXITED(status)) return -1;
  return WEXITSTATUS(status);
}

// Greedy min-distance matching with each target used once; infinite when the
// multisets cannot correspond at all.
double matched_error(const std::vector<ComplexScalar>& got, const std::vector<ComplexScalar>& want) {
  if (got.size() != want.size()) return std::numeric_limits<double>::infinity();
  std::vector<bool> used(want.size(), false);
  double worst = 0.0;
  for (const auto& z : got) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t arg = 0;
    for (std::size_t j = 0; j < want.size(); ++j) {
      if (used[j]) continue;
      const double d = std::abs(z - want[j]);
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

double projective_matched_error(const std::vector<ProjectivePoint>& got,
                                const std::vector<ProjectivePoint>& want) {
  if (got.size() != want.size()) return 1.0;
  std::vector<bool> used(want.size(), false);
  double worst = 0.0;
  for (const auto& p : got) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t arg = 0;
    for (std::size_t j = 0; j < want.size(); ++j) {
      if (used[j]) continue;
      const double d = projective_distance(p, want[j]);
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

double hausdorff(const std::vector<ProjectivePoint>& a, const std::vector<ProjectivePoint>& b) {
  double worst = 0.0;
  for (const auto& p : a) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& q : b) best = std::min(best, projective_distance(p, q));
    worst = std::max(worst, best);
  }
  for (const auto& q : b) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : a) best = std::min(best, projective_distance(q, p));
    worst = std::max(worst, best);
  }
  return worst;
}

TernaryForm fermat_cubic() {
  return TernaryForm(3, {{{3, 0, 0}, 1.0}, {{0, 3, 0}, 1.0}, {{0, 0, 3}, 1.0}});
}

std::vector<ProjectivePoint> fermat_cubic_flex_set() {
  std::vector<ProjectivePoint> out;
  for (int k = 0; k < 3; ++k) {
    const ComplexScalar w = std::exp(kI * (2.0 * M_PI * k / 3.0));
    out.push_back(ProjectivePoint::from(0.0, 1.0, -w));
    out.push_back(ProjectivePoint::from(1.0, 0.0, -w));
    out.push_back(ProjectivePoint::from(1.0, -w, 0.0));
  }
  return out;
}

// --- criteria ----------------------------------------------------------------

bool criterion_resolvent() {
  Timer t;
  const TolerancePolicy tol;

  // The one pinned instance goes through the CLI so the whole wire format is
  // on the hook, not just the library call.
  const fs::path quartic = scratch_dir() / "quartic_z4m1.json";
  {
    std::ofstream out(quartic);
    out << to_pretty_string(encode_polynomial(MonicPolynomial(
        {ComplexScalar(0.0), ComplexScalar(0.0), ComplexScalar(0.0), ComplexScalar(-1.0)})));
  }
  std::string text;
  if (run_cli("resolve-quartic --poly \"" + quartic.string() + "\"", &text) != 0)
    return report("quartic resolvent", false, "CLI run on z^4 - 1 did not exit 0");
  const MonicPolynomial got = decode_polynomial(Json::parse(text).at("outputs").at("resolvent"));
  const MonicPolynomial want({ComplexScalar(0.0), ComplexScalar(4.0), ComplexScalar(0.0)});
  double coeff_err = 0.0;
  if (got.degree() != 3) {
    coeff_err = std::numeric_limits<double>::infinity();
  } else {
    for (std::size_t i = 0; i < 3; ++i)
      coeff_err = std::max(coeff_err, std::abs(got.coeffs()[i] - want.coeffs()[i]));
  }

  // Bulk identity check in-process: 1000 random square-free quartics with
  // unit-disk coefficients.
  Rng rng(derive_seed(kSeed, 1));
  double worst_identity = 0.0;
  double worst_margin = std::numeric_limits<double>::infinity();
  int done = 0;
  while (done < 1000) {
    std::vector<ComplexScalar> cs(4);
    for (auto& c : cs) c = rng.unit_disk();
    const MonicPolynomial q(cs);
    if (!is_square_free(q, tol).square_free) continue;
    const ResolventResult res = resolve_quartic(q, tol);
    const auto sf = is_square_free(res.output, tol);
    worst_margin = std::min(worst_margin, sf.margin);
    if (!sf.square_free) {
      worst_identity = std::numeric_limits<double>::infinity();
      break;
    }
    const auto a = roots(q, tol).points();
    const auto& b = res.b_values.points();
    const ComplexScalar wanted = (a[3] - a[2]) * (a[0] - a[1]);
    const double err = std::abs((b[0] - b[1]) - wanted) / std::max(1.0, std::abs(wanted));
    worst_identity = std::max(worst_identity, err);
    ++done;
  }

  const double sec = t.seconds();
  const bool ok = coeff_err <= kResolventCoeffTol && worst_identity <= kResolventIdentityTol &&
                  sec <= kResolventBudgetSec;
  return report("quartic resolvent", ok,
                "z^4-1 coeff err " + fmt(coeff_err) + ", worst b1-b2 identity err " +
                    fmt(worst_identity) + " over 1000 quartics, " + fmt(sec) + " s");
}

bool criterion_surjection() {
  Timer t;
  std::string text;
  const int code = run_cli("certify-s4s3", &text);
  bool ok = code == 0;
  std::string why = "exit " + std::to_string(code);
  int n_checks = 0;
  if (ok) {
    const Certificate cert = decode_certificate(Json::parse(text));
    n_checks = static_cast<int>(cert.checks.size());
    bool generation = false, klein = false, squares = false;
    for (const auto& c : cert.checks) {
      ok = ok && c.passed;
      if (c.name == "images_generate_s3") generation = c.passed;
      if (c.name == "tau1_equals_tau3") klein = c.passed;
      if (c.name.find("squared_pushes_to_identity") != std::string::npos && c.passed)
        squares = true;
    }
    ok = ok && generation && klein && squares;
    why = std::to_string(n_checks) + " checks, all clauses exact";
  }
  const double sec = t.seconds();
  ok = ok && sec <= kSurjectionBudgetSec;
  return report("exceptional surjection certificate", ok, why + ", " + fmt(sec) + " s");
}

bool criterion_flexes() {
  Timer t;
  const TolerancePolicy tol;

  const auto cubic_flexes = flex_points(fermat_cubic(), tol);
  bool simple = cubic_flexes.size() == 9;
  std::vector<ProjectivePoint> got;
  for (const auto& fp : cubic_flexes) {
    simple = simple && fp.multiplicity == 1;
    got.push_back(fp.point);
  }
  const double err = projective_matched_error(got, fermat_cubic_flex_set());

  // Random smooth quartic: resample the 15 coefficients until the curve is
  // smooth, then check the total inflection multiplicity.
  Rng rng(derive_seed(kSeed, 3));
  int mult_sum = 0;
  for (int attempt = 0; attempt < 64; ++attempt) {
    std::vector<TernaryForm::Term> terms;
    for (int i = 0; i <= 4; ++i)
      for (int j = 0; i + j <= 4; ++j) terms.push_back({{i, j, 4 - i - j}, rng.unit_disk()});
    const TernaryForm quartic(4, terms);
    if (!is_smooth(quartic, tol)) continue;
    mult_sum = 0;
    for (const auto& fp : flex_points(quartic, tol)) mult_sum += fp.multiplicity;
    break;
  }

  const double sec = t.seconds();
  const bool ok = simple && err <= kFlexClosedFormTol && mult_sum == 24 && sec <= kFlexBudgetSec;
  return report("flex counts", ok,
                "cubic: 9 simple flexes, closed-form err " + fmt(err) +
                    "; smooth quartic multiplicity sum " + std::to_string(mult_sum) + ", " +
                    fmt(sec) + " s");
}

bool criterion_torsion_cardinality() {
  Timer t;
  const TolerancePolicy tol;
  Rng rng(derive_seed(kSeed, 4));
  bool ok = true;
  double worst_reproduce = 0.0;
  for (int trial = 0; trial < 20 && ok; ++trial) {
    // Branch triple with a modest separation floor to keep the covers
    // uniformly well-conditioned across the sweep.
    std::vector<ComplexScalar> lam;
    while (true) {
      lam.clear();
      for (int i = 0; i < 3; ++i) lam.push_back(2.0 * rng.unit_disk());
      const double sep = Configuration(lam, false).separation();
      if (sep >= 0.1) break;
    }
    const Configuration lambda(lam, false);
    for (std::int64_t k = 2; k <= 5 && ok; ++k) {
      TorsionMapSpec spec;
      spec.k = k;
      spec.projection_tau = ComplexScalar(0.73, 0.41);
      // A fixed generic direction can still collide for specific inputs; nudge
      // deterministically until the projection separates the torsion points.
      for (int attempt = 0; attempt < 8; ++attempt) {
        try {
          const Configuration out = psi_torsion(lambda, spec, tol);
          ok = ok && out.size() == static_cast<int>(k * k - 1);
          if (k == 2)
            worst_reproduce =
                std::max(worst_reproduce, matched_error(out.points(), lambda.points()));
          break;
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::ProjectionCollision || attempt == 7) {
            ok = false;
            break;
          }
          spec.projection_tau += ComplexScalar(0.013, -0.007);
        }
      }
    }
  }
  ok = ok && worst_reproduce <= kTorsionReproduceTol;
  return report("torsion projection cardinalities", ok,
                "k in {2..5} on 20 branch triples, k=2 reproduction err " + fmt(worst_reproduce) +
                    ", " + fmt(t.seconds()) + " s");
}

bool criterion_size_tables() {
  Timer t;
  const TolerancePolicy tol;

  const std::vector<std::int64_t> want_sizes{9, 27, 36, 72, 81, 99, 108};
  const auto sizes = admissible_sizes(110);
  bool sizes_ok = sizes.size() == want_sizes.size();
  for (std::size_t i = 0; sizes_ok && i < sizes.size(); ++i) {
    sizes_ok = sizes[i].n == want_sizes[i];
    std::int64_t sum = 0;
    for (const auto m : sizes[i].index_set) sum += jordan_totient(m);
    sizes_ok = sizes_ok && 9 * sum == sizes[i].n;
  }

  const auto flexes = flex_points(fermat_cubic(), tol);
  const auto stratum = torsion_stratum(fermat_cubic(), 3, flexes.front().point, tol);
  const bool stratum_ok = stratum.size() == 72;

  const std::vector<std::int64_t> want_bc{216, 432, 864, 1296, 2160};
  const auto bc = banerjee_chen_sizes(2200);
  const bool bc_ok = bc == want_bc;
  std::string bc_note;
  if (!bc_ok) {
    std::ostringstream os;
    os << "smooth-family table mismatch: got [";
    for (std::size_t i = 0; i < bc.size(); ++i) os << (i ? "," : "") << bc[i];
    os << "] vs expected [216,432,864,1296,2160]; the expected table omits 1728 = 18*J2(12) "
          "(J2(12) = 96), which satisfies every constraint of the enumeration (m = 12 >= 4, "
          "value <= 2200), so the computed list necessarily contains it";
    bc_note = os.str();
  }

  const bool ok = sizes_ok && stratum_ok && bc_ok;
  std::string detail = std::string("admissible table ") + (sizes_ok ? "exact" : "WRONG") +
                       ", order-3 stratum " + std::to_string(stratum.size()) + " points";
  detail += bc_ok ? ", smooth-family table exact" : ("; " + bc_note);
  detail += ", " + fmt(t.seconds()) + " s";
  return report("multisection size tables", ok, detail);
}

bool criterion_flex_origin_independence() {
  Timer t;
  const TolerancePolicy tol;
  const TernaryForm f = fermat_cubic();
  const auto flexes = flex_points(f, tol);
  bool ok = flexes.size() == 9;
  std::vector<std::vector<ProjectivePoint>> sets;
  for (const auto& fp : flexes) sets.push_back(cubic_torsion(f, 2, fp.point, tol));
  double worst = 0.0;
  for (std::size_t i = 0; ok && i < sets.size(); ++i) {
    ok = sets[i].size() == 36;
    for (std::size_t j = i + 1; j < sets.size(); ++j)
      worst = std::max(worst, hausdorff(sets[i], sets[j]));
  }
  ok = ok && worst <= kHausdorffTol;
  return report("flex-origin independence", ok,
                "order-6 set over all 9 origins, max Hausdorff gap " + fmt(worst) + ", " +
                    fmt(t.seconds()) + " s");
}

bool criterion_oracles() {
  Timer t;
  const TolerancePolicy tol;

  // Discriminant against the product of squared root differences.
  Rng drng(derive_seed(kSeed, 71));
  double worst_disc = 0.0;
  for (int done = 0; done < 1000;) {
    const int n = drng.uniform_int(2, 8);
    std::vector<ComplexScalar> cs(static_cast<std::size_t>(n));
    for (auto& c : cs) c = drng.unit_disk();
    const MonicPolynomial p(cs);
    if (!is_square_free(p, tol).square_free) continue;
    const auto pts = roots(p, tol).points();
    ComplexScalar prod(1.0);
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t j = i + 1; j < pts.size(); ++j) {
        const ComplexScalar d = pts[i] - pts[j];
        prod *= d * d;
      }
    const double err = std::abs(discriminant(p) - prod) / std::max(1.0, std::abs(prod));
    worst_disc = std::max(worst_disc, err);
    ++done;
  }

  // Viete round trip: configuration -> polynomial -> configuration.
  Rng vrng(derive_seed(kSeed, 72));
  double worst_viete = 0.0;
  for (int done = 0; done < 1000;) {
    const int n = vrng.uniform_int(1, 12);
    std::vector<ComplexScalar> pts;
    bool fine = true;
    for (int i = 0; i < n; ++i) pts.push_back(2.0 * vrng.unit_disk());
    for (std::size_t i = 0; fine && i < pts.size(); ++i)
      for (std::size_t j = i + 1; j < pts.size(); ++j)
        fine = fine && std::abs(pts[i] - pts[j]) >= 1e-2;
    if (!fine) continue;
    const Configuration c(pts, false);
    const auto back = roots(from_roots(c), tol).points();
    double scale = 1.0;
    for (const auto& z : pts) scale = std::max(scale, std::abs(z));
    worst_viete = std::max(worst_viete, matched_error(back, pts) / scale);
    ++done;
  }

  // Independent subset-sum enumeration of the admissible sizes; 45 must be
  // unreachable.
  const auto sizes = admissible_sizes(110);
  std::vector<bool> reachable(111, false);
  std::vector<std::int64_t> items;
  for (std::int64_t m = 1; 9 * jordan_totient(m) <= 110; ++m) items.push_back(jordan_totient(m));
  reachable[0] = true;
  for (const auto item : items)
    for (std::int64_t s = 110 / 9; s >= item; --s)
      if (reachable[static_cast<std::size_t>(s - item)]) reachable[static_cast<std::size_t>(s)] = true;
  std::vector<std::int64_t> dp_sizes;
  for (std::int64_t s = 1; 9 * s <= 110; ++s)
    if (reachable[static_cast<std::size_t>(s)]) dp_sizes.push_back(9 * s);
  std::vector<std::int64_t> got_sizes;
  for (const auto& item : sizes) got_sizes.push_back(item.n);
  const bool dp_ok = dp_sizes == got_sizes &&
                     std::find(dp_sizes.begin(), dp_sizes.end(), 45) == dp_sizes.end();

  const bool ok = worst_disc <= kDiscOracleTol && worst_viete <= kVieteTol && dp_ok;
  return report("oracle cross-checks", ok,
                "discriminant err " + fmt(worst_disc) + ", round-trip err " + fmt(worst_viete) +
                    ", subset-sum table " + (dp_ok ? "agrees (45 absent)" : "DISAGREES") + ", " +
                    fmt(t.seconds()) + " s");
}

bool criterion_full_suite() {
  Timer t;
  std::string text;
  const int code = run_cli("verify --seed 42", &text);
  const double sec = t.seconds();
  const bool ok = code == 0 && sec <= kSuiteBudgetSec;
  return report("property suite", ok,
                "verify --seed 42 exit " + std::to_string(code) + ", " + fmt(sec) + " s");
}

}  // namespace

int main() {
  int failed = 0;
  failed += criterion_resolvent() ? 0 : 1;
  failed += criterion_surjection() ? 0 : 1;
  failed += criterion_flexes() ? 0 : 1;
  failed += criterion_torsion_cardinality() ? 0 : 1;
  failed += criterion_size_tables() ? 0 : 1;
  failed += criterion_flex_origin_independence() ? 0 : 1;
  failed += criterion_oracles() ? 0 : 1;
  failed += criterion_full_suite() ? 0 : 1;
  if (failed == 0) {
    std::cout << "all acceptance criteria passed\n";
    return 0;
  }
  std::cout << failed << " acceptance criterion(s) failed\n";
  return 1;
}
