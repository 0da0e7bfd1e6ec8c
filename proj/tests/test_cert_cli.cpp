#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include <doctest.h>

#include "cml/json_io.hpp"
#include "cml/verify.hpp"

using namespace cml;

namespace {

namespace fs = std::filesystem;

const ComplexScalar kI(0.0, 1.0);

fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() / "cml_cli_tests";
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

// Runs the CLI binary with a shell redirect, returning the exit code and the
// captured standard output.
int run_cli(const std::string& args, std::string* stdout_text = nullptr,
            const std::string& env_prefix = "") {
  static int counter = 0;
  const fs::path out = scratch_dir() / ("stdout_" + std::to_string(counter++) + ".json");
  const std::string cmd =
      env_prefix + "\"" + CML_CLI_PATH + "\" " + args + " > \"" + out.string() + "\" 2>/dev/null";
  const int status = std::system(cmd.c_str());
  if (stdout_text) *stdout_text = slurp(out);
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("complex and polynomial JSON encodings round-trip bit-exactly") {
  const ComplexScalar z(0.125, -3.5);
  CHECK(decode_complex(encode_complex(z)) == z);

  const MonicPolynomial p({ComplexScalar(0.5, -1.25), ComplexScalar(0.0), ComplexScalar(-2.0, 0.75)});
  const Json j = encode_polynomial(p);
  CHECK(j.at("degree") == 3);
  CHECK(decode_polynomial(j) == p);
}

TEST_CASE("configuration JSON keeps points and the ordered flag") {
  const Configuration c({kI, ComplexScalar(-0.5), ComplexScalar(2.0, 2.0)}, true);
  const Configuration back = decode_configuration(encode_configuration(c));
  CHECK(back.ordered());
  CHECK(back == c);

  const Configuration u({1.0, -1.0}, false);
  CHECK_FALSE(decode_configuration(encode_configuration(u)).ordered());
}

TEST_CASE("path JSON round-trips waypoints and sampling rate") {
  const MonicPolynomial a({0.0, -1.0});
  const MonicPolynomial b({0.0, -2.0});
  const CoefficientPath path({a, b, a}, 48);
  const CoefficientPath back = decode_path(encode_path(path));
  CHECK(back.degree() == 2);
  CHECK(back.samples_per_segment() == 48);
  REQUIRE(back.waypoints().size() == 3);
  CHECK(back.waypoints()[0] == a);
  CHECK(back.waypoints()[1] == b);
  CHECK(back.closed());
}

TEST_CASE("ternary form and point JSON encodings round-trip") {
  const TernaryForm f(3, {{{3, 0, 0}, ComplexScalar(1.0)},
                          {{1, 1, 1}, ComplexScalar(0.0, -2.0)},
                          {{0, 0, 3}, ComplexScalar(0.25)}});
  const TernaryForm back = decode_ternary_form(encode_ternary_form(f));
  CHECK(back.degree() == 3);
  CHECK(back.coefficient(3, 0, 0) == ComplexScalar(1.0));
  CHECK(back.coefficient(1, 1, 1) == ComplexScalar(0.0, -2.0));
  CHECK(back.coefficient(0, 0, 3) == ComplexScalar(0.25));

  const ProjectivePoint pp = ProjectivePoint::from(0.5, 1.0, -kI);
  const ProjectivePoint ppb = decode_projective_point(encode_projective_point(pp));
  CHECK(projective_distance(pp, ppb) < 1e-15);

  const CurvePoint inf = CurvePoint::infinity();
  CHECK(decode_curve_point(encode_curve_point(inf)).inf);
  const CurvePoint aff = CurvePoint::affine(ComplexScalar(2.0), ComplexScalar(0.0, -3.0));
  const CurvePoint affb = decode_curve_point(encode_curve_point(aff));
  CHECK_FALSE(affb.inf);
  CHECK(affb.x == aff.x);
  CHECK(affb.y == aff.y);
}

TEST_CASE("tolerance and certificate encodings round-trip losslessly") {
  TolerancePolicy tol;
  tol.root_tol = 1e-11;
  tol.distinct_tol = 1e-7;
  tol.max_iterations = 321;
  const TolerancePolicy tback = decode_tolerances(encode_tolerances(tol));
  CHECK(tback.root_tol == tol.root_tol);
  CHECK(tback.distinct_tol == tol.distinct_tol);
  CHECK(tback.max_iterations == tol.max_iterations);

  Certificate cert;
  cert.construction = "example";
  cert.inputs["k"] = 3;
  cert.outputs["value"] = Json::array({1, 2, 3});
  cert.seed = 99;
  cert.add_check("first", true, "fine", 0.5);
  cert.add_check("second", false, "broken", 2.0);
  const Json j = encode_certificate(cert);
  CHECK_FALSE(j.at("passed").get<bool>());

  const Certificate back = decode_certificate(j);
  CHECK(back.construction == cert.construction);
  CHECK(back.seed == cert.seed);
  REQUIRE(back.checks.size() == 2);
  CHECK(back.checks[1].name == "second");
  CHECK(back.checks[1].measured == 2.0);
  // Re-encoding the decoded certificate reproduces the bytes.
  CHECK(to_pretty_string(encode_certificate(back)) == to_pretty_string(j));
}

TEST_CASE("pretty printing is two-space indented with a trailing newline") {
  Json j = Json::object();
  j["a"] = 1;
  const std::string s = to_pretty_string(j);
  CHECK(s == "{\n  \"a\": 1\n}\n");
}

TEST_CASE("property suite is deterministic and validates its config") {
  SuiteConfig cfg;
  cfg.seed = 42;
  cfg.trials = 3;
  const std::string a = to_pretty_string(encode_certificate(run_suite(cfg)));
  const std::string b = to_pretty_string(encode_certificate(run_suite(cfg)));
  CHECK(a == b);

  SuiteConfig zero = cfg;
  zero.trials = 0;
  CHECK_THROWS_AS(run_suite(zero), Error);
}

TEST_CASE("suite certificates share a schema across seeds") {
  SuiteConfig one;
  one.seed = 1;
  one.trials = 2;
  SuiteConfig two;
  two.seed = 2;
  two.trials = 2;
  const Certificate ca = run_suite(one);
  const Certificate cb = run_suite(two);
  REQUIRE(ca.checks.size() == cb.checks.size());
  for (std::size_t i = 0; i < ca.checks.size(); ++i) CHECK(ca.checks[i].name == cb.checks[i].name);
}

TEST_CASE("suite parallelism never changes the outcome") {
  SuiteConfig seq;
  seq.seed = 11;
  seq.trials = 2;
  SuiteConfig par = seq;
  par.parallelism = 4;
  Certificate a = run_suite(seq);
  Certificate b = run_suite(par);
  // The parallelism value is recorded in the inputs; mask it before comparing.
  Json ja = encode_certificate(a);
  Json jb = encode_certificate(b);
  ja["inputs"].erase("parallelism");
  jb["inputs"].erase("parallelism");
  CHECK(to_pretty_string(ja) == to_pretty_string(jb));
}

TEST_CASE("cli: passing construction exits 0 with a self-checking certificate") {
  std::string out;
  const int code = run_cli("jordan --m 12", &out);
  CHECK(code == 0);
  const Json j = Json::parse(out);
  CHECK(j.at("construction") == "jordan_totient");
  CHECK(j.at("outputs").at("value") == 96);
  CHECK(j.at("passed").get<bool>());
}

TEST_CASE("cli: identical invocations produce byte-identical output") {
  std::string a, b;
  CHECK(run_cli("sizes --bound 110", &a) == 0);
  CHECK(run_cli("sizes --bound 110", &b) == 0);
  CHECK(a == b);
  CHECK_FALSE(a.empty());

  std::string va, vb;
  CHECK(run_cli("verify --seed 9 --trials 2", &va) == 0);
  CHECK(run_cli("verify --seed 9 --trials 2", &vb) == 0);
  CHECK(va == vb);
}

TEST_CASE("cli: --out writes the same bytes as standard output") {
  const fs::path f = scratch_dir() / "cert_copy.json";
  std::string out;
  CHECK(run_cli("jordan --m 6 --out \"" + f.string() + "\"", &out) == 0);
  CHECK(slurp(f) == out);
}

TEST_CASE("cli: bad input exits 2") {
  std::string out;
  CHECK(run_cli("roots --poly /nonexistent/file.json", &out) == 2);

  const fs::path bad = scratch_dir() / "bad.json";
  spit(bad, "{ not json");
  CHECK(run_cli("roots --poly \"" + bad.string() + "\"", &out) == 2);

  CHECK(run_cli("no-such-subcommand", &out) == 2);
  CHECK(run_cli("jordan", &out) == 2);  // missing required --m
  CHECK(run_cli("sizes --bound 8", &out) == 2);  // below the smallest admissible size
}

TEST_CASE("cli: a failing construction exits 1 and emits a failure certificate") {
  // Real tau on the symmetric branch triple collides conjugate 4-torsion
  // images; the run must fail loudly but still produce a certificate.
  const fs::path lam = scratch_dir() / "lambda_sym.json";
  spit(lam, "{\"ordered\": false, \"points\": [[-1,0],[0,0],[1,0]]}\n");
  std::string out;
  const int code = run_cli("psi-torsion --points \"" + lam.string() + "\" --k 4 --tau 1 0", &out);
  CHECK(code == 1);
  const Json j = Json::parse(out);
  CHECK_FALSE(j.at("passed").get<bool>());
}

TEST_CASE("cli: seed precedence is flag, then environment, then default") {
  std::string out;
  CHECK(run_cli("jordan --m 3", &out, "env -u CML_SEED ") == 0);
  CHECK(Json::parse(out).at("seed") == 42);

  CHECK(run_cli("jordan --m 3", &out, "CML_SEED=777 ") == 0);
  CHECK(Json::parse(out).at("seed") == 777);

  CHECK(run_cli("jordan --m 3 --seed 5", &out, "CML_SEED=777 ") == 0);
  CHECK(Json::parse(out).at("seed") == 5);

  CHECK(run_cli("jordan --m 3", &out, "CML_SEED=notanumber ") == 2);
}

TEST_CASE("cli: --help exits 0") {
  std::string out;
  CHECK(run_cli("--help", &out) == 0);
  CHECK(out.find("verify") != std::string::npos);
}
