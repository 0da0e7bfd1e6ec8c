#include "cml/json_io.hpp"

namespace cml {

namespace {

void require(bool cond, const std::string& what) {
  if (!cond) throw Error(ErrorKind::InvalidInput, "malformed JSON: " + what);
}

double number_at(const Json& j, const char* what) {
  require(j.is_number(), std::string(what) + " must be a number");
  return j.get<double>();
}

}  // namespace

Json encode_complex(ComplexScalar z) { return Json::array({z.real(), z.imag()}); }

ComplexScalar decode_complex(const Json& j) {
  require(j.is_array() && j.size() == 2, "complex scalar must be [re, im]");
  return ComplexScalar(number_at(j[0], "re"), number_at(j[1], "im"));
}

Json encode_polynomial(const MonicPolynomial& p) {
  Json coeffs = Json::array();
  for (const auto& c : p.coeffs()) coeffs.push_back(encode_complex(c));
  Json out = Json::object();
  out["degree"] = p.degree();
  out["coeffs"] = std::move(coeffs);
  return out;
}

MonicPolynomial decode_polynomial(const Json& j) {
  require(j.is_object() && j.contains("degree") && j.contains("coeffs"),
          "polynomial needs degree and coeffs");
  const auto degree = j.at("degree");
  require(degree.is_number_integer(), "degree must be an integer");
  const auto& coeffs = j.at("coeffs");
  require(coeffs.is_array(), "coeffs must be an array");
  require(static_cast<int>(coeffs.size()) == degree.get<int>(),
          "degree must equal the number of coefficients");
  std::vector<ComplexScalar> a;
  a.reserve(coeffs.size());
  for (const auto& c : coeffs) a.push_back(decode_complex(c));
  return MonicPolynomial(std::move(a));
}

Json encode_configuration(const Configuration& c) {
  Json pts = Json::array();
  for (const auto& z : c.points()) pts.push_back(encode_complex(z));
  Json out = Json::object();
  out["ordered"] = c.ordered();
  out["points"] = std::move(pts);
  return out;
}

Configuration decode_configuration(const Json& j) {
  require(j.is_object() && j.contains("ordered") && j.contains("points"),
          "configuration needs ordered and points");
  require(j.at("ordered").is_boolean(), "ordered must be a boolean");
  const auto& pts = j.at("points");
  require(pts.is_array() && !pts.empty(), "points must be a nonempty array");
  std::vector<ComplexScalar> out;
  out.reserve(pts.size());
  for (const auto& p : pts) out.push_back(decode_complex(p));
  return Configuration(std::move(out), j.at("ordered").get<bool>());
}

Json encode_resolvent_result(const ResolventResult& r) {
  Json out = encode_polynomial(r.output);
  out["b_values"] = encode_configuration(r.b_values);
  out["input_discriminant"] = encode_complex(r.input_discriminant);
  return out;
}

Json encode_path(const CoefficientPath& p) {
  Json wps = Json::array();
  for (const auto& w : p.waypoints()) wps.push_back(encode_polynomial(w));
  Json out = Json::object();
  out["degree"] = p.degree();
  out["waypoints"] = std::move(wps);
  out["samples_per_segment"] = p.samples_per_segment();
  return out;
}

CoefficientPath decode_path(const Json& j, const TolerancePolicy& tol) {
  require(j.is_object() && j.contains("degree") && j.contains("waypoints") &&
              j.contains("samples_per_segment"),
          "path needs degree, waypoints, samples_per_segment");
  const auto& wps = j.at("waypoints");
  require(wps.is_array(), "waypoints must be an array");
  std::vector<MonicPolynomial> out;
  out.reserve(wps.size());
  for (const auto& w : wps) out.push_back(decode_polynomial(w));
  require(j.at("degree").is_number_integer(), "degree must be an integer");
  for (const auto& w : out)
    require(w.degree() == j.at("degree").get<int>(), "waypoint degree mismatch");
  require(j.at("samples_per_segment").is_number_integer(),
          "samples_per_segment must be an integer");
  return CoefficientPath(std::move(out), j.at("samples_per_segment").get<int>(), tol);
}

Json encode_ternary_form(const TernaryForm& f) {
  Json terms = Json::array();
  for (const auto& t : f.terms()) {
    Json term = Json::object();
    term["exp"] = Json::array({t.exp[0], t.exp[1], t.exp[2]});
    term["c"] = encode_complex(t.c);
    terms.push_back(std::move(term));
  }
  Json out = Json::object();
  out["degree"] = f.degree();
  out["terms"] = std::move(terms);
  return out;
}

TernaryForm decode_ternary_form(const Json& j) {
  require(j.is_object() && j.contains("degree") && j.contains("terms"),
          "form needs degree and terms");
  require(j.at("degree").is_number_integer(), "degree must be an integer");
  const auto& terms = j.at("terms");
  require(terms.is_array(), "terms must be an array");
  std::vector<TernaryForm::Term> out;
  out.reserve(terms.size());
  for (const auto& t : terms) {
    require(t.is_object() && t.contains("exp") && t.contains("c"), "term needs exp and c");
    const auto& e = t.at("exp");
    require(e.is_array() && e.size() == 3, "exp must be a triple");
    TernaryForm::Term term;
    for (int i = 0; i < 3; ++i) {
      require(e[static_cast<std::size_t>(i)].is_number_integer(), "exponents must be integers");
      term.exp[static_cast<std::size_t>(i)] = e[static_cast<std::size_t>(i)].get<int>();
    }
    term.c = decode_complex(t.at("c"));
    out.push_back(term);
  }
  return TernaryForm(j.at("degree").get<int>(), std::move(out));
}

Json encode_projective_point(const ProjectivePoint& p) {
  return Json::array({encode_complex(p.coords[0]), encode_complex(p.coords[1]),
                      encode_complex(p.coords[2])});
}

ProjectivePoint decode_projective_point(const Json& j) {
  require(j.is_array() && j.size() == 3, "projective point must be a coordinate triple");
  return ProjectivePoint::from(decode_complex(j[0]), decode_complex(j[1]), decode_complex(j[2]));
}

Json encode_curve_point(const CurvePoint& p) {
  Json out = Json::object();
  out["inf"] = p.inf;
  out["x"] = encode_complex(p.inf ? ComplexScalar(0.0) : p.x);
  out["y"] = encode_complex(p.inf ? ComplexScalar(0.0) : p.y);
  return out;
}

CurvePoint decode_curve_point(const Json& j) {
  require(j.is_object() && j.contains("inf") && j.contains("x") && j.contains("y"),
          "curve point needs inf, x, y");
  require(j.at("inf").is_boolean(), "inf must be a boolean");
  if (j.at("inf").get<bool>()) return CurvePoint::infinity();
  return CurvePoint::affine(decode_complex(j.at("x")), decode_complex(j.at("y")));
}

Json encode_permutation(const Permutation& p) {
  Json images = Json::array();
  for (const int v : p.images()) images.push_back(v);
  Json out = Json::object();
  out["images"] = std::move(images);
  out["cycles"] = p.cycle_string();
  return out;
}

Json encode_tolerances(const TolerancePolicy& tol) {
  Json out = Json::object();
  out["root_tol"] = tol.root_tol;
  out["distinct_tol"] = tol.distinct_tol;
  out["max_iterations"] = tol.max_iterations;
  return out;
}

TolerancePolicy decode_tolerances(const Json& j) {
  require(j.is_object() && j.contains("root_tol") && j.contains("distinct_tol") &&
              j.contains("max_iterations"),
          "tolerances need root_tol, distinct_tol, max_iterations");
  TolerancePolicy tol;
  tol.root_tol = number_at(j.at("root_tol"), "root_tol");
  tol.distinct_tol = number_at(j.at("distinct_tol"), "distinct_tol");
  require(j.at("max_iterations").is_number_integer(), "max_iterations must be an integer");
  tol.max_iterations = j.at("max_iterations").get<int>();
  tol.validate();
  return tol;
}

Json encode_certificate(const Certificate& cert) {
  Json checks = Json::array();
  for (const auto& c : cert.checks) {
    Json check = Json::object();
    check["name"] = c.name;
    check["passed"] = c.passed;
    check["detail"] = c.detail;
    check["measured"] = c.measured;
    checks.push_back(std::move(check));
  }
  Json out = Json::object();
  out["construction"] = cert.construction;
  out["inputs"] = cert.inputs;
  out["outputs"] = cert.outputs;
  out["checks"] = std::move(checks);
  out["tolerances"] = encode_tolerances(cert.tolerances);
  out["seed"] = cert.seed;
  out["version"] = cert.version;
  out["passed"] = cert.passed();
  return out;
}

Certificate decode_certificate(const Json& j) {
  require(j.is_object() && j.contains("construction") && j.contains("inputs") &&
              j.contains("outputs") && j.contains("checks") && j.contains("tolerances") &&
              j.contains("seed") && j.contains("version"),
          "certificate is missing a field");
  Certificate cert;
  cert.construction = j.at("construction").get<std::string>();
  cert.inputs = j.at("inputs");
  cert.outputs = j.at("outputs");
  for (const auto& c : j.at("checks")) {
    require(c.contains("name") && c.contains("passed") && c.contains("detail") &&
                c.contains("measured"),
            "check is missing a field");
    cert.checks.push_back({c.at("name").get<std::string>(), c.at("passed").get<bool>(),
                           c.at("detail").get<std::string>(), number_at(c.at("measured"), "measured")});
  }
  cert.tolerances = decode_tolerances(j.at("tolerances"));
  cert.seed = j.at("seed").get<std::uint64_t>();
  cert.version = j.at("version").get<std::string>();
  return cert;
}

std::string to_pretty_string(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace cml
