#pragma once

#include <string>

#include "cml/certificate.hpp"
#include "cml/monodromy.hpp"
#include "cml/plane_curves.hpp"
#include "cml/poly.hpp"
#include "cml/poly_maps.hpp"

// JSON wire formats shared by the library, the CLI and the test suite.
// Complex scalars are always explicit [re, im] pairs; nothing here depends on
// locale or map ordering, so serialization is byte-deterministic.

namespace cml {

Json encode_complex(ComplexScalar z);
Json encode_polynomial(const MonicPolynomial& p);
Json encode_configuration(const Configuration& c);
Json encode_resolvent_result(const ResolventResult& r);
Json encode_path(const CoefficientPath& p);
Json encode_ternary_form(const TernaryForm& f);
Json encode_projective_point(const ProjectivePoint& p);
Json encode_curve_point(const CurvePoint& p);
Json encode_permutation(const Permutation& p);
Json encode_tolerances(const TolerancePolicy& tol);
Json encode_certificate(const Certificate& cert);

ComplexScalar decode_complex(const Json& j);
MonicPolynomial decode_polynomial(const Json& j);
Configuration decode_configuration(const Json& j);
CoefficientPath decode_path(const Json& j, const TolerancePolicy& tol = {});
TernaryForm decode_ternary_form(const Json& j);
ProjectivePoint decode_projective_point(const Json& j);
CurvePoint decode_curve_point(const Json& j);
TolerancePolicy decode_tolerances(const Json& j);
Certificate decode_certificate(const Json& j);

// Canonical on-disk rendering: two-space indent plus trailing newline.
std::string to_pretty_string(const Json& j);

}  // namespace cml
