#pragma once

#include <string>

#include <json.hpp>

#include "toral/diophantine.hpp"
#include "toral/int_matrix.hpp"
#include "toral/int_poly.hpp"
#include "toral/perturbed.hpp"
#include "toral/pseudo_anosov.hpp"
#include "toral/saturation.hpp"
#include "toral/splitting.hpp"
#include "toral/survey.hpp"

namespace toral {

using Json = nlohmann::ordered_json;

/// Integers that fit in 64 bits are JSON numbers, larger ones decimal strings.
Json to_json(const BigInt& v);
BigInt bigint_from_json(const Json& j);

Json to_json(const IntVector& v);
Json to_json(const IntPoly& p);
Json to_json(const Eigen::VectorXd& v);

/// {"n": N, "rows": [[...]]}
Json matrix_to_json(const IntMatrix& a);
IntMatrix matrix_from_json(const Json& j);

Json to_json(const ClassificationReport& r);
Json to_json(const PASubspace& pa);
Json to_json(const DiophantineReport& r);
Json to_json(const SurveyEntry& e);
Json to_json(const SurveySummary& s);

/// {"matrix": {...}, "shears": [{"i", "j", "cos", "sin", "amplitude"}]}; a shear
/// may give integer "source" and "target" vectors instead of "i" and "j".
Json perturbed_to_json(const PerturbedMap& f);
PerturbedMap perturbed_from_json(const Json& j);

Json to_json(const PLCurve& c);
Json to_json(const SaturationSet& s);
Json to_json(const CoverageReport& r);

Json read_json_file(const std::string& path);
/// Writes text to path, or to stdout when path is empty or "-".
void write_output(const std::string& path, const std::string& text);

/// One row per sample: the point, then the c, s, u, s parameter trail.
std::string saturation_csv(const SaturationSet& s);

}  // namespace toral
