#include "toral/json_io.hpp"

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "toral/error.hpp"

namespace toral {
namespace {

const char* kModule = "cli-report";

Json factor_json(const FactorReport& f) {
    return Json{{"poly", to_json(f.poly)},         {"multiplicity", f.multiplicity}, {"irreducible", f.irreducible},
                {"reciprocal", f.reciprocal},      {"cyclotomic", f.cyclotomic},     {"inside", f.inside},
                {"unitary", f.unitary},            {"outside", f.outside},           {"salem", f.salem}};
}

std::vector<double> doubles_from(const Json& j, const char* key) {
    std::vector<double> out;
    if (!j.contains(key)) return out;
    if (!j.at(key).is_array()) throw Error(kModule, ErrorKind::input, std::string(key) + " must be an array");
    for (const auto& v : j.at(key)) out.push_back(v.get<double>());
    return out;
}

IntVector int_vector_from(const Json& j) {
    if (!j.is_array()) throw Error(kModule, ErrorKind::input, "expected an integer array");
    IntVector v;
    for (const auto& x : j) v.push_back(bigint_from_json(x));
    return v;
}

}  // namespace

Json to_json(const BigInt& v) {
    if (v.fits_slong_p()) return Json(static_cast<std::int64_t>(v.get_si()));
    return Json(v.get_str());
}

BigInt bigint_from_json(const Json& j) {
    if (j.is_number_integer()) return BigInt(std::to_string(j.get<std::int64_t>()));
    if (j.is_string()) {
        BigInt v;
        if (v.set_str(j.get<std::string>(), 10) != 0) throw Error(kModule, ErrorKind::input, "bad integer " + j.get<std::string>());
        return v;
    }
    throw Error(kModule, ErrorKind::input, "expected an integer, got " + j.dump());
}

Json to_json(const IntVector& v) {
    Json out = Json::array();
    for (const auto& x : v) out.push_back(to_json(x));
    return out;
}

Json to_json(const IntPoly& p) { return to_json(p.coeffs()); }

Json to_json(const Eigen::VectorXd& v) {
    Json out = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

Json matrix_to_json(const IntMatrix& a) {
    Json rows = Json::array();
    for (const auto& r : a.row_list()) rows.push_back(to_json(r));
    return Json{{"n", a.rows()}, {"rows", rows}};
}

IntMatrix matrix_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("rows") || !j.at("rows").is_array())
        throw Error(kModule, ErrorKind::input, "matrix JSON needs a \"rows\" array");
    std::vector<IntVector> rows;
    for (const auto& r : j.at("rows")) rows.push_back(int_vector_from(r));
    if (rows.empty()) throw Error(kModule, ErrorKind::input, "matrix has no rows");
    for (const auto& r : rows)
        if (r.size() != rows.size()) throw Error(kModule, ErrorKind::input, "matrix must be square");
    if (j.contains("n") && j.at("n").get<std::size_t>() != rows.size())
        throw Error(kModule, ErrorKind::input, "\"n\" does not match the number of rows");
    return IntMatrix::from_rows(rows);
}

Json to_json(const ClassificationReport& r) {
    Json factors = Json::array(), salem = Json::array();
    for (const auto& f : r.factors) {
        factors.push_back(factor_json(f));
        salem.push_back(f.salem);
    }
    return Json{{"char_poly", to_json(r.char_poly)},
                {"ergodic", r.ergodic},
                {"anosov", r.anosov},
                {"dim_stable", r.dim_stable},
                {"dim_center", r.dim_center},
                {"dim_unstable", r.dim_unstable},
                {"factors", factors},
                {"salem_flags", salem},
                {"char_poly_irreducible", r.char_poly_irreducible},
                {"pseudo_anosov", r.pseudo_anosov},
                {"unitary_factors_even", r.unitary_factors_even},
                {"in_hypotheses", r.in_hypotheses()}};
}

Json to_json(const PASubspace& pa) {
    Json basis = Json::array();
    for (const auto& b : pa.lambda.basis()) basis.push_back(to_json(b));
    return Json{{"k", pa.k},
                {"dim_x", pa.dim_x},
                {"p_k_coeffs", to_json(pa.p_k)},
                {"lambda_basis_hnf", basis},
                {"d_by_k", pa.d_by_k},
                {"center_residual", pa.center_residual}};
}

Json to_json(const DiophantineReport& r) {
    Json witnesses = Json::array();
    for (const auto& w : r.witnesses)
        witnesses.push_back(Json{{"n", to_json(w.n)}, {"norm", w.norm}, {"center_norm", w.center_norm}, {"ratio", w.ratio}});
    return Json{{"r", r.r},
                {"search_radius", r.search_radius},
                {"point_count", r.point_count},
                {"c_prime_empirical", r.c_prime_empirical},
                {"slope", r.slope},
                {"slope_points", r.slope_points},
                {"witnesses", witnesses}};
}

Json to_json(const SurveyEntry& e) {
    Json out{{"index", e.index}, {"generator", to_json(e.generator)}, {"dedup_key", e.dedup_key}, {"report", to_json(e.report)}};
    if (e.pa) out["pa"] = to_json(*e.pa);
    if (!e.pa_error.empty()) out["pa_error"] = e.pa_error;
    return out;
}

Json to_json(const SurveySummary& s) {
    Json by_dim = Json::object();
    for (const auto& [d, c] : s.by_center_dim) by_dim[std::to_string(d)] = c;
    return Json{{"total", s.total},
                {"ergodic", s.ergodic},
                {"anosov", s.anosov},
                {"pseudo_anosov", s.pseudo_anosov},
                {"reducible_center", s.reducible_center},
                {"duplicates", s.duplicates},
                {"by_center_dim", by_dim},
                {"center_dim_violations", s.center_dim_violations},
                {"even_degree_violations", s.even_degree_violations}};
}

Json perturbed_to_json(const PerturbedMap& f) {
    Json shears = Json::array();
    for (const auto& s : f.shears()) {
        Json j;
        const auto [i, k] = s.coordinate_indices();
        if (i >= 0) {
            j["i"] = i;
            j["j"] = k;
        } else {
            j["source"] = to_json(s.source);
            j["target"] = to_json(s.target);
        }
        j["cos"] = s.profile.cos_coeffs;
        j["sin"] = s.profile.sin_coeffs;
        j["amplitude"] = s.amplitude;
        shears.push_back(j);
    }
    return Json{{"matrix", matrix_to_json(f.matrix())}, {"shears", shears}};
}

PerturbedMap perturbed_from_json(const Json& j) {
    if (!j.is_object() || !j.contains("matrix")) throw Error(kModule, ErrorKind::input, "map JSON needs a \"matrix\"");
    IntMatrix a = matrix_from_json(j.at("matrix"));
    std::vector<Shear> shears;
    if (j.contains("shears")) {
        for (const auto& s : j.at("shears")) {
            TrigProfile profile{doubles_from(s, "cos"), doubles_from(s, "sin")};
            const double amplitude = s.value("amplitude", 0.0);
            if (s.contains("source")) {
                shears.push_back(Shear{int_vector_from(s.at("source")), int_vector_from(s.at("target")), profile, amplitude});
            } else {
                const int i = s.at("i").get<int>(), k = s.at("j").get<int>();
                if (i < 0 || k < 0 || i >= static_cast<int>(a.rows()) || k >= static_cast<int>(a.rows()) || i == k)
                    throw Error(kModule, ErrorKind::input, "shear indices out of range");
                shears.push_back(Shear::coordinate(a.rows(), static_cast<std::size_t>(i), static_cast<std::size_t>(k), profile, amplitude));
            }
        }
    }
    return PerturbedMap(std::move(a), std::move(shears));
}

Json to_json(const PLCurve& c) {
    Json corners = Json::array(), generators = Json::array(), vertices = Json::array();
    for (const auto& v : c.corners) corners.push_back(to_json(v));
    for (const auto& n : c.generators) generators.push_back(to_json(n));
    for (const auto& v : c.vertices) vertices.push_back(to_json(v));
    return Json{{"base", to_json(c.base)},
                {"k", c.k},
                {"d_gamma", c.d_gamma},
                {"circumradius", c.circumradius},
                {"retries", c.retries},
                {"corners", corners},
                {"generators", generators},
                {"generator_index", c.generator_index},
                {"vertices", vertices}};
}

Json to_json(const SaturationSet& s) {
    Json samples = Json::array();
    for (const auto& p : s.samples) {
        Json trail = Json::array();
        for (const auto& t : p.trail) trail.push_back(to_json(t));
        samples.push_back(Json{{"point", to_json(p.point)}, {"trail", trail}});
    }
    return Json{{"base", to_json(s.base)}, {"eps", s.eps},         {"length", s.length},
                {"radii", s.radii},        {"counts", s.counts},   {"samples", samples}};
}

Json to_json(const CoverageReport& r) {
    return Json{{"pass", r.pass},
                {"samples", r.samples},
                {"failures", r.failures},
                {"worst_ratio", std::isfinite(r.worst_ratio) ? Json(r.worst_ratio) : Json(nullptr)},
                {"worst_point", to_json(r.worst_point)},
                {"worst_params", to_json(r.worst_params)}};
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(kModule, ErrorKind::input, "cannot open " + path);
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw Error(kModule, ErrorKind::input, path + ": " + e.what());
    }
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(kModule, ErrorKind::input, "cannot write " + path);
    out << text;
}

std::string saturation_csv(const SaturationSet& s) {
    std::ostringstream out;
    out << std::setprecision(17);
    const int n = static_cast<int>(s.base.size());
    for (int i = 0; i < n; ++i) out << (i ? "," : "") << "x" << i;
    const char* stages[4] = {"c", "s", "u", "s2"};
    if (!s.samples.empty())
        for (int k = 0; k < 4; ++k)
            for (Eigen::Index i = 0; i < s.samples.front().trail[static_cast<std::size_t>(k)].size(); ++i)
                out << "," << stages[k] << i;
    out << "\n";
    for (const auto& p : s.samples) {
        for (int i = 0; i < n; ++i) out << (i ? "," : "") << p.point(i);
        for (const auto& t : p.trail)
            for (Eigen::Index i = 0; i < t.size(); ++i) out << "," << t(i);
        out << "\n";
    }
    return out.str();
}

}  // namespace toral
