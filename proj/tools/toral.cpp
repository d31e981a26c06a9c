// Command-line front end: analyze, survey, pa, dioph, perturb, curve, saturate.

#include <CLI11.hpp>
#include <cmath>
#include <iostream>
#include <random>
#include <sstream>

#include "toral/diophantine.hpp"
#include "toral/error.hpp"
#include "toral/experiment.hpp"
#include "toral/holonomy.hpp"
#include "toral/json_io.hpp"
#include "toral/saturation.hpp"
#include "toral/survey.hpp"

using namespace toral;

namespace {

struct Common {
    std::uint64_t seed = 1;
    std::string out = "-";
    std::string format = "json";
    unsigned threads = 1;
};

struct Check {
    std::string name;
    double value = 0;
    double tolerance = 0;
    bool pass = true;
};

Json checks_json(const std::vector<Check>& checks) {
    Json out = Json::array();
    for (const auto& c : checks)
        out.push_back(Json{{"name", c.name}, {"value", c.value}, {"tolerance", c.tolerance}, {"pass", c.pass}});
    return out;
}

bool all_pass(const std::vector<Check>& checks) {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

Check at_most(std::string name, double value, double tolerance) {
    return Check{std::move(name), value, tolerance, value <= tolerance};
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

/// CSV body preceded by the echoed configuration as a comment line.
std::string csv_with_config(const Json& cfg, const std::string& body) { return "# " + cfg.dump() + "\n" + body; }

std::string fmt(double v) {
    std::ostringstream s;
    s.precision(17);
    s << v;
    return s.str();
}

Json config(const std::string& command, const Common& c, Json params) {
    Json out{{"command", command}, {"seed", c.seed}, {"format", c.format}};
    for (auto& [k, v] : params.items()) out[k] = v;
    return out;
}

int cmd_analyze(const Common& c, const std::string& input) {
    const IntMatrix a = matrix_from_json(read_json_file(input));
    const ClassificationReport r = classify(a);
    write_output(c.out, dump(Json{{"config", config("analyze", c, {{"input", input}})}, {"matrix", matrix_to_json(a)},
                                  {"report", to_json(r)}}));
    return r.in_hypotheses() ? 0 : static_cast<int>(ErrorKind::hypothesis);
}

int cmd_survey(const Common& c, const SurveyOptions& o) {
    const auto entries = run_survey(o);
    const SurveySummary summary = summarize(entries, o.n);
    const Json params{{"n", o.n}, {"height", o.height}, {"reciprocal_only", o.reciprocal_only}, {"limit", o.limit},
                      {"with_pa", o.with_pa}, {"kmax", o.k_max}};
    if (c.format == "csv") {
        std::ostringstream s;
        s << "index,generator,ergodic,anosov,dim_center,pseudo_anosov,char_poly_irreducible,unitary_factors_even,dedup_key\n";
        for (const auto& e : entries)
            s << e.index << ",\"" << to_json(e.generator).dump() << "\"," << e.report.ergodic << "," << e.report.anosov << ","
              << e.report.dim_center << "," << e.report.pseudo_anosov << "," << e.report.char_poly_irreducible << ","
              << e.report.unitary_factors_even << ",\"" << e.dedup_key << "\"\n";
        write_output(c.out, csv_with_config(config("survey", c, params), s.str()));
        return 0;
    }
    Json list = Json::array();
    for (const auto& e : entries) list.push_back(to_json(e));
    write_output(c.out, dump(Json{{"config", config("survey", c, params)}, {"summary", to_json(summary)}, {"entries", list}}));
    return 0;
}

int cmd_pa(const Common& c, const std::string& input, int k_max, int trials) {
    const IntMatrix a = matrix_from_json(read_json_file(input));
    const ClassificationReport r = classify(a);
    if (!r.ergodic || r.dim_center != 2)
        throw Error("cli-report", ErrorKind::hypothesis, "pa needs an ergodic matrix with a two-dimensional center");
    const bool cond3 = pa_condition3(r.char_poly);
    const Condition1Result cond1 = pa_condition1_sample(a, std::min(k_max, 6), trials, c.seed);
    Json witness = nullptr;
    if (cond1.witness) witness = Json{{"k", cond1.witness->k}, {"v", to_json(cond1.witness->v)}};
    PAOptions po;
    po.k_max = k_max;
    const PASubspace pa = pa_subspace(a, po);
    const Json out{{"config", config("pa", c, {{"input", input}, {"kmax", k_max}, {"samples", trials}})},
                   {"matrix", matrix_to_json(a)},
                   {"pseudo_anosov", r.pseudo_anosov},
                   {"condition1", {{"holds", cond1.holds}, {"vectors_tested", cond1.vectors_tested}, {"witness", witness}}},
                   {"condition3", cond3},
                   {"conditions_agree", cond1.holds == cond3},
                   {"pa", to_json(pa)}};
    write_output(c.out, dump(out));
    return cond1.holds == cond3 ? 0 : static_cast<int>(ErrorKind::invariant);
}

int cmd_dioph(const Common& c, const std::string& input, double radius, int k_max) {
    const IntMatrix a = matrix_from_json(read_json_file(input));
    const Splitting s = compute_splitting(a);
    const AdaptedNorm an = adapted_norm(s);
    PAOptions po;
    po.k_max = k_max;
    const PASubspace pa = pa_subspace(a, po);
    ScanOptions so;
    so.keep_points = c.format == "csv";
    const DiophantineReport rep = center_norm_minimum(pa, s, an, radius, so);
    if (c.format == "csv") {
        std::ostringstream out;
        out << "norm,center_norm\n";
        for (std::size_t i = 0; i < rep.scan.size(); ++i) out << fmt(rep.scan.norm[i]) << "," << fmt(rep.scan.center_norm[i]) << "\n";
        write_output(c.out, csv_with_config(config("dioph", c, {{"input", input}, {"radius", radius}, {"kmax", k_max}}), out.str()));
        return rep.scan.size() == count_ball(pa.lambda, s, an, radius) ? 0 : static_cast<int>(ErrorKind::invariant);
    }
    const std::size_t counted = count_ball(pa.lambda, s, an, radius);
    Json body = to_json(rep);
    body["count_ball"] = counted;
    write_output(c.out, dump(Json{{"config", config("dioph", c, {{"input", input}, {"radius", radius}, {"kmax", k_max}})},
                                  {"pa", to_json(pa)}, {"report", body}}));
    return rep.point_count == counted && rep.c_prime_empirical > 0 ? 0 : static_cast<int>(ErrorKind::invariant);
}

struct PerturbParams {
    std::string input, map;
    std::vector<double> eps{0.1, 0.01, 0.001};
    std::size_t samples = 200;
    double radius = 100;
};

Json perturb_one(const Common& c, const PerturbedMap& f, const Splitting& s, const AdaptedNorm& an, const PerturbParams& p,
                 double eps, const std::string& label, std::vector<Check>& checks, std::ostringstream& csv) {
    const Foliations fol(f, s, an);
    const std::string tag = label + " ";
    const KappaEstimate kappa = estimate_kappa(fol, 50, 1.0, c.seed);
    const auto ns = sample_lattice_vectors(s, an, p.radius, 12, c.seed);
    const TnLogFit fit = tn_log_fit(fol, ns, 4, derive_seed(c.seed, 1));
    const HolonomyProbe probe = holonomy_lipschitz_probe(fol, 4, 4, 6, derive_seed(c.seed, 2));
    Eigen::VectorXd x = Eigen::VectorXd::Zero(s.dim());
    x(0) = 0.3;
    Json out{{"eps", eps},
             {"c1_size", f.c1_size()},
             {"perturbation_size", fol.perturbation_size()},
             {"kappa_emp", kappa.kappa},
             {"tn_log_c", fit.c},
             {"tn_log_exponent", fit.exponent},
             {"c_emp", probe.c_emp},
             {"beta_emp", probe.beta_emp},
             {"holonomy_sup_lipschitz", probe.sup_lipschitz}};
    for (const auto& row : fit.rows) csv << fmt(eps) << "," << fmt(row.norm) << "," << fmt(row.deviation) << "\n";
    Json rows = Json::array();
    for (const auto& row : fit.rows) rows.push_back(Json{{"n", to_json(row.n)}, {"norm", row.norm}, {"deviation", row.deviation}});
    out["tn_rows"] = rows;

    if (f.is_linear()) {
        double g = 0;
        for (Flavor fl : {Flavor::s, Flavor::u, Flavor::c, Flavor::cs, Flavor::cu}) {
            if (fol.param_dim(fl) == 0) continue;
            const GraphPatch patch = graph_transform(fol, fl, x);
            for (const auto& v : patch.values) g = std::max(g, v.cwiseAbs().maxCoeff());
        }
        checks.push_back(at_most(tag + "graph transform g = 0", g, 1e-8));
        double tn = 0;
        for (const auto& row : fit.rows) tn = std::max(tn, row.deviation);
        checks.push_back(at_most(tag + "T_n(x) = x + n^c", tn, 1e-8));
        double phi = 0;
        for (std::size_t k = 0; k < 50; ++k) {
            const Eigen::VectorXd v = sample_adapted_ball(s, an, 2, derive_seed(c.seed, 100 + k));
            phi = std::max(phi, (phi_map(fol, x, v) - x - v).cwiseAbs().maxCoeff());
        }
        checks.push_back(at_most(tag + "Phi_x = x + id", phi, 1e-8));
        if (ns.size() >= 2)
            checks.push_back(at_most(tag + "commutation defect", commutation_defect(fol, ns[0], ns[1], 4, c.seed), 1e-8));
    } else {
        const PhiBounds pb = phi_bounds(fol, x, kappa.kappa, p.samples, 1, derive_seed(c.seed, 3));
        out["phi_forward_ratio"] = pb.forward_ratio;
        out["phi_inverse_ratio"] = pb.inverse_ratio;
        checks.push_back(at_most(tag + "kappa_emp < 1", kappa.kappa, 1));
        checks.push_back(at_most(tag + "Phi close to identity", pb.forward_ratio, 1));
        checks.push_back(at_most(tag + "Phi inverse bound", pb.inverse_ratio, 1));
    }
    return out;
}

int cmd_perturb(const Common& c, const PerturbParams& p) {
    if (p.input.empty() == p.map.empty()) throw Error("cli-report", ErrorKind::input, "give exactly one of a matrix file or --map");
    std::vector<std::pair<double, PerturbedMap>> maps;
    if (!p.map.empty()) {
        maps.emplace_back(std::nan(""), perturbed_from_json(read_json_file(p.map)));
    } else {
        const IntMatrix a = matrix_from_json(read_json_file(p.input));
        for (double e : p.eps) maps.emplace_back(e, standard_perturbation(a, e));
    }
    const IntMatrix& a = maps.front().second.matrix();
    const ClassificationReport r = classify(a);
    if (!r.in_hypotheses() || r.dim_center == 0)
        throw Error("cli-report", ErrorKind::hypothesis, "perturb needs an ergodic matrix with a two-dimensional center");
    const Splitting s = compute_splitting(a);
    const AdaptedNorm an = adapted_norm(s);
    std::vector<Check> checks;
    std::ostringstream csv;
    csv << "eps,norm,deviation\n";
    Json runs = Json::array();
    for (const auto& [eps, f] : maps) {
        Json run = perturb_one(c, f, s, an, p, std::isnan(eps) ? f.c1_size() : eps,
                               std::isnan(eps) ? "map" : "eps=" + fmt(eps), checks, csv);
        if (std::isnan(eps)) {
            run["eps"] = nullptr;
            run["map"] = perturbed_to_json(f);
        }
        runs.push_back(run);
    }
    Json eps_list = Json::array();
    for (double e : p.eps) eps_list.push_back(e);
    const Json params{{"input", p.input.empty() ? p.map : p.input}, {"eps", p.map.empty() ? eps_list : Json(nullptr)},
                      {"samples", p.samples}, {"radius", p.radius}};
    if (c.format == "csv") {
        write_output(c.out, csv_with_config(config("perturb", c, params), csv.str()));
    } else {
        write_output(c.out, dump(Json{{"config", config("perturb", c, params)}, {"runs", runs}, {"checks", checks_json(checks)},
                                      {"pass", all_pass(checks)}}));
    }
    return all_pass(checks) ? 0 : static_cast<int>(ErrorKind::invariant);
}

int cmd_curve(const Common& c, const std::string& input, double eps, double radius, int k_max) {
    const IntMatrix a = matrix_from_json(read_json_file(input));
    const Splitting s = compute_splitting(a);
    if (s.dim_c != 2) throw Error("cli-report", ErrorKind::hypothesis, "curve needs a two-dimensional center");
    const AdaptedNorm an = adapted_norm(s);
    PAOptions po;
    po.k_max = k_max;
    const PASubspace pa = pa_subspace(a, po);
    std::mt19937_64 rng(c.seed);
    std::uniform_real_distribution<double> unit(0, 1), sym(-3, 3);
    Eigen::VectorXd x(s.dim());
    for (int i = 0; i < s.dim(); ++i) x(i) = unit(rng);
    const Eigen::VectorXd y = x + s.basis_c * Eigen::Vector2d(sym(rng), sym(rng));
    const PLCurve curve = winding_curve(x, y, pa.lambda, eps, radius, s, an);
    const auto pts = curve.sample(8);
    std::vector<Check> checks;
    double lattice = 0, cone = 0, inside = 0;
    for (std::size_t i = 0; i < curve.segments(); ++i) {
        const Eigen::VectorXd step = curve.vertices[i + 1] - curve.vertices[i];
        const auto& n = curve.generators[static_cast<std::size_t>(curve.generator_index[i])];
        lattice = std::max(lattice, (step - to_eigen(n)).cwiseAbs().maxCoeff());
        const Eigen::VectorXd off = curve.vertices[i] - x;
        lattice = std::max(lattice, (off - off.array().round().matrix()).cwiseAbs().maxCoeff());
    }
    for (const auto& z : pts) {
        cone += cone_member(s, an, z, y, eps) ? 0 : 1;
        inside += an(s, z - y) > radius ? 0 : 1;
    }
    const int winding = winding_number(pts, y, s);
    checks.push_back(at_most("vertices in x + Gamma with generator steps", lattice, 1e-9));
    checks.push_back(at_most("samples outside the cone", cone, 0));
    checks.push_back(at_most("samples within distance R", inside, 0));
    checks.push_back(Check{"winding number is +-1", static_cast<double>(winding), 1, std::abs(winding) == 1});
    const Json params{{"input", input}, {"eps", eps}, {"radius", radius}, {"kmax", k_max}};
    write_output(c.out, dump(Json{{"config", config("curve", c, params)}, {"x", to_json(x)}, {"y", to_json(y)},
                                  {"curve", to_json(curve)}, {"winding", winding}, {"checks", checks_json(checks)},
                                  {"pass", all_pass(checks)}}));
    return all_pass(checks) ? 0 : static_cast<int>(ErrorKind::invariant);
}

int cmd_saturate(const Common& c, const std::string& input, double eps, double amplitude, int per_stage, int k_max) {
    const IntMatrix a = matrix_from_json(read_json_file(input));
    const Splitting s = compute_splitting(a);
    const AdaptedNorm an = adapted_norm(s);
    const Foliations fol(standard_perturbation(a, amplitude), s, an);
    PAOptions po;
    po.k_max = k_max;
    const PASubspace pa = pa_subspace(a, po);
    SaturationOptions so;
    so.samples_per_stage = {per_stage, per_stage, per_stage, per_stage};
    so.seed = c.seed;
    Eigen::VectorXd x = Eigen::VectorXd::Zero(s.dim());
    x(0) = 0.3;
    const SaturationSet set = build_saturation_set(fol, x, eps, so);
    const Json params{{"input", input}, {"eps", eps}, {"amplitude", amplitude}, {"samples", per_stage}, {"kmax", k_max}};
    if (c.format == "csv") {
        write_output(c.out, csv_with_config(config("saturate", c, params), saturation_csv(set)));
        return 0;
    }
    const double kappa = estimate_kappa(fol, 50, 1.0, c.seed).kappa;
    const NEpsilon ne = fol.map().is_linear() ? find_n_epsilon_linear(s, an, pa.lambda, eps) : find_n_epsilon(fol, set, pa.lambda, kappa);
    write_output(c.out, dump(Json{{"config", config("saturate", c, params)},
                                  {"kappa_emp", kappa},
                                  {"n_eps", {{"n", to_json(ne.n)}, {"norm", ne.norm}, {"bound", ne.bound},
                                             {"merge_tolerance", ne.merge_tolerance}, {"candidates", ne.candidates}}},
                                  {"set", to_json(set)}}));
    return ne.norm <= ne.bound ? 0 : static_cast<int>(ErrorKind::invariant);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Partially hyperbolic toral automorphisms: classification, pseudo-Anosov subspaces, Diophantine scans and perturbations"};
    app.require_subcommand(1);
    Common common;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--seed", common.seed, "experiment seed");
        sub->add_option("--out", common.out, "output file (- for stdout)");
        sub->add_option("--format", common.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
        sub->add_option("--threads", common.threads, "worker threads (0 = all cores)");
    };

    std::string input;
    auto* analyze = app.add_subcommand("analyze", "classify a matrix");
    analyze->add_option("matrix", input, "matrix JSON")->required();
    add_common(analyze);

    SurveyOptions survey_options;
    auto* survey = app.add_subcommand("survey", "classify companion matrices of all small polynomials");
    survey->add_option("--n", survey_options.n, "degree")->check(CLI::Range(2, 10));
    survey->add_option("--height", survey_options.height, "coefficient bound")->check(CLI::Range(0, 5));
    survey->add_option("--limit", survey_options.limit, "maximum number of polynomials (0 = all)");
    survey->add_flag("--reciprocal", survey_options.reciprocal_only, "palindromic polynomials only");
    survey->add_flag("--with-pa", survey_options.with_pa, "compute pseudo-Anosov subspaces");
    survey->add_option("--kmax", survey_options.k_max, "largest power k");
    add_common(survey);

    int k_max = 24, trials = 100;
    auto* pa = app.add_subcommand("pa", "pseudo-Anosov subspace and conditions");
    pa->add_option("matrix", input, "matrix JSON")->required();
    pa->add_option("--kmax", k_max, "largest power k");
    pa->add_option("--samples", trials, "sampled vectors per power for condition 1");
    add_common(pa);

    double radius = 50;
    auto* dioph = app.add_subcommand("dioph", "center-norm minima over a lattice ball");
    dioph->add_option("matrix", input, "matrix JSON")->required();
    dioph->add_option("--radius", radius, "ball radius M");
    dioph->add_option("--kmax", k_max, "largest power k");
    add_common(dioph);

    PerturbParams perturb_params;
    auto* perturb = app.add_subcommand("perturb", "leaves, holonomies and Phi bounds of shear perturbations");
    perturb->add_option("matrix", perturb_params.input, "matrix JSON");
    perturb->add_option("--map", perturb_params.map, "perturbed map JSON");
    perturb->add_option("--eps", perturb_params.eps, "shear amplitudes")->delimiter(',');
    perturb->add_option("--samples", perturb_params.samples, "Phi bound samples");
    perturb->add_option("--radius", perturb_params.radius, "largest |n| for T_n");
    add_common(perturb);

    double eps = 0.3, curve_radius = 10;
    auto* curve = app.add_subcommand("curve", "piecewise linear curve winding around E^su");
    curve->add_option("matrix", input, "matrix JSON")->required();
    curve->add_option("--eps", eps, "cone aperture");
    curve->add_option("--radius", curve_radius, "distance R from y");
    curve->add_option("--kmax", k_max, "largest power k");
    add_common(curve);

    double sat_eps = 0.35, amplitude = 0.01;
    int per_stage = 6;
    auto* saturate = app.add_subcommand("saturate", "saturation set cloud and the pigeonhole vector");
    saturate->add_option("matrix", input, "matrix JSON")->required();
    saturate->add_option("--eps", sat_eps, "saturation parameter");
    saturate->add_option("--amplitude", amplitude, "shear amplitude");
    saturate->add_option("--samples", per_stage, "samples per stage and parent");
    saturate->add_option("--kmax", k_max, "largest power k");
    add_common(saturate);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return static_cast<int>(ErrorKind::input);
    }

    thread_setting() = common.threads;
    try {
        if (*analyze) return cmd_analyze(common, input);
        if (*survey) return cmd_survey(common, survey_options);
        if (*pa) return cmd_pa(common, input, k_max, trials);
        if (*dioph) return cmd_dioph(common, input, radius, k_max);
        if (*perturb) return cmd_perturb(common, perturb_params);
        if (*curve) return cmd_curve(common, input, eps, curve_radius, k_max);
        if (*saturate) return cmd_saturate(common, input, sat_eps, amplitude, per_stage, k_max);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.exit_code();
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return static_cast<int>(ErrorKind::input);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return static_cast<int>(ErrorKind::invariant);
    }
    return 0;
}
