#include "toral/survey.hpp"

#include <set>
#include <sstream>

#include "toral/error.hpp"
#include "toral/experiment.hpp"

namespace toral {

std::vector<IntPoly> survey_polynomials(int n, int h, bool reciprocal_only, std::size_t limit) {
    if (n < 1 || n > 10 || h < 0 || h > 5) throw Error("cli-report", ErrorKind::input, "survey needs 1 <= N <= 10 and 0 <= H <= 5");
    std::vector<IntPoly> out;
    // free coefficients: c_1..c_{n-1}, or c_1..c_{floor(n/2)} for palindromes
    const int free = reciprocal_only ? n / 2 : n - 1;
    std::vector<long> c(static_cast<std::size_t>(free), -h);
    for (long constant : reciprocal_only ? std::vector<long>{1} : std::vector<long>{-1, 1}) {
        std::fill(c.begin(), c.end(), -h);
        for (;;) {
            std::vector<BigInt> coeffs(static_cast<std::size_t>(n) + 1, BigInt(0));
            coeffs[0] = constant;
            coeffs[static_cast<std::size_t>(n)] = 1;
            for (int i = 1; i <= free; ++i) {
                coeffs[static_cast<std::size_t>(i)] = c[static_cast<std::size_t>(i - 1)];
                if (reciprocal_only) coeffs[static_cast<std::size_t>(n - i)] = c[static_cast<std::size_t>(i - 1)];
            }
            out.emplace_back(std::move(coeffs));
            if (limit && out.size() >= limit) return out;
            int i = 0;
            while (i < free && c[static_cast<std::size_t>(i)] == h) c[static_cast<std::size_t>(i++)] = -h;
            if (i == free) break;
            ++c[static_cast<std::size_t>(i)];
        }
    }
    return out;
}

std::string conjugacy_key(const IntMatrix& a) {
    std::ostringstream os;
    os << char_poly(a).to_string() << " | snf(A-I):";
    for (const auto& f : snf(a - IntMatrix::identity(a.rows())).invariant_factors()) os << ' ' << f.get_str();
    return os.str();
}

std::vector<SurveyEntry> run_survey(const SurveyOptions& options) {
    const auto polys = survey_polynomials(options.n, options.height, options.reciprocal_only, options.limit);
    std::vector<SurveyEntry> entries(polys.size());
    parallel_for(polys.size(), [&](std::size_t i) {
        SurveyEntry& e = entries[i];
        e.index = i;
        e.generator = polys[i];
        e.report = classify_polynomial(polys[i]);
        const IntMatrix a = companion(polys[i]);
        e.dedup_key = conjugacy_key(a);
        if (options.with_pa && e.report.ergodic && e.report.dim_center == 2) {
            try {
                e.pa = pa_subspace(a, PAOptions{options.k_max, true});
            } catch (const Error& err) {
                e.pa_error = err.what();
            }
        }
    });
    return entries;
}

SurveySummary summarize(const std::vector<SurveyEntry>& entries, int n) {
    SurveySummary s;
    std::set<std::string> keys;
    for (const auto& e : entries) {
        ++s.total;
        if (!keys.insert(e.dedup_key).second) ++s.duplicates;
        const auto& r = e.report;
        if (!r.unitary_factors_even) ++s.even_degree_violations;
        if (!r.ergodic) continue;
        ++s.ergodic;
        if (r.anosov) ++s.anosov;
        if (r.pseudo_anosov) ++s.pseudo_anosov;
        if (r.dim_center > 0 && !r.char_poly_irreducible) ++s.reducible_center;
        ++s.by_center_dim[r.dim_center];
        if (n == 7 && r.dim_center != 0 && r.dim_center != 2) ++s.center_dim_violations;
    }
    return s;
}

}  // namespace toral
