#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "toral/pseudo_anosov.hpp"
#include "toral/splitting.hpp"

namespace toral {

struct SurveyOptions {
    int n = 4;
    int height = 2;
    bool reciprocal_only = false;
    std::size_t limit = 0;  // 0 = no limit
    bool with_pa = false;   // run pa_subspace on ergodic entries with dim E^c = 2
    int k_max = 24;
};

/// Monic degree-n integer polynomials with constant term +-1 and all other
/// coefficients in [-h, h], in a fixed order (reciprocal-only keeps the
/// palindromic ones with constant term 1).
std::vector<IntPoly> survey_polynomials(int n, int h, bool reciprocal_only, std::size_t limit = 0);

struct SurveyEntry {
    std::size_t index = 0;
    IntPoly generator;
    ClassificationReport report;
    std::optional<PASubspace> pa;
    std::string pa_error;
    /// Best-effort conjugacy invariant: char poly and Smith form of A - I.
    std::string dedup_key;
};

std::vector<SurveyEntry> run_survey(const SurveyOptions& options);

struct SurveySummary {
    std::size_t total = 0;
    std::size_t ergodic = 0;
    std::size_t anosov = 0;
    std::size_t pseudo_anosov = 0;
    std::size_t reducible_center = 0;  // ergodic, dim E^c > 0, char poly reducible
    std::size_t duplicates = 0;
    std::map<int, std::size_t> by_center_dim;  // ergodic entries only
    std::size_t center_dim_violations = 0;     // ergodic with dim E^c not in {0, 2} (only counted for n = 7)
    std::size_t even_degree_violations = 0;
};

SurveySummary summarize(const std::vector<SurveyEntry>& entries, int n);

std::string conjugacy_key(const IntMatrix& a);

}  // namespace toral
