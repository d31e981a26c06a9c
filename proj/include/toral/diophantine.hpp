#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "toral/pseudo_anosov.hpp"
#include "toral/splitting.hpp"

namespace toral {

struct LatticePoint {
    IntVector n;       // ambient integer vector
    IntVector coords;  // coordinates in the lattice basis
    double norm = 0;         // adapted norm |n|
    double center_norm = 0;  // |n^c|
};

/// Compact result of a ball scan: lattice coordinates and norms, already in
/// scan order (norm, then lexicographic coordinates).
struct BallScan {
    std::size_t dim = 0;
    std::vector<std::int32_t> coords;  // dim entries per point
    std::vector<double> norm;
    std::vector<double> center_norm;

    std::size_t size() const { return norm.size(); }
    IntVector coordinates(std::size_t i) const;
    IntVector ambient(const Lattice& lambda, std::size_t i) const;
};

BallScan scan_ball(const Lattice& lambda, const Splitting& s, const AdaptedNorm& an, double radius);

/// Number of nonzero lattice points with adapted norm at most `radius`, without storing them.
std::size_t count_ball(const Lattice& lambda, const Splitting& s, const AdaptedNorm& an, double radius);

/// All nonzero lattice points with adapted norm at most `radius`, sorted by
/// norm and then lexicographically by coordinates. Enumeration runs over the
/// ellipsoid sum_* |v^*|^2 <= radius^2, which contains the ball, and filters.
std::vector<LatticePoint> enumerate_ball(const Lattice& lambda, const Splitting& s, const AdaptedNorm& an, double radius);

/// Smallest `count` nonzero lattice points (same order), growing the radius as needed.
std::vector<LatticePoint> smallest_points(const Lattice& lambda, const Splitting& s, const AdaptedNorm& an, std::size_t count);

struct DiophantineWitness {
    IntVector n;
    double norm = 0;
    double center_norm = 0;
    double ratio = 0;  // |n^c| |n|^r
};

struct DiophantineReport {
    int r = 0;
    double search_radius = 0;
    std::size_t point_count = 0;
    double c_prime_empirical = 0;
    double slope = 0;  // least-squares slope of log|n^c| against log|n| over running minima
    std::size_t slope_points = 0;
    std::vector<DiophantineWitness> witnesses;  // smallest ratios, ascending
    BallScan scan;                              // full scan (kept when requested)
};

struct ScanOptions {
    std::size_t witness_count = 20;
    bool keep_points = false;
    std::optional<std::uint64_t> shuffle_seed;  // scan in a shuffled order (the constant must not change)
};

DiophantineReport center_norm_minimum(const PASubspace& pa, const Splitting& s, const AdaptedNorm& an, double radius,
                                      const ScanOptions& options = {});

/// Linear map R : E^c -> R^2 sending the center parts of two lattice basis
/// vectors to (1, 0) and (0, 1).
struct RMap {
    Eigen::Matrix2d matrix;  // acts on center coordinates
    std::size_t first = 0, second = 1;  // which lattice basis vectors define it

    Eigen::Vector2d operator()(const Splitting& s, const Eigen::VectorXd& v) const {
        return matrix * s.component_coordinates(v, ModulusClass::center);
    }
};

RMap r_map(const Splitting& s, const Lattice& lambda);

/// Sup-metric distance from x to Z^2.
double torus_distance(const Eigen::Vector2d& x);

/// min over 1 <= k <= k_max of ||k alpha|| k^{2 + delta}.
double simultaneous_constant(const Eigen::Vector2d& alpha, long k_max, double delta);

/// min over nonzero k in Z^2 with |k|_sup <= k_max of max_i ||k . alpha_i|| |k|^2.
double linear_form_constant(const Eigen::Vector2d& alpha1, const Eigen::Vector2d& alpha2, long k_max);

struct BadlyApproximable {
    IntVector n1, n2;  // n2 empty for the single-vector variant
    Eigen::Vector2d alpha1 = Eigen::Vector2d::Zero(), alpha2 = Eigen::Vector2d::Zero();
    double c_emp = 0;
};

BadlyApproximable badly_approximable_search_dim6(const PASubspace& pa, const Splitting& s, const AdaptedNorm& an,
                                                 std::size_t candidate_count, long k_max, double delta = 0.1);

BadlyApproximable badly_approximable_search_dim4(const PASubspace& pa, const Splitting& s, const AdaptedNorm& an,
                                                 std::size_t candidate_count, long k_max);

}  // namespace toral
