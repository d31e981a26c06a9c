#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "toral/foliation.hpp"
#include "toral/lattice.hpp"

namespace toral {

/// Phi_x(v) = sigma^u(v^u, sigma^s(v^s, sigma^c(v^c, x))) for an ambient vector v.
Eigen::VectorXd phi_map(const Foliations& fol, const Eigen::VectorXd& x, const Eigen::VectorXd& v);
/// Inverse of Phi_x by peeling: the u leaf of y meets W^cs(x) at w, the s leaf
/// of w meets W^cu(x) at p, and v is read off the three legs.
Eigen::VectorXd phi_inverse(const Foliations& fol, const Eigen::VectorXd& x, const Eigen::VectorXd& y, int starts = 1);
/// Psi_x(v) = sigma^u(v^u, sigma^s(v^s, x)) + v^c.
Eigen::VectorXd psi_map(const Foliations& fol, const Eigen::VectorXd& x, const Eigen::VectorXd& v);
/// Inverse of Psi_x by damped Newton from y - x.
Eigen::VectorXd psi_inverse(const Foliations& fol, const Eigen::VectorXd& x, const Eigen::VectorXd& y);

/// Uniform sample of the closed adapted ball of the given radius (or its sphere).
Eigen::VectorXd sample_adapted_ball(const Splitting& s, const AdaptedNorm& an, double radius, std::uint64_t seed,
                                    bool on_sphere = false);

/// Ratios against |Phi_x(v) - (x + v)| <= kappa |v| and
/// |Phi_x^{-1}(w) - (w - x)| <= kappa / (1 - kappa) |w - x|; both hold iff <= 1.
struct PhiBounds {
    double kappa = 0;
    std::size_t samples = 0;
    double forward_ratio = 0;
    double inverse_ratio = 0;
    bool holds() const { return forward_ratio <= 1 && inverse_ratio <= 1; }
};

PhiBounds phi_bounds(const Foliations& fol, const Eigen::VectorXd& x, double kappa, std::size_t samples, double radius,
                     std::uint64_t seed);

enum class CoverageKind { phi, psi };

struct CoverageOptions {
    double r = 1;
    std::size_t samples = 1000;
    std::uint64_t seed = 1;
    CoverageKind kind = CoverageKind::phi;
    double sample_radius = 0;  // 0 means r / 2
    bool on_sphere = false;
};

/// Points y of B(x, r/2) are pulled back by Phi_x (or Psi_x) and their
/// parameters checked against the radius-r balls (c, s, u for Phi; s, u for Psi).
struct CoverageReport {
    bool pass = true;
    std::size_t samples = 0;
    std::size_t failures = 0;
    double worst_ratio = 0;  // max over samples and checked legs of |v^*| / r
    Eigen::VectorXd worst_point;
    Eigen::VectorXd worst_params;
};

CoverageReport coverage_check(const Foliations& fol, const Eigen::VectorXd& x, const CoverageOptions& options);

inline double saturation_length(double eps) { return 1 / (eps * eps); }

struct SaturationSample {
    std::array<Eigen::VectorXd, 4> trail;  // c, s, u, s parameters in splitting coordinates
    Eigen::VectorXd point;
};

struct SaturationOptions {
    std::array<int, 4> samples_per_stage{8, 8, 8, 8};
    std::uint64_t seed = 1;
    double max_radius = 50;                        // largest leaf radius the budget allows
    std::optional<std::array<double, 4>> radii;    // defaults to eps, L, L + eps, eps
};

/// Stratified cloud in W^s_eps(W^u_{L+eps}(W^s_L(W^c_eps(x)))), L = eps^{-2};
/// each stage draws its count of children per parent point.
struct SaturationSet {
    Eigen::VectorXd base;
    double eps = 0;
    double length = 0;
    std::array<double, 4> radii{};
    std::array<int, 4> counts{};
    std::vector<SaturationSample> samples;
};

SaturationSet build_saturation_set(const Foliations& fol, const Eigen::VectorXd& x, double eps,
                                   const SaturationOptions& options = {});

/// Lower bound for Vol(W_eps(x)): the volume of Phi_x over the box
/// |v^c| < eps, |v^s| < L, |v^u| < L + eps, as a Monte Carlo integral of
/// |det DPhi_x|. Meaningful when X is all of R^N.
struct VolumeEstimate {
    double volume = 0;
    double std_error = 0;
    double linear_volume = 0;  // the same box under x + id
    std::size_t samples = 0;
};

VolumeEstimate saturation_volume(const Foliations& fol, const Eigen::VectorXd& x, double eps, std::size_t samples,
                                 std::uint64_t seed);

/// r = dim X / 2, s = 2r + 1 and gamma = 1 - beta (s + 14).
struct AppendixConstants {
    int r = 0;
    int s = 0;
    double gamma = 0;
};

AppendixConstants appendix_constants(int dim_x, double beta);

struct NEpsilon {
    IntVector n;
    double norm = 0;
    double bound = 0;            // 5 (1 + kappa) L
    double merge_tolerance = 0;  // cloud search only
    std::size_t candidates = 0;  // lattice points examined after the bounding-box filter
};

/// Linear dynamics: W_eps(x) is x + {|v^c| < eps, |v^s|, |v^u| < L + eps}, so
/// W_eps(x) meets W_eps(x) + n iff |n^c| < 2 eps and |n^s|, |n^u| < 2 (L + eps).
/// Returns the first such n of Lambda in norm order with |n| <= 5 L.
NEpsilon find_n_epsilon_linear(const Splitting& s, const AdaptedNorm& an, const Lattice& lambda, double eps);

/// First n of Lambda in norm order, 0 < |n| <= 5 (1 + kappa) L, for which the
/// cloud and its translate by n come within twice the mean nearest-neighbour
/// spacing (adapted coordinates).
NEpsilon find_n_epsilon(const Foliations& fol, const SaturationSet& set, const Lattice& lambda, double kappa);

/// |(z - y)^su| < eps |z - y| in the adapted norm.
bool cone_member(const Splitting& s, const AdaptedNorm& an, const Eigen::VectorXd& z, const Eigen::VectorXd& y, double eps);

/// Closed polygon x + K v_1 -> x + K v_2 -> x + K v_3 -> x + K v_1 in steps n_1, n_2, n_3.
struct PLCurve {
    Eigen::VectorXd base;
    std::array<IntVector, 3> corners;     // v_i in Gamma
    std::array<IntVector, 3> generators;  // n_i = v_{i+1} - v_i
    long k = 0;
    double d_gamma = 0;
    double circumradius = 0;
    int retries = 0;
    std::vector<Eigen::VectorXd> vertices;  // closed: back() == front()
    std::vector<int> generator_index;       // per segment, 0..2

    std::size_t segments() const { return generator_index.size(); }
    /// per_segment points per segment (segment start included), closed by repeating the first point.
    std::vector<Eigen::VectorXd> sample(int per_segment) const;
};

/// Upper bound for diam(X / Gamma): half the summed adapted lengths of the basis.
double lattice_diameter_bound(const Lattice& gamma, const Splitting& s, const AdaptedNorm& an);

PLCurve winding_curve(const Eigen::VectorXd& x, const Eigen::VectorXd& y, const Lattice& gamma, double eps, double radius,
                      const Splitting& s, const AdaptedNorm& an);

/// Degree of t -> (z(t) - y)^c over a closed sampled curve, in the center
/// coordinates of the splitting. Samples closer than tol to E^su(y) are refused.
int winding_number(const std::vector<Eigen::VectorXd>& closed, const Eigen::VectorXd& y, const Splitting& s, double tol = 1e-12);

/// Degree of a closed planar loop around a point; segments are subdivided until
/// every angle step is below pi/2.
int winding_number_2d(const std::vector<Eigen::Vector2d>& closed, const Eigen::Vector2d& center, double tol = 1e-12);

/// Axis-aligned rectangle, possibly unbounded (infinite bounds allowed).
struct Rect {
    double x0, x1, y0, y1;
    bool contains(const Eigen::Vector2d& p) const { return p.x() >= x0 && p.x() <= x1 && p.y() >= y0 && p.y() <= y1; }
};

struct JordanSuiteReport {
    std::size_t unbounded_loops = 0;
    std::size_t unbounded_nonzero = 0;  // must stay 0
    std::size_t bounded_loops = 0;
    std::size_t bounded_zero = 0;       // must stay 0
    bool pass() const { return unbounded_nonzero == 0 && bounded_zero == 0 && unbounded_loops > 0 && bounded_loops > 0; }
};

/// Random loops in the complement of unbounded half-strips wind 0 around every
/// obstacle point; random star-shaped loops around a bounded obstacle wind once.
JordanSuiteReport jordan_suite(std::size_t loops, std::uint64_t seed);

/// Closed random loop in the free cells of a grid over box: a random walk
/// followed by the shortest way back to its start.
std::vector<Eigen::Vector2d> random_free_loop(const std::vector<Rect>& obstacles, const Rect& box, int cells, int steps,
                                              std::uint64_t seed);

}  // namespace toral
