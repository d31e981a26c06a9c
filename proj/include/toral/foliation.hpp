#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "toral/perturbed.hpp"
#include "toral/splitting.hpp"

namespace toral {

enum class Flavor { s, u, c, cs, cu };

std::string to_string(Flavor f);
Flavor flavor_from_string(const std::string& name);

struct LeafOptions {
    double tol = 1e-13;       // Newton residual, relative to 1 + |v|
    int max_newton = 50;
    int horizon = 0;          // orbit length; 0 picks it from the spectral gap
    int starts = 5;           // multi-start count for intersections
    double agreement = 1e-8;  // multi-start agreement radius
};

/// Invariant foliations of a perturbed map, evaluated pointwise.
///
/// A leaf point sigma^*_x(v) = x + v + g^*(x, v) is found by Newton's method
/// on the orbit-difference equations e_{k+1} = F(r_k + e_k) - F(r_k) along a
/// finite stretch of the reference orbit r_k of x (reduced mod Z^N): the
/// parameter fixes the dominated part of e_0 and the dominating part of e_n
/// is set to 0. Each Newton step solves the linearized two-point problem by
/// a backward Riccati sweep. Stable-type leaves use F, unstable-type use F^{-1};
/// center leaves are W^cs(x) intersected with W^cu(x).
class Foliations {
public:
    Foliations(PerturbedMap f, Splitting s, AdaptedNorm an, LeafOptions options = {});

    const PerturbedMap& map() const { return f_; }
    const Splitting& splitting() const { return s_; }
    const AdaptedNorm& norm() const { return an_; }
    const LeafOptions& options() const { return options_; }
    int dim() const { return s_.dim(); }

    /// Parameters live in the splitting coordinates of E^*, in (s, c, u) order.
    int param_dim(Flavor f) const;
    int param_offset(Flavor f) const;
    Eigen::MatrixXd param_basis(Flavor f) const;
    Eigen::VectorXd param_of(Flavor f, const Eigen::VectorXd& ambient) const;
    Eigen::VectorXd embed(Flavor f, const Eigen::VectorXd& v) const;

    Eigen::VectorXd sigma(Flavor f, const Eigen::VectorXd& x, const Eigen::VectorXd& v) const;
    Eigen::VectorXd graph(Flavor f, const Eigen::VectorXd& x, const Eigen::VectorXd& v) const;
    /// |p - sigma^*_x((p - x)^*)| in the adapted norm; zero iff p lies on W^*(x).
    double leaf_residual(Flavor f, const Eigen::VectorXd& x, const Eigen::VectorXd& p) const;

    /// Adapted norm of an ambient vector.
    double length(const Eigen::VectorXd& v) const { return an_(s_, v); }
    /// Adapted norm of a parameter of the given flavor.
    double param_length(Flavor f, const Eigen::VectorXd& v) const { return length(embed(f, v)); }

    int horizon(Flavor f) const;
    /// Perturbation size relative to the hyperbolic gap for the flavor; < 1 is required.
    double contraction_factor(Flavor f) const;
    /// sup of ||DF - A|| in adapted coordinates, sampled.
    double perturbation_size() const { return delta_; }

private:
    Eigen::VectorXd solve(Flavor f, const Eigen::VectorXd& x, const Eigen::VectorXd& v) const;
    Eigen::VectorXd solve_center(const Eigen::VectorXd& x, const Eigen::VectorXd& v) const;

    PerturbedMap f_;
    Splitting s_;
    AdaptedNorm an_;
    LeafOptions options_;
    Eigen::MatrixXd abar_, abar_inv_;  // A and A^{-1} in splitting coordinates
    double delta_ = 0;
    int horizon_[5] = {0, 0, 0, 0, 0};
    double gap_[5] = {0, 0, 0, 0, 0};
};

enum class IntersectionPair { s_cu, u_cs };

/// The unique point of W^s(x) and W^cu(y) (or W^u(x) and W^cs(y)), by Newton
/// on the stable (unstable) parameter. With starts > 1, every start must
/// converge to the same point.
Eigen::VectorXd unique_intersection(const Foliations& fol, const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                                    IntersectionPair pair, int starts = 0);

/// Sampled graph of g^*(x, .) over the box of radius rho in E^* coordinates,
/// with multilinear interpolation between nodes.
struct GraphPatch {
    Flavor flavor = Flavor::s;
    Eigen::VectorXd base;
    double radius = 0;
    double step = 0;
    int dim = 0;
    int per_axis = 0;
    std::vector<Eigen::VectorXd> values;  // ambient g at the nodes, axis 0 fastest
    double kappa_emp = 0;                 // sup |g(v)| / |v| over nodes in the ball
    double lipschitz_emp = 0;             // sup |g(v) - g(w)| / |v - w| over neighbouring nodes
    double invariance_residual = 0;       // sup |F(sigma_x(v)) - sigma_{F(x)}(v')| over samples
    double interpolation_error = 0;       // sup |interpolated - exact| over the same samples

    Eigen::VectorXd node(std::size_t index) const;
    Eigen::VectorXd operator()(const Eigen::VectorXd& v) const;
};

struct PatchOptions {
    double radius = 2;
    double step = 1.0 / 32;
    std::size_t node_budget = 1024;  // the step grows until the grid fits
    double tol = 1e-9;
    int residual_samples = 100;
    std::uint64_t seed = 1;
};

GraphPatch graph_transform(const Foliations& fol, Flavor flavor, const Eigen::VectorXd& x, const PatchOptions& options = {});

struct KappaEstimate {
    double kappa = 0;
    Flavor worst = Flavor::s;
    std::size_t samples = 0;
};

/// sup |g^*(x, v)| / |v| over random base points, flavors and 0 < |v| <= radius.
KappaEstimate estimate_kappa(const Foliations& fol, std::size_t samples, double radius, std::uint64_t seed);

}  // namespace toral
