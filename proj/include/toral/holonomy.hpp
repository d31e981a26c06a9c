#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "toral/foliation.hpp"
#include "toral/int_matrix.hpp"

namespace toral {

/// W^u(z) intersected with W^cs(0).
Eigen::VectorXd pi_u(const Foliations& fol, const Eigen::VectorXd& z, int starts = 0);
/// W^s(z) intersected with W^cu(0).
Eigen::VectorXd pi_s(const Foliations& fol, const Eigen::VectorXd& z, int starts = 0);
/// pi_s(pi_u(z)), a point of W^c(0).
Eigen::VectorXd pi_su(const Foliations& fol, const Eigen::VectorXd& z, int starts = 0);

/// Center chart of W^c(0): x -> sigma^c_0(x), and its inverse (the center coordinates).
Eigen::VectorXd center_chart(const Foliations& fol, const Eigen::VectorXd& x);
Eigen::VectorXd center_coordinates(const Foliations& fol, const Eigen::VectorXd& p);

/// su-holonomy of p + n back to W^c(0), for p on W^c(0).
Eigen::VectorXd t_hat(const Foliations& fol, const Eigen::VectorXd& n, const Eigen::VectorXd& p, int starts = 1);
/// T_n in the center chart; x + n^c when the map is linear.
Eigen::VectorXd t_n(const Foliations& fol, const Eigen::VectorXd& n, const Eigen::VectorXd& x, int starts = 1);
Eigen::VectorXd t_n(const Foliations& fol, const IntVector& n, const Eigen::VectorXd& x, int starts = 1);

/// max over sampled chart points x (in the box [-1, 1]^c) of |T_n(T_m(x)) - T_{n+m}(x)|.
double commutation_defect(const Foliations& fol, const IntVector& n, const IntVector& m, std::size_t samples,
                          std::uint64_t seed);

struct TnDeviation {
    IntVector n;
    double norm = 0;       // |n| in the adapted norm
    double deviation = 0;  // sup over sampled x of |T_n(x) - x - n^c|
};

/// deviation ~ C (log+|n| + 1), growth exponent p from deviation ~ (1 + log+|n|)^p.
struct TnLogFit {
    std::vector<TnDeviation> rows;
    double c = 0;         // max deviation / (log+|n| + 1)
    double exponent = 0;  // least squares over rows with |n| >= 2
};

TnDeviation tn_deviation(const Foliations& fol, const IntVector& n, std::size_t samples, std::uint64_t seed);
TnLogFit tn_log_fit(const Foliations& fol, const std::vector<IntVector>& ns, std::size_t samples, std::uint64_t seed);

/// Integer vectors with adapted norm in [1, max_norm], log-spaced norms, deterministic.
std::vector<IntVector> sample_lattice_vectors(const Splitting& s, const AdaptedNorm& an, double max_norm, std::size_t count,
                                              std::uint64_t seed);

struct PathLipschitz {
    int legs = 0;
    double length = 0;
    double lipschitz = 0;
};

/// Fit of log Lip = K log C + K beta log L over random su-paths.
struct HolonomyProbe {
    std::vector<PathLipschitz> paths;
    double c_emp = 1;
    double beta_emp = 0;
    double sup_lipschitz = 0;
};

/// Random su-paths with at most max_legs legs, each path shape evaluated at
/// the lengths L, L/2, L/4, ... down to 1/4, so the path set for 2L contains
/// the one for L. Lipschitz constants of the holonomy between center leaves
/// come from finite differences in four chart directions.
HolonomyProbe holonomy_lipschitz_probe(const Foliations& fol, int max_legs, double max_length, std::size_t shapes,
                                       std::uint64_t seed);

/// Finite-difference Lipschitz constant of T-hat_n on W^c(0) near sigma^c_0(x).
double tn_lipschitz(const Foliations& fol, const IntVector& n, const Eigen::VectorXd& x);

/// Lip(T-hat_n) <= C |n|^beta: beta by least squares of log Lip on log |n|, C the max ratio.
struct TnLipschitzFit {
    std::vector<std::pair<double, double>> rows;  // (|n|, Lip)
    double c = 1;
    double beta = 0;
};

TnLipschitzFit tn_lipschitz_fit(const Foliations& fol, const std::vector<IntVector>& ns, std::uint64_t seed);

}  // namespace toral
