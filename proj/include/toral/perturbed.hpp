#pragma once

#include <Eigen/Dense>
#include <vector>

#include "toral/int_matrix.hpp"

namespace toral {

/// One-periodic profile phi(t) = sum_m a_m (cos 2 pi m t - 1) + b_m sin 2 pi m t,
/// m = 1, 2, ...; phi(0) = 0 by construction.
struct TrigProfile {
    std::vector<double> cos_coeffs;
    std::vector<double> sin_coeffs;

    double value(double t) const;
    double derivative(double t) const;
    /// max |phi'| over a period (dense sampling followed by golden-section refinement).
    double max_derivative() const;

    /// sin(2 pi t) / (2 pi), whose derivative has maximum modulus 1.
    static TrigProfile unit_sine();
    /// (cos(2 pi t) - 1) / (2 pi), also with max |phi'| = 1.
    static TrigProfile unit_cosine();
};

/// x -> x + amplitude * phi(<source, x>) * target, with <source, target> = 0
/// so the Jacobian determinant is exactly 1. Integer source and target make
/// the displacement Z^N-periodic. A coordinate shear has source e_j, target e_i.
struct Shear {
    IntVector source;
    IntVector target;
    TrigProfile profile;
    double amplitude = 0;

    static Shear coordinate(std::size_t n, std::size_t target_index, std::size_t source_index, TrigProfile profile,
                            double amplitude);
    /// Coordinate indices when this is a coordinate shear, else (-1, -1).
    std::pair<int, int> coordinate_indices() const;
};

/// The lift F(x) = S_m(...S_1(A x)) of a volume-preserving perturbation of
/// the toral automorphism A, fixing 0. G = F - A is Z^N-periodic.
class PerturbedMap {
public:
    PerturbedMap() = default;
    PerturbedMap(IntMatrix a, std::vector<Shear> shears);

    const IntMatrix& matrix() const { return a_; }
    const Eigen::MatrixXd& matrix_double() const { return ad_; }
    const Eigen::MatrixXd& matrix_inverse_double() const { return ainv_; }
    const std::vector<Shear>& shears() const { return shears_; }
    int dim() const { return static_cast<int>(ad_.rows()); }
    bool is_linear() const { return linear_; }

    Eigen::VectorXd operator()(const Eigen::VectorXd& x) const;
    Eigen::VectorXd inverse(const Eigen::VectorXd& y) const;
    Eigen::MatrixXd jacobian(const Eigen::VectorXd& x) const;
    Eigen::MatrixXd inverse_jacobian(const Eigen::VectorXd& y) const;

    /// F(x + d) - F(x), computed without forming the large terms separately.
    Eigen::VectorXd forward_difference(const Eigen::VectorXd& x, const Eigen::VectorXd& d) const;
    Eigen::VectorXd inverse_difference(const Eigen::VectorXd& y, const Eigen::VectorXd& d) const;

    /// Sum over shears of |amplitude| max|phi'| |source| |target|: a bound on ||DF - A|| / ||A||.
    double c1_size() const { return c1_; }

private:
    Eigen::VectorXd shear_forward(Eigen::VectorXd y) const;
    Eigen::VectorXd shear_inverse(Eigen::VectorXd y) const;

    IntMatrix a_;
    Eigen::MatrixXd ad_, ainv_;
    std::vector<Shear> shears_;
    std::vector<Eigen::VectorXd> src_, dst_;
    bool linear_ = true;
    double c1_ = 0;
};

Eigen::VectorXd lift_eval(const PerturbedMap& f, const Eigen::VectorXd& x);
/// Closed-form inverse, checked against F to 1e-12 (relative).
Eigen::VectorXd lift_inverse(const PerturbedMap& f, const Eigen::VectorXd& y);

/// Coordinate shears x_{j+1} += eps phi_j(x_j) around the cycle of coordinates,
/// alternating unit sine and cosine profiles.
PerturbedMap standard_perturbation(const IntMatrix& a, double eps);

/// h o A o h^{-1} for a shear h. Its stable and unstable foliations are the
/// images of the linear ones, hence jointly integrable.
PerturbedMap conjugate_by_shear(const IntMatrix& a, const Shear& h);

/// Reduction of a point to [0, 1)^N.
Eigen::VectorXd reduce_mod_one(const Eigen::VectorXd& x);

}  // namespace toral
