#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

#include "toral/int_matrix.hpp"
#include "toral/int_poly.hpp"

namespace toral {

enum class ModulusClass { stable, center, unstable };

std::string to_string(ModulusClass c);

struct EigenEntry {
    std::complex<double> value;
    int multiplicity = 1;
    ModulusClass cls = ModulusClass::stable;
};

/// Invariant splitting R^N = E^s + E^c + E^u of an integer matrix.
///
/// The dimensions come from the exact root census of the characteristic
/// polynomial; eigenvalues and bases are floating point. The center basis
/// is built pair by pair so that A acts on it by an exact rotation block.
struct Splitting {
    Eigen::MatrixXd a;  // A as doubles
    int dim_s = 0;
    int dim_c = 0;
    int dim_u = 0;
    Eigen::MatrixXd basis_s, basis_c, basis_u;  // columns
    Eigen::MatrixXd block_s, block_c, block_u;  // A * basis = basis * block
    std::vector<EigenEntry> eigendata;
    std::vector<double> center_angles;  // one angle in (0, pi) per unitary pair

    Eigen::MatrixXd basis;          // [basis_s | basis_c | basis_u]
    Eigen::MatrixXd basis_inverse;  // coordinates in that basis

    int dim() const { return static_cast<int>(a.rows()); }
    Eigen::VectorXd coordinates(const Eigen::VectorXd& v) const { return basis_inverse * v; }
    /// Oblique projection of v onto the given subspace along the other two.
    Eigen::VectorXd component(const Eigen::VectorXd& v, ModulusClass c) const;
    /// Coordinates of the given component in that subspace's own basis.
    Eigen::VectorXd component_coordinates(const Eigen::VectorXd& v, ModulusClass c) const;
    const Eigen::MatrixXd& basis_of(ModulusClass c) const;
    const Eigen::MatrixXd& block_of(ModulusClass c) const;
    int dim_of(ModulusClass c) const;
    int offset_of(ModulusClass c) const;
    /// max over classes of ||A B - B M|| / ||B||.
    double invariance_residual() const;
};

struct SplittingOptions {
    bool require_ergodic = true;
};

Splitting compute_splitting(const IntMatrix& a, const SplittingOptions& options = {});

Eigen::MatrixXd to_eigen(const IntMatrix& m);
Eigen::VectorXd to_eigen(const IntVector& v);

/// Norm |v| = |v^s| + |v^c| + |v^u| whose pieces make A a contraction on
/// E^s, A^{-1} a contraction on E^u, and A an isometry on E^c.
struct AdaptedNorm {
    Eigen::MatrixXd gram_s, gram_c, gram_u;  // in the coordinates of each subspace basis
    double theta_s = 0;                      // requested contraction margins
    double theta_u = 0;
    double lambda_s = 0;  // operator norm of A on E^s in this norm
    double mu_u = 0;      // 1 / operator norm of A^{-1} on E^u
    int terms_s = 0;      // iterate-sum truncation lengths
    int terms_u = 0;

    double part(const Splitting& s, const Eigen::VectorXd& v, ModulusClass c) const;
    double operator()(const Splitting& s, const Eigen::VectorXd& v) const;
};

/// Spectral radii of A on E^s and of A^{-1} on E^u.
double stable_radius(const Splitting& s);
double unstable_inverse_radius(const Splitting& s);

/// theta must lie in (spectral radius, 1) for both E^s and the inverse on E^u.
AdaptedNorm adapted_norm(const Splitting& s, double theta);
AdaptedNorm adapted_norm(const Splitting& s, double theta_s, double theta_u);
/// Margins at 4% above each spectral radius (capped halfway to 1).
AdaptedNorm adapted_norm(const Splitting& s);

struct FactorReport {
    IntPoly poly;
    int multiplicity = 1;
    bool irreducible = true;
    bool reciprocal = false;
    bool cyclotomic = false;
    int inside = 0;
    int unitary = 0;
    int outside = 0;
    bool salem = false;
};

struct ClassificationReport {
    IntPoly char_poly;
    bool ergodic = false;
    bool anosov = false;
    int dim_stable = 0;
    int dim_center = 0;
    int dim_unstable = 0;
    std::vector<FactorReport> factors;
    bool char_poly_irreducible = false;
    bool pseudo_anosov = false;
    /// Every factor carrying a unitary, non root-of-unity root has even degree >= 4.
    bool unitary_factors_even = true;
    bool in_hypotheses() const { return ergodic && (dim_center == 0 || dim_center == 2); }
};

/// Salem polynomial: irreducible, reciprocal, exactly one root outside the
/// unit disk and at least one root on the unit circle.
bool is_salem(const IntPoly& p);

ClassificationReport classify(const IntMatrix& a);
ClassificationReport classify_polynomial(const IntPoly& p);

}  // namespace toral
