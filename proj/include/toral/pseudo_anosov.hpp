#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "toral/int_matrix.hpp"
#include "toral/int_poly.hpp"
#include "toral/lattice.hpp"

namespace toral {

/// Irreducible over Z and not a polynomial in x^m for any m > 1.
bool pa_condition3(const IntPoly& p);

struct CyclicityWitness {
    int k = 0;
    IntVector v;
};

struct Condition1Result {
    bool holds = true;
    std::optional<CyclicityWitness> witness;
    int vectors_tested = 0;
};

/// Randomized falsification of "every nonzero lattice vector is cyclic for
/// A^k" over k = 1..k_max. Each k draws `trials` vectors: integer vectors
/// from the kernel lattices of the proper irreducible factors of the char
/// poly of A^k (where non-cyclic vectors live when it is reducible), topped
/// up with uniform vectors from a box.
Condition1Result pa_condition1_sample(const IntMatrix& a, int k_max, int trials, std::uint64_t seed);

/// Matrix of the restriction of A to an A-invariant lattice, in the
/// coordinates of its basis (column i holds the coordinates of A b_i).
IntMatrix restrict_to_lattice(const IntMatrix& a, const Lattice& l);

struct PASubspace {
    int k = 0;
    int dim_x = 0;
    IntPoly p_k;     // factor of char(A^k) carrying the unitary pair
    Lattice lambda;  // Z^N intersected with X
    std::vector<int> d_by_k;  // d_k for k = 1..k_max
    double center_residual = 0;  // ||(I - P_X) basis_c|| / ||basis_c||

    Eigen::MatrixXd x_basis() const;
};

struct PAOptions {
    int k_max = 24;
    bool verify = true;
};

/// Search k = 1..k_max for the smallest degree d_k of the irreducible factor
/// of char(A^k) holding the unitary roots (smallest k on ties), and return
/// X = ker p_k(A^k) with its integer lattice, after checking the invariants.
PASubspace pa_subspace(const IntMatrix& a, const PAOptions& options = {});

/// Unitary-root factor of char(A^k) and its kernel lattice.
struct UnitaryFactor {
    IntPoly poly;
    Lattice kernel;
};
UnitaryFactor unitary_factor(const IntMatrix& a, int k);

/// Lattice spanned by n, B n, ..., B^{d-1} n with B = A^{k l}, in HNF.
Lattice gamma_from_n(const IntMatrix& a, int k, int l, const IntVector& n, const PASubspace& pa);

}  // namespace toral
