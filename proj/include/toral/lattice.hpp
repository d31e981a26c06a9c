#pragma once

#include <vector>

#include "toral/int_matrix.hpp"

namespace toral {

/// Row-style Hermite normal form: transform * input == form, with the
/// nonzero rows of `form` first, positive pivots and the entries above each
/// pivot reduced into [0, pivot).
struct HermiteForm {
    IntMatrix form;
    IntMatrix transform;  // unimodular
    std::size_t rank = 0;
};

HermiteForm hermite_form(const IntMatrix& m);

/// Smith normal form u * a * v == d with d diagonal, each diagonal entry
/// dividing the next, and u, v unimodular.
struct SmithForm {
    IntMatrix u;
    IntMatrix d;
    IntMatrix v;
    std::vector<BigInt> invariant_factors() const;
};

SmithForm snf(const IntMatrix& a);

/// Discrete subgroup of Z^n given by a basis in Hermite normal form.
class Lattice {
public:
    Lattice() = default;
    explicit Lattice(std::size_t ambient_dim) : ambient_(ambient_dim) {}

    /// Lattice generated by arbitrary integer vectors (dependent ones allowed).
    static Lattice generated_by(const std::vector<IntVector>& vectors, std::size_t ambient_dim);
    static Lattice standard(std::size_t n);

    std::size_t ambient_dim() const noexcept { return ambient_; }
    std::size_t rank() const noexcept { return basis_.size(); }
    const std::vector<IntVector>& basis() const noexcept { return basis_; }
    IntMatrix basis_matrix() const;

    bool contains(const IntVector& v) const;
    /// Integer coordinates of v in the stored basis; throws if v is not a member.
    IntVector coordinates(const IntVector& v) const;
    /// True iff Z^n intersected with the rational span equals the lattice.
    bool is_primitive() const;

    /// Image of the lattice under an integer matrix acting on column vectors.
    Lattice image(const IntMatrix& a) const;

    friend bool operator==(const Lattice& a, const Lattice& b) {
        return a.ambient_ == b.ambient_ && a.basis_ == b.basis_;
    }

private:
    std::size_t ambient_ = 0;
    std::vector<IntVector> basis_;
};

Lattice hnf(const std::vector<IntVector>& vectors, std::size_t ambient_dim);

/// Z^n intersected with the rational kernel of m (m acts on column vectors).
/// The result is saturated by construction.
Lattice kernel_lattice(const IntMatrix& m);

/// Z^n intersected with the rational span of the lattice.
Lattice saturate(const Lattice& l);

/// Index [outer : inner] for lattices of equal rank with inner contained in outer.
BigInt lattice_index(const Lattice& outer, const Lattice& inner);

/// True iff v, Av, ..., A^{n-1}v span Q^n.
bool is_cyclic_vector(const IntMatrix& a, const IntVector& v);

/// Krylov matrix with rows v, Av, ..., A^{count-1} v.
IntMatrix krylov_rows(const IntMatrix& a, const IntVector& v, std::size_t count);

}  // namespace toral
