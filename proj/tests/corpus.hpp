#pragma once

#include <random>

#include "toral/int_matrix.hpp"
#include "toral/int_poly.hpp"

namespace corpus {

using toral::IntMatrix;
using toral::IntPoly;

inline const IntPoly& salem_quartic() {
    static const IntPoly p{1, -1, -1, -1, 1};
    return p;
}

inline IntMatrix salem_companion() { return toral::companion(salem_quartic()); }

/// x^6 - 2x^4 + x^3 - 2x^2 + 1: irreducible, one pair of roots on the unit circle.
inline const IntPoly& sextic_one_pair() {
    static const IntPoly p{1, 0, -2, 1, -2, 0, 1};
    return p;
}

inline IntMatrix cat_map() { return IntMatrix::from_rows({{2, 1}, {1, 1}}); }

inline IntMatrix block6() { return IntMatrix::block_diagonal(salem_companion(), cat_map()); }

/// Product of random elementary matrices and signed permutations.
inline IntMatrix random_unimodular(std::mt19937_64& rng, std::size_t n, int steps = 8) {
    IntMatrix u = IntMatrix::identity(n);
    std::uniform_int_distribution<std::size_t> idx(0, n - 1);
    std::uniform_int_distribution<long> mult(-2, 2);
    for (int s = 0; s < steps; ++s) {
        const std::size_t i = idx(rng), j = idx(rng);
        if (i == j) continue;
        IntMatrix e = IntMatrix::identity(n);
        e(i, j) = mult(rng);
        u = e * u;
    }
    return u;
}

inline IntMatrix conjugate(const IntMatrix& a, const IntMatrix& u) { return u * a * u.inverse_unimodular(); }

}  // namespace corpus
