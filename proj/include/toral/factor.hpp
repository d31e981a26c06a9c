#pragma once

#include <vector>

#include "toral/int_poly.hpp"

namespace toral {

struct PolyFactor {
    IntPoly poly;  // primitive, irreducible over Z, positive leading coefficient
    int multiplicity = 1;
};

/// Complete factorization over Z of a nonzero polynomial into irreducible
/// primitive factors (the integer content is dropped). Factors are sorted by
/// degree, then by coefficient sequence, so the output is canonical.
///
/// Squarefree parts are split modulo a prime P exceeding twice a
/// Landau-Mignotte bound (P chosen so the reduction stays squarefree), by
/// distinct-degree and Cantor-Zassenhaus equal-degree splitting, followed by
/// exact trial recombination over Z.
std::vector<PolyFactor> factor_Z(const IntPoly& p);

/// Irreducibility over Z of a primitive polynomial of positive degree.
bool is_irreducible_Z(const IntPoly& p);

/// Yun squarefree decomposition over Z: p = content * prod_i s_i^i with
/// the returned s_i primitive, squarefree and pairwise coprime (empty slots are 1).
std::vector<IntPoly> squarefree_decomposition(const IntPoly& p);

}  // namespace toral
