#include <random>

#include "corpus.hpp"
#include "doctest.h"
#include "toral/error.hpp"
#include "toral/factor.hpp"
#include "toral/pseudo_anosov.hpp"
#include "toral/splitting.hpp"

using namespace toral;

TEST_CASE("pa_condition3") {
    CHECK(pa_condition3(corpus::salem_quartic()));
    CHECK_FALSE(pa_condition3(IntPoly{1, 0, 1, 0, 1}));
    CHECK_FALSE(pa_condition3(IntPoly{-1, 0, 0, 0, 1}));
}

TEST_CASE("pa_condition1_sample") {
    CHECK(pa_condition1_sample(corpus::salem_companion(), 6, 100, 1).holds);

    // x^4 - 4x^2 + 1 = q(x^2) is irreducible; its square splits
    const IntPoly even{1, 0, -4, 0, 1};
    REQUIRE(is_irreducible_Z(even));
    const Condition1Result r = pa_condition1_sample(companion(even), 6, 100, 2);
    CHECK_FALSE(r.holds);
    REQUIRE(r.witness.has_value());
    CHECK(r.witness->k == 2);
    const IntMatrix a2 = companion(even).pow(2);
    CHECK_FALSE(is_cyclic_vector(a2, r.witness->v));

    const Condition1Result id = pa_condition1_sample(IntMatrix::identity(3), 6, 100, 3);
    CHECK_FALSE(id.holds);
    CHECK(id.witness->k == 1);
}

TEST_CASE("exhaustive small-vector sweep for the Salem companion") {
    const IntMatrix a = corpus::salem_companion();
    for (unsigned k = 1; k <= 6; ++k) {
        const IntMatrix ak = a.pow(k);
        for (long x0 = -2; x0 <= 2; ++x0)
            for (long x1 = -2; x1 <= 2; ++x1)
                for (long x2 = -2; x2 <= 2; ++x2)
                    for (long x3 = -2; x3 <= 2; ++x3) {
                        if (!x0 && !x1 && !x2 && !x3) continue;
                        CHECK(is_cyclic_vector(ak, make_int_vector({x0, x1, x2, x3})));
                    }
    }
}

TEST_CASE("pa_subspace on the Salem companion") {
    const PASubspace pa = pa_subspace(corpus::salem_companion());
    CHECK(pa.k == 1);
    CHECK(pa.dim_x == 4);
    CHECK(pa.lambda == Lattice::standard(4));
    CHECK(pa.p_k == corpus::salem_quartic());
    CHECK(pa.center_residual <= 1e-9);
    CHECK(pa.d_by_k.size() == 24);
}

TEST_CASE("pa_subspace on the N=6 block example and its conjugates") {
    const IntMatrix a = corpus::block6();
    const PASubspace pa = pa_subspace(a);
    CHECK(pa.k == 1);
    CHECK(pa.dim_x == 4);
    const Lattice coord = hnf({make_int_vector({1, 0, 0, 0, 0, 0}), make_int_vector({0, 1, 0, 0, 0, 0}),
                               make_int_vector({0, 0, 1, 0, 0, 0}), make_int_vector({0, 0, 0, 1, 0, 0})},
                              6);
    CHECK(pa.lambda == coord);
    CHECK(pa.center_residual <= 1e-9);

    std::mt19937_64 rng(31);
    for (int t = 0; t < 5; ++t) {
        const IntMatrix u = corpus::random_unimodular(rng, 6);
        const PASubspace pc = pa_subspace(corpus::conjugate(a, u));
        CHECK(pc.k == pa.k);
        CHECK(pc.dim_x == pa.dim_x);
        CHECK(pc.lambda == pa.lambda.image(u));
    }
}

TEST_CASE("pa_subspace rejects inputs outside the hypotheses") {
    CHECK_THROWS_AS(pa_subspace(corpus::cat_map()), Error);
    CHECK_THROWS_AS(pa_subspace(companion(IntPoly{1, 1, 1, 1, 1})), Error);
}

TEST_CASE("pa_subspace on the Salem quartic evaluated at -x") {
    const IntPoly neg{1, 1, -1, 1, 1};
    const PASubspace pa = pa_subspace(companion(neg));
    CHECK(pa.dim_x == 4);
    CHECK(pa_condition3(pa.p_k));
}

TEST_CASE("gamma_from_n") {
    const IntMatrix a = corpus::salem_companion();
    const PASubspace pa = pa_subspace(a);
    const Lattice g1 = gamma_from_n(a, 1, 1, make_int_vector({1, 0, 0, 0}), pa);
    CHECK(g1 == Lattice::standard(4));
    CHECK(lattice_index(pa.lambda, g1) == 1);

    const IntVector n = pa.lambda.basis()[0];
    const Lattice g = gamma_from_n(a, 1, 1, n, pa);
    CHECK(g.rank() == 4);

    const IntVector m = make_int_vector({2, -1, 3, 1});
    for (int l : {1, 2, 3}) {
        const Lattice gl = gamma_from_n(a, 1, l, m, pa);
        std::vector<IntVector> coords;
        for (const auto& b : gl.basis()) coords.push_back(pa.lambda.coordinates(b));
        BigInt prod = 1;
        for (const auto& f : snf(IntMatrix::from_rows(coords)).invariant_factors()) prod *= f;
        CHECK(lattice_index(pa.lambda, gl) == prod);
        CHECK(prod > 0);
    }
    CHECK_THROWS_AS(gamma_from_n(a, 1, 1, make_int_vector({0, 0, 0, 0}), pa), Error);
}

TEST_CASE("restriction to the pseudo-Anosov lattice") {
    const IntMatrix a = corpus::block6();
    const PASubspace pa = pa_subspace(a);
    const IntMatrix r = restrict_to_lattice(a.pow(static_cast<unsigned long>(pa.k)), pa.lambda);
    CHECK(char_poly(r) == pa.p_k);
    CHECK(pa_condition1_sample(r, 6, 100, 4).holds);
    CHECK_FALSE(pa_condition1_sample(a, 6, 100, 4).holds);
}
