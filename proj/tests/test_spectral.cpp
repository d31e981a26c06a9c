#include <random>

#include "corpus.hpp"
#include "doctest.h"
#include "toral/error.hpp"
#include "toral/roots.hpp"
#include "toral/splitting.hpp"
#include "toral/survey.hpp"

using namespace toral;

namespace {

Eigen::VectorXd random_in(const Splitting& s, ModulusClass c, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    const auto& b = s.basis_of(c);
    Eigen::VectorXd x(b.cols());
    for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = g(rng);
    return b * x;
}

double power_iteration_radius(const Eigen::MatrixXd& m) {
    // growth rate of ||M^j|| over a long run
    Eigen::MatrixXd p = Eigen::MatrixXd::Identity(m.rows(), m.cols());
    double log_norm = 0;
    const int steps = 400;
    for (int j = 0; j < steps; ++j) {
        p = m * p;
        const double nn = p.norm();
        log_norm += std::log(nn);
        p /= nn;
    }
    return std::exp(log_norm / steps);
}

}  // namespace

TEST_CASE("compute_splitting examples") {
    const Splitting cat = compute_splitting(corpus::cat_map());
    CHECK(cat.dim_s == 1);
    CHECK(cat.dim_c == 0);
    CHECK(cat.dim_u == 1);
    CHECK(cat.invariance_residual() <= 1e-9);

    const Splitting salem = compute_splitting(corpus::salem_companion());
    CHECK(salem.dim_s == 1);
    CHECK(salem.dim_c == 2);
    CHECK(salem.dim_u == 1);
    CHECK(salem.dim_c == count_unitary_roots(corpus::salem_quartic()));
    CHECK(salem.invariance_residual() <= 1e-9);
    // numerical oracle: one real root > 1, one in (0,1), a conjugate pair on the circle
    int real_big = 0, real_small = 0, circle = 0;
    for (const auto& e : salem.eigendata) {
        if (std::abs(e.value.imag()) < 1e-12 && e.value.real() > 1) ++real_big;
        if (std::abs(e.value.imag()) < 1e-12 && e.value.real() > 0 && e.value.real() < 1) ++real_small;
        if (std::abs(std::abs(e.value) - 1) < 1e-9) ++circle;
    }
    CHECK(real_big == 1);
    CHECK(real_small == 1);
    CHECK(circle == 2);

    CHECK_THROWS_AS(compute_splitting(companion(IntPoly{1, 1, 1, 1, 1})), Error);
    try {
        compute_splitting(companion(IntPoly{1, 1, 1, 1, 1}));
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::hypothesis);
    }
}

TEST_CASE("center block is an exact rotation") {
    const Splitting s = compute_splitting(corpus::salem_companion());
    REQUIRE(s.center_angles.size() == 1);
    const double t = s.center_angles[0];
    const Eigen::MatrixXd residual = s.a * s.basis_c - s.basis_c * s.block_c;
    CHECK(residual.norm() <= 1e-12 * s.basis_c.norm() * 10);
    CHECK(std::abs(s.block_c(0, 0) - std::cos(t)) < 1e-15);
    CHECK(std::abs(s.block_c(1, 0) - std::sin(t)) < 1e-15);
}

TEST_CASE("adapted norm") {
    std::mt19937_64 rng(21);
    const Splitting s = compute_splitting(corpus::salem_companion());
    const AdaptedNorm an = adapted_norm(s);
    CHECK(an.lambda_s < 1);
    CHECK(an.mu_u > 1);
    double worst_c = 0, worst_s = 0, worst_u = 0;
    for (int i = 0; i < 1000; ++i) {
        const Eigen::VectorXd vc = random_in(s, ModulusClass::center, rng);
        worst_c = std::max(worst_c, std::abs(an(s, s.a * vc) / an(s, vc) - 1));
        const Eigen::VectorXd vs = random_in(s, ModulusClass::stable, rng);
        worst_s = std::max(worst_s, an(s, s.a * vs) / an(s, vs));
        const Eigen::VectorXd vu = random_in(s, ModulusClass::unstable, rng);
        worst_u = std::max(worst_u, an(s, s.a.inverse() * vu) / an(s, vu));
    }
    CHECK(worst_c <= 1e-9);
    CHECK(worst_s <= an.lambda_s + 1e-12);
    CHECK(worst_u <= 1 / an.mu_u + 1e-12);

    // contraction rates are within 5% of the spectral radii measured by power iteration
    const double rho_s = power_iteration_radius(s.block_s);
    const double rho_u = power_iteration_radius(s.block_u.inverse());
    CHECK(an.lambda_s <= 1.05 * rho_s);
    CHECK(1 / an.mu_u <= 1.05 * rho_u);
    CHECK(an.lambda_s >= rho_s * (1 - 1e-9));

    CHECK_THROWS_AS(adapted_norm(s, 1.2), Error);
    CHECK_THROWS_AS(adapted_norm(s, 0.1), Error);

    // hyperbolic 2x2 conjugated by a diagonal change of basis: one-dimensional grams
    const Splitting cat = compute_splitting(IntMatrix::from_rows({{1, 1}, {1, 2}}));
    const AdaptedNorm cn = adapted_norm(cat);
    CHECK(cn.gram_s.rows() == 1);
    CHECK(cn.gram_u.rows() == 1);
    CHECK(cn.gram_s(0, 0) > 0);
}

TEST_CASE("adapted norm with a non-normal stable block") {
    // (x^2 - 3x + 1)^2 gives Jordan-free repeated roots; companion is non-normal
    const IntPoly p = IntPoly{1, -3, 1} * IntPoly{1, -3, 1};
    const Splitting s = compute_splitting(companion(p));
    CHECK(s.dim_s == 2);
    CHECK(s.dim_u == 2);
    const AdaptedNorm an = adapted_norm(s);
    CHECK(an.lambda_s < 1);
    CHECK(an.terms_s > 0);
}

TEST_CASE("dims are invariant under unimodular conjugation") {
    std::mt19937_64 rng(22);
    for (const IntMatrix& a : {corpus::salem_companion(), corpus::block6()}) {
        const Splitting base = compute_splitting(a);
        for (int t = 0; t < 20; ++t) {
            const IntMatrix u = corpus::random_unimodular(rng, a.rows());
            const Splitting c = compute_splitting(corpus::conjugate(a, u));
            CHECK(c.dim_s == base.dim_s);
            CHECK(c.dim_c == base.dim_c);
            CHECK(c.dim_u == base.dim_u);
            CHECK(c.invariance_residual() <= 1e-9);
        }
    }
}

TEST_CASE("center dimension of powers") {
    for (const IntMatrix& a : {corpus::salem_companion(), corpus::block6(), corpus::cat_map()}) {
        const int dc = compute_splitting(a).dim_c;
        for (unsigned k = 1; k <= 6; ++k) CHECK(compute_splitting(a.pow(k)).dim_c == dc);
    }
}

TEST_CASE("classify examples") {
    const ClassificationReport cat = classify(corpus::cat_map());
    CHECK(cat.ergodic);
    CHECK(cat.anosov);
    CHECK(cat.dim_center == 0);

    const ClassificationReport b6 = classify(corpus::block6());
    CHECK(b6.ergodic);
    CHECK_FALSE(b6.anosov);
    CHECK(b6.dim_center == 2);
    CHECK_FALSE(b6.char_poly_irreducible);
    CHECK_FALSE(b6.pseudo_anosov);
    CHECK(b6.factors.size() == 2);

    const ClassificationReport salem = classify(corpus::salem_companion());
    CHECK(salem.pseudo_anosov);
    REQUIRE(salem.factors.size() == 1);
    CHECK(salem.factors[0].salem);
    CHECK(is_salem(corpus::salem_quartic()));
    CHECK_FALSE(is_salem(IntPoly{1, -3, 1}));

    const ClassificationReport phi5 = classify(companion(IntPoly{1, 1, 1, 1, 1}));
    CHECK_FALSE(phi5.ergodic);
    CHECK_FALSE(phi5.in_hypotheses());
}

TEST_CASE("even degree of unitary factors over small surveys") {
    for (int n = 2; n <= 6; ++n) {
        const auto entries = run_survey(SurveyOptions{n, 1, false, 0, false, 24});
        const SurveySummary s = summarize(entries, n);
        CHECK(s.even_degree_violations == 0);
        for (const auto& e : entries)
            for (const auto& f : e.report.factors)
                if (!f.cyclotomic && f.unitary > 0) {
                    CHECK(f.poly.degree() % 2 == 0);
                    CHECK(f.poly.degree() >= 4);
                }
    }
}
