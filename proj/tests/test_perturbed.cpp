#include <cmath>
#include <random>

#include "corpus.hpp"
#include "doctest.h"
#include "toral/error.hpp"
#include "toral/experiment.hpp"
#include "toral/holonomy.hpp"

using namespace toral;

namespace {

struct Setup {
    IntMatrix a = corpus::salem_companion();
    Splitting s = compute_splitting(a);
    AdaptedNorm an = adapted_norm(s);

    Foliations at(double eps) const { return Foliations(standard_perturbation(a, eps), s, an); }
};

const Setup& salem() {
    static const Setup s;
    return s;
}

Eigen::VectorXd random_point(std::mt19937_64& rng, int n, double half = 1) {
    std::uniform_real_distribution<double> u(-half, half);
    Eigen::VectorXd x(n);
    for (int i = 0; i < n; ++i) x(i) = u(rng);
    return x;
}

double sup(const Eigen::VectorXd& v) { return v.cwiseAbs().maxCoeff(); }

// x + E^s meets y + E^cu at x + B_s a with B_s a - B_cu b = y - x.
Eigen::VectorXd linear_intersection(const Splitting& s, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    const Eigen::VectorXd coords = s.basis_inverse * (y - x);
    return x + s.basis_s * coords.head(s.dim_s);
}

}  // namespace

TEST_CASE("lift: normalization, periodicity, volume and round trip") {
    const auto& x = salem();
    const PerturbedMap f = standard_perturbation(x.a, 0.05);
    const PerturbedMap f0 = standard_perturbation(x.a, 0.0);
    CHECK(f0.is_linear());
    CHECK_FALSE(f.is_linear());
    CHECK(sup(f(Eigen::VectorXd::Zero(4))) == 0.0);
    CHECK(f.c1_size() == doctest::Approx(4 * 0.05).epsilon(1e-9));

    std::mt19937_64 rng(1);
    std::uniform_int_distribution<long> shift(-2, 2);
    const Eigen::MatrixXd ad = to_eigen(x.a);
    double periodic = 0, volume = 0, round_trip = 0, linear = 0;
    for (int k = 0; k < 1000; ++k) {
        const Eigen::VectorXd p = random_point(rng, 4, 3);
        Eigen::VectorXd m(4);
        for (int i = 0; i < 4; ++i) m(i) = static_cast<double>(shift(rng));
        periodic = std::max(periodic, sup(f(p + m) - f(p) - ad * m));
        volume = std::max(volume, std::abs(f.jacobian(p).determinant() - 1));
        round_trip = std::max(round_trip, sup(lift_inverse(f, lift_eval(f, p)) - p));
        linear = std::max(linear, sup(f0(p) - ad * p));
    }
    CHECK(periodic <= 1e-12);
    CHECK(volume <= 1e-10);
    CHECK(round_trip <= 1e-10);
    CHECK(linear == 0.0);
}

TEST_CASE("lift: Jacobians and differences agree with the map") {
    const auto& x = salem();
    const PerturbedMap f = standard_perturbation(x.a, 0.1);
    std::mt19937_64 rng(2);
    for (int k = 0; k < 20; ++k) {
        const Eigen::VectorXd p = random_point(rng, 4);
        const Eigen::VectorXd d = 1e-3 * random_point(rng, 4);
        CHECK(sup(f.forward_difference(p, d) - (f(p + d) - f(p))) <= 1e-13);
        const Eigen::VectorXd y = f(p);
        CHECK(sup(f.inverse_difference(y, d) - (f.inverse(y + d) - f.inverse(y))) <= 1e-13);
        Eigen::MatrixXd fd(4, 4);
        for (int i = 0; i < 4; ++i) {
            const Eigen::VectorXd h = 1e-6 * Eigen::VectorXd::Unit(4, i);
            fd.col(i) = (f(p + h) - f(p - h)) / 2e-6;
        }
        CHECK((fd - f.jacobian(p)).cwiseAbs().maxCoeff() <= 1e-8);
        CHECK((f.inverse_jacobian(y) * f.jacobian(p) - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() <= 1e-12);
    }
}

TEST_CASE("lift: invalid maps are rejected") {
    CHECK_THROWS_AS(PerturbedMap(IntMatrix::from_rows({{2, 0}, {0, 1}}), {}), Error);
    Shear bad;
    bad.source = make_int_vector({1, 1});
    bad.target = make_int_vector({1, 0});
    bad.profile = TrigProfile::unit_sine();
    bad.amplitude = 0.1;
    CHECK_THROWS_AS(PerturbedMap(corpus::cat_map(), {bad}), Error);
    CHECK_THROWS_AS(Shear::coordinate(2, 1, 1, TrigProfile::unit_sine(), 0.1), Error);
}

TEST_CASE("profiles: unit profiles vanish at 0 and have max slope 1") {
    for (const auto& p : {TrigProfile::unit_sine(), TrigProfile::unit_cosine()}) {
        CHECK(p.value(0) == doctest::Approx(0).epsilon(1e-15));
        CHECK(p.max_derivative() == doctest::Approx(1).epsilon(1e-9));
        CHECK(p.value(1.25) == doctest::Approx(p.value(0.25)).epsilon(1e-12));
    }
}

TEST_CASE("graph transform: linear map has flat leaves") {
    const auto fol = salem().at(0.0);
    Eigen::VectorXd x(4);
    x << 0.3, 0.1, -0.2, 0.7;
    for (Flavor f : {Flavor::s, Flavor::u, Flavor::c, Flavor::cs, Flavor::cu}) {
        PatchOptions o;
        o.node_budget = 400;
        o.residual_samples = 20;
        const GraphPatch patch = graph_transform(fol, f, x, o);
        double worst = 0;
        for (const auto& g : patch.values) worst = std::max(worst, sup(g));
        CHECK(worst == 0.0);
        CHECK(patch.kappa_emp == 0.0);
        CHECK(patch.invariance_residual <= 1e-8);
    }
}

TEST_CASE("graph transform: invariance, kappa and its decay as the perturbation vanishes") {
    const auto& x = salem();
    Eigen::VectorXd base(4);
    base << 0.15, 0.4, 0.65, 0.9;
    std::vector<double> kappas;
    for (double eps : {1e-1, 1e-2, 1e-3}) {
        const auto fol = x.at(eps);
        double kappa = 0;
        for (Flavor f : {Flavor::s, Flavor::u, Flavor::c, Flavor::cs, Flavor::cu}) {
            PatchOptions o;
            o.node_budget = 300;
            o.residual_samples = 100;
            const GraphPatch patch = graph_transform(fol, f, base, o);
            CHECK(patch.invariance_residual <= 10 * o.tol);
            const std::size_t center = patch.values.size() / 2;
            CHECK(sup(patch.node(center)) <= 1e-15);
            CHECK(sup(patch.values[center]) <= 1e-12);
            CHECK(patch.interpolation_error <= 0.05);
            kappa = std::max(kappa, patch.kappa_emp);
        }
        CHECK(kappa <= 0.5);
        kappas.push_back(kappa);
    }
    CHECK(kappas[0] > kappas[1]);
    CHECK(kappas[1] > kappas[2]);
    // kappa -> 0 roughly in proportion to the perturbation
    CHECK(kappas[2] / kappas[0] <= 0.05);
}

TEST_CASE("graph transform: too large a perturbation is refused") {
    const auto fol = salem().at(0.5);
    CHECK(fol.contraction_factor(Flavor::s) >= 1);
    try {
        graph_transform(fol, Flavor::s, Eigen::VectorXd::Zero(4));
        FAIL("expected a hypothesis error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::hypothesis);
    }
}

TEST_CASE("leaves: orbit horizon is long enough") {
    const auto& x = salem();
    const auto fol = x.at(0.1);
    std::mt19937_64 rng(3);
    for (Flavor f : {Flavor::s, Flavor::u, Flavor::c, Flavor::cs, Flavor::cu}) {
        LeafOptions o;
        o.horizon = 2 * fol.horizon(f) + 20;
        const Foliations longer(fol.map(), x.s, x.an, o);
        for (int k = 0; k < 5; ++k) {
            const Eigen::VectorXd p = random_point(rng, 4);
            const Eigen::VectorXd v = random_point(rng, fol.param_dim(f), 3);
            CHECK(fol.length(fol.sigma(f, p, v) - longer.sigma(f, p, v)) <= 1e-12);
        }
    }
}

TEST_CASE("leaves: translation by integers and the fixed point") {
    const auto fol = salem().at(0.1);
    Eigen::VectorXd p(4), m(4), v(3);
    p << 0.2, 0.3, 0.4, 0.5;
    m << 2, -1, 0, 3;
    v << 0.4, -0.7, 1.1;
    CHECK(sup(fol.sigma(Flavor::cs, p + m, v) - fol.sigma(Flavor::cs, p, v) - m) <= 1e-12);
    // the base of W^c(0) is a fixed point, the hardest reference orbit
    for (Flavor f : {Flavor::cs, Flavor::cu, Flavor::c}) {
        const Eigen::VectorXd w = Eigen::VectorXd::Constant(fol.param_dim(f), 0.5);
        const Eigen::VectorXd z = fol.sigma(f, Eigen::VectorXd::Zero(4), w);
        CHECK(fol.leaf_residual(f, Eigen::VectorXd::Zero(4), z) <= 1e-12);
        CHECK(sup(fol.param_of(f, z) - w) <= 1e-12);
    }
}

TEST_CASE("intersection: linear closed form, coincident points, substitution residuals") {
    const auto& x = salem();
    std::mt19937_64 rng(4);
    const auto linear = x.at(0.0);
    for (int k = 0; k < 10; ++k) {
        const Eigen::VectorXd p = random_point(rng, 4), q = random_point(rng, 4, 5);
        CHECK(sup(unique_intersection(linear, p, q, IntersectionPair::s_cu) - linear_intersection(x.s, p, q)) <= 1e-8);
    }
    const auto fol = x.at(0.05);
    for (int k = 0; k < 5; ++k) {
        const Eigen::VectorXd p = random_point(rng, 4), q = random_point(rng, 4, 3);
        CHECK(sup(unique_intersection(fol, p, p, IntersectionPair::s_cu) - p) <= 1e-12);
        CHECK(sup(unique_intersection(fol, p, p, IntersectionPair::u_cs) - p) <= 1e-12);
        const Eigen::VectorXd z = unique_intersection(fol, p, q, IntersectionPair::s_cu, 5);
        CHECK(fol.leaf_residual(Flavor::s, p, z) <= 1e-8);
        CHECK(fol.leaf_residual(Flavor::cu, q, z) <= 1e-8);
        const Eigen::VectorXd w = unique_intersection(fol, p, q, IntersectionPair::u_cs, 5);
        CHECK(fol.leaf_residual(Flavor::u, p, w) <= 1e-8);
        CHECK(fol.leaf_residual(Flavor::cs, q, w) <= 1e-8);
    }
}

TEST_CASE("pi_su: lands on the center leaf of 0 along a two-leg path") {
    const auto& x = salem();
    std::mt19937_64 rng(5);
    const auto linear = x.at(0.0);
    for (int k = 0; k < 5; ++k) {
        const Eigen::VectorXd z = random_point(rng, 4, 4);
        CHECK(sup(pi_su(linear, z) - x.s.basis_c * (x.s.basis_inverse * z).segment(x.s.dim_s, x.s.dim_c)) <= 1e-8);
    }
    const auto fol = x.at(0.05);
    const Eigen::VectorXd origin = Eigen::VectorXd::Zero(4);
    for (int k = 0; k < 5; ++k) {
        const Eigen::VectorXd z = random_point(rng, 4, 4);
        const Eigen::VectorXd w = pi_u(fol, z);
        const Eigen::VectorXd p = pi_s(fol, w);
        CHECK(sup(pi_su(fol, z) - p) <= 1e-10);
        CHECK(fol.leaf_residual(Flavor::u, z, w) <= 1e-8);
        CHECK(fol.leaf_residual(Flavor::s, w, p) <= 1e-8);
        CHECK(fol.leaf_residual(Flavor::c, origin, p) <= 1e-8);
        const Eigen::VectorXd on_leaf = center_chart(fol, random_point(rng, 2));
        CHECK(sup(pi_su(fol, on_leaf) - on_leaf) <= 1e-8);
    }
}

TEST_CASE("T_n: translation in the linear case, chart consistency") {
    const auto& x = salem();
    const auto linear = x.at(0.0);
    const auto fol = x.at(0.05);
    std::mt19937_64 rng(6);
    for (const auto& n : sample_lattice_vectors(x.s, x.an, 50, 8, 1)) {
        const Eigen::VectorXd p = random_point(rng, 2);
        const Eigen::VectorXd nc = linear.param_of(Flavor::c, to_eigen(n));
        CHECK(sup(t_n(linear, n, p) - p - nc) <= 1e-8);
        const Eigen::VectorXd hat = t_hat(fol, to_eigen(n), center_chart(fol, p));
        CHECK(sup(center_chart(fol, t_n(fol, n, p)) - hat) <= 1e-8);
    }
}

TEST_CASE("T_n: deviation from the linear translation grows at most logarithmically") {
    const auto& x = salem();
    const auto fol = x.at(1e-2);
    const auto ns = sample_lattice_vectors(x.s, x.an, 1000, 16, 7);
    REQUIRE(ns.size() == 16);
    const TnLogFit fit = tn_log_fit(fol, ns, 4, 11);
    for (const auto& r : fit.rows) CHECK(r.deviation <= fit.c * (std::log(std::max(1.0, r.norm)) + 1) * (1 + 1e-12));
    CHECK(fit.exponent <= 1.2);
    MESSAGE("C = " << fit.c << ", exponent = " << fit.exponent);
}

TEST_CASE("T_n: sup deviation shrinks with the perturbation") {
    const auto& x = salem();
    const auto ns = sample_lattice_vectors(x.s, x.an, 20, 6, 2);
    std::vector<double> sups;
    for (double eps : {1e-1, 1e-2, 1e-3}) {
        const auto fol = x.at(eps);
        double worst = 0;
        for (const auto& n : ns) worst = std::max(worst, tn_deviation(fol, n, 4, 3).deviation);
        sups.push_back(worst);
    }
    CHECK(sups[0] > sups[1]);
    CHECK(sups[1] > sups[2]);
}

TEST_CASE("commutation defect: zero when linear or jointly integrable") {
    const auto& x = salem();
    const IntVector n = make_int_vector({1, 0, 0, 0}), m = make_int_vector({0, 1, 1, 0});
    CHECK(commutation_defect(x.at(0.0), n, m, 8, 1) <= 1e-10);
    const Shear h = Shear::coordinate(4, 1, 0, TrigProfile::unit_sine(), 0.05);
    const Foliations integrable(conjugate_by_shear(x.a, h), x.s, x.an);
    CHECK_FALSE(integrable.map().is_linear());
    CHECK(integrable.perturbation_size() > 0.01);
    CHECK(commutation_defect(integrable, n, m, 4, 1) <= 1e-8);
    const double generic = commutation_defect(x.at(0.05), n, m, 4, 1);
    const double swapped = commutation_defect(x.at(0.05), m, n, 4, 1);
    MESSAGE("generic defect " << generic << ", swapped " << swapped);
}

TEST_CASE("conjugated map: leaves are images of the linear ones") {
    const auto& x = salem();
    const Shear h = Shear::coordinate(4, 1, 0, TrigProfile::unit_sine(), 0.05);
    const Foliations fol(conjugate_by_shear(x.a, h), x.s, x.an);
    const PerturbedMap hmap(IntMatrix::identity(4), {h});
    std::mt19937_64 rng(8);
    for (int k = 0; k < 5; ++k) {
        const Eigen::VectorXd p = random_point(rng, 4);
        const Eigen::VectorXd v = random_point(rng, 2, 2);
        // h(h^{-1}(p) + E^s) is the stable leaf of p
        const Eigen::VectorXd q = hmap(hmap.inverse(p) + x.s.basis_s * v);
        CHECK(fol.leaf_residual(Flavor::s, p, q) <= 1e-10);
    }
}

TEST_CASE("holonomy probe: translations when linear, beta shrinks with the perturbation") {
    const auto& x = salem();
    const HolonomyProbe flat = holonomy_lipschitz_probe(x.at(0.0), 3, 2, 3, 1);
    for (const auto& p : flat.paths) CHECK(p.lipschitz == doctest::Approx(1).epsilon(1e-8));

    std::vector<double> betas;
    for (double eps : {1e-1, 1e-2, 1e-3}) {
        const auto fol = x.at(eps);
        const HolonomyProbe probe = holonomy_lipschitz_probe(fol, 3, 4, 4, 2);
        betas.push_back(std::abs(probe.beta_emp));
        MESSAGE("eps " << eps << ": C " << probe.c_emp << ", beta " << probe.beta_emp << ", sup Lip " << probe.sup_lipschitz);
    }
    CHECK(betas[0] > betas[1]);
    CHECK(betas[1] > betas[2]);
}

TEST_CASE("holonomy probe: doubling the length never lowers the sup") {
    const auto fol = salem().at(0.05);
    const HolonomyProbe shorter = holonomy_lipschitz_probe(fol, 3, 2, 3, 9);
    const HolonomyProbe longer = holonomy_lipschitz_probe(fol, 3, 4, 3, 9);
    CHECK(longer.paths.size() > shorter.paths.size());
    CHECK(longer.sup_lipschitz >= shorter.sup_lipschitz);
}

TEST_CASE("T-hat Lipschitz fit bounds every sample") {
    const auto& x = salem();
    const auto fol = x.at(0.05);
    const auto ns = sample_lattice_vectors(x.s, x.an, 100, 6, 4);
    const TnLipschitzFit fit = tn_lipschitz_fit(fol, ns, 5);
    for (const auto& [norm, lip] : fit.rows) CHECK(lip <= fit.c * std::pow(norm, fit.beta) * (1 + 1e-12));
    MESSAGE("C " << fit.c << ", beta " << fit.beta);
}

TEST_CASE("kappa estimate is deterministic across thread counts") {
    const auto fol = salem().at(0.05);
    thread_setting() = 1;
    const KappaEstimate one = estimate_kappa(fol, 20, 2, 42);
    thread_setting() = 3;
    const KappaEstimate three = estimate_kappa(fol, 20, 2, 42);
    thread_setting() = 1;
    CHECK(one.kappa == three.kappa);
    CHECK(one.worst == three.worst);
    CHECK(one.kappa > 0);
    CHECK(one.kappa <= 0.5);
}
