#include <cmath>
#include <numbers>
#include <random>

#include "corpus.hpp"
#include "doctest.h"
#include "toral/diophantine.hpp"
#include "toral/error.hpp"
#include "toral/experiment.hpp"
#include "toral/holonomy.hpp"
#include "toral/saturation.hpp"

using namespace toral;

namespace {

struct Setup {
    IntMatrix a = corpus::salem_companion();
    Splitting s = compute_splitting(a);
    AdaptedNorm an = adapted_norm(s);
    Lattice lambda = pa_subspace(a).lambda;

    Foliations at(double eps) const { return Foliations(standard_perturbation(a, eps), s, an); }
};

const Setup& salem() {
    static const Setup s;
    return s;
}

Eigen::VectorXd base_point() {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(4);
    x(0) = 0.3;
    x(2) = 0.1;
    return x;
}

double sup(const Eigen::VectorXd& v) { return v.cwiseAbs().maxCoeff(); }

double kappa_at(const Foliations& fol) { return estimate_kappa(fol, 50, 1.0, 1).kappa; }

std::vector<Eigen::VectorXd> center_circle(const Splitting& s, const Eigen::VectorXd& y, double radius, int points,
                                           const Eigen::Vector2d& offset = Eigen::Vector2d::Zero()) {
    std::vector<Eigen::VectorXd> out;
    for (int i = 0; i < points; ++i) {
        const double t = 2 * std::numbers::pi * i / points;
        out.push_back(y + s.basis_c * (offset + radius * Eigen::Vector2d(std::cos(t), std::sin(t))));
    }
    return out;
}

}  // namespace

TEST_CASE("Phi: linear map gives x + v, inverse gives y - x") {
    const auto& st = salem();
    const Foliations fol = st.at(0);
    std::mt19937_64 rng(4);
    for (int k = 0; k < 20; ++k) {
        const Eigen::VectorXd v = sample_adapted_ball(st.s, st.an, 3, rng());
        const Eigen::VectorXd x = base_point();
        CHECK(sup(phi_map(fol, x, v) - (x + v)) <= 1e-12);
        CHECK(sup(psi_map(fol, x, v) - (x + v)) <= 1e-12);
        CHECK(sup(phi_inverse(fol, x, x + v) - v) <= 1e-10);
        CHECK(sup(psi_inverse(fol, x, x + v) - v) <= 1e-10);
    }
}

TEST_CASE("Phi: close to the identity with the measured kappa") {
    const auto& st = salem();
    const Foliations fol = st.at(1e-2);
    const double kappa = kappa_at(fol);
    REQUIRE(kappa < 0.5);
    const PhiBounds b = phi_bounds(fol, base_point(), kappa, 1000, 1, 3);
    CHECK(b.samples == 1000);
    CHECK(b.forward_ratio <= 1);
    CHECK(b.inverse_ratio <= 1);
    CHECK(b.holds());
}

TEST_CASE("Phi and Psi: inverses round trip under perturbation") {
    const auto& st = salem();
    const Foliations fol = st.at(1e-2);
    const Eigen::VectorXd x = base_point();
    for (std::uint64_t k = 0; k < 20; ++k) {
        const Eigen::VectorXd v = sample_adapted_ball(st.s, st.an, 2, k);
        CHECK(sup(phi_inverse(fol, x, phi_map(fol, x, v)) - v) <= 1e-8);
        CHECK(sup(psi_inverse(fol, x, psi_map(fol, x, v)) - v) <= 1e-8);
    }
}

TEST_CASE("adapted ball sampling stays inside the ball and is deterministic") {
    const auto& st = salem();
    for (std::uint64_t k = 0; k < 200; ++k) {
        const Eigen::VectorXd v = sample_adapted_ball(st.s, st.an, 1.5, k);
        CHECK(st.an(st.s, v) <= 1.5 + 1e-12);
        CHECK(std::abs(st.an(st.s, sample_adapted_ball(st.s, st.an, 1.5, k, true)) - 1.5) <= 1e-9);
    }
    CHECK(sup(sample_adapted_ball(st.s, st.an, 1, 9) - sample_adapted_ball(st.s, st.an, 1, 9)) == 0);
}

TEST_CASE("coverage: linear case recovers the linear projections") {
    const auto& st = salem();
    const Foliations fol = st.at(0);
    for (auto kind : {CoverageKind::phi, CoverageKind::psi}) {
        CoverageOptions o;
        o.samples = 200;
        o.kind = kind;
        const CoverageReport r = coverage_check(fol, base_point(), o);
        CHECK(r.pass);
        CHECK(r.failures == 0);
        const Eigen::VectorXd proj = r.worst_point - base_point();
        CHECK(sup(r.worst_params - proj) <= 1e-10);
    }
}

TEST_CASE("coverage: both saturation lemmas hold at r = 1 over 1000 samples") {
    const auto& st = salem();
    const Foliations fol = st.at(1e-2);
    REQUIRE(kappa_at(fol) < 0.5);
    for (auto kind : {CoverageKind::phi, CoverageKind::psi}) {
        CoverageOptions o;
        o.samples = 1000;
        o.kind = kind;
        const CoverageReport r = coverage_check(fol, base_point(), o);
        CHECK(r.samples == 1000);
        CHECK(r.failures == 0);
        CHECK(r.pass);
        CHECK(r.worst_ratio <= 1);
    }
}

TEST_CASE("coverage: adversarial shell is reported") {
    const auto& st = salem();
    const Foliations fol = st.at(1e-2);
    CoverageOptions o;
    o.samples = 100;
    o.on_sphere = true;
    o.sample_radius = 1.2;
    const CoverageReport r = coverage_check(fol, base_point(), o);
    MESSAGE("shell r/2 + margin: failures " << r.failures << ", worst ratio " << r.worst_ratio);
    CHECK(r.samples == 100);
    CHECK(r.worst_point.size() == 4);
}

TEST_CASE("saturation set: length, trails and the linear closed form") {
    const auto& st = salem();
    const Foliations fol = st.at(0);
    const Eigen::VectorXd x = base_point();
    SaturationOptions o;
    o.samples_per_stage = {3, 3, 3, 3};
    const SaturationSet set = build_saturation_set(fol, x, 0.5, o);
    CHECK(set.length == 4.0);
    CHECK(saturation_length(0.25) == 16.0);
    CHECK(set.samples.size() == 81);
    const std::array<Flavor, 4> stages{Flavor::c, Flavor::s, Flavor::u, Flavor::s};
    for (const auto& p : set.samples) {
        Eigen::VectorXd expected = x;
        for (std::size_t i = 0; i < 4; ++i) {
            CHECK(fol.param_length(stages[i], p.trail[i]) <= set.radii[i] + 1e-12);
            expected += fol.embed(stages[i], p.trail[i]);
        }
        CHECK(sup(p.point - expected) <= 1e-12);
    }
}

TEST_CASE("saturation set: smaller radii give dominated trails") {
    const auto& st = salem();
    const Foliations fol = st.at(1e-2);
    SaturationOptions big, small;
    big.samples_per_stage = small.samples_per_stage = {3, 3, 3, 3};
    big.radii = std::array<double, 4>{0.5, 4, 4.5, 0.5};
    small.radii = std::array<double, 4>{0.25, 2, 2.25, 0.25};
    const SaturationSet a = build_saturation_set(fol, base_point(), 0.5, big);
    const SaturationSet b = build_saturation_set(fol, base_point(), 0.5, small);
    REQUIRE(a.samples.size() == b.samples.size());
    const std::array<Flavor, 4> stages{Flavor::c, Flavor::s, Flavor::u, Flavor::s};
    for (std::size_t k = 0; k < a.samples.size(); ++k)
        for (std::size_t i = 0; i < 4; ++i) {
            const double lb = fol.param_length(stages[i], b.samples[k].trail[i]);
            const double la = fol.param_length(stages[i], a.samples[k].trail[i]);
            CHECK(lb <= la + 1e-12);
            CHECK(lb <= small.radii->at(i) + 1e-12);
        }
}

TEST_CASE("saturation set: budget refusal and determinism across threads") {
    const auto& st = salem();
    const Foliations fol = st.at(1e-2);
    try {
        build_saturation_set(fol, base_point(), 0.1);
        FAIL("expected a budget error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::budget);
    }
    SaturationOptions o;
    o.samples_per_stage = {2, 2, 2, 2};
    thread_setting() = 1;
    const SaturationSet one = build_saturation_set(fol, base_point(), 0.5, o);
    thread_setting() = 4;
    const SaturationSet four = build_saturation_set(fol, base_point(), 0.5, o);
    thread_setting() = 1;
    for (std::size_t k = 0; k < one.samples.size(); ++k) CHECK(sup(one.samples[k].point - four.samples[k].point) == 0);
}

TEST_CASE("saturation volume grows as eps decreases") {
    const auto& st = salem();
    const Foliations fol = st.at(1e-2);
    const HolonomyProbe probe = holonomy_lipschitz_probe(fol, 4, 4, 6, 5);
    const AppendixConstants c = appendix_constants(pa_subspace(st.a).dim_x, probe.beta_emp);
    CHECK(c.r == 2);
    CHECK(c.s == 5);
    MESSAGE("beta_emp " << probe.beta_emp << ", gamma " << c.gamma);
    std::vector<VolumeEstimate> vols;
    for (double eps : {0.5, 0.35, 0.25}) {
        vols.push_back(saturation_volume(fol, base_point(), eps, 200, 5));
        MESSAGE("eps " << eps << ": volume " << vols.back().volume << " +- " << vols.back().std_error);
        CHECK(std::abs(vols.back().volume / vols.back().linear_volume - 1) <= 0.05);
    }
    if (c.gamma > 0) {
        CHECK(vols[1].volume - 3 * vols[1].std_error > vols[0].volume + 3 * vols[0].std_error);
        CHECK(vols[2].volume - 3 * vols[2].std_error > vols[1].volume + 3 * vols[1].std_error);
    }
}

TEST_CASE("appendix constants") {
    const AppendixConstants c = appendix_constants(4, 0.01);
    CHECK(c.r == 2);
    CHECK(c.s == 5);
    CHECK(c.gamma == doctest::Approx(1 - 0.19));
    CHECK(appendix_constants(6, 0.1).gamma < 0);
}

TEST_CASE("n_eps: linear pigeonhole agrees with brute-force box intersection") {
    const auto& st = salem();
    for (double eps : {0.5, 0.35}) {
        const double len = saturation_length(eps);
        const NEpsilon ne = find_n_epsilon_linear(st.s, st.an, st.lambda, eps);
        CHECK(ne.norm <= 5 * len);
        CHECK(ne.norm > 0);
        // oracle: the first point in scan order whose boxes overlap
        const auto points = enumerate_ball(st.lambda, st.s, st.an, 5 * len);
        const LatticePoint* first = nullptr;
        for (const auto& p : points) {
            const Eigen::VectorXd n = to_eigen(p.n);
            if (st.an.part(st.s, n, ModulusClass::center) < 2 * eps && st.an.part(st.s, n, ModulusClass::stable) < 2 * (len + eps) &&
                st.an.part(st.s, n, ModulusClass::unstable) < 2 * (len + eps)) {
                first = &p;
                break;
            }
        }
        REQUIRE(first != nullptr);
        CHECK(first->n == ne.n);
        CHECK(st.lambda.contains(ne.n));
    }
}

TEST_CASE("n_eps: cloud search stays within the bound and is deterministic") {
    const auto& st = salem();
    const Foliations fol = st.at(1e-2);
    const double kappa = kappa_at(fol);
    SaturationOptions o;
    o.samples_per_stage = {6, 6, 6, 6};
    const SaturationSet set = build_saturation_set(fol, base_point(), 0.35, o);
    const NEpsilon a = find_n_epsilon(fol, set, st.lambda, kappa);
    CHECK(a.norm > 0);
    CHECK(a.norm <= 5 * (1 + kappa) * set.length);
    CHECK(a.bound == doctest::Approx(5 * (1 + kappa) * set.length));
    CHECK(a.merge_tolerance > 0);
    CHECK(st.lambda.contains(a.n));
    const NEpsilon b = find_n_epsilon(fol, build_saturation_set(fol, base_point(), 0.35, o), st.lambda, kappa);
    CHECK(a.n == b.n);
}

TEST_CASE("cone membership") {
    const auto& st = salem();
    const Eigen::VectorXd y = base_point();
    const Eigen::VectorXd c = st.s.basis_c.col(0) + 0.3 * st.s.basis_c.col(1);
    const Eigen::VectorXd su = st.s.basis_s.col(0) - 2 * st.s.basis_u.col(0);
    for (double eps : {1e-3, 0.1, 1.0}) {
        CHECK(cone_member(st.s, st.an, y + c, y, eps));
        CHECK_FALSE(cone_member(st.s, st.an, y + su, y, eps));
    }
    CHECK_FALSE(cone_member(st.s, st.an, y, y, 0.5));
    const Eigen::VectorXd w = c + 0.2 * su;
    for (double eps : {0.05, 0.2, 0.5})
        for (double t : {1e-3, 1.0, 1e3})
            CHECK(cone_member(st.s, st.an, y + t * w, y, eps) == cone_member(st.s, st.an, y + w, y, eps));
}

TEST_CASE("winding numbers: circles, constant curves, additivity and reversal") {
    const auto& st = salem();
    const Eigen::VectorXd y = base_point();
    CHECK(winding_number(center_circle(st.s, y, 1, 16), y, st.s) == 1);
    auto reversed = center_circle(st.s, y, 1, 16);
    std::reverse(reversed.begin(), reversed.end());
    CHECK(winding_number(reversed, y, st.s) == -1);
    CHECK(winding_number(center_circle(st.s, y, 1, 16, {3, 0}), y, st.s) == 0);

    std::vector<Eigen::VectorXd> constant;
    for (int i = 0; i < 10; ++i) constant.push_back(y + st.s.basis_c.col(0) + 0.1 * i * st.s.basis_s.col(0));
    CHECK(winding_number(constant, y, st.s) == 0);

    // a coarse triangle still resolves through refinement
    const std::vector<Eigen::Vector2d> tri{{1, 0}, {-0.5, 0.9}, {-0.5, -0.9}};
    CHECK(winding_number_2d(tri, Eigen::Vector2d::Zero()) == 1);

    // a double loop from concatenation based at the same point
    auto twice = center_circle(st.s, y, 1, 16);
    const auto again = center_circle(st.s, y, 2, 16);
    twice.insert(twice.end(), again.begin(), again.end());
    CHECK(winding_number(twice, y, st.s) == 2);
    auto cancel = center_circle(st.s, y, 1, 16);
    cancel.insert(cancel.end(), reversed.begin(), reversed.end());
    CHECK(winding_number(cancel, y, st.s) == 0);

    std::vector<Eigen::VectorXd> touching = center_circle(st.s, y, 1, 8);
    touching.push_back(y + st.s.basis_u.col(0));
    CHECK_THROWS_AS(winding_number(touching, y, st.s), Error);
}

TEST_CASE("winding curve: lattice steps, cone, radius and winding over random configurations") {
    const auto& st = salem();
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int t = 0; t < 20; ++t) {
        Eigen::VectorXd x(4);
        for (int i = 0; i < 4; ++i) x(i) = u(rng);
        const Eigen::VectorXd y = x + st.s.basis_c * Eigen::Vector2d(3 * u(rng), 3 * u(rng));
        const double eps = 0.05 + 0.45 * (u(rng) + 1) / 2;
        const double radius = 20 * (u(rng) + 1);
        const PLCurve curve = winding_curve(x, y, st.lambda, eps, radius, st.s, st.an);
        CHECK(curve.vertices.size() == curve.segments() + 1);
        CHECK(sup(curve.vertices.back() - curve.vertices.front()) == 0);
        for (std::size_t i = 0; i < curve.segments(); ++i) {
            const Eigen::VectorXd step = curve.vertices[i + 1] - curve.vertices[i];
            const IntVector& n = curve.generators[static_cast<std::size_t>(curve.generator_index[i])];
            CHECK(sup(step - to_eigen(n)) <= 1e-9);
            CHECK(st.lambda.contains(n));
            const Eigen::VectorXd offset = (curve.vertices[i] - x).array().round();
            CHECK(sup(curve.vertices[i] - x - offset) <= 1e-9);
        }
        const auto pts = curve.sample(8);
        bool in_cone = true, outside = true;
        for (const auto& z : pts) {
            in_cone = in_cone && cone_member(st.s, st.an, z, y, eps);
            outside = outside && st.an(st.s, z - y) > radius;
        }
        CHECK(in_cone);
        CHECK(outside);
        CHECK(std::abs(winding_number(pts, y, st.s)) == 1);
    }
}

TEST_CASE("winding curve: refusals") {
    const auto& st = salem();
    const Eigen::VectorXd x = base_point();
    CHECK_THROWS_AS(winding_curve(x, x + st.s.basis_s.col(0), st.lambda, 0.3, 1, st.s, st.an), Error);
    const IntMatrix cat = corpus::cat_map();
    const Splitting cs = compute_splitting(cat);
    try {
        winding_curve(Eigen::VectorXd::Zero(2), Eigen::VectorXd::Zero(2), Lattice::standard(2), 0.3, 1, cs, adapted_norm(cs));
        FAIL("expected a hypothesis error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::hypothesis);
    }
}

TEST_CASE("winding curve: doubling R grows K and keeps the winding") {
    const auto& st = salem();
    const Eigen::VectorXd x = base_point();
    const Eigen::VectorXd y = x + st.s.basis_c.col(0);
    long previous = 0;
    for (double radius : {50.0, 100.0, 200.0, 400.0}) {
        const PLCurve curve = winding_curve(x, y, st.lambda, 0.3, radius, st.s, st.an);
        CHECK(curve.k >= previous);
        CHECK(std::abs(winding_number(curve.sample(4), y, st.s)) == 1);
        previous = curve.k;
    }
    CHECK(previous > winding_curve(x, y, st.lambda, 0.3, 50, st.s, st.an).k);
}

TEST_CASE("winding curve: Phi-type displacement below |z^c| keeps the winding") {
    const auto& st = salem();
    const Foliations fol = st.at(1e-2);
    const Eigen::VectorXd x = base_point();
    const Eigen::VectorXd y = x + 0.5 * st.s.basis_c.col(1);
    const PLCurve curve = winding_curve(x, y, st.lambda, 0.3, 5, st.s, st.an);
    const auto pts = curve.sample(6);
    std::vector<Eigen::VectorXd> moved;
    for (const auto& z : pts) {
        const Eigen::VectorXd hat = phi_map(fol, y, z - y);
        const double zc = st.an.part(st.s, z - y, ModulusClass::center);
        CHECK(st.an(st.s, hat - z) < zc);
        moved.push_back(hat);
    }
    CHECK(winding_number(moved, y, st.s) == winding_number(pts, y, st.s));
}

TEST_CASE("Jordan suite: unbounded strips have trivial loops, bounded obstacles do not") {
    const JordanSuiteReport r = jordan_suite(60, 1);
    CHECK(r.unbounded_loops > 0);
    CHECK(r.bounded_loops > 0);
    CHECK(r.unbounded_nonzero == 0);
    CHECK(r.bounded_zero == 0);
    CHECK(r.pass());

    const std::vector<Rect> obstacles{{-1, 1, -1, 1}};
    const auto loop = random_free_loop(obstacles, {-4, 4, -4, 4}, 16, 300, 7);
    for (const auto& p : loop) CHECK_FALSE(obstacles[0].contains(p));
}
