#include "corpus.hpp"
#include "doctest.h"
#include "toral/error.hpp"
#include "toral/json_io.hpp"

using namespace toral;

TEST_CASE("json: big integers round trip as numbers or strings") {
    const BigInt small(-42);
    const BigInt big("123456789012345678901234567890");
    CHECK(to_json(small).is_number_integer());
    CHECK(to_json(big).is_string());
    CHECK(bigint_from_json(to_json(small)) == small);
    CHECK(bigint_from_json(to_json(big)) == big);
    CHECK_THROWS_AS(bigint_from_json(Json("12x")), Error);
    CHECK_THROWS_AS(bigint_from_json(Json(1.5)), Error);
}

TEST_CASE("json: matrices round trip and malformed ones are input errors") {
    const IntMatrix a = corpus::block6();
    CHECK(matrix_from_json(matrix_to_json(a)) == a);
    CHECK(matrix_from_json(Json::parse(R"({"rows": [[2, 1], [1, 1]]})")) == corpus::cat_map());
    for (const char* bad : {R"({"n": 2, "rows": [[1, 2]]})", R"({"rows": []})", R"({"n": 3, "rows": [[2, 1], [1, 1]]})", "[1, 2]"}) {
        try {
            matrix_from_json(Json::parse(bad));
            FAIL("accepted " << bad);
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::input);
        }
    }
}

TEST_CASE("json: perturbed maps round trip") {
    const PerturbedMap f = standard_perturbation(corpus::salem_companion(), 0.05);
    const PerturbedMap g = perturbed_from_json(perturbed_to_json(f));
    Eigen::VectorXd x(4);
    x << 0.1, -0.7, 0.3, 0.9;
    CHECK((f(x) - g(x)).cwiseAbs().maxCoeff() == 0);
    CHECK(g.shears().size() == f.shears().size());

    Shear general{make_int_vector({1, 0, 0, 0}), make_int_vector({0, 1, 1, 0}), TrigProfile::unit_sine(), 0.02};
    const PerturbedMap h(corpus::salem_companion(), {general});
    const Json j = perturbed_to_json(h);
    CHECK(j["shears"][0].contains("source"));
    CHECK((perturbed_from_json(j)(x) - h(x)).cwiseAbs().maxCoeff() == 0);
}

TEST_CASE("json: classification report keeps its field names") {
    const Json j = to_json(classify(corpus::salem_companion()));
    for (const char* key : {"ergodic", "anosov", "dim_center", "factors", "salem_flags", "pseudo_anosov"}) CHECK(j.contains(key));
    CHECK(j["dim_center"] == 2);
    CHECK(j["salem_flags"].size() == j["factors"].size());
}

TEST_CASE("csv: saturation cloud has one row per sample") {
    SaturationSet set;
    set.base = Eigen::VectorXd::Zero(2);
    SaturationSample s;
    s.point = Eigen::Vector2d(1, 2);
    s.trail = {Eigen::VectorXd(0), Eigen::VectorXd::Ones(1), Eigen::VectorXd::Ones(1), Eigen::VectorXd::Ones(1)};
    set.samples = {s, s, s};
    const std::string csv = saturation_csv(set);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
    CHECK(csv.rfind("x0,x1,s0,u0,s20\n", 0) == 0);
}
