#include <random>

#include "doctest.h"
#include "jz/decompositions.hpp"
#include "jz/report.hpp"
#include "jz/suite.hpp"
#include "test_helpers.hpp"

using namespace jz;
using jzt::random_vec;

TEST_CASE("element literals round trip") {
    std::mt19937_64 rng(12);
    std::vector<Algebra> as{make_algebra(Family::Real, 1), make_algebra(Family::SymR, 3),
                            make_algebra(Family::HermC, 2), make_algebra(Family::Spin, 2, 5)};
    if (hermh_enabled()) as.push_back(make_algebra(Family::HermH, 2));
    for (const auto& A : as) {
        for (int t = 0; t < 5; ++t) {
            Vec x = random_vec(A.n, rng);
            const Vec y = parse_element(A, format_element(A, x));
            CHECK((y - x).norm() < 1e-14 * (1 + x.norm()));
            // plain coordinates
            std::string coords = "[";
            for (int i = 0; i < A.n; ++i) coords += (i ? "," : "") + std::to_string(x[i]);
            coords += "]";
            CHECK((parse_element(A, coords) - x).norm() < 1e-5);
        }
    }
}

TEST_CASE("matrix literals follow the matrix model") {
    auto S = make_algebra(Family::SymR, 3);
    const Vec d = parse_element(S, "[[1,0,0],[0,-1,0],[0,0,0]]");
    CHECK(orbit_name(S, rank_signature(S, d).label) == "S_{2,1}");
    const Vec x = parse_element(S, "[[2,0.5,0],[0.5,1,-1],[0,-1,3]]");
    const CMat X = to_matrix(S, x);
    CHECK(std::abs(X(0, 1) - cplx(0.5, 0)) < 1e-14);
    CHECK(std::abs(X(1, 2) - cplx(-1, 0)) < 1e-14);
    CHECK(std::abs(X(2, 2) - cplx(3, 0)) < 1e-14);

    auto H = make_algebra(Family::HermC, 2);
    const CMat Y = to_matrix(H, parse_element(H, "[[1,[0.3,-0.7]],[[0.3,0.7],2]]"));
    CHECK(std::abs(Y(0, 1) - cplx(0.3, -0.7)) < 1e-14);
    CHECK(std::abs(Y(1, 0) - cplx(0.3, 0.7)) < 1e-14);

    if (hermh_enabled()) {
        auto Q = make_algebra(Family::HermH, 2);
        const CMat Z = to_matrix(Q, parse_element(Q, "[[1,[0.1,0.2,0.3,0.4]],[[0.1,-0.2,-0.3,-0.4],5]]"));
        const cplx I(0, 1);
        CMat block(2, 2);  // 0.1 + 0.2 i + 0.3 j + 0.4 k in the 2x2 complex model
        block << 0.1 + 0.2 * I, 0.3 + 0.4 * I, -0.3 + 0.4 * I, 0.1 - 0.2 * I;
        CHECK((Z.block(0, 2, 2, 2) - block).norm() < 1e-14);
        CHECK((Z.block(0, 0, 2, 2) - CMat::Identity(2, 2)).norm() < 1e-14);
    }

    auto P = make_algebra(Family::Spin, 2, 4);
    const Vec e = parse_element(P, "(1|0,0,0)");
    CHECK((e - unit(P)).norm() < 1e-14);
    CHECK(orbit_name(P, rank_signature(P, parse_element(P, "(0|1,0,0)")).label) == "Omega_1");
    CHECK(orbit_name(P, rank_signature(P, parse_element(P, "(1|1,0,0)")).label) == "S_{1,0}");
}

TEST_CASE("malformed element input") {
    auto S = make_algebra(Family::SymR, 2);
    CHECK_THROWS_WITH_AS(parse_element(S, "[1, 2,"), doctest::Contains("position"), ParameterError);
    CHECK_THROWS_AS(parse_element(S, "[1, 2]"), ParameterError);
    CHECK_THROWS_AS(parse_element(S, "[[1,2],[3,4]]"), ParameterError);  // not symmetric
    CHECK_THROWS_AS(parse_element(S, "(1|0,0)"), ParameterError);
    auto P = make_algebra(Family::Spin, 2, 4);
    CHECK_THROWS_WITH_AS(parse_element(P, "(1|0,0"), doctest::Contains("position 6"), ParameterError);
    CHECK_THROWS_AS(parse_element(P, "(1|0,0,0) x"), ParameterError);
}

TEST_CASE("reports serialize deterministically") {
    CheckReport r;
    r.name = "demo";
    r.max_relative_deviation = 0.25;
    r.tolerance = 1;
    r.method = "exact";
    r.details["note"] = "a,b";
    NegativeControl c;
    c.perturbation = "shift";
    r.control = c;
    finalize(r);
    const auto doc = make_document("verify/demo", json{{"seed", 1}}, json::array({to_json(r)}));
    CHECK(doc["schema"] == kReportSchema);
    CHECK(dump_document(doc) == dump_document(doc));
    CHECK(dump_document(doc).back() == '\n');
    const std::string row = check_csv_row(r);
    CHECK(row.find("\"note=a,b\"") != std::string::npos);
    CHECK(row.rfind(kReportSchema, 0) == 0);

    ZetaValue v;
    v.value = cplx(1, -2);
    v.engine = "rqmc_sobol";
    CHECK(to_json(v)["engine"] == "rqmc_sobol");
    CHECK(to_json(v)["im"] == -2.0);
}

TEST_CASE("config parsing") {
    CHECK(partitions_up_to(2, 2).size() == 4);
    CHECK(partitions_up_to(2, 3).size() == 6);
    CHECK(partitions_up_to(1, 3).size() == 4);
    auto c = parse_coefficients("1, 0.5i, -2-3i", 3);
    CHECK(c[1] == cplx(0, 0.5));
    CHECK(c[2] == cplx(-2, -3));
    CHECK(parse_coefficients("i,-i,1e-3", 3)[2] == cplx(1e-3, 0));
    CHECK_THROWS_AS(parse_coefficients("1,0", 3), ParameterError);
    CHECK_THROWS_AS(parse_coefficients("1,x,0", 3), ParameterError);
    CHECK(parse_real_list("0.4,0.9") == std::vector<double>{0.4, 0.9});
    CHECK_THROWS_AS(parse_real_list("0.4,,"), ParameterError);

    RunConfig cfg;
    cfg.m = "1,2";
    CHECK_THROWS_AS(validate(cfg), ParameterError);
    cfg.m = "2,1";
    CHECK_NOTHROW(validate(cfg));
    cfg.family = "spin";
    cfg.rank = 3;
    CHECK_THROWS_AS(validate(cfg), ParameterError);
    cfg.family = "all";
    cfg.rank = 2;
    CHECK(config_algebras(cfg).size() == (hermh_enabled() ? 5u : 4u));
    CHECK(check_seed(1, "a") == check_seed(1, "a"));
    CHECK(check_seed(1, "a") != check_seed(1, "b"));
    CHECK(check_seed(1, "a") != check_seed(2, "a"));
}

TEST_CASE("suite runs are reproducible") {
    RunConfig cfg;
    cfg.family = "symr";
    cfg.m = "1,0";
    auto dump = [&](const std::string& suite) {
        json res = json::array();
        for (const auto& r : run_suite(suite, cfg)) res.push_back(to_json(r));
        return dump_document(make_document("verify/" + suite, config_json(cfg), res));
    };
    const auto a = dump("equivariance");
    CHECK(a == dump("equivariance"));
    CHECK(a.find("\"pass\": false") == std::string::npos);
    cfg.s = {1.7};
    const auto d = dump("dimension");
    CHECK(d == dump("dimension"));
    CHECK(d.find("\"rank\": \"3\"") != std::string::npos);
    CHECK_THROWS_AS(run_suite("nope", cfg), ParameterError);
}
