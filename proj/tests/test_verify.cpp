#include <cmath>

#include "doctest.h"
#include "jz/decompositions.hpp"
#include "jz/gamma.hpp"
#include "jz/verify.hpp"
#include "test_helpers.hpp"

using namespace jz;
using jzt::random_vec;

namespace {

Budget budget(long long n, std::uint64_t seed = 5, bool qmc = false) {
    Budget b;
    b.samples = n;
    b.seed = seed;
    b.qmc = qmc;
    return b;
}

const std::vector<std::vector<cplx>> kCoeffs{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 1}, {1, -1, 1}};

}  // namespace

TEST_CASE("finalize") {
    CheckReport r;
    r.max_relative_deviation = 0.5;
    r.tolerance = 1;
    finalize(r);
    CHECK(r.pass);
    r.failure = "sigma above cap";
    finalize(r);
    CHECK(!r.pass);
    r.failure.clear();
    NegativeControl c;
    c.informative = true;
    c.detected = false;
    r.control = c;
    finalize(r);
    CHECK(!r.pass);
    r.control->informative = false;
    finalize(r);
    CHECK(r.pass);
    r.max_relative_deviation = NAN;
    finalize(r);
    CHECK(!r.pass);
}

TEST_CASE("batteries are deterministic") {
    auto S = make_algebra(Family::SymR, 2);
    BatteryOptions o;
    o.size = 5;
    auto a = make_battery(S, o), b = make_battery(S, o);
    CHECK(battery_manifest(a) == battery_manifest(b));
    o.seed = 2;
    CHECK(battery_manifest(make_battery(S, o)) != battery_manifest(a));
    o.centered = true;
    for (const auto& f : make_battery(S, o)) CHECK(f.center.norm() == 0.0);
}

TEST_CASE("randomized quasi-Monte Carlo sampler") {
    auto S = make_algebra(Family::SymR, 2);
    auto f = TestFunction::gaussian(probe_offset(3), 1.0);
    auto mc = zeta_eval_orbits(S, Partition::zero(2), f, 0.5, budget(1 << 21));
    auto q = zeta_eval_orbits(S, Partition::zero(2), f, 0.5, budget(1 << 19, 5, true));
    auto q2 = zeta_eval_orbits(S, Partition::zero(2), f, 0.5, budget(1 << 19, 5, true));
    for (int j = 0; j < 3; ++j) {
        CHECK(q[j].engine == "rqmc_sobol");
        CHECK(std::abs(q[j].value - mc[j].value) < 4 * mc[j].abs_error_estimate);
        CHECK(q[j].abs_error_estimate < mc[j].abs_error_estimate / 5);
        CHECK(q[j].value == q2[j].value);
    }
}

TEST_CASE("equivariance of h_m") {
    for (auto fam : {Family::SymR, Family::HermC}) {
        auto A = make_algebra(fam, 2);
        std::mt19937_64 rng(4);
        std::vector<GroupElement> gs;
        std::vector<Vec> xs;
        for (int i = 0; i < 12; ++i) {
            gs.push_back(random_group_element(A, 40 + i, GroupStyle::Word, 4));
            xs.push_back(random_vec(A.n, rng));
        }
        auto rep = check_equivariance_hm(A, build_Pm(A, Partition({2, 1})), gs, xs);
        CHECK(rep.pass);
        CHECK(rep.max_relative_deviation < 1e-9);
        REQUIRE(rep.control);
        CHECK(rep.control->detected);
    }
}

TEST_CASE("exact identities") {
    auto S = make_algebra(Family::SymR, 2);
    auto rep = check_exact_identities(S, Partition({2, 1}), 20, 11);
    CHECK(rep.pass);
    CHECK(rep.details.at("mismatches") == "0");
    CHECK(rep.control->detected);
    auto H = make_algebra(Family::HermC, 2);
    CHECK(check_exact_identities(H, Partition({1, 0}), 6, 3, {0, 1}).pass);
}

TEST_CASE("homogeneity") {
    auto S = make_algebra(Family::SymR, 2);
    auto space = build_Pm(S, Partition({1, 0}));
    auto phi = TestFunction::gaussian(probe_offset(3), 1.0);
    HomogeneityOptions crn;
    crn.common_random_numbers = true;
    auto id = check_homogeneity(S, -1, space, 0.7, group_identity(S), phi, budget(1 << 16), crn);
    CHECK(id.pass);
    CHECK(id.max_relative_deviation == 0.0);
    CHECK(!id.control->informative);

    auto g = compose(random_group_element(S, 8, GroupStyle::Frobenius),
                     quadratic_generator(S, Vec((Vec(2) << 1.3, 0.8).finished())));
    auto rep = check_homogeneity(S, 1, space, 0.7, g, phi, budget(1 << 20));
    CHECK(rep.pass);
    CHECK(rep.sigma < 1e-2);
    CHECK(rep.control->informative);
    CHECK(rep.control->detected);
    CHECK_THROWS_AS(check_homogeneity(S, 3, space, 0.7, g, phi, budget(1 << 10)), ParameterError);

    const auto base = vector_zeta_orbits(S, space, phi, 0.7, budget(1 << 20, 77, true));
    HomogeneityOptions shared;
    shared.base = &base;
    auto rs = check_homogeneity(S, 1, space, 0.7, g, phi, budget(1 << 20), shared);
    CHECK(rs.pass);
    CHECK(rs.samples == 2 * (1 << 20));
    const auto other = vector_zeta_orbits(S, build_Pm(S, Partition({2, 0})), phi, 0.7, budget(1 << 10, 77, true));
    shared.base = &other;
    CHECK_THROWS_AS(check_homogeneity(S, 1, space, 0.7, g, phi, budget(1 << 10), shared), ParameterError);
}

TEST_CASE("quasi-homogeneity of rank-one Laurent coefficients") {
    auto R = make_algebra(Family::Real, 1);
    auto phi = TestFunction::gaussian(probe_offset(1), 1.0);
    for (int s0 : {-1, -2, -3}) {
        auto rep = check_quasihomogeneity(R, {1.0, 0.0}, Partition::zero(1), phi, Rational(s0), budget(0));
        CHECK(rep.pass);
        CHECK(rep.details.at("order") == "1");
        CHECK(rep.control->detected);
    }
    QuasiHomogeneityOptions o;
    o.lambdas = {1.5};
    CHECK_THROWS_AS(check_quasihomogeneity(R, {1.0, 0.0}, Partition::zero(1), phi, Rational(-1), budget(0), o),
                    ConditioningError);
}

TEST_CASE("rescaled Laurent data match a direct extraction") {
    auto R = make_algebra(Family::Real, 1);
    auto phi = TestFunction::gaussian(probe_offset(1), 1.0);
    for (double w : {0.3, 2.0}) {
        auto L = laurent(R, {1.0, 0.0}, Partition::zero(1), phi, -2.0, budget(0));
        auto Lw = laurent(R, {1.0, 0.0}, Partition::zero(1), pullback(phi, group_scalar(R, w)), -2.0, budget(0));
        auto Rw = rescale_laurent(R, Partition::zero(1), L, w);
        for (int h = 0; h <= L.order; ++h)
            CHECK(std::abs(Rw.coefficients.at(-h) - Lw.coefficients.at(-h)) <
                  1e-8 * std::abs(Lw.coefficients.at(-h)) + 1e-12);
    }
}

TEST_CASE("chart recursion") {
    auto S = make_algebra(Family::SymR, 2);
    auto f = default_chart_test_function(S);
    for (int j : {0, 1, 2}) {
        auto rep = check_chart_recursion(S, j, Partition::zero(2), 1.0, f, budget(1 << 19));
        CHECK(rep.pass);
    }
    CHECK_THROWS_AS(default_chart_test_function(make_algebra(Family::Real, 1)), ParameterError);
}

TEST_CASE("functional equation: rank one classical constants") {
    auto R = make_algebra(Family::Real, 1);
    BatteryOptions bo;
    bo.centered = true;
    bo.size = 6;
    for (double s : {0.4, 0.7}) {
        FunctionalEquationFit fit;
        auto rep = check_functional_equation_span(R, Partition::zero(1), s, make_battery(R, bo), budget(0), {}, &fit);
        CHECK(rep.pass);
        const cplx ph = std::exp(cplx(0, M_PI * s / 2));
        const double g = std::tgamma(s);
        CHECK(std::abs(fit.v[0][0] - g / ph) < 1e-6);
        CHECK(std::abs(fit.v[0][1] - g * ph) < 1e-6);
        CHECK(std::abs(fit.v[1][0] - g * ph) < 1e-6);
        CHECK(std::abs(fit.v[1][1] - g / ph) < 1e-6);
    }
    bo.size = 3;
    CHECK_THROWS_AS(check_functional_equation_span(R, Partition::zero(1), 0.4, make_battery(R, bo), budget(0)),
                    ParameterError);
}

TEST_CASE("dimension probe") {
    auto S = make_algebra(Family::SymR, 2);
    BatteryOptions bo;
    bo.size = 5;
    auto rep = dimension_probe(S, Partition({1, 0}), 0.6, make_battery(S, bo), budget(1 << 18));
    CHECK(rep.pass);
    CHECK(rep.details.at("rank") == "3");
    CHECK(rep.details.at("control_rank") == "2");
}

TEST_CASE("chart Laurent extraction agrees with the global one") {
    auto S = make_algebra(Family::SymR, 2);
    auto probe = TestFunction::gaussian(Vec(1.5 * o_pq(S, 1, 0) + 0.3 * probe_offset(3)), 0.3);
    std::vector<std::vector<cplx>> cs{{1, 0, 0}, {1, 1, 1}};
    auto G = laurent_multi(S, cs, Weight{{0, 0}, false}, probe, -1.0, budget(1 << 19, 7, true));
    auto C = chart_laurent(S, cs, Partition::zero(2), probe, Rational(-1), budget(1 << 19, 7));
    for (int i = 0; i < 2; ++i) {
        CHECK(G[i].order == 1);
        CHECK(C[i].order == 1);
        for (int h : {-1, 0}) {
            double sig = std::hypot(G[i].sigma.at(h), C[i].sigma.at(h));
            CHECK(std::abs(G[i].coefficients.at(h) - C[i].coefficients.at(h)) < 5 * sig);
        }
    }
    CHECK_THROWS_AS(chart_laurent(make_algebra(Family::SymR, 3), cs, Partition::zero(3), probe, Rational(-1),
                                  budget(10)),
                    ParameterError);
}

TEST_CASE("support rank probes") {
    auto R = make_algebra(Family::Real, 1);
    auto phi = TestFunction::gaussian(probe_offset(1), 1.0);
    std::vector<std::vector<ProbeResponse>> resp;
    auto reps = check_support_rank(R, {{1, 0}, {1, 1}}, Partition::zero(1), Rational(-2), phi, {}, budget(0), {}, &resp);
    REQUIRE(reps.size() == 2);
    for (const auto& r : reps) CHECK(r.pass);
    // order-one pole of x_+^s at -2 lives at the origin only
    CHECK(reps[0].details.at("h1_support_rank") == "0");

    auto S = make_algebra(Family::SymR, 2);
    auto phi2 = TestFunction::gaussian(probe_offset(3), 1.0);
    SupportProbeOptions o;
    o.probe_samples = 1 << 17;
    auto r2 = check_support_rank(S, kCoeffs, Partition::zero(2), Rational(-1), phi2, {}, budget(1 << 18, 17, true), o,
                                 &resp);
    for (std::size_t c = 0; c < r2.size(); ++c) {
        CHECK(r2[c].pass);
        if (r2[c].details.at("order") == "1") CHECK(r2[c].details.at("h1_support_rank") == "1");
    }
}
