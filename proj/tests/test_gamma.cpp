#include <cmath>

#include "doctest.h"
#include "jz/gamma.hpp"
#include "jz/test_function.hpp"
#include "test_helpers.hpp"

using namespace jz;
using jzt::random_vec;

namespace {

Rational q(long a, long b = 1) { return Rational(a, b); }

std::vector<std::string> rationals(const std::vector<CriticalPoint>& cs) {
    std::vector<std::string> out;
    for (const auto& c : cs) out.push_back(rational_to_string(c.s0) + "x" + std::to_string(c.multiplicity));
    return out;
}

// Central finite difference d/dx_i with a 5-point stencil.
cplx fd_partial(const TestFunction& f, const Vec& x, int i, double h = 1e-3) {
    Vec e = Vec::Zero(x.size());
    e(i) = h;
    return (-f(x + 2 * e) + 8.0 * f(x + e) - 8.0 * f(x - e) + f(x - 2 * e)) / (12 * h);
}

}  // namespace

TEST_CASE("complex log gamma") {
    for (double x : {0.3, 1.0, 2.5, 7.25, 31.0}) CHECK(std::abs(gamma_complex(x) - std::tgamma(x)) < 1e-12 * std::tgamma(x));
    for (double x : {-0.5, -1.5, -2.25}) CHECK(std::abs(gamma_complex(x) - std::tgamma(x)) < 1e-11 * std::abs(std::tgamma(x)));
    // Gamma(1/2 + i t) has modulus sqrt(pi / cosh(pi t))
    for (double t : {0.5, 2.0, 10.0})
        CHECK(std::abs(std::abs(gamma_complex(cplx(0.5, t))) - std::sqrt(M_PI / std::cosh(M_PI * t))) <
              1e-12 * std::sqrt(M_PI / std::cosh(M_PI * t)));
    cplx z(0.7, 1.3);
    CHECK(std::abs(gamma_complex(z + 1.0) - z * gamma_complex(z)) < 1e-12 * std::abs(gamma_complex(z + 1.0)));
}

TEST_CASE("gamma_omega product formula") {
    auto R = make_algebra(Family::Real, 1);
    for (double s : {0.2, 1.7, -0.4})
        CHECK(std::abs(gamma_omega(s, Partition::zero(1), R) - std::tgamma(s + 1)) < 1e-12 * std::abs(std::tgamma(s + 1)));
    auto S = make_algebra(Family::SymR, 2);
    cplx v = gamma_omega(0.5, Partition::zero(2), S);
    double want = std::sqrt(2 * M_PI) * std::tgamma(2.0) * std::tgamma(1.5);
    CHECK(std::abs(v - want) < 1e-12 * want);
    CHECK(std::abs(std::exp(log_gamma_omega(0.5, Partition::zero(2), S)) - want) < 1e-12 * want);
    auto H = make_algebra(Family::HermC, 2);
    CHECK_THROWS_AS(gamma_omega(-2.0, Partition::zero(2), H), PoleError);
    CHECK_THROWS_AS(gamma_omega(-1.0, Partition::zero(2), S), PoleError);
    // ratio Gamma_Omega(s+k+m+n/r) / Gamma_Omega(s+m+n/r)
    std::vector<int> m{1, 0};
    for (int k = 1; k <= 3; ++k) {
        cplx s(0.3, 0.2);
        cplx ratio = gamma_omega(s + double(k), m, H) / gamma_omega(s, m, H);
        CHECK(std::abs(bernstein_ratio(s, k, m, H) - ratio) < 1e-11 * std::abs(ratio));
    }
    CHECK(gamma_factor_shift({0, 0}, S, 1) == q(3, 2));
    CHECK(gamma_factor_shift({0, 0}, S, 2) == q(1));
    CHECK(bernstein_zero_factors(-1.0, 2, {0, 0}, S) == std::vector<int>{2});
    CHECK(bernstein_zero_factors(-2.0, 2, {0, 0}, H) == std::vector<int>{1, 2});
}

TEST_CASE("o_mult") {
    auto S = make_algebra(Family::SymR, 2);
    auto H = make_algebra(Family::HermC, 2);
    CHECK(o_mult(q(-1), Partition::zero(2), S) == 1);
    CHECK(o_mult(q(-3, 2), Partition::zero(2), S) == 1);
    CHECK(o_mult(q(-2), Partition::zero(2), H) == 2);
    CHECK(o_mult(q(-1), Partition::zero(2), H) == 1);
    CHECK(o_mult(q(5), Partition::zero(2), H) == 0);
    CHECK(o_mult(q(-1, 3), Partition::zero(2), S) == 0);
    CHECK(o_mult(q(-2), Partition({1, 0}), H) == 1);
}

TEST_CASE("critical and pole sets") {
    auto R = make_algebra(Family::Real, 1);
    CHECK(rationals(critical_set(Partition::zero(1), R, q(-3), q(0))) == std::vector<std::string>{"-1x1", "-2x1", "-3x1"});
    auto S = make_algebra(Family::SymR, 2);
    CHECK(rationals(critical_set(Partition({2, 0}), S, q(-3), q(2))) ==
          std::vector<std::string>{"1x1", "0x1", "-1x1", "-3/2x1", "-2x1", "-5/2x1", "-3x1"});
    CHECK(critical_set(Partition::zero(1), R, q(1), q(2)).empty());
    CHECK(is_critical(q(-3, 2), Partition({2, 0}), S));
    CHECK(!is_critical(q(-1, 2), Partition({2, 0}), S));
    auto H = make_algebra(Family::HermC, 2);
    auto ps = pole_set({0, 0}, H, q(-3), q(0));
    CHECK(rationals(ps) == std::vector<std::string>{"-1x1", "-2x2", "-3x2"});
    // multiplicity 2 first occurs where both factors are polar
    auto cs = critical_set(Partition::zero(2), S, q(-6), q(0));
    for (const auto& c : cs) CHECK(c.multiplicity == 1);
    auto ch = critical_set(Partition::zero(2), H, q(-6), q(0));
    CHECK(ch.front().multiplicity == 1);
    CHECK(ch[1].s0 == q(-2));
    CHECK(ch[1].multiplicity == 2);
}

TEST_CASE("homogeneity bounds") {
    auto S = make_algebra(Family::SymR, 2);
    auto b = homogeneity_bounds(1, Partition::zero(2), S);
    CHECK(b.s_max_rank_p == q(-1));
    CHECK(b.s_max_origin == q(-3, 2));
    auto b1 = homogeneity_bounds(1, Partition({1, 0}), S);
    CHECK(b1.s_max_rank_p == b.s_max_rank_p + 1);
    auto Sp = make_algebra(Family::Spin, 2, 5);
    CHECK(homogeneity_bounds(1, Partition::zero(2), Sp).s_max_origin == q(-5, 2));
}

TEST_CASE("snap to half integers") {
    Rational r;
    CHECK(snap_half_integer(-1.5, r));
    CHECK(r == q(-3, 2));
    CHECK(snap_half_integer(2.0 + 1e-14, r));
    CHECK(r == q(2));
    CHECK(!snap_half_integer(-1.3, r));
}

TEST_CASE("test function operators") {
    auto R = make_algebra(Family::Real, 1);
    Vec zero = Vec::Zero(1);
    auto f = TestFunction::gaussian(zero, 1.0);
    auto df = det_dop(R, f, 1);
    for (double x : {-1.2, 0.0, 0.4, 2.0}) {
        Vec v(1);
        v << x;
        CHECK(std::abs(df(v) - (-x * std::exp(-x * x / 2))) < 1e-14);
    }

    std::mt19937_64 rng(5);
    auto S = make_algebra(Family::SymR, 2);
    CPoly p(3);
    p.add_term({1, 0, 0}, 0.5);
    p.add_term({0, 2, 1}, cplx(0, 1));
    p.add_term({0, 0, 0}, 1.0);
    auto g = TestFunction::gaussian(Vec(random_vec(3, rng, 0.3)), 0.8, p);
    auto dg = det_dop(S, g, 1);
    for (int t = 0; t < 5; ++t) {
        Vec x = random_vec(3, rng, 0.7);
        // det(d) = d_a d_c - 1/2 d_b^2 in orthonormal coordinates
        auto gac = partial(partial(g, 0), 1);
        auto gbb = partial(partial(g, 2), 2);
        cplx want = gac(x) - 0.5 * gbb(x);
        CHECK(std::abs(dg(x) - want) < 1e-12 * (1 + std::abs(want)));
        for (int i = 0; i < 3; ++i) {
            cplx fd = fd_partial(g, x, i);
            CHECK(std::abs(partial(g, i)(x) - fd) < 1e-5 * (1 + std::abs(fd)));
        }
    }
    // linearity and polynomial products
    auto h = TestFunction::gaussian(g.center, 0.8);
    Poly lin = Poly::variable(3, 0) * 2.0 + Poly::constant(3, -1.0);
    auto hp = multiply(h, lin);
    Vec x = random_vec(3, rng);
    CHECK(std::abs(hp(x) - lin.evaluate(x) * h(x)) < 1e-14);
    CHECK(std::abs(scale(g, cplx(2, -1))(x) - cplx(2, -1) * g(x)) < 1e-14);
    auto d2 = det_dop(S, g, 2);
    CHECK(std::abs(d2(x) - det_dop(S, dg, 1)(x)) < 1e-10 * (1 + std::abs(d2(x))));
}

TEST_CASE("fourier transform of poly times gaussian") {
    for (int n : {1, 3}) {
        auto f = TestFunction::gaussian(Vec::Zero(n), 1.0);
        auto F = fourier(f);
        std::mt19937_64 rng(2);
        for (int t = 0; t < 4; ++t) {
            Vec y = random_vec(n, rng);
            double want = std::pow(2 * M_PI, n / 2.0) * std::exp(-y.squaredNorm() / 2);
            CHECK(std::abs(F(y) - want) < 1e-13 * want + 1e-15);
        }
    }
    // det(d) transforms into multiplication by det(i y)
    auto S = make_algebra(Family::SymR, 2);
    CPoly p = CPoly::variable(3, 2) + CPoly::constant(3, 1.0);
    auto f = TestFunction::gaussian(Vec::Zero(3), 0.9, p);
    auto lhs = fourier(det_dop(S, f, 1));
    auto rhs = fourier(f);
    std::mt19937_64 rng(3);
    for (int t = 0; t < 4; ++t) {
        Vec y = random_vec(3, rng);
        cplx want = -det(S, y) * rhs(y);
        CHECK(std::abs(lhs(y) - want) < 1e-12 * (1 + std::abs(want)));
    }
    CHECK_THROWS_AS(fourier(TestFunction::gaussian(Vec::Ones(3), 1.0)), ParameterError);
}

TEST_CASE("pullback") {
    std::mt19937_64 rng(9);
    auto S = make_algebra(Family::SymR, 2);
    CPoly p = CPoly::variable(3, 0) * cplx(0, 2) + CPoly::constant(3, 1.0);
    auto f = TestFunction::gaussian(random_vec(3, rng, 0.5), 0.7, p);
    auto g = random_group_element(S, 4, GroupStyle::Word);
    auto fg = pullback(f, g);
    Mat ginv = g.op.inverse();
    for (int t = 0; t < 5; ++t) {
        Vec x = random_vec(3, rng);
        cplx want = f(Vec(ginv * x));
        CHECK(std::abs(fg(x) - want) < 1e-12 * (1 + std::abs(want)));
    }
    auto fl = pullback(f, group_scalar(S, 2.0));
    Vec x = random_vec(3, rng);
    CHECK(std::abs(fl(x) - f(Vec(x / 2.0))) < 1e-14);
}
