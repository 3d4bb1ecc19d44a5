#include "doctest.h"
#include "jz/decompositions.hpp"
#include "test_helpers.hpp"

using namespace jz;
using jzt::random_vec;
using jzt::rel_diff;

TEST_CASE("spectral decomposition") {
    std::mt19937_64 rng(21);
    for (const auto& A : jzt::small_algebras()) {
        CAPTURE(family_name(A.family));
        CAPTURE(A.r);
        auto se = spectral(A, A.e);
        for (double l : se.eigenvalues) CHECK(std::abs(l - 1) < 1e-12);
        for (int t = 0; t < 30; ++t) {
            Vec x = random_vec(A.n, rng);
            auto sd = spectral(A, x);
            CHECK(rel_diff(reconstruct(A, sd), x) < 1e-10);
            check_frame(A, sd.frame);
            double prod = 1;
            for (double l : sd.eigenvalues) prod *= l;
            CHECK(std::abs(prod - det(A, x)) < 1e-9 * (1 + std::pow(x.norm(), A.r)));
            for (std::size_t i = 1; i < sd.eigenvalues.size(); ++i)
                CHECK(sd.eigenvalues[i - 1] >= sd.eigenvalues[i]);
        }
    }
    auto S2 = make_algebra(Family::SymR, 2);
    Vec x(3);
    x << 2, -1, 0;
    auto sd = spectral(S2, x);
    CHECK(sd.eigenvalues[0] == doctest::Approx(2));
    CHECK(sd.eigenvalues[1] == doctest::Approx(-1));
    CHECK(rel_diff(sd.frame.idempotents[0], frame_idempotent(S2, 0)) < 1e-12);

    auto Sp = make_algebra(Family::Spin, 2, 5);
    Vec u(4);
    u << 0.3, -1.0, 0.5, 2.0;
    auto ss = spectral(Sp, from_spin_model(Sp, 0.7, u));
    CHECK(ss.eigenvalues[0] == doctest::Approx(0.7 + u.norm()));
    CHECK(ss.eigenvalues[1] == doctest::Approx(0.7 - u.norm()));
    CHECK(rel_diff(ss.frame.idempotents[0], from_spin_model(Sp, 0.5, Vec(u / (2 * u.norm())))) < 1e-12);
}

TEST_CASE("quaternionic spectral with repeated eigenvalues") {
    auto A = make_algebra(Family::HermH, 3);
    auto sd = spectral(A, Vec(2.0 * A.e));
    check_frame(A, sd.frame);
    Vec x = 3.0 * frame_idempotent(A, 0) + 3.0 * frame_idempotent(A, 2) - frame_idempotent(A, 1);
    auto sx = spectral(A, x);
    check_frame(A, sx.frame);
    CHECK(rel_diff(reconstruct(A, sx), x) < 1e-12);
}

TEST_CASE("rank and signature") {
    for (const auto& A : jzt::small_algebras()) {
        for (int p = 0; p <= A.r; ++p)
            for (int q = 0; q <= p; ++q) {
                auto rs = rank_signature(A, o_pq(A, p, q));
                CHECK(rs.rank == p);
                CHECK(rs.label.p == p);
                CHECK(rs.label.q == q);
            }
        CHECK(orbit_name(A, rank_signature(A, A.e).label) == "Omega_0");
    }
    auto A = make_algebra(Family::SymR, 3);
    Vec x = Vec::Zero(6);
    x(0) = 1;
    x(1) = -2;
    auto rs = rank_signature(A, x);
    CHECK(rs.rank == 2);
    CHECK(rs.label.q == 1);
    CHECK(orbit_name(A, rs.label) == "S_{2,1}");
    x(2) = 1e-14;
    CHECK(rank_signature(A, x).boundary_ambiguous);
}

TEST_CASE("signature is invariant under the structure group") {
    std::mt19937_64 rng(4);
    for (const auto& A : jzt::small_algebras()) {
        for (int t = 0; t < 20; ++t) {
            auto g = random_group_element(A, 1000 + t, GroupStyle::Word);
            Vec x = random_vec(A.n, rng);
            auto a = rank_signature(A, x), b = rank_signature(A, g.apply(x));
            CHECK(a.rank == b.rank);
            CHECK(a.label.q == b.label.q);
            // singular orbit
            Vec y = o_pq(A, A.r - 1 > 0 ? A.r - 1 : 1, A.r > 1 ? 1 : 0);
            auto c = rank_signature(A, y), d = rank_signature(A, g.apply(y), 1e-8);
            CHECK(c.rank == d.rank);
            CHECK(c.label.q == d.label.q);
        }
    }
}

TEST_CASE("orbit index from minors agrees with the signature") {
    std::mt19937_64 rng(5);
    for (const auto& A : jzt::small_algebras()) {
        for (int t = 0; t < 50; ++t) {
            Vec x = random_vec(A.n, rng);
            std::vector<double> m(A.r);
            for (int k = 1; k <= A.r; ++k) m[k - 1] = minor_k(A, x, k);
            CHECK(orbit_index_from_minors(m.data(), A.r) == rank_signature(A, x).label.q);
        }
    }
}

TEST_CASE("Peirce projectors") {
    std::mt19937_64 rng(8);
    for (const auto& A : jzt::small_algebras()) {
        CAPTURE(family_name(A.family));
        std::vector<Frame> frames{canonical_frame(A), spectral(A, random_vec(A.n, rng)).frame};
        for (const auto& F : frames) {
            auto P = peirce_projectors(A, F);
            Mat sum = Mat::Zero(A.n, A.n);
            for (const auto& [ij, M] : P) {
                CHECK(rel_diff(Mat(M * M), M) < 1e-10);
                int dim = static_cast<int>(std::lround(M.trace()));
                CHECK(dim == (ij.first == ij.second ? 1 : A.d));
                for (const auto& [kl, N] : P)
                    if (kl != ij) CHECK(Mat(M * N).norm() < 1e-10);
                sum += M;
                if (ij.first != ij.second) {
                    // joint (1/2,1/2) eigenspace
                    Vec v = M * random_vec(A.n, rng);
                    CHECK(rel_diff(jordan_mul(A, F.idempotents[ij.first], v), Vec(0.5 * v)) < 1e-10);
                    CHECK(rel_diff(jordan_mul(A, F.idempotents[ij.second], v), Vec(0.5 * v)) < 1e-10);
                }
            }
            CHECK(rel_diff(sum, Mat::Identity(A.n, A.n)) < 1e-10);
        }
    }
}

TEST_CASE("Frobenius operators") {
    std::mt19937_64 rng(12);
    for (const auto& A : jzt::small_algebras()) {
        if (A.r < 2) continue;
        CHECK(rel_diff(frobenius(A, Vec::Zero(A.n), 0).op, Mat::Identity(A.n, A.n)) < 1e-15);
        for (int j = 0; j + 1 < A.r; ++j) {
            Vec z = Vec::Zero(A.n);
            for (int k = j + 1; k < A.r; ++k)
                for (int t = 0; t < A.d; ++t) z(A.block_offset(j, k) + t) = std::normal_distribution<>()(rng);
            Mat N = 2.0 * box_op(A, z, frame_idempotent(A, j));
            Mat Nk = N;
            for (int k = 1; k < A.n + 1; ++k) Nk = Nk * N;
            CHECK(Nk.norm() < 1e-10);
            auto g = frobenius(A, z, j);
            CHECK(std::abs(g.det_v - 1) < 1e-10);
        }
        Vec bad = Vec::Zero(A.n);
        bad(0) = 1;
        CHECK_THROWS_AS(frobenius(A, bad, 0), InvariantViolation);
    }
    auto A = make_algebra(Family::SymR, 3);
    for (int t = 0; t < 10; ++t) {
        for (int j = 0; j < 2; ++j) {
            Vec z = Vec::Zero(A.n);
            Mat M = Mat::Zero(3, 3);
            for (int k = j + 1; k < 3; ++k) {
                double zeta = std::normal_distribution<>()(rng);
                z(A.block_offset(j, k)) = zeta;
                M(k, j) = zeta / std::sqrt(2.0);
            }
            Mat L = Mat::Identity(3, 3) + M;
            Vec w = random_vec(A.n, rng);
            Mat W = to_matrix(A, w).real();
            Vec expect = from_matrix(A, (L * W * L.transpose()).cast<cplx>());
            CHECK(rel_diff(frobenius(A, z, j).apply(w), expect) < 1e-12);
        }
    }
}

TEST_CASE("minors") {
    std::mt19937_64 rng(13);
    for (const auto& A : jzt::small_algebras()) {
        for (int k = 1; k <= A.r; ++k) {
            CHECK(std::abs(minor_k(A, A.e, k) - 1) < 1e-12);
            CHECK(std::abs(dual_minor_k(A, A.e, k) - 1) < 1e-12);
        }
        Vec x = random_vec(A.n, rng);
        CHECK(std::abs(minor_k(A, x, A.r) - det(A, x)) < 1e-10 * (1 + std::pow(x.norm(), A.r)));
        CHECK(std::abs(dual_minor_k(A, x, A.r) - det(A, x)) < 1e-10 * (1 + std::pow(x.norm(), A.r)));
        if (A.family == Family::SymR || A.family == Family::HermC) {
            CMat X = to_matrix(A, x);
            for (int k = 1; k <= A.r; ++k) {
                CHECK(std::abs(minor_k(A, x, k) - X.topLeftCorner(k, k).determinant().real()) < 1e-10);
                CHECK(std::abs(dual_minor_k(A, x, k) - X.bottomRightCorner(k, k).determinant().real()) <
                      1e-10);
            }
        }
    }
    auto S2 = make_algebra(Family::SymR, 2);
    Vec x(3);
    x << 1.5, -0.25, 0.7;
    CHECK(dual_minor_k(S2, x, 1) == doctest::Approx(-0.25));
}

TEST_CASE("Gauss factorization") {
    std::mt19937_64 rng(14);
    for (const auto& A : jzt::small_algebras()) {
        CAPTURE(family_name(A.family));
        Vec a = random_vec(A.r, rng);
        Vec diag = Vec::Zero(A.n);
        diag.head(A.r) = a;
        auto gd = gauss_factor(A, diag);
        for (int k = 0; k < A.r; ++k) CHECK(gd.diagonal[k] == doctest::Approx(a(k)));
        for (const auto& z : gd.frobenius_params) CHECK(z.norm() < 1e-14);
        for (int t = 0; t < 100; ++t) {
            Vec x = random_vec(A.n, rng);
            auto g = gauss_factor(A, x);
            CHECK(rel_diff(gauss_recompose(A, g, canonical_frame(A)), x) < 1e-8);
            double prev = 1, prod = 1;
            for (int k = 1; k <= A.r; ++k) {
                double dk = minor_k(A, x, k);
                CHECK(std::abs(g.diagonal[k - 1] * prev - dk) <= 1e-8 * std::max(1.0, std::abs(dk)));
                prev = dk;
                prod *= g.diagonal[k - 1];
            }
            CHECK(std::abs(prod - det(A, x)) <= 1e-8 * std::max(1.0, std::abs(det(A, x))));
        }
        // general frame
        auto F = spectral(A, random_vec(A.n, rng)).frame;
        Vec y = random_vec(A.n, rng);
        CHECK(rel_diff(gauss_recompose(A, gauss_factor(A, y, F), F), y) < 1e-8);
    }
    auto S2 = make_algebra(Family::SymR, 2);
    CMat X(2, 2);
    X << 1, 1, 1, 2;
    auto g = gauss_factor(S2, from_matrix(S2, X));
    CHECK(g.diagonal[0] == doctest::Approx(1));
    CHECK(g.diagonal[1] == doctest::Approx(1));
    CHECK(g.frobenius_params[0].norm() > 0.5);
    X << 0, 1, 1, 2;
    try {
        gauss_factor(S2, from_matrix(S2, X));
        CHECK(false);
    } catch (const ChartDomainError& e) {
        CHECK(e.index == 1);
    }
}

TEST_CASE("chart") {
    std::mt19937_64 rng(15);
    for (const auto& A : jzt::small_algebras()) {
        if (A.r < 2) continue;
        auto B = peirce_subalgebra(A);
        const int nw = A.d * (A.r - 1);
        CHECK(B.n + nw + 1 == A.n);
        Vec v = random_vec(B.n, rng);
        Vec x = phi_chart(A, 1.0, Vec::Zero(nw), v);
        auto vi = subalgebra_coords(A);
        Vec expect = frame_idempotent(A, 0);
        for (int i = 0; i < B.n; ++i) expect(vi[i]) += v(i);
        CHECK(rel_diff(x, expect) < 1e-14);
        for (int t = 0; t < 100; ++t) {
            double u = std::normal_distribution<>()(rng);
            Vec z = random_vec(nw, rng), w = random_vec(B.n, rng);
            auto cp = phi_chart_inverse(A, phi_chart(A, u, z, w));
            CHECK(std::abs(cp.u - u) < 1e-8 * (1 + std::abs(u)));
            CHECK(rel_diff(cp.z, z) < 1e-8);
            CHECK(rel_diff(cp.v, w) < 1e-8);
            // det(x) = u det'(v) and Delta_k(x) = u Delta'_{k-1}(v)
            Vec y = phi_chart(A, u, z, w);
            CHECK(std::abs(det(A, y) - u * det(B, w)) < 1e-8 * (1 + std::abs(det(A, y))));
        }
    }
    auto S2 = make_algebra(Family::SymR, 2);
    CMat X(2, 2);
    X << 2, 0.6, 0.6, 1.1;
    auto cp = phi_chart_inverse(S2, from_matrix(S2, X));
    CHECK(cp.u == doctest::Approx(2));
    CHECK(cp.v(0) == doctest::Approx(1.1 - 0.36 / 2));
    Vec bad = from_matrix(S2, X);
    bad(0) = 0;
    CHECK_THROWS_AS(phi_chart_inverse(S2, bad), ChartDomainError);
}
