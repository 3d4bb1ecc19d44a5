#pragma once

#include <string>
#include <vector>

#include "jz/errors.hpp"
#include "jz/polynomial.hpp"
#include "jz/types.hpp"

namespace jz {

enum class Family { Real, SymR, HermC, HermH, Spin };

std::string family_name(Family f);
Family parse_family(const std::string& s);  // "symr", "hermc", "hermh", "spin", "real"
bool hermh_enabled();

// Simple Euclidean Jordan algebra in orthonormal coordinates.
//
// Coordinate layout (all families): coordinates 0..r-1 are the canonical
// frame e_1..e_r, then the Peirce blocks V_ij (i<j, lexicographic), d each.
template <class S>
struct AlgebraT {
    Family family = Family::Real;
    int r = 1;
    int d = 0;
    int n = 1;

    std::vector<MatT<S>> C;  // b_i o b_j = sum_k C[k](i,j) b_k
    VecT<S> e;                // unit

    // Matrix model (double only, empty for Real/Spin): x <-> sum x_i B_i.
    int field_block = 1;  // 1 for R and C, 2 for the complex model of H
    std::vector<CMat> basis_matrices;

    Polynomial<S> det_poly;
    std::vector<Polynomial<S>> minor_polys;       // Delta_1..Delta_r
    std::vector<Polynomial<S>> dual_minor_polys;  // Delta*_1..Delta*_r

    int block_offset(int i, int j) const {  // 0-based, i <= j
        if (i == j) return i;
        int idx = 0;
        for (int a = 0; a < r; ++a)
            for (int b = a + 1; b < r; ++b, ++idx)
                if (a == i && b == j) return r + d * idx;
        throw ParameterError("block_offset: bad index");
    }
    int block_size(int i, int j) const { return i == j ? 1 : d; }

    void check(const VecT<S>& x) const {
        if (x.size() != n) throw AlgebraMismatch("element has wrong number of coordinates");
    }
};

using Algebra = AlgebraT<double>;
using ExactAlgebra = AlgebraT<Rational>;

// n_opt is only read for Spin. r=1 yields the Real family for every input.
Algebra make_algebra(Family family, int r, int n_opt = 0);

// Rational version of a double algebra; throws ParameterError if the
// structure constants are not small-denominator rationals (r >= 3).
ExactAlgebra exact_algebra(const Algebra& A);

// ---------------------------------------------------------------- products

template <class S>
VecT<S> jordan_mul(const AlgebraT<S>& A, const VecT<S>& x, const VecT<S>& y) {
    A.check(x);
    A.check(y);
    VecT<S> z(A.n);
    for (int k = 0; k < A.n; ++k) z(k) = x.dot(A.C[k] * y);
    return z;
}

template <class S>
MatT<S> L_op(const AlgebraT<S>& A, const VecT<S>& x) {
    A.check(x);
    MatT<S> L(A.n, A.n);
    for (int k = 0; k < A.n; ++k) L.row(k) = x.transpose() * A.C[k];
    return L;
}

template <class S>
MatT<S> P_op(const AlgebraT<S>& A, const VecT<S>& x) {
    MatT<S> L = L_op(A, x);
    return S(2) * L * L - L_op(A, jordan_mul(A, x, x));
}

template <class S>
MatT<S> box_op(const AlgebraT<S>& A, const VecT<S>& x, const VecT<S>& y) {
    MatT<S> Lx = L_op(A, x), Ly = L_op(A, y);
    return L_op(A, jordan_mul(A, x, y)) + Lx * Ly - Ly * Lx;
}

template <class S>
S inner(const AlgebraT<S>& A, const VecT<S>& x, const VecT<S>& y) {
    A.check(x);
    A.check(y);
    return x.dot(y);
}

template <class S>
S trace(const AlgebraT<S>& A, const VecT<S>& x) {
    return inner(A, x, A.e);
}

template <class S>
VecT<S> unit(const AlgebraT<S>& A) {
    return A.e;
}

// Canonical frame idempotent e_{i+1}.
template <class S>
VecT<S> frame_idempotent(const AlgebraT<S>& A, int i) {
    VecT<S> v = VecT<S>::Zero(A.n);
    v(i) = S(1);
    return v;
}

template <class S>
VecT<S> jordan_power(const AlgebraT<S>& A, const VecT<S>& x, int k) {
    VecT<S> p = A.e;
    for (int i = 0; i < k; ++i) p = jordan_mul(A, p, x);
    return p;
}

// Generic determinant: symbolic polynomial built from Newton identities.
template <class S>
S det_generic(const AlgebraT<S>& A, const VecT<S>& x) {
    A.check(x);
    return A.det_poly.evaluate(x);
}

// Matrix-model determinant (complex det, Pfaffian for H, closed form for Spin).
double det_model(const Algebra& A, const Vec& x);

inline double det(const Algebra& A, const Vec& x) { return det_model(A, x); }
inline Rational det(const ExactAlgebra& A, const VecT<Rational>& x) { return det_generic(A, x); }

// inverse(x): solves P(x) z = x.
template <class S>
VecT<S> inverse(const AlgebraT<S>& A, const VecT<S>& x, double tol = -1) {
    A.check(x);
    S dx = det_generic(A, x);
    if constexpr (std::is_same_v<S, Rational>) {
        if (dx == 0) throw SingularityError("inverse: singular element", 0.0);
    } else {
        if (tol < 0) tol = default_tolerance();
        double scale = std::pow(x.norm(), A.r);
        if (std::abs(dx) <= tol * scale)
            throw SingularityError("inverse: singular element", std::abs(dx));
    }
    MatT<S> P = P_op(A, x);
    return P.fullPivLu().solve(x);
}

// Matrix of an element in the matrix model (SymR/HermC/HermH only).
CMat to_matrix(const Algebra& A, const Vec& x);
Vec from_matrix(const Algebra& A, const CMat& X);

// Spin model conversion: coords <-> (lambda, u) with x = lambda (1,0) + (0,u).
void to_spin_model(const Algebra& A, const Vec& x, double& lambda, Vec& u);
Vec from_spin_model(const Algebra& A, double lambda, const Vec& u);

// Pfaffian of an antisymmetric complex matrix (elimination with pivoting).
cplx pfaffian(CMat M);

}  // namespace jz
