#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "jz/algebra.hpp"
#include "jz/group.hpp"
#include "jz/polynomial.hpp"

namespace jz {

// Weakly decreasing nonnegative integer r-tuple.
struct Partition {
    std::vector<int> parts;

    Partition() = default;
    explicit Partition(std::vector<int> p);
    static Partition zero(int r) { return Partition(std::vector<int>(r, 0)); }
    static Partition parse(const std::string& s, int r);  // "2,1"; shorter input is zero padded

    int r() const { return static_cast<int>(parts.size()); }
    int operator[](int i) const { return parts[i]; }
    int abs() const;
    bool is_zero() const { return abs() == 0; }
    Partition complement() const;     // m^c
    std::vector<int> neg_star() const;  // -m* = (-m_r, .., -m_1)
    Partition prime() const;          // m' = (m_2, .., m_r)
    Partition one() const;            // m^1 = (m_1-m_r, .., m_{r-1}-m_r, 0)
    std::string str() const;
    bool operator==(const Partition& o) const { return parts == o.parts; }
};

// Generalized power functions; integer exponents m_k - m_{k+1} may be negative.
double delta_power(const Algebra& A, const std::vector<int>& m, const Vec& x);
double dual_delta_power(const Algebra& A, const std::vector<int>& m, const Vec& x);
Rational delta_power(const ExactAlgebra& A, const std::vector<int>& m, const VecT<Rational>& x);
Rational dual_delta_power(const ExactAlgebra& A, const std::vector<int>& m, const VecT<Rational>& x);

template <class S>
Polynomial<S> delta_power_poly(const AlgebraT<S>& A, const Partition& m) {
    if (m.r() != A.r) throw ParameterError("partition length must equal the rank");
    Polynomial<S> p = Polynomial<S>::constant(A.n, S(1));
    for (int k = 0; k < A.r; ++k) {
        int e = m[k] - (k + 1 < A.r ? m[k + 1] : 0);
        if (e) p *= A.minor_polys[k].pow(e);
    }
    return p;
}

template <class S>
Polynomial<S> dual_delta_power_poly(const AlgebraT<S>& A, const Partition& m) {
    if (m.r() != A.r) throw ParameterError("partition length must equal the rank");
    Polynomial<S> p = Polynomial<S>::constant(A.n, S(1));
    for (int k = 0; k < A.r; ++k) {
        int e = m[k] - (k + 1 < A.r ? m[k + 1] : 0);
        if (e) p *= A.dual_minor_polys[k].pow(e);
    }
    return p;
}

template <class S>
struct PolySpaceT {
    Partition m;
    std::vector<Polynomial<S>> basis;             // e_alpha in P_m
    std::vector<Polynomial<S>> dual_basis;        // f_alpha = C(e~_alpha) in P_{m^c}
    std::vector<Polynomial<S>> complement_basis;  // a basis of P_{m^c}
    MatT<S> fischer_gram;                         // <e_a, e_b>_F
    std::vector<int> rank_history;
    int samples_used = 0;

    int dim() const { return static_cast<int>(basis.size()); }
};

using PolySpace = PolySpaceT<double>;
using ExactPolySpace = PolySpaceT<Rational>;

struct BuildOptions {
    int sample_count = 20;
    double tol = 1e-9;  // relative singular value cutoff
    std::uint64_t seed = 0x5eed;
    int max_samples = 4000;
    int max_monomials = 20000;
};

// Fischer-orthonormal basis of span{Delta_m(g .)} by rank stabilization.
PolySpace build_Pm(const Algebra& A, const Partition& m, const BuildOptions& opt = {});

// Rational basis from rational group elements (P(a), tau(z) and their adjoints).
ExactPolySpace build_Pm_exact(const ExactAlgebra& A, const Partition& m, const BuildOptions& opt = {});

// Matrix of p -> p(g^{-1} .) in the stored basis.
Mat pi_m_matrix(const Algebra& A, const GroupElement& g, const PolySpace& space);
MatT<Rational> pi_m_matrix(const ExactAlgebra& A, const MatT<Rational>& g, const ExactPolySpace& space);

// P -> det^{m_1} P(x^{-1}), from P_m to P_{m^c}.
Poly contragredient(const Algebra& A, const PolySpace& space, const Poly& P);
QPoly contragredient(const ExactAlgebra& A, const ExactPolySpace& space, const QPoly& P);

// Coordinates of P in the stored basis; throws when P is not in P_m.
Vec coordinates_in(const PolySpace& space, const Poly& P, double tol = 1e-8);

// h_m(x) = (f_alpha(x))_alpha
Vec h_m(const Algebra& A, const PolySpace& space, const Vec& x);

struct SphericalResult {
    bool spherical = false;
    Rational beta;  // chi exponent
    Partition m;
};

// Weight (w_1 <= .. <= w_r) read as prod a_i^{w_i} on P(sum a_i e_i).
SphericalResult is_spherical(const Algebra& A, const std::vector<int>& weight);

}  // namespace jz
