#pragma once

#include <complex>
#include <utility>
#include <vector>

#include "jz/algebra.hpp"
#include "jz/polyrep.hpp"

namespace jz {

// Principal branch of log Gamma for complex z (Lanczos g=7, reflection for Re z < 1/2).
cplx lgamma_complex(cplx z);
cplx gamma_complex(cplx z);

// Product formula value of Gamma_Omega(s + n/r + m):
// (2 pi)^{(n-r)/2} prod_j Gamma(s + m_j + 1 + (r-j)d/2). Throws PoleError at poles.
cplx gamma_omega(cplx s, const Partition& m, const Algebra& A);
cplx log_gamma_omega(cplx s, const Partition& m, const Algebra& A);

// Same with a general integer tuple in place of m (e.g. -m*).
cplx gamma_omega(cplx s, const std::vector<int>& m, const Algebra& A);

// Shift of the j-th factor argument, m_j + 1 + (r-j)d/2 (j is 1-based).
Rational gamma_factor_shift(const std::vector<int>& m, const Algebra& A, int j);

// Bernstein ratio Gamma_Omega(s+k+m+n/r) / Gamma_Omega(s+m+n/r) as a finite product.
cplx bernstein_ratio(cplx s, int k, const std::vector<int>& m, const Algebra& A);

// Gamma factors j (1-based) whose argument s + shift_j + i vanishes for some 0 <= i < k.
std::vector<int> bernstein_zero_factors(cplx s, int k, const std::vector<int>& m, const Algebra& A,
                                        double tol = 1e-12);

// Number of factors of Gamma_Omega(s + n/r + m) polar at s0.
int o_mult(const Rational& s0, const std::vector<int>& m, const Algebra& A);
int o_mult(const Rational& s0, const Partition& m, const Algebra& A);

struct CriticalPoint {
    Rational s0;
    int multiplicity = 0;
};

// Poles of Gamma_Omega(s + n/r - m*) in [lo, hi], descending.
std::vector<CriticalPoint> critical_set(const Partition& m, const Algebra& A, const Rational& lo,
                                        const Rational& hi);

// Poles of Gamma_Omega(s + n/r + m) in [lo, hi], descending (the possible poles of Phi_j^m).
std::vector<CriticalPoint> pole_set(const std::vector<int>& m, const Algebra& A, const Rational& lo,
                                    const Rational& hi);

bool is_critical(const Rational& s, const Partition& m, const Algebra& A);

struct HomogeneityBounds {
    Rational s_max_rank_p;  // -(n/r - d p/2) + m_{r-p}
    Rational s_max_origin;  // -n/r + m_r
};

HomogeneityBounds homogeneity_bounds(int p, const Partition& m, const Algebra& A);

// Nearest rational with denominator <= 2 when |s - q| < tol, used to snap
// double inputs onto the half-integer lattice.
bool snap_half_integer(double s, Rational& q, double tol = 1e-12);

}  // namespace jz
