#pragma once

#include <map>
#include <utility>
#include <vector>

#include "jz/algebra.hpp"
#include "jz/group.hpp"

namespace jz {

struct Frame {
    std::vector<Vec> idempotents;
};

struct SpectralData {
    Frame frame;
    std::vector<double> eigenvalues;  // descending
    double residual = 0;              // |x - sum lambda_i e_i|
};

struct OrbitLabel {
    int p = 0;
    int q = 0;
};

struct RankSignature {
    int rank = 0;
    OrbitLabel label;
    bool boundary_ambiguous = false;
};

struct GaussFactorization {
    std::vector<Vec> frobenius_params;  // z_(1)..z_(r-1), full coordinates
    std::vector<double> diagonal;       // a_1..a_r
};

// u in R*, z in W = sum_{k>1} V_1k (d(r-1) coordinates), v in V' in the
// coordinates of the rank r-1 algebra of the same family.
struct ChartPoint {
    double u = 0;
    Vec z;
    Vec v;
};

Frame canonical_frame(const Algebra& A);
void check_frame(const Algebra& A, const Frame& F, double tol = -1);

SpectralData spectral(const Algebra& A, const Vec& x, double tol = -1);
Vec reconstruct(const Algebra& A, const SpectralData& sd);

// Zero threshold defaults to 1e-10 |x|.
RankSignature rank_signature(const Algebra& A, const Vec& x, double tol = -1);
std::string orbit_name(const Algebra& A, const OrbitLabel& l);  // "Omega_q" or "S_{p,q}"

// o_{p,q} = sum_{i<=p-q} e_i - sum_{i<=q} e_{p-q+i}
Vec o_pq(const Algebra& A, int p, int q);

std::map<std::pair<int, int>, Mat> peirce_projectors(const Algebra& A, const Frame& F);

// exp(2 z box e_j), j is 0-based; z must lie in sum_{k>j} V_jk of the frame.
GroupElement frobenius(const Algebra& A, const Vec& z, int j, const Frame& F, double tol = -1);
GroupElement frobenius(const Algebra& A, const Vec& z, int j);

GaussFactorization gauss_factor(const Algebra& A, const Vec& x, const Frame& F, double tol = -1);
GaussFactorization gauss_factor(const Algebra& A, const Vec& x, double tol = -1);
Vec gauss_recompose(const Algebra& A, const GaussFactorization& g, const Frame& F);

// Leading and trailing principal minors over the canonical frame, 1 <= k <= r.
double minor_k(const Algebra& A, const Vec& x, int k);
double dual_minor_k(const Algebra& A, const Vec& x, int k);

// Open orbit index j (signature (r-j, j)) read from the sign changes of
// (1, Delta_1, .., Delta_r); -1 when some minor is exactly zero.
int orbit_index_from_minors(const double* minors, int r);

// Rank r-1 algebra V' = {x : e_1 x = 0} and its coordinate embedding.
Algebra peirce_subalgebra(const Algebra& A);
std::vector<int> subalgebra_coords(const Algebra& A);  // full index of each V' coordinate
std::vector<int> chart_w_coords(const Algebra& A);     // full index of each W coordinate

Vec phi_chart(const Algebra& A, double u, const Vec& z, const Vec& v);
ChartPoint phi_chart_inverse(const Algebra& A, const Vec& x, double tol = -1);

}  // namespace jz
