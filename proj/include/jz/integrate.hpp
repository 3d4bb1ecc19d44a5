#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "jz/algebra.hpp"
#include "jz/test_function.hpp"

namespace jz {

struct Budget {
    long long samples = 1 << 20;    // Monte-Carlo samples per integration
    double target_rel_error = 0.0;  // 0 disables the budget check
    int threads = 0;                // 0 = hardware concurrency
    std::uint64_t seed = 1;
    // Randomized quasi-Monte Carlo: digitally shifted Sobol points in qmc_replicates
    // independent replicates; sigma from the spread of the replicate means.
    bool qmc = false;
    int qmc_replicates = 16;
};

int resolve_threads(int requested);

// Deterministic parallel loop over chunk indices; reduction is left to the caller
// and happens in chunk order.
void parallel_chunks(long long n_chunks, int threads, const std::function<void(long long)>& body);

// Seed of Monte-Carlo chunk c for a given base seed.
std::uint64_t chunk_seed(std::uint64_t base, long long chunk);

// Integrands F_{a,p}(x) = |det x|^{s_p} Delta_m(x) poly_a(x - center) G(x - center)
// (Delta_m is the generalized power prod Delta_k^{m_k - m_{k+1}}, any integer tuple)
// restricted to each orbit Omega_j; G is the Gaussian of the integrand.
struct OrbitIntegrand {
    Vec center;
    Mat precision;
    std::vector<CPoly> polys;  // local coordinates
    std::vector<cplx> s;
    std::vector<int> m;  // generalized power exponent tuple; empty = 0
    bool dual = false;   // weight Delta*_m instead of Delta_m
    double inflation = 0;  // proposal scale relative to the Gaussian; 0 = default
};

// out = sum_j orbit_coef[j] * sum_p s_coef[p] * F_{poly,p} restricted to Omega_j.
struct Functional {
    int poly = 0;
    std::vector<cplx> orbit_coef;  // r+1 entries
    std::vector<cplx> s_coef;      // one per s point
};

struct OrbitIntegrals {
    std::string engine;  // "monte_carlo" or "direct_quadrature"
    long long samples = 0;
    int n_s = 0, n_orbits = 0;
    std::vector<cplx> mean;  // index (a * n_s + p) * n_orbits + j
    std::vector<double> sigma;
    std::vector<cplx> fmean;  // functionals
    std::vector<double> fsigma;

    cplx value(int a, int p, int j) const { return mean[(a * n_s + p) * n_orbits + j]; }
    double error(int a, int p, int j) const { return sigma[(a * n_s + p) * n_orbits + j]; }
};

// Importance sampling with proposal N(center, (1.15)^2 precision^{-1}); rank 1
// uses adaptive tanh-sinh / exp-sinh quadrature instead.
OrbitIntegrals integrate_orbits(const Algebra& A, const OrbitIntegrand& in, const std::vector<Functional>& functionals,
                                const Budget& budget);

// Proposal inflation relative to the integrand Gaussian.
constexpr double kProposalInflation = 1.15;

}  // namespace jz
