#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "jz/group.hpp"
#include "jz/polyrep.hpp"
#include "jz/zeta.hpp"

namespace jz {

// Perturbed-law comparison run next to a check; detected when the perturbed
// prediction misses the measurement by at least `threshold` sigma.
struct NegativeControl {
    std::string perturbation;
    double deviation = 0;  // relative
    double sigma = 0;      // relative
    double threshold = 5;
    bool informative = true;  // the perturbation is resolvable at this sigma
    bool detected = false;
};

struct CheckReport {
    std::string name;
    bool pass = false;
    double max_relative_deviation = 0;
    double tolerance = 0;
    double sigma = 0;  // propagated relative sigma (0 for exact checks)
    long long samples = 0;
    std::string method;   // integrator or exact-arithmetic tag
    std::string failure;  // precondition failure (e.g. sigma above its cap)
    std::map<std::string, std::string> details;
    std::optional<NegativeControl> control;
};

// pass = no failure, deviation <= tolerance, and the control (when informative) detected.
void finalize(CheckReport& rep);

// Deterministic battery: Gaussians with seeded centers and widths times
// polynomials of degree <= max_degree. Centered batteries use anisotropic
// precisions g^{-T} g^{-1} with g = I + center_scale * (Gaussian matrix) instead;
// pullbacks by the structure group would only rescale every Psi_k together.
struct BatteryOptions {
    int size = 8;
    int max_degree = 1;
    double center_scale = 0.4;
    double width_lo = 0.8, width_hi = 1.2;
    bool centered = false;
    std::uint64_t seed = 1;
};

std::vector<TestFunction> make_battery(const Algebra& A, const BatteryOptions& opt);
std::string battery_manifest(const std::vector<TestFunction>& battery);

// <T_j^m, phi_g> against (Det g)^{rs/n+1} pi_m(g) <T_j^m, phi>; the two sides use
// independent seeds unless common_random_numbers is set (then g = Id gives deviation 0).
// sigma_cap bounds the propagated relative sigma.
struct HomogeneityOptions {
    double sigma_cap = 1e-2;
    double control_shift = 0.1;
    bool common_random_numbers = false;
    bool rqmc = true;  // randomized quasi-Monte Carlo sampler for both sides
    // Optional precomputed vector_zeta_orbits(phi, s), shared across group elements; it must
    // come from a seed independent of the budget's.
    const std::vector<std::vector<ZetaValue>>* base = nullptr;
};

CheckReport check_homogeneity(const Algebra& A, int j, const PolySpace& space, double s, const GroupElement& g,
                              const TestFunction& phi, const Budget& budget, const HomogeneityOptions& opt = {});

// Scaling law of the Laurent coefficients of A^m = sum_j c_j Phi_j^m around s0:
// lambda^{-E0} A_{-h}(phi_lambda) = sum_{i <= alpha-h} (r log lambda)^i / i! A_{-h-i}(phi),
// E0 = n + r s0 + |m|, for h = alpha..0 and each lambda in the grid.
struct QuasiHomogeneityOptions {
    std::vector<double> lambdas{0.8, 1.25, 1.6};
    LaurentOptions laurent;
};

CheckReport check_quasihomogeneity(const Algebra& A, const std::vector<cplx>& c, const Partition& m,
                                   const TestFunction& phi, const Rational& s0, const Budget& budget,
                                   const QuasiHomogeneityOptions& opt = {});

// phi(u, z, v) = phi1(u) phi2(z) phi3(v) on the chart x = tau(z)(u e_1) + v:
// phi1 = exp(-(u-u0)^2 / 2 wu^2), phi2 = exp(-|z-z0|^2 / 2 wz^2), phi3 a test function on V'.
struct ChartTestFunction {
    double u0 = 0, wu = 1;
    Vec z0;
    double wz = 1;
    TestFunction phi3;
    double operator()(const Algebra& A, const Vec& x) const;
};

ChartTestFunction default_chart_test_function(const Algebra& A);

struct ChartOptions {
    double control_shift = 0.1;
    double nsigma = 3;
};

// Left side: int_{Omega_j} |det x|^s Delta_m(x) phi(chart^{-1} x) dx by Monte Carlo in x.
// Right side: [u-integrals of |u|^{s+d(r-1)+m_1}] x [z-integral] x Phi'_{j}, Phi'_{j-1} on V'.
CheckReport check_chart_recursion(const Algebra& A, int j, const Partition& m, double s, const ChartTestFunction& phi,
                                  const Budget& budget, const ChartOptions& opt = {});

// Fits Phi_j^m(phi^, s - n/r) = sum_k v_k Psi_k^{-m*}(phi, -s) over a centered battery.
struct FunctionalEquationOptions {
    double tolerance = 1e-2;
    double max_condition = 1e8;
    bool rqmc = true;
};

struct FunctionalEquationFit {
    std::vector<std::vector<cplx>> v;        // [j][k], full battery
    std::vector<std::vector<cplx>> v_half[2];  // split halves
    std::vector<double> residual;            // relative, per j
    std::vector<double> split_deviation;     // relative, per j
};

CheckReport check_functional_equation_span(const Algebra& A, const Partition& m, double s,
                                           const std::vector<TestFunction>& battery, const Budget& budget,
                                           const FunctionalEquationOptions& opt = {},
                                           FunctionalEquationFit* fit = nullptr);

// Numerical rank of the (r+1) x (battery * dim P_m) matrix of T_j^m(phi_i, s).
// Singular values count when above max(rel_cut * s_max, noise_factor * ||E||_F),
// E the matrix of propagated sigmas (Weyl bound).
struct DimensionOptions {
    double rel_cut = 1e-6;
    double noise_factor = 3;
    bool rqmc = true;
};

CheckReport dimension_probe(const Algebra& A, const Partition& m, double s, const std::vector<TestFunction>& battery,
                            const Budget& budget, const DimensionOptions& opt = {});

// max |h_m(g x) - chi(g)^{r m_1/n} pi_m(g) h_m(x)| / |h_m(g x)| over all pairs.
CheckReport check_equivariance_hm(const Algebra& A, const PolySpace& space, const std::vector<GroupElement>& gs,
                                  const std::vector<Vec>& xs, double tol = 1e-6);

// Exact rational identities on seeded rational points:
// Delta_m(x^{-1}) = Delta*_{-m*}(x) and, for integer s >= 0 on Omega_0,
// det(d) det^{s+1} Delta_m = prod_j (s + m_j + 1 + (r-j)d/2) det^s Delta_m.
CheckReport check_exact_identities(const Algebra& A, const Partition& m, int n_points, std::uint64_t seed,
                                   const std::vector<int>& s_values = {0, 1, 2});

// Support probes for the Laurent coefficients A_{-h} at a pole. Probe test functions are
// Gaussians of width width_factor * |e| centered near o_{p,q}; on-stratum probes have
// rank equal to the predicted support rank, off-stratum probes have larger rank.
// Origin probes are rescalings of phi_ref (homogeneity of degree n + r s + |m|) and use the
// Laurent data of phi_ref; probes at points with x_11 != 0 are evaluated in the chart
// x = tau(z)(u e_1) + v e_2 with a one-variable continuation in v (rank 2 only).
struct SupportProbeOptions {
    double width_factor = 0.05;
    double ratio = 10;
    double significance = 3;  // on-stratum response must exceed this many sigma
    long long probe_samples = 1 << 18;  // per chart probe
    LaurentOptions laurent;
};

struct ProbeResponse {
    int p = 0, q = 0;  // stratum S_{p,q} of the probe center
    int h = 0;
    double response = 0;
    double sigma = 0;
    std::string method;
};

// Generic offset applied to probe centers, in units of the probe width.
Vec probe_offset(int n);

// Laurent coefficients of A^m(phi, s) = sum_j c_j Phi_j^m(phi, s) through the chart, for a
// test function concentrated where x_11 != 0. Requires r = 2.
std::vector<LaurentExpansion> chart_laurent(const Algebra& A, const std::vector<std::vector<cplx>>& coeffs,
                                            const Partition& m, const TestFunction& phi, const Rational& s0,
                                            const Budget& budget, const LaurentOptions& opt = {});

// Laurent data of phi(./w) from that of phi (coefficients h <= 0 up to the order).
LaurentExpansion rescale_laurent(const Algebra& A, const Partition& m, const LaurentExpansion& L, double w);

// One report per coefficient vector. `global` holds the Laurent data of phi_ref for each
// vector (computed when empty); orders are read from it.
std::vector<CheckReport> check_support_rank(const Algebra& A, const std::vector<std::vector<cplx>>& coeffs,
                                            const Partition& m, const Rational& s0, const TestFunction& phi_ref,
                                            std::vector<LaurentExpansion> global, const Budget& budget,
                                            const SupportProbeOptions& opt = {},
                                            std::vector<std::vector<ProbeResponse>>* responses = nullptr);

}  // namespace jz
