#pragma once

#include <map>
#include <string>
#include <vector>

#include "jz/gamma.hpp"
#include "jz/integrate.hpp"
#include "jz/polyrep.hpp"
#include "jz/test_function.hpp"

namespace jz {

enum class ZetaMethod { DirectQuadrature, MonteCarlo, BernsteinShifted };

std::string zeta_method_name(ZetaMethod m);

struct ZetaValue {
    cplx value = 0.0;
    double abs_error_estimate = 0.0;
    ZetaMethod method = ZetaMethod::MonteCarlo;
    int k = 0;           // Bernstein shift
    std::string engine;  // integrator behind the value
    long long samples = 0;
};

// Sign of the iterated Bernstein identity on Omega_j after moving det(d)^k onto the
// test function: Phi_j(f, s) = sign / R_k(s) * Phi_j(det(d)^k f, s + k).
// Pinned by the rank-one x_+^s / x_-^s oracles: (-1)^{(r+j)k}.
int bernstein_sign(int r, int j, int k);

// Generalized power weight: Delta_mu or Delta*_mu for an integer tuple mu.
struct Weight {
    std::vector<int> mu;
    bool dual = false;
};

// Phi_j over all orbits j = 0..r at the given s points, sharing one sampler pass.
// k < 0 selects the minimal shift making Re(s)+k >= 0 at every point.
struct OrbitGrid {
    std::vector<cplx> s;
    int k = 0;
    std::string engine;
    long long samples = 0;
    std::vector<std::vector<cplx>> value;  // [p][j]
    std::vector<std::vector<double>> error;
};

OrbitGrid zeta_grid(const Algebra& A, const Weight& w, const TestFunction& f, const std::vector<cplx>& s,
                    const Budget& budget, int k = -1);

ZetaValue zeta_eval_direct(const Algebra& A, int j, const Partition& m, const TestFunction& f, cplx s,
                           const Budget& budget);

ZetaValue zeta_eval(const Algebra& A, int j, const Partition& m, const TestFunction& f, cplx s, const Budget& budget,
                    int force_k = -1);

// All orbits at once (Phi_0..Phi_r).
std::vector<ZetaValue> zeta_eval_orbits(const Algebra& A, const Partition& m, const TestFunction& f, cplx s,
                                        const Budget& budget, int force_k = -1);

// Psi_k^mu(f, s) = int_{Omega_k} |det x|^s Delta*_mu(x) f(x) dx for an integer tuple mu.
std::vector<ZetaValue> psi_eval_orbits(const Algebra& A, const std::vector<int>& mu, const TestFunction& f, cplx s,
                                       const Budget& budget, int force_k = -1);

// T_j^m(phi, s) = int_{Omega_j} |det x|^{s - m_1} h_m(x) phi(x) dx, componentwise in the e_alpha basis.
std::vector<ZetaValue> vector_zeta(const Algebra& A, int j, const PolySpace& space, const TestFunction& phi, cplx s,
                                   const Budget& budget);

// All orbits: result[j][alpha].
std::vector<std::vector<ZetaValue>> vector_zeta_orbits(const Algebra& A, const PolySpace& space,
                                                       const TestFunction& phi, cplx s, const Budget& budget);

// Gamma_Omega(s) = int_Omega e^{-<e,x>} det(x)^{s - n/r} dx by importance sampling
// (multivariate Student-t proposal restricted to Omega).
ZetaValue gamma_omega_mc(const Algebra& A, double s, const Budget& budget);

// ------------------------------------------------------------------ Laurent

struct LaurentOptions {
    double radius = 0.25;
    int n_points = 32;
    int h_max = 2;       // highest nonnegative index reported
    int h_min = 0;       // most negative index reported is -max(h_min, r + 1)
    double rel_floor = 1e-10;
    double inflation = 1.4;  // proposal scale relative to the test-function Gaussian
};

struct LaurentExpansion {
    cplx s0 = 0.0;
    int order = 0;
    std::map<int, cplx> coefficients;  // h -> A_h (negative h: pole part)
    std::map<int, double> sigma;
    std::map<int, double> noise_floor;
    int k = 0;
    std::string engine;
    long long samples = 0;
    double radius = 0.25;
    int n_points = 32;
};

// A^m(f, s) = sum_j c_j Phi_j^m(f, s) around s0 for several coefficient vectors at once.
std::vector<LaurentExpansion> laurent_multi(const Algebra& A, const std::vector<std::vector<cplx>>& coeffs,
                                            const Weight& w, const TestFunction& f, cplx s0, const Budget& budget,
                                            const LaurentOptions& opt = {});

LaurentExpansion laurent(const Algebra& A, const std::vector<cplx>& coeffs, const Partition& m, const TestFunction& f,
                         cplx s0, const Budget& budget, const LaurentOptions& opt = {});

// Order from coefficients and floors; throws IndeterminateOrderError if nothing clears the floor.
int laurent_order(const LaurentExpansion& L);

// ---------------------------------------------------------------- predictors

struct PoleReport {
    Rational s0;
    int o_mult = 0;
    bool odd_d = false;
    int degP = -1;
    int degP0 = -1, degP1 = -1, eps = 0;
    int predicted_order = 0;
    std::map<int, int> support_rank_by_h;
};

// Degree of the minimal interpolant through (x_i, y_i): index of the last
// numerically nonzero Newton divided difference (relative tolerance).
int interpolant_degree(const std::vector<double>& x, const std::vector<cplx>& y, double tol = 1e-9);
std::vector<cplx> interpolant_coefficients(const std::vector<double>& x, const std::vector<cplx>& y);

PoleReport pole_order_predict(const std::vector<cplx>& c, const std::vector<int>& m, const Rational& s0,
                              const Algebra& A, double tol = 1e-9);

int support_rank_predict(int h, const Rational& s0, const Algebra& A);

}  // namespace jz
