#include "jz/zeta.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "jz/decompositions.hpp"

namespace jz {

namespace {

constexpr double kPi = 3.14159265358979323846;

int minimal_shift(cplx s) { return std::max(0, static_cast<int>(std::ceil(-s.real() - 1e-12))); }

std::vector<int> weight_tuple(const Algebra& A, const Weight& w) {
    if (w.mu.empty()) return std::vector<int>(A.r, 0);
    if (static_cast<int>(w.mu.size()) != A.r) throw ParameterError("weight tuple length must equal r");
    return w.mu;
}

void check_pole(const Algebra& A, cplx s, int k, const std::vector<int>& mu) {
    auto bad = bernstein_zero_factors(s, k, mu, A);
    if (!bad.empty()) throw PoleError("s is a pole of Gamma_Omega(s + m + n/r); use laurent", bad);
}

void check_orbit(const Algebra& A, int j) {
    if (j < 0 || j > A.r) throw ParameterError("orbit index must lie in 0..r");
}

ZetaMethod method_for(const std::string& engine, int k) {
    if (k > 0) return ZetaMethod::BernsteinShifted;
    return engine == "direct_quadrature" ? ZetaMethod::DirectQuadrature : ZetaMethod::MonteCarlo;
}

void enforce_budget(const Budget& b, const ZetaValue& v) {
    if (b.target_rel_error > 0 && v.abs_error_estimate > b.target_rel_error * std::abs(v.value))
        throw BudgetError("relative error above target after the sample budget", std::abs(v.value),
                          v.abs_error_estimate);
}

std::vector<ZetaValue> grid_to_values(const OrbitGrid& g, int p) {
    std::vector<ZetaValue> out;
    for (std::size_t j = 0; j < g.value[p].size(); ++j) {
        ZetaValue v;
        v.value = g.value[p][j];
        v.abs_error_estimate = g.error[p][j];
        v.k = g.k;
        v.engine = g.engine;
        v.method = method_for(g.engine, g.k);
        v.samples = g.samples;
        out.push_back(v);
    }
    return out;
}

}  // namespace

std::string zeta_method_name(ZetaMethod m) {
    switch (m) {
        case ZetaMethod::DirectQuadrature: return "direct_quadrature";
        case ZetaMethod::MonteCarlo: return "monte_carlo";
        case ZetaMethod::BernsteinShifted: return "bernstein_shifted";
    }
    return "?";
}

int bernstein_sign(int r, int j, int k) { return ((r + j) * k) % 2 == 0 ? 1 : -1; }

OrbitGrid zeta_grid(const Algebra& A, const Weight& w, const TestFunction& f, const std::vector<cplx>& s,
                    const Budget& budget, int k) {
    if (f.n() != A.n) throw AlgebraMismatch("test function arity does not match the algebra");
    if (s.empty()) throw ParameterError("zeta_grid: no s points");
    const std::vector<int> mu = weight_tuple(A, w);
    if (k < 0) {
        k = 0;
        for (const auto& si : s) k = std::max(k, minimal_shift(si));
    }
    for (const auto& si : s) check_pole(A, si, k, mu);
    TestFunction fk = k > 0 ? det_dop(A, f, k) : f;
    OrbitIntegrand in;
    in.center = fk.center;
    in.precision = fk.precision;
    in.polys = {fk.poly};
    for (const auto& si : s) in.s.push_back(si + double(k));
    in.m = mu;
    in.dual = w.dual;
    OrbitIntegrals I = integrate_orbits(A, in, {}, budget);
    OrbitGrid g;
    g.s = s;
    g.k = k;
    g.engine = I.engine;
    g.samples = I.samples;
    for (std::size_t p = 0; p < s.size(); ++p) {
        cplx R = bernstein_ratio(s[p], k, mu, A);
        std::vector<cplx> vals;
        std::vector<double> errs;
        for (int j = 0; j <= A.r; ++j) {
            vals.push_back(double(bernstein_sign(A.r, j, k)) / R * I.value(0, int(p), j));
            errs.push_back(I.error(0, int(p), j) / std::abs(R));
        }
        g.value.push_back(vals);
        g.error.push_back(errs);
    }
    return g;
}

ZetaValue zeta_eval_direct(const Algebra& A, int j, const Partition& m, const TestFunction& f, cplx s,
                           const Budget& budget) {
    check_orbit(A, j);
    if (s.real() < 0) throw ParameterError("zeta_eval_direct needs Re(s) >= 0");
    if (m.r() != A.r) throw ParameterError("partition length must equal r");
    OrbitGrid g = zeta_grid(A, Weight{m.parts, false}, f, {s}, budget, 0);
    ZetaValue v = grid_to_values(g, 0)[j];
    enforce_budget(budget, v);
    return v;
}

std::vector<ZetaValue> zeta_eval_orbits(const Algebra& A, const Partition& m, const TestFunction& f, cplx s,
                                        const Budget& budget, int force_k) {
    if (m.r() != A.r) throw ParameterError("partition length must equal r");
    int k = force_k >= 0 ? force_k : minimal_shift(s);
    if (s.real() + k < -0.5) throw ParameterError("Bernstein shift too small for a finite-variance integral");
    OrbitGrid g = zeta_grid(A, Weight{m.parts, false}, f, {s}, budget, k);
    return grid_to_values(g, 0);
}

ZetaValue zeta_eval(const Algebra& A, int j, const Partition& m, const TestFunction& f, cplx s, const Budget& budget,
                    int force_k) {
    check_orbit(A, j);
    ZetaValue v = zeta_eval_orbits(A, m, f, s, budget, force_k)[j];
    enforce_budget(budget, v);
    return v;
}

std::vector<ZetaValue> psi_eval_orbits(const Algebra& A, const std::vector<int>& mu, const TestFunction& f, cplx s,
                                       const Budget& budget, int force_k) {
    int k = force_k >= 0 ? force_k : minimal_shift(s);
    OrbitGrid g = zeta_grid(A, Weight{mu, true}, f, {s}, budget, k);
    return grid_to_values(g, 0);
}

std::vector<std::vector<ZetaValue>> vector_zeta_orbits(const Algebra& A, const PolySpace& space,
                                                       const TestFunction& phi, cplx s, const Budget& budget) {
    if (phi.n() != A.n) throw AlgebraMismatch("test function arity does not match the algebra");
    const Partition& m = space.m;
    Rational sq;
    if (std::abs(s.imag()) < 1e-12 && snap_half_integer(s.real(), sq) && is_critical(sq, m, A))
        throw PoleError("critical point of pi_m: T_j^m is not defined by continuation here", {});
    const cplx sp = s - double(m[0]);
    const int k = minimal_shift(sp);
    const std::vector<int> zero(A.r, 0);
    check_pole(A, sp, k, zero);
    OrbitIntegrand in;
    in.center = phi.center;
    in.precision = phi.precision;
    for (const auto& fa : space.dual_basis) {
        TestFunction prod = multiply(phi, fa);
        if (k > 0) prod = det_dop(A, prod, k);
        in.polys.push_back(prod.poly);
    }
    in.s = {sp + double(k)};
    OrbitIntegrals I = integrate_orbits(A, in, {}, budget);
    cplx R = bernstein_ratio(sp, k, zero, A);
    std::vector<std::vector<ZetaValue>> out(A.r + 1);
    for (int j = 0; j <= A.r; ++j)
        for (int a = 0; a < space.dim(); ++a) {
            ZetaValue v;
            v.value = double(bernstein_sign(A.r, j, k)) / R * I.value(a, 0, j);
            v.abs_error_estimate = I.error(a, 0, j) / std::abs(R);
            v.k = k;
            v.engine = I.engine;
            v.method = method_for(I.engine, k);
            v.samples = I.samples;
            out[j].push_back(v);
        }
    return out;
}

std::vector<ZetaValue> vector_zeta(const Algebra& A, int j, const PolySpace& space, const TestFunction& phi, cplx s,
                                   const Budget& budget) {
    check_orbit(A, j);
    return vector_zeta_orbits(A, space, phi, s, budget)[j];
}

ZetaValue gamma_omega_mc(const Algebra& A, double s, const Budget& budget) {
    const int n = A.n, r = A.r;
    const double nr = double(n) / r;
    if (!(s > nr - 1)) throw ParameterError("gamma_omega_mc needs s > n/r - 1");
    const double a = s - nr;
    // Student-t proposal centred at the mode region s e, scale sqrt(s/2) per coordinate.
    const double nu = 5.0;
    const Vec mu = s * A.e;
    const double sc = std::sqrt(std::max(s, 1.0) / 2.0) * 1.1;
    const double logc = std::lgamma(0.5 * (nu + n)) - std::lgamma(0.5 * nu) - 0.5 * n * std::log(nu * kPi) -
                        n * std::log(sc);
    const long long N = std::max<long long>(budget.samples, 1);
    const long long chunk = 8192, n_chunks = (N + chunk - 1) / chunk;
    std::vector<std::pair<double, double>> part(static_cast<std::size_t>(n_chunks));
    CompiledPoly<double> detp(A.det_poly);
    std::vector<CompiledPoly<double>> minors;
    int stride = detp.max_degree() + 1;
    for (const auto& p : A.minor_polys) {
        minors.emplace_back(p);
        stride = std::max(stride, minors.back().max_degree() + 1);
    }
    parallel_chunks(n_chunks, budget.threads, [&](long long c) {
        std::mt19937_64 rng(chunk_seed(budget.seed ^ 0x6a09e667f3bcc908ull, c));
        std::normal_distribution<double> nd;
        std::chi_squared_distribution<double> chi(nu);
        double sum = 0, sq = 0;
        Vec z(n), x(n);
        std::vector<double> pw(static_cast<std::size_t>(n) * stride), mins(r);
        const long long b = c * chunk, e = std::min(N, b + chunk);
        for (long long i = b; i < e; ++i) {
            for (int k = 0; k < n; ++k) z(k) = nd(rng);
            double w = std::sqrt(nu / chi(rng));
            x = mu + sc * w * z;
            CompiledPoly<double>::fill_powers(x.data(), n, stride, pw.data());
            for (int k = 0; k < r; ++k) mins[k] = minors[k].eval(pw.data(), stride);
            if (orbit_index_from_minors(mins.data(), r) != 0) continue;
            double t = (x - mu).squaredNorm() / (sc * sc);
            double logq = logc - 0.5 * (nu + n) * std::log1p(t / nu);
            double v = std::exp(-x.dot(A.e) + a * std::log(mins[r - 1]) - logq);
            sum += v;
            sq += v * v;
        }
        part[static_cast<std::size_t>(c)] = {sum, sq};
    });
    double sum = 0, sq = 0;
    for (const auto& [s1, s2] : part) {
        sum += s1;
        sq += s2;
    }
    ZetaValue v;
    v.value = sum / double(N);
    v.abs_error_estimate = std::sqrt(std::max(sq / double(N) - std::norm(v.value), 0.0) / double(N));
    v.method = ZetaMethod::MonteCarlo;
    v.engine = "monte_carlo";
    v.samples = N;
    return v;
}

// ------------------------------------------------------------------ Laurent

std::vector<LaurentExpansion> laurent_multi(const Algebra& A, const std::vector<std::vector<cplx>>& coeffs,
                                            const Weight& w, const TestFunction& f, cplx s0, const Budget& budget,
                                            const LaurentOptions& opt) {
    if (!(opt.radius > 0) || opt.n_points < 4) throw ParameterError("laurent: bad circle");
    for (const auto& c : coeffs)
        if (static_cast<int>(c.size()) != A.r + 1) throw ParameterError("laurent: need r+1 coefficients");
    const std::vector<int> mu = weight_tuple(A, w);
    // no other pole of Gamma_Omega(s + mu + n/r) in the closed disk
    {
        Rational lo = rational_from_double(std::floor(s0.real() - opt.radius) - 1, 1);
        Rational hi = rational_from_double(std::ceil(s0.real() + opt.radius) + 1, 1);
        for (const auto& cp : pole_set(mu, A, lo, hi)) {
            double d = std::abs(cplx(to_double(cp.s0), 0.0) - s0);
            if (d > 1e-9 && d <= opt.radius + 1e-12)
                throw GeometryError("laurent: another pole lies inside the circle (s = " +
                                    rational_to_string(cp.s0) + ")");
            if (d > 1e-9 && d <= opt.radius * (1 + 1e-9)) throw GeometryError("laurent: pole on the circle");
        }
    }
    const int P = opt.n_points;
    const int k = minimal_shift(s0);
    const int hneg = std::max(opt.h_min, A.r + 1);
    std::vector<cplx> sp(P), rho_w(P);
    for (int p = 0; p < P; ++p) {
        rho_w[p] = std::polar(opt.radius, 2 * kPi * p / P);
        sp[p] = s0 + rho_w[p];
        check_pole(A, sp[p], k, mu);
    }
    TestFunction fk = k > 0 ? det_dop(A, f, k) : f;
    OrbitIntegrand in;
    in.center = fk.center;
    in.precision = fk.precision;
    in.polys = {fk.poly};
    for (const auto& s : sp) in.s.push_back(s + double(k));
    in.m = mu;
    in.dual = w.dual;
    in.inflation = opt.inflation;
    std::vector<Functional> fs;
    std::vector<cplx> invR(P);
    for (int p = 0; p < P; ++p) invR[p] = 1.0 / bernstein_ratio(sp[p], k, mu, A);
    for (const auto& c : coeffs)
        for (int h = -hneg; h <= opt.h_max; ++h) {
            Functional F;
            F.poly = 0;
            for (int j = 0; j <= A.r; ++j) F.orbit_coef.push_back(c[j] * double(bernstein_sign(A.r, j, k)));
            for (int p = 0; p < P; ++p) F.s_coef.push_back(invR[p] * std::pow(rho_w[p], -h) / double(P));
            fs.push_back(F);
        }
    OrbitIntegrals I = integrate_orbits(A, in, fs, budget);
    std::vector<LaurentExpansion> out;
    std::size_t idx = 0;
    for (std::size_t ci = 0; ci < coeffs.size(); ++ci) {
        LaurentExpansion L;
        L.s0 = s0;
        L.k = k;
        L.engine = I.engine;
        L.samples = I.samples;
        L.radius = opt.radius;
        L.n_points = P;
        double scale = 0;
        for (int h = -hneg; h <= opt.h_max; ++h, ++idx) {
            L.coefficients[h] = I.fmean[idx];
            L.sigma[h] = I.fsigma[idx];
            scale = std::max(scale, std::abs(I.fmean[idx]));
        }
        for (const auto& [h, sg] : L.sigma) L.noise_floor[h] = 3 * sg + opt.rel_floor * scale;
        try {
            L.order = laurent_order(L);
        } catch (const IndeterminateOrderError&) {
            L.order = -1;
        }
        out.push_back(std::move(L));
    }
    return out;
}

LaurentExpansion laurent(const Algebra& A, const std::vector<cplx>& coeffs, const Partition& m, const TestFunction& f,
                         cplx s0, const Budget& budget, const LaurentOptions& opt) {
    if (m.r() != A.r) throw ParameterError("partition length must equal r");
    auto v = laurent_multi(A, {coeffs}, Weight{m.parts, false}, f, s0, budget, opt);
    if (v[0].order < 0) throw IndeterminateOrderError("laurent: every coefficient is below the noise floor");
    return v[0];
}

int laurent_order(const LaurentExpansion& L) {
    bool any = false;
    int order = 0;
    for (const auto& [h, a] : L.coefficients) {
        bool above = std::abs(a) > L.noise_floor.at(h);
        any = any || above;
        if (h < 0 && above) order = std::max(order, -h);
    }
    if (!any) throw IndeterminateOrderError("laurent: every coefficient is below the noise floor");
    return order;
}

// ---------------------------------------------------------------- predictors

std::vector<cplx> divided_differences(const std::vector<double>& x, const std::vector<cplx>& y) {
    const std::size_t n = x.size();
    std::vector<cplx> c = y;
    for (std::size_t k = 1; k < n; ++k)
        for (std::size_t i = n - 1; i >= k; --i) c[i] = (c[i] - c[i - 1]) / (x[i] - x[i - k]);
    return c;
}

int interpolant_degree(const std::vector<double>& x, const std::vector<cplx>& y, double tol) {
    if (x.size() != y.size()) throw ParameterError("interpolant: size mismatch");
    double scale = 0;
    for (const auto& v : y) scale = std::max(scale, std::abs(v));
    if (scale == 0) return -1;
    auto c = divided_differences(x, y);
    int deg = -1;
    for (std::size_t i = 0; i < c.size(); ++i)
        if (std::abs(c[i]) > tol * scale) deg = static_cast<int>(i);
    return deg;
}

std::vector<cplx> interpolant_coefficients(const std::vector<double>& x, const std::vector<cplx>& y) {
    auto c = divided_differences(x, y);
    const std::size_t n = x.size();
    std::vector<cplx> poly(std::max<std::size_t>(n, 1), 0.0);
    // Horner on the Newton form
    for (std::size_t i = n; i-- > 0;) {
        std::vector<cplx> next(poly.size(), 0.0);
        for (std::size_t d = 0; d + 1 < poly.size(); ++d) {
            next[d + 1] += poly[d];
            next[d] -= x[i] * poly[d];
        }
        next[0] += c[i];
        poly = next;
    }
    return poly;
}

PoleReport pole_order_predict(const std::vector<cplx>& c, const std::vector<int>& m, const Rational& s0,
                              const Algebra& A, double tol) {
    const int r = A.r;
    if (static_cast<int>(c.size()) != r + 1) throw ParameterError("pole_order_predict: need r+1 coefficients");
    PoleReport rep;
    rep.s0 = s0;
    rep.o_mult = o_mult(s0, m, A);
    rep.odd_d = A.d % 2 == 1;
    std::vector<cplx> v(r + 1);
    for (int j = 0; j <= r; ++j) {
        // exp(i pi s0 j) with the phase reduced exactly modulo 2
        Rational ph = s0 * j;
        Rational q = ph / 2;
        boost::multiprecision::cpp_int fl = numerator(q) / denominator(q);
        if (numerator(q) < 0 && fl * denominator(q) != numerator(q)) fl -= 1;
        Rational red = ph - Rational(2 * fl);
        v[j] = c[j] * std::polar(1.0, kPi * to_double(red));
    }
    if (!rep.odd_d) {
        std::vector<double> x;
        for (int j = 0; j <= r; ++j) x.push_back(j);
        rep.degP = interpolant_degree(x, v, tol);
        rep.predicted_order = std::max(0, std::min(rep.degP, rep.o_mult));
    } else {
        bool integer = denominator(s0) == 1;
        bool half = denominator(s0) == 2;
        if (!integer && !half) throw UnsupportedPointError("odd d: s0 must be an integer or a half-integer");
        std::vector<double> x0, x1;
        std::vector<cplx> y0, y1;
        for (int j = 0; j <= r; ++j) (j % 2 == 0 ? x0 : x1).push_back(j), (j % 2 == 0 ? y0 : y1).push_back(v[j]);
        rep.degP0 = x0.empty() ? -1 : interpolant_degree(x0, y0, tol);
        rep.degP1 = x1.empty() ? -1 : interpolant_degree(x1, y1, tol);
        int sup = std::max(rep.degP0, rep.degP1);
        std::vector<cplx> p0 = x0.empty() ? std::vector<cplx>{} : interpolant_coefficients(x0, y0);
        std::vector<cplx> p1 = x1.empty() ? std::vector<cplx>{} : interpolant_coefficients(x1, y1);
        std::size_t len = std::max(p0.size(), p1.size());
        p0.resize(len, 0.0);
        p1.resize(len, 0.0);
        double scale = 0;
        for (const auto& y : v) scale = std::max(scale, std::abs(y));
        int degdiff = -1;
        for (std::size_t i = 0; i < len; ++i)
            if (std::abs(p0[i] - p1[i]) > tol * std::max(scale, 1e-300)) degdiff = static_cast<int>(i);
        rep.eps = degdiff == sup ? 1 : 0;
        int base = integer ? sup + rep.eps : sup;
        rep.predicted_order = std::max(0, std::min(base, rep.o_mult));
    }
    for (int h = 1; h <= rep.predicted_order; ++h) rep.support_rank_by_h[h] = support_rank_predict(h, s0, A);
    return rep;
}

int support_rank_predict(int h, const Rational& s0, const Algebra& A) {
    if (h < 1) throw ParameterError("support_rank_predict: h must be >= 1");
    int rank;
    if (A.d % 2 == 0) {
        rank = A.r - h;
    } else {
        if (denominator(s0) == 1)
            rank = A.r + 1 - 2 * h;
        else if (denominator(s0) == 2)
            rank = A.r - 2 * h;
        else
            throw UnsupportedPointError("odd d: s0 must be an integer or a half-integer");
    }
    return std::max(rank, 0);
}

}  // namespace jz
