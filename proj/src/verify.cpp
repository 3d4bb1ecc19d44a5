#include "jz/verify.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <random>
#include <sstream>

#include "jz/decompositions.hpp"

namespace jz {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string fmt(double x) {
    std::ostringstream os;
    os << std::setprecision(10) << x;
    return os.str();
}

std::string fmt_parts(const std::vector<int>& m) {
    std::string s;
    for (std::size_t i = 0; i < m.size(); ++i) s += (i ? "," : "") + std::to_string(m[i]);
    return s;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag) { return chunk_seed(base, static_cast<long long>(tag)); }

Budget with_seed(const Budget& b, std::uint64_t seed) {
    Budget out = b;
    out.seed = seed;
    return out;
}

double cnorm(const CVec& v) { return v.norm(); }

}  // namespace

void finalize(CheckReport& rep) {
    bool control_ok = !rep.control || !rep.control->informative || rep.control->detected;
    rep.pass = rep.failure.empty() && std::isfinite(rep.max_relative_deviation) &&
               rep.max_relative_deviation <= rep.tolerance && control_ok;
}

// ---------------------------------------------------------------- batteries

std::vector<TestFunction> make_battery(const Algebra& A, const BatteryOptions& opt) {
    std::vector<TestFunction> out;
    std::mt19937_64 rng(opt.seed);
    std::normal_distribution<double> N(0.0, 1.0);
    std::uniform_real_distribution<double> U(opt.width_lo, opt.width_hi);
    for (int i = 0; i < opt.size; ++i) {
        CPoly p = CPoly::constant(A.n, 1.0);
        for (int deg = 1; deg <= opt.max_degree; ++deg) {
            Exponent e(A.n, 0);
            for (int t = 0; t < deg; ++t) e[static_cast<std::size_t>(rng() % A.n)] += 1;
            p.add_term(e, cplx(0.5 * N(rng), 0.5 * N(rng)));
        }
        double w = U(rng);
        if (opt.centered) {
            TestFunction f = TestFunction::gaussian(Vec::Zero(A.n), w, p);
            Mat g = Mat::Identity(A.n, A.n);
            for (int a = 0; a < A.n; ++a)
                for (int b = 0; b < A.n; ++b) g(a, b) += opt.center_scale * N(rng);
            out.push_back(pullback(f, g));
        } else {
            Vec c(A.n);
            for (int k = 0; k < A.n; ++k) c(k) = opt.center_scale * N(rng);
            out.push_back(TestFunction::gaussian(c, w, p));
        }
    }
    return out;
}

std::string battery_manifest(const std::vector<TestFunction>& battery) {
    std::ostringstream os;
    os << std::setprecision(6);
    for (std::size_t i = 0; i < battery.size(); ++i) {
        const auto& f = battery[i];
        os << (i ? ";" : "") << "center=[";
        for (int k = 0; k < f.n(); ++k) os << (k ? "," : "") << f.center(k);
        os << "] width=" << f.width() << " terms=" << f.poly.size() << " deg=" << f.poly.degree();
    }
    return os.str();
}

// ---------------------------------------------------------------- homogeneity

CheckReport check_homogeneity(const Algebra& A, int j, const PolySpace& space, double s, const GroupElement& g,
                              const TestFunction& phi, const Budget& budget, const HomogeneityOptions& opt) {
    if (j < -1 || j > A.r) throw ParameterError("orbit index must lie in 0..r (or -1 for all)");
    if (!(g.det_v > 0)) throw ParameterError("check_homogeneity: Det g must be positive");
    CheckReport rep;
    rep.name = "homogeneity";
    const int D = space.dim();
    Budget b0 = budget;
    b0.qmc = budget.qmc || opt.rqmc;
    const auto T = opt.base ? *opt.base : vector_zeta_orbits(A, space, phi, s, b0);
    if (static_cast<int>(T.size()) != A.r + 1 || static_cast<int>(T[0].size()) != D)
        throw ParameterError("check_homogeneity: precomputed values do not match the space");
    const Budget bg = opt.common_random_numbers ? b0 : with_seed(b0, derive_seed(budget.seed, 0x686f6d));
    auto Tg = vector_zeta_orbits(A, space, pullback(phi, g), s, bg);
    const CMat M = pi_m_matrix(A, g, space).cast<cplx>();
    const double f = std::pow(g.det_v, A.r * s / A.n + 1.0);
    std::vector<int> orbits;
    if (j >= 0)
        orbits.push_back(j);
    else
        for (int t = 0; t <= A.r; ++t) orbits.push_back(t);
    const std::size_t L = orbits.size() * static_cast<std::size_t>(D);
    CVec meas(L), pred(L);
    Vec var(L);
    for (std::size_t o = 0; o < orbits.size(); ++o) {
        const int jj = orbits[o];
        CVec t(D);
        Vec te(D);
        for (int a = 0; a < D; ++a) {
            t(a) = T[jj][a].value;
            te(a) = T[jj][a].abs_error_estimate;
        }
        CVec pv = f * (M * t);
        for (int a = 0; a < D; ++a) {
            const std::size_t i = o * D + a;
            meas(i) = Tg[jj][a].value;
            pred(i) = pv(a);
            double pe = 0;
            for (int b = 0; b < D; ++b) pe += std::norm(f * M(a, b)) * te(b) * te(b);
            var(i) = pe + Tg[jj][a].abs_error_estimate * Tg[jj][a].abs_error_estimate;
        }
    }
    const double den = std::max({cnorm(pred), cnorm(meas), 1e-300});
    rep.max_relative_deviation = cnorm(meas - pred) / den;
    rep.sigma = std::sqrt(var.sum()) / den;
    rep.tolerance = 3 * rep.sigma;
    rep.samples = T[0][0].samples + Tg[0][0].samples;
    if (rep.sigma > opt.sigma_cap) rep.failure = "propagated sigma " + fmt(rep.sigma) + " above cap " + fmt(opt.sigma_cap);
    NegativeControl c;
    c.perturbation = "exponent rs/n+1 shifted by " + fmt(opt.control_shift);
    const double shift = std::pow(g.det_v, opt.control_shift);
    CVec pc = shift * pred;
    c.deviation = cnorm(meas - pc) / std::max(cnorm(pc), 1e-300);
    c.sigma = rep.sigma;
    c.informative = std::abs(shift - 1) >= 2 * c.threshold * rep.sigma;
    c.detected = c.deviation >= c.threshold * c.sigma;
    rep.control = c;
    rep.details["j"] = j < 0 ? "all" : std::to_string(j);
    rep.details["m"] = fmt_parts(space.m.parts);
    rep.details["s"] = fmt(s);
    rep.details["Det_g"] = fmt(g.det_v);
    rep.details["dim"] = std::to_string(D);
    std::string word;
    for (const auto& w : g.word) word += w;
    rep.details["word"] = word;
    rep.details["engine"] = T[0][0].engine;
    rep.method = T[0][0].engine;
    finalize(rep);
    return rep;
}

// ---------------------------------------------------------------- quasi-homogeneity

CheckReport check_quasihomogeneity(const Algebra& A, const std::vector<cplx>& c, const Partition& m,
                                   const TestFunction& phi, const Rational& s0, const Budget& budget,
                                   const QuasiHomogeneityOptions& opt) {
    CheckReport rep;
    rep.name = "quasihomogeneity";
    const double s0d = to_double(s0);
    const Weight wt{m.parts, false};
    auto base = laurent_multi(A, {c}, wt, phi, s0d, budget, opt.laurent)[0];
    if (base.order < 0) throw IndeterminateOrderError("quasihomogeneity: no coefficient above the noise floor");
    const int alpha = base.order;
    std::vector<double> lam;
    for (double l : opt.lambdas) {
        if (!(l > 0)) throw ParameterError("scaling factors must be positive");
        if (std::abs(std::log(l)) < 1e-3) continue;
        for (double o : lam)
            if (std::abs(std::log(l / o)) < 1e-3) throw ConditioningError("lambda grid has coincident points", 0);
        lam.push_back(l);
    }
    if (static_cast<int>(lam.size()) < alpha + 1)
        throw ConditioningError("lambda grid too small for a log-polynomial of degree " + std::to_string(alpha),
                                static_cast<double>(lam.size()));
    const double E0 = A.n + A.r * s0d + m.abs();
    double scale = 0;
    for (int h = 0; h <= alpha; ++h) scale = std::max(scale, std::abs(base.coefficients.at(-h)));
    scale = std::max(scale, 1e-300);
    double maxdev = 0, maxsig = 0, cdev = 0, csig = 0, ceffect = 0;
    long long samples = base.samples;
    for (std::size_t li = 0; li < lam.size(); ++li) {
        const double l = lam[li];
        const double ell = A.r * std::log(l);
        auto Ll = laurent_multi(A, {c}, wt, pullback(phi, group_scalar(A, l)), s0d,
                                with_seed(budget, derive_seed(budget.seed, 0x7175 + li)), opt.laurent)[0];
        samples += Ll.samples;
        const double norm = std::pow(l, -E0);
        for (int h = 0; h <= alpha; ++h) {
            cplx y = norm * Ll.coefficients.at(-h);
            double vy = std::pow(norm * Ll.sigma.at(-h), 2);
            cplx pred = 0;
            double vp = 0, fact = 1;
            for (int i = 0; i + h <= alpha; ++i) {
                if (i > 0) fact *= i;
                double coef = std::pow(ell, i) / fact;
                pred += coef * base.coefficients.at(-h - i);
                vp += std::pow(coef * base.sigma.at(-h - i), 2);
            }
            double sig = std::sqrt(vy + vp) / scale;
            double dev = std::abs(y - pred) / scale;
            maxdev = std::max(maxdev, dev);
            maxsig = std::max(maxsig, sig);
            // control: drop the log terms
            cplx pure = base.coefficients.at(-h);
            double effect = std::abs(pred - pure) / scale;
            if (effect > ceffect) {
                ceffect = effect;
                cdev = std::abs(y - pure) / scale;
                csig = sig;
            }
        }
    }
    rep.max_relative_deviation = maxdev;
    rep.sigma = maxsig;
    rep.tolerance = 3 * maxsig + 1e-9;
    rep.samples = samples;
    NegativeControl ctl;
    ctl.perturbation = "log terms dropped (pure homogeneity for every coefficient)";
    ctl.deviation = cdev;
    ctl.sigma = csig;
    ctl.informative = alpha > 0 && ceffect >= 2 * ctl.threshold * csig + 1e-9;
    ctl.detected = cdev >= ctl.threshold * csig + 1e-9;
    rep.control = ctl;
    rep.details["order"] = std::to_string(alpha);
    rep.details["s0"] = rational_to_string(s0);
    rep.details["m"] = fmt_parts(m.parts);
    std::string ls;
    for (double l : lam) ls += (ls.empty() ? "" : ",") + fmt(l);
    rep.details["lambdas"] = ls;
    rep.method = "contour_dft+" + base.engine;
    finalize(rep);
    return rep;
}

// ---------------------------------------------------------------- chart recursion

double ChartTestFunction::operator()(const Algebra& A, const Vec& x) const {
    ChartPoint cp = phi_chart_inverse(A, x);
    double a = (cp.u - u0) / wu;
    double b = (cp.z - z0).squaredNorm() / (wz * wz);
    return std::exp(-0.5 * a * a - 0.5 * b) * phi3(cp.v).real();
}

ChartTestFunction default_chart_test_function(const Algebra& A) {
    if (A.r < 2) throw ParameterError("the chart needs rank >= 2");
    ChartTestFunction f;
    f.u0 = 0.3;
    f.wu = 1.5;
    f.z0 = Vec::Zero(static_cast<int>(chart_w_coords(A).size()));
    f.wz = 0.6;
    const int nv = static_cast<int>(subalgebra_coords(A).size());
    Vec c = Vec::Zero(nv);
    c(0) = 0.2;
    f.phi3 = TestFunction::gaussian(c, 0.8);
    return f;
}

CheckReport check_chart_recursion(const Algebra& A, int j, const Partition& m, double s, const ChartTestFunction& phi,
                                  const Budget& budget, const ChartOptions& opt) {
    if (A.r < 2) throw ParameterError("the chart needs rank >= 2");
    if (j < 0 || j > A.r) throw ParameterError("orbit index must lie in 0..r");
    if (m.r() != A.r) throw ParameterError("partition length must equal r");
    const int n = A.n, r = A.r;
    CheckReport rep;
    rep.name = "chart_recursion";

    // x-space Student-t proposal from the moments of the pushed-forward chart Gaussian
    const auto wi = chart_w_coords(A);
    const auto vi = subalgebra_coords(A);
    const int nz = static_cast<int>(wi.size()), nv = static_cast<int>(vi.size());
    Mat cov3 = phi.phi3.precision.inverse();
    Eigen::LLT<Mat> l3(cov3);
    std::mt19937_64 mrng(derive_seed(budget.seed, 0x6d6f6d));
    std::normal_distribution<double> N(0.0, 1.0);
    const int M = 8192;
    Vec mu = Vec::Zero(n);
    Mat C = Mat::Zero(n, n);
    std::vector<Vec> pts;
    for (int t = 0; t < M; ++t) {
        double u = phi.u0 + phi.wu * N(mrng);
        Vec z(nz), e(nv);
        for (int i = 0; i < nz; ++i) z(i) = phi.z0(i) + phi.wz * N(mrng);
        for (int i = 0; i < nv; ++i) e(i) = N(mrng);
        Vec v = phi.phi3.center + l3.matrixL() * e;
        pts.push_back(phi_chart(A, u, z, v));
        mu += pts.back();
    }
    mu /= M;
    for (const auto& x : pts) C += (x - mu) * (x - mu).transpose();
    C /= M;
    C += 1e-6 * Mat::Identity(n, n);
    const double nu = 5, infl = 1.5;
    Mat Lc = Eigen::LLT<Mat>(C).matrixL();
    Lc *= infl;
    const double logdetL = Lc.diagonal().array().log().sum();
    const double logc = std::lgamma(0.5 * (nu + n)) - std::lgamma(0.5 * nu) - 0.5 * n * std::log(nu * kPi) - logdetL;

    std::vector<CompiledPoly<double>> minors;
    int stride = 1;
    for (const auto& p : A.minor_polys) {
        minors.emplace_back(p);
        stride = std::max(stride, minors.back().max_degree() + 1);
    }
    std::vector<int> mm = m.parts;
    const long long Ns = std::max<long long>(budget.samples, 1);
    const long long chunk = 8192, nch = (Ns + chunk - 1) / chunk;
    std::vector<std::array<double, 2>> part(static_cast<std::size_t>(nch));
    parallel_chunks(nch, budget.threads, [&](long long ci) {
        std::mt19937_64 rng(chunk_seed(budget.seed, ci));
        std::normal_distribution<double> nd;
        std::chi_squared_distribution<double> chi(nu);
        std::vector<double> pw(static_cast<std::size_t>(n) * stride), mins(r);
        Vec t(n), x(n);
        double sum = 0, sq = 0;
        const long long b = ci * chunk, e = std::min(Ns, b + chunk);
        for (long long i = b; i < e; ++i) {
            for (int k = 0; k < n; ++k) t(k) = nd(rng);
            double sc = std::sqrt(nu / chi(rng));
            x = mu + sc * (Lc * t);
            CompiledPoly<double>::fill_powers(x.data(), n, stride, pw.data());
            for (int k = 0; k < r; ++k) mins[k] = minors[k].eval(pw.data(), stride);
            if (orbit_index_from_minors(mins.data(), r) != j) continue;
            double val;
            try {
                val = phi(A, x);
            } catch (const ChartDomainError&) {
                continue;
            }
            if (val == 0) continue;
            double dm = 1;
            for (int k = 0; k < r; ++k) {
                int ex = mm[k] - (k + 1 < r ? mm[k + 1] : 0);
                if (ex) dm *= std::pow(mins[k], ex);
            }
            double tt = t.squaredNorm() * 1.0;  // (x-mu)^T (Lc Lc^T)^{-1} (x-mu) = sc^2 |t|^2
            double logq = logc - 0.5 * (nu + n) * std::log1p(sc * sc * tt / nu);
            double F = std::exp(s * std::log(std::abs(mins[r - 1])) - logq) * dm * val;
            sum += F;
            sq += F * F;
        }
        part[static_cast<std::size_t>(ci)] = {sum, sq};
    });
    double sum = 0, sq = 0;
    for (const auto& p : part) {
        sum += p[0];
        sq += p[1];
    }
    const double lhs = sum / double(Ns);
    const double lhs_sig = std::sqrt(std::max(sq / double(Ns) - lhs * lhs, 0.0) / double(Ns));

    // right side
    const Algebra R1 = make_algebra(Family::Real, 1);
    Vec c1(1);
    c1 << phi.u0;
    TestFunction phi1 = TestFunction::gaussian(c1, phi.wu);
    const Algebra sub = peirce_subalgebra(A);
    const Partition mp = m.prime();
    Budget qb = budget;
    const double Z = std::pow(2 * kPi * phi.wz * phi.wz, 0.5 * nz);
    auto rhs_for = [&](double shift, double& sig) {
        const double a = s + A.d * (r - 1) + m[0] + shift;
        cplx val = 0;
        double var = 0;
        if (j < r) {
            auto up = zeta_eval(R1, 0, Partition::zero(1), phi1, a, qb);
            auto ph = zeta_eval(sub, j, mp, phi.phi3, s, qb);
            val += up.value * Z * ph.value;
            var += std::pow(std::abs(Z * ph.value) * up.abs_error_estimate, 2) +
                   std::pow(std::abs(Z * up.value) * ph.abs_error_estimate, 2);
        }
        if (j > 0) {
            auto um = zeta_eval(R1, 1, Partition::zero(1), phi1, a, qb);
            auto ph = zeta_eval(sub, j - 1, mp, phi.phi3, s, qb);
            double sgn = (m[0] % 2 == 0) ? 1.0 : -1.0;
            val += sgn * um.value * Z * ph.value;
            var += std::pow(std::abs(Z * ph.value) * um.abs_error_estimate, 2) +
                   std::pow(std::abs(Z * um.value) * ph.abs_error_estimate, 2);
        }
        sig = std::sqrt(var);
        return val.real();
    };
    double rsig = 0, csig0 = 0;
    const double rhs = rhs_for(0.0, rsig);
    const double rhs_c = rhs_for(opt.control_shift, csig0);
    const double den = std::max(std::abs(rhs), 1e-300);
    rep.max_relative_deviation = std::abs(lhs - rhs) / den;
    rep.sigma = std::sqrt(lhs_sig * lhs_sig + rsig * rsig) / den;
    rep.tolerance = opt.nsigma * rep.sigma;
    rep.samples = Ns;
    NegativeControl ctl;
    ctl.perturbation = "u exponent shifted by " + fmt(opt.control_shift);
    const double cden = std::max(std::abs(rhs_c), 1e-300);
    ctl.deviation = std::abs(lhs - rhs_c) / cden;
    ctl.sigma = std::sqrt(lhs_sig * lhs_sig + csig0 * csig0) / cden;
    ctl.informative = std::abs(rhs_c - rhs) / cden >= 2 * ctl.threshold * ctl.sigma;
    ctl.detected = ctl.deviation >= ctl.threshold * ctl.sigma;
    rep.control = ctl;
    rep.details["j"] = std::to_string(j);
    rep.details["m"] = fmt_parts(m.parts);
    rep.details["s"] = fmt(s);
    rep.details["lhs"] = fmt(lhs);
    rep.details["lhs_sigma"] = fmt(lhs_sig);
    rep.details["rhs"] = fmt(rhs);
    rep.details["terms"] = j == 0 ? "x_+" : (j == r ? "x_-" : "x_- and x_+");
    rep.method = "importance_sampling+factor_integrals";
    finalize(rep);
    return rep;
}

// ---------------------------------------------------------------- functional equation

CheckReport check_functional_equation_span(const Algebra& A, const Partition& m, double s,
                                           const std::vector<TestFunction>& battery, const Budget& budget,
                                           const FunctionalEquationOptions& opt, FunctionalEquationFit* fit_out) {
    const int r = A.r, K = r + 1;
    const int B = static_cast<int>(battery.size());
    if (B < 3 * K) throw ParameterError("functional equation battery needs at least 3(r+1) test functions");
    if (m.r() != r) throw ParameterError("partition length must equal r");
    CheckReport rep;
    rep.name = "functional_equation_span";
    Budget base = budget;
    base.qmc = budget.qmc || opt.rqmc;
    const double nr = double(A.n) / r;
    const std::vector<int> mstar = m.neg_star();
    CMat lhs(B, K), rhs(B, K);
    Mat lerr(B, K), rerr(B, K);
    long long samples = 0;
    // smallest shift with exponent + k >= -0.3 (finite second moment) where the weight is a
    // polynomial; Delta*_{-m*} has negative powers unless m = 0
    auto relaxed_shift = [](double e) { return std::max(0, static_cast<int>(std::ceil(-0.3 - e - 1e-12))); };
    const int lhs_shift = relaxed_shift(s - nr);
    const int rhs_shift = m.is_zero() ? relaxed_shift(-s) : -1;
    for (int i = 0; i < B; ++i) {
        const auto& phi = battery[static_cast<std::size_t>(i)];
        Budget bi = with_seed(base, derive_seed(budget.seed, 0x4645 + 2 * i));
        Budget bj = with_seed(base, derive_seed(budget.seed, 0x4645 + 2 * i + 1));
        auto L = zeta_eval_orbits(A, m, fourier(phi), s - nr, bi, lhs_shift);
        auto R = psi_eval_orbits(A, mstar, phi, -s, bj, rhs_shift);
        for (int k = 0; k < K; ++k) {
            lhs(i, k) = L[k].value;
            lerr(i, k) = L[k].abs_error_estimate;
            rhs(i, k) = R[k].value;
            rerr(i, k) = R[k].abs_error_estimate;
        }
        samples += L[0].samples + R[0].samples;
        rep.method = L[0].engine;
    }
    auto solve = [&](const std::vector<int>& rows, int j, double& resid, double& cond) {
        const int nrw = static_cast<int>(rows.size());
        CMat Mm(nrw, K);
        CVec b(nrw);
        for (int t = 0; t < nrw; ++t) {
            double w = 1.0 / std::max(std::abs(lhs(rows[t], j)) + rhs.row(rows[t]).norm(), 1e-300);
            Mm.row(t) = w * rhs.row(rows[t]);
            b(t) = w * lhs(rows[t], j);
        }
        Eigen::JacobiSVD<CMat> svd(Mm, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const auto& sv = svd.singularValues();
        cond = sv(0) / std::max(sv(sv.size() - 1), 1e-300);
        if (!(cond <= opt.max_condition)) throw ConditioningError("functional equation battery ill-conditioned", cond);
        CVec v = svd.solve(b);
        resid = (Mm * v - b).norm() / std::max(b.norm(), 1e-300);
        return v;
    };
    FunctionalEquationFit fit;
    std::vector<int> all(B), half[2];
    for (int i = 0; i < B; ++i) {
        all[i] = i;
        half[i % 2].push_back(i);
    }
    double maxdev = 0, maxcond = 0, noise = 0;
    for (int i = 0; i < B; ++i)
        for (int k = 0; k < K; ++k) {
            noise = std::max(noise, lerr(i, k) / std::max(std::abs(lhs(i, k)), 1e-300));
            noise = std::max(noise, rerr(i, k) / std::max(std::abs(rhs(i, k)), 1e-300));
        }
    for (int j = 0; j < K; ++j) {
        double res, cond, r0, r1, c0, c1;
        CVec v = solve(all, j, res, cond);
        CVec va = solve(half[0], j, r0, c0);
        CVec vb = solve(half[1], j, r1, c1);
        double split = (va - vb).norm() / std::max(v.norm(), 1e-300);
        fit.v.emplace_back(v.data(), v.data() + K);
        fit.v_half[0].emplace_back(va.data(), va.data() + K);
        fit.v_half[1].emplace_back(vb.data(), vb.data() + K);
        fit.residual.push_back(res);
        fit.split_deviation.push_back(split);
        maxdev = std::max({maxdev, res, split});
        maxcond = std::max({maxcond, cond, c0, c1});
        rep.details["residual_j" + std::to_string(j)] = fmt(res);
        rep.details["split_j" + std::to_string(j)] = fmt(split);
    }
    rep.max_relative_deviation = maxdev;
    rep.tolerance = opt.tolerance;
    rep.sigma = noise;
    rep.samples = samples;
    // control: fitting against Psi at the wrong point (-s + 0.1) must leave a residual
    {
        CMat rhs_c(B, K);
        for (int i = 0; i < B; ++i) {
            Budget bj = with_seed(base, derive_seed(budget.seed, 0x4645 + 2 * i + 1));
            auto R = psi_eval_orbits(A, mstar, battery[static_cast<std::size_t>(i)], -s + 0.1, bj);
            for (int k = 0; k < K; ++k) rhs_c(i, k) = R[k].value;
        }
        std::swap(rhs, rhs_c);
        double worst = 0;
        for (int j = 0; j < K; ++j) {
            double res, cond;
            try {
                solve(all, j, res, cond);
            } catch (const ConditioningError&) {
                res = 1;
            }
            worst = std::max(worst, res);
        }
        std::swap(rhs, rhs_c);
        NegativeControl ctl;
        ctl.perturbation = "Psi evaluated at -s + 0.1";
        ctl.deviation = worst;
        ctl.sigma = opt.tolerance / ctl.threshold;
        ctl.detected = worst >= opt.tolerance;
        rep.control = ctl;
    }
    rep.details["m"] = fmt_parts(m.parts);
    rep.details["s"] = fmt(s);
    rep.details["battery"] = battery_manifest(battery);
    rep.details["max_condition"] = fmt(maxcond);
    finalize(rep);
    if (fit_out) *fit_out = fit;
    return rep;
}

// ---------------------------------------------------------------- dimension probe

CheckReport dimension_probe(const Algebra& A, const Partition& m, double s, const std::vector<TestFunction>& battery,
                            const Budget& budget, const DimensionOptions& opt) {
    const int K = A.r + 1;
    const int B = static_cast<int>(battery.size());
    if (B <= K) throw ParameterError("dimension probe battery must exceed r+1 test functions");
    CheckReport rep;
    rep.name = "dimension_probe";
    const PolySpace space = build_Pm(A, m);
    const int D = space.dim();
    auto columns = [&](int i, std::uint64_t tag, CMat& T, Mat& E, int col) {
        Budget bi = with_seed(budget, derive_seed(budget.seed, tag));
        bi.qmc = budget.qmc || opt.rqmc;
        auto v = vector_zeta_orbits(A, space, battery[static_cast<std::size_t>(i)], s, bi);
        for (int j = 0; j < K; ++j)
            for (int a = 0; a < D; ++a) {
                T(j, col + a) = v[j][a].value;
                E(j, col + a) = v[j][a].abs_error_estimate;
            }
        rep.method = v[0][0].engine;
        return v[0][0].samples;
    };
    const int dup = std::min(3, B);
    CMat T(K, B * D), Td(K, (B + dup) * D);
    Mat E(K, B * D), Ed(K, (B + dup) * D);
    long long samples = 0;
    for (int i = 0; i < B; ++i) samples += columns(i, 0x44 + i, T, E, i * D);
    Td.leftCols(B * D) = T;
    Ed.leftCols(B * D) = E;
    for (int i = 0; i < dup; ++i) samples += columns(i, 0x1044 + i, Td, Ed, (B + i) * D);
    auto rank_of = [&](const CMat& M, const Mat& Em, double& smax, double& thr, std::string& svs) {
        Eigen::JacobiSVD<CMat> svd(M);
        const auto& sv = svd.singularValues();
        smax = sv(0);
        thr = std::max(opt.rel_cut * smax, opt.noise_factor * Em.norm());
        int rk = 0;
        svs.clear();
        for (int i = 0; i < sv.size(); ++i) {
            if (sv(i) > thr) ++rk;
            svs += (i ? "," : "") + fmt(sv(i));
        }
        return rk;
    };
    double smax, thr, smax2, thr2, smaxc, thrc;
    std::string svs, svs2, svsc;
    const int rank = rank_of(T, E, smax, thr, svs);
    const int rank_dup = rank_of(Td, Ed, smax2, thr2, svs2);
    // control: last row replaced by a combination of the others (same noise level)
    CMat Tc = T;
    Tc.row(K - 1) = T.row(0) + 0.5 * T.row(K - 2);
    const int rank_ctl = rank_of(Tc, E, smaxc, thrc, svsc);
    rep.max_relative_deviation = std::abs(rank - K) + std::abs(rank_dup - rank);
    rep.tolerance = 0;
    rep.sigma = E.norm() / std::max(smax, 1e-300);
    rep.samples = samples;
    NegativeControl ctl;
    ctl.perturbation = "row r replaced by a combination of rows 0 and r-1";
    ctl.deviation = K - rank_ctl;
    ctl.sigma = 0;
    ctl.detected = rank_ctl < K;
    rep.control = ctl;
    rep.details["rank"] = std::to_string(rank);
    rep.details["rank_with_duplicates"] = std::to_string(rank_dup);
    rep.details["expected_rank"] = std::to_string(K);
    rep.details["control_rank"] = std::to_string(rank_ctl);
    rep.details["singular_values"] = svs;
    rep.details["threshold"] = fmt(thr);
    rep.details["m"] = fmt_parts(m.parts);
    rep.details["s"] = fmt(s);
    rep.details["dim_Pm"] = std::to_string(D);
    rep.details["battery"] = battery_manifest(battery);
    rep.details["scope"] = "linear independence of T_0..T_r only; the upper bound is not probed";
    finalize(rep);
    return rep;
}

// ---------------------------------------------------------------- equivariance

CheckReport check_equivariance_hm(const Algebra& A, const PolySpace& space, const std::vector<GroupElement>& gs,
                                  const std::vector<Vec>& xs, double tol) {
    if (gs.size() != xs.size()) throw ParameterError("equivariance: need one point per group element");
    CheckReport rep;
    rep.name = "equivariance_hm";
    double maxdev = 0, maxctl = 0;
    for (std::size_t i = 0; i < gs.size(); ++i) {
        const auto& g = gs[i];
        Mat M = pi_m_matrix(A, g, space);
        double chi = std::pow(g.det_v, double(A.r) * space.m[0] / A.n);
        Vec lhs = h_m(A, space, g.apply(xs[i]));
        Vec hx = h_m(A, space, xs[i]);
        double den = std::max(lhs.norm(), 1e-300);
        maxdev = std::max(maxdev, (lhs - chi * M * hx).norm() / den);
        maxctl = std::max(maxctl, (lhs - chi * M.transpose() * hx).norm() / den);
    }
    rep.max_relative_deviation = maxdev;
    rep.tolerance = tol;
    NegativeControl ctl;
    ctl.perturbation = "pi_m(g) replaced by its transpose";
    ctl.deviation = maxctl;
    ctl.sigma = tol;
    ctl.informative = space.dim() > 1;
    ctl.detected = maxctl >= ctl.threshold * tol;
    rep.control = ctl;
    rep.details["m"] = fmt_parts(space.m.parts);
    rep.details["pairs"] = std::to_string(gs.size());
    rep.details["dim"] = std::to_string(space.dim());
    rep.method = "exact_linear_algebra";
    finalize(rep);
    return rep;
}

// ---------------------------------------------------------------- exact identities

namespace {

QPoly apply_constant_operator(const QPoly& Q, const QPoly& P) {
    QPoly out(P.nvars());
    for (const auto& [e, c] : Q.terms()) {
        QPoly t = P;
        for (int i = 0; i < P.nvars(); ++i)
            for (int k = 0; k < e[i]; ++k) t = t.derivative(i);
        out += t * c;
    }
    return out;
}

}  // namespace

CheckReport check_exact_identities(const Algebra& A, const Partition& m, int n_points, std::uint64_t seed,
                                   const std::vector<int>& s_values) {
    const ExactAlgebra E = exact_algebra(A);
    CheckReport rep;
    rep.name = "exact_identities";
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> D(-8, 8);
    auto rand_point = [&]() {
        VecT<Rational> x(E.n);
        for (int i = 0; i < E.n; ++i) x(i) = Rational(D(rng), 4);
        return x;
    };
    int mismatches = 0, checked = 0;
    // Delta_m(x^{-1}) = Delta*_{-m*}(x)
    const std::vector<int> nms = m.neg_star();
    int pts = 0;
    while (pts < n_points) {
        VecT<Rational> x = rand_point();
        bool ok = det(E, x) != 0;
        for (const auto& p : E.minor_polys) ok = ok && p.evaluate(x) != 0;
        for (const auto& p : E.dual_minor_polys) ok = ok && p.evaluate(x) != 0;
        if (!ok) continue;
        ++pts;
        ++checked;
        if (delta_power(E, m.parts, inverse(E, x)) != dual_delta_power(E, nms, x)) ++mismatches;
    }
    // det(d) det^{s+1} Delta_m = b(s) det^s Delta_m on Omega_0
    std::vector<VecT<Rational>> cone;
    while (static_cast<int>(cone.size()) < n_points) {
        VecT<Rational> y = rand_point();
        cone.push_back(jordan_mul(E, y, y) + E.e * Rational(1, 4));
    }
    const QPoly dm = delta_power_poly(E, m);
    int ctl_hits = 0;
    for (int s : s_values) {
        if (s < 0) throw ParameterError("exact Bernstein check needs integer s >= 0");
        QPoly Ps = E.det_poly.pow(s + 1) * dm;
        QPoly lhs = apply_constant_operator(E.det_poly, Ps);
        QPoly base = E.det_poly.pow(s) * dm;
        auto bfac = [&](int sv) {
            Rational b = 1;
            for (int j = 1; j <= E.r; ++j) b *= Rational(sv) + gamma_factor_shift(m.parts, A, j);
            return b;
        };
        const Rational b = bfac(s), bc = bfac(s + 1);
        for (const auto& x : cone) {
            ++checked;
            Rational l = lhs.evaluate(x), rr = base.evaluate(x);
            if (l != b * rr) ++mismatches;
            if (l != bc * rr) ++ctl_hits;
        }
    }
    rep.max_relative_deviation = mismatches;
    rep.tolerance = 0;
    NegativeControl ctl;
    ctl.perturbation = "Bernstein polynomial evaluated at s+1";
    ctl.deviation = ctl_hits;
    ctl.sigma = 0;
    ctl.detected = ctl_hits > 0;
    rep.control = ctl;
    rep.details["points"] = std::to_string(n_points);
    rep.details["identities_checked"] = std::to_string(checked);
    rep.details["mismatches"] = std::to_string(mismatches);
    rep.method = "rational_arithmetic";
    rep.details["m"] = fmt_parts(m.parts);
    finalize(rep);
    return rep;
}

// ---------------------------------------------------------------- support probes

Vec probe_offset(int n) {
    static const double base[] = {0.3, -0.2, 0.25, -0.1, 0.15, -0.05, 0.2, -0.15};
    Vec v(n);
    for (int i = 0; i < n; ++i) v(i) = base[i % 8];
    return v;
}

std::vector<LaurentExpansion> chart_laurent(const Algebra& A, const std::vector<std::vector<cplx>>& coeffs,
                                            const Partition& m, const TestFunction& phi, const Rational& s0,
                                            const Budget& budget, const LaurentOptions& opt) {
    if (A.r != 2) throw ParameterError("chart_laurent needs rank 2");
    if (m.r() != 2) throw ParameterError("partition length must equal r");
    for (const auto& c : coeffs)
        if (c.size() != 3) throw ParameterError("laurent: need r+1 coefficients");
    const int n = A.n, d = A.d;
    const auto wi = chart_w_coords(A);
    const auto vi = subalgebra_coords(A);
    if (vi.size() != 1) throw ParameterError("chart_laurent: unexpected subalgebra size");
    const int nz = static_cast<int>(wi.size());
    const int vc = vi[0];
    ChartPoint c0 = phi_chart_inverse(A, phi.center);
    // x(u, z, v) = u (e_1 + B z + Q(z)) + v e_2, read off phi_chart
    const Vec e1 = phi_chart(A, 1.0, Vec::Zero(nz), Vec::Zero(1));
    Mat Bm(n, nz);
    std::vector<std::vector<Vec>> Q(nz, std::vector<Vec>(nz));
    auto img = [&](const Vec& z) { return Vec(phi_chart(A, 1.0, z, Vec::Zero(1)) - e1); };
    for (int a = 0; a < nz; ++a) {
        Vec za = Vec::Zero(nz);
        za(a) = 1;
        Vec p = img(za), q = img(Vec(-za));
        Bm.col(a) = 0.5 * (p - q);
        Q[a][a] = 0.5 * (p + q);
    }
    for (int a = 0; a < nz; ++a)
        for (int b = a + 1; b < nz; ++b) {
            Vec zab = Vec::Zero(nz);
            zab(a) = 1;
            zab(b) = 1;
            Vec full = img(zab) - Bm.col(a) - Bm.col(b) - Q[a][a] - Q[b][b];
            Q[a][b] = Q[b][a] = 0.5 * full;
        }
    auto chart_x = [&](double u, const double* z, double v, Vec& x) {
        x = e1;
        for (int a = 0; a < nz; ++a) {
            x.noalias() += z[a] * Bm.col(a);
            for (int b = 0; b < nz; ++b) x.noalias() += z[a] * z[b] * Q[a][b];
        }
        x *= u;
        x(vc) += v;
    };
    {
        std::mt19937_64 trng(7);
        std::normal_distribution<double> N;
        Vec z(nz), x;
        for (int i = 0; i < nz; ++i) z(i) = N(trng);
        Vec v1(1);
        v1 << 0.37;
        chart_x(-0.8, z.data(), 0.37, x);
        if ((x - phi_chart(A, -0.8, z, v1)).norm() > 1e-10 * (1 + x.norm()))
            throw InvariantViolation("chart_laurent: chart is not quadratic in z");
    }
    // proposal: linearized pullback of the probe Gaussian, inflated
    const int nw = 2 + nz;
    Vec w0(nw);
    w0(0) = c0.u;
    for (int a = 0; a < nz; ++a) w0(1 + a) = c0.z(a);
    w0(nw - 1) = c0.v(0);
    Mat J(n, nw);
    {
        const double h = 1e-6;
        for (int t = 0; t < nw; ++t) {
            Vec wp = w0, wm = w0;
            wp(t) += h;
            wm(t) -= h;
            Vec xp, xm;
            chart_x(wp(0), wp.data() + 1, wp(nw - 1), xp);
            chart_x(wm(0), wm.data() + 1, wm(nw - 1), xm);
            J.col(t) = (xp - xm) / (2 * h);
        }
    }
    const double infl = opt.inflation > 0 ? opt.inflation : kProposalInflation;
    Mat Jinv = J.inverse();
    Mat covw = Jinv * phi.precision.inverse() * Jinv.transpose();
    Mat Lw = Eigen::LLT<Mat>(covw).matrixL();
    Lw *= infl;
    const double logdet = Lw.diagonal().array().abs().log().sum();
    const double lognorm = -0.5 * nw * std::log(2 * kPi) - logdet;

    const double s0d = to_double(s0);
    const int m1 = m[0], m2 = m[1];
    const double width = phi.width();
    int k = 0;
    if (std::abs(c0.v(0)) < 12 * width) k = std::max(0, static_cast<int>(std::ceil(-(s0d + m2) - 1e-12)));
    TestFunction fk = phi;
    for (int t = 0; t < k; ++t) fk = partial(fk, vc);
    const int P = opt.n_points;
    const int hneg = std::max(opt.h_min, 3);
    const int H = hneg + opt.h_max + 1;
    std::vector<cplx> sp(P), rw(P);
    for (int p = 0; p < P; ++p) {
        rw[p] = std::polar(opt.radius, 2 * kPi * p / P);
        sp[p] = s0d + rw[p];
        for (int i = 1; i <= k; ++i)
            if (std::abs(sp[p] + double(m2 + i)) < 1e-12) throw GeometryError("chart_laurent: pole on the circle");
    }
    // G[h][p] = (rho w^p)^{-h} / (P prod_i (s_p + m2 + i))
    std::vector<std::vector<cplx>> G(H, std::vector<cplx>(P));
    for (int hi = 0; hi < H; ++hi) {
        const int h = hi - hneg;
        for (int p = 0; p < P; ++p) {
            cplx prod = 1;
            for (int i = 1; i <= k; ++i) prod *= sp[p] + double(m2 + i);
            G[hi][p] = std::pow(rw[p], -h) / (double(P) * prod);
        }
    }
    const int C = static_cast<int>(coeffs.size());
    const int nf = C * H;
    const long long Ns = std::max<long long>(budget.samples, 1);
    const long long chunk = 8192, nch = (Ns + chunk - 1) / chunk;
    struct Acc {
        std::vector<cplx> sum;
        std::vector<double> sq;
    };
    std::vector<Acc> part(static_cast<std::size_t>(nch));
    parallel_chunks(nch, budget.threads, [&](long long ci) {
        std::mt19937_64 rng(chunk_seed(budget.seed, ci));
        std::normal_distribution<double> nd;
        Acc acc{std::vector<cplx>(nf, 0.0), std::vector<double>(nf, 0.0)};
        Vec t(nw), w(nw), x(n);
        std::vector<cplx> ez(P), per(H), X(nf);
        const long long b = ci * chunk, e = std::min(Ns, b + chunk);
        for (long long i = b; i < e; ++i) {
            for (int q = 0; q < nw; ++q) t(q) = nd(rng);
            w = w0 + Lw * t;
            const double u = w(0), v = w(nw - 1);
            if (u == 0 || v == 0) continue;
            chart_x(u, w.data() + 1, v, x);
            cplx fx = fk(x);
            if (fx == 0.0) continue;
            const int j = (u < 0 ? 1 : 0) + (v < 0 ? 1 : 0);
            const double lu = std::log(std::abs(u)), lv = std::log(std::abs(v));
            double sgn = 1;
            if (u < 0 && (m1 % 2)) sgn = -sgn;
            if (v > 0 ? (k % 2) : (m2 % 2)) sgn = -sgn;
            const double logq = lognorm - 0.5 * t.squaredNorm();
            const double logmag = (m1 + d) * lu + (m2 + k) * lv - logq;
            const cplx base = sgn * fx;
            for (int p = 0; p < P; ++p) ez[p] = std::exp(sp[p] * (lu + lv) + logmag);
            for (int hi = 0; hi < H; ++hi) {
                cplx a = 0;
                for (int p = 0; p < P; ++p) a += G[hi][p] * ez[p];
                per[hi] = base * a;
            }
            for (int ci2 = 0; ci2 < C; ++ci2) {
                const cplx cj = coeffs[ci2][j];
                for (int hi = 0; hi < H; ++hi) {
                    cplx val = cj * per[hi];
                    acc.sum[ci2 * H + hi] += val;
                    acc.sq[ci2 * H + hi] += std::norm(val);
                }
            }
        }
        part[static_cast<std::size_t>(ci)] = std::move(acc);
    });
    std::vector<cplx> sum(nf, 0.0);
    std::vector<double> sq(nf, 0.0);
    for (const auto& a : part)
        for (int f = 0; f < nf; ++f) {
            sum[f] += a.sum[f];
            sq[f] += a.sq[f];
        }
    std::vector<LaurentExpansion> out;
    for (int ci2 = 0; ci2 < C; ++ci2) {
        LaurentExpansion L;
        L.s0 = s0d;
        L.k = k;
        L.engine = "chart_monte_carlo";
        L.samples = Ns;
        L.radius = opt.radius;
        L.n_points = P;
        double scale = 0;
        for (int hi = 0; hi < H; ++hi) {
            const int f = ci2 * H + hi;
            cplx mean = sum[f] / double(Ns);
            double var = std::max(sq[f] / double(Ns) - std::norm(mean), 0.0) / double(Ns);
            L.coefficients[hi - hneg] = mean;
            L.sigma[hi - hneg] = std::sqrt(var);
            scale = std::max(scale, std::abs(mean));
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

LaurentExpansion rescale_laurent(const Algebra& A, const Partition& m, const LaurentExpansion& L, double w) {
    if (!(w > 0)) throw ParameterError("rescale_laurent: scale must be positive");
    const double E0 = A.n + A.r * L.s0.real() + m.abs();
    const double ell = A.r * std::log(w), pre = std::pow(w, E0);
    const int alpha = std::max(L.order, 0);
    LaurentExpansion out = L;
    out.coefficients.clear();
    out.sigma.clear();
    out.noise_floor.clear();
    double scale = 0;
    for (int h = 0; h <= alpha; ++h) {
        cplx a = 0;
        double var = 0, fact = 1;
        for (int i = 0; h + i <= alpha; ++i) {
            if (i > 0) fact *= i;
            double c = pre * std::pow(ell, i) / fact;
            a += c * L.coefficients.at(-h - i);
            var += std::pow(c * L.sigma.at(-h - i), 2);
        }
        out.coefficients[-h] = a;
        out.sigma[-h] = std::sqrt(var);
        scale = std::max(scale, std::abs(a));
    }
    const double rel = L.noise_floor.count(0) ? 1e-10 : 0;
    for (const auto& [h, sg] : out.sigma) out.noise_floor[h] = 3 * sg + rel * scale;
    out.engine = L.engine + "+rescaled";
    return out;
}

std::vector<CheckReport> check_support_rank(const Algebra& A, const std::vector<std::vector<cplx>>& coeffs,
                                            const Partition& m, const Rational& s0, const TestFunction& phi_ref,
                                            std::vector<LaurentExpansion> global, const Budget& budget,
                                            const SupportProbeOptions& opt,
                                            std::vector<std::vector<ProbeResponse>>* responses) {
    if (A.r > 2) throw ParameterError("support probes are implemented for r <= 2");
    const double s0d = to_double(s0);
    if (global.empty()) global = laurent_multi(A, coeffs, Weight{m.parts, false}, phi_ref, s0d, budget, opt.laurent);
    if (global.size() != coeffs.size()) throw ParameterError("support probes: one Laurent expansion per vector");
    const double wp = opt.width_factor * A.e.norm();
    const double wscale = wp / phi_ref.width();

    struct Probe {
        int p, q;
        std::string method;
        std::vector<LaurentExpansion> L;
    };
    std::vector<Probe> probes;
    {
        Probe o{0, 0, "homogeneity_rescaling", {}};
        for (const auto& g : global) o.L.push_back(rescale_laurent(A, m, g, wscale));
        probes.push_back(std::move(o));
    }
    const Vec off = probe_offset(A.n);
    std::uint64_t tag = 0x5350;
    for (int p = 1; p <= A.r; ++p)
        for (int q = 0; q <= p; ++q) {
            TestFunction probe = TestFunction::gaussian(Vec(o_pq(A, p, q) + wp * off), wp);
            Budget pb = budget;
            pb.samples = opt.probe_samples;
            pb.seed = derive_seed(budget.seed, tag++);
            Probe pr{p, q, "", {}};
            if (A.r == 1) {
                pr.method = "direct_quadrature";
                pr.L = laurent_multi(A, coeffs, Weight{m.parts, false}, probe, s0d, pb, opt.laurent);
            } else {
                pr.method = "chart_monte_carlo";
                pr.L = chart_laurent(A, coeffs, m, probe, s0, pb, opt.laurent);
            }
            probes.push_back(std::move(pr));
        }

    std::vector<CheckReport> out;
    if (responses) responses->assign(coeffs.size(), {});
    for (std::size_t ci = 0; ci < coeffs.size(); ++ci) {
        CheckReport rep;
        rep.name = "support_rank";
        const int alpha = global[ci].order;
        rep.details["order"] = std::to_string(alpha);
        rep.details["s0"] = rational_to_string(s0);
        rep.method = "support_probe+" + global[ci].engine;
        rep.details["m"] = fmt_parts(m.parts);
        rep.tolerance = 1.0 / opt.ratio;
        rep.samples = global[ci].samples;
        for (const auto& pr : probes) rep.samples += pr.p > 0 ? opt.probe_samples : 0;
        double worst = 0;
        for (int h = 1; h <= alpha; ++h) {
            const int R = support_rank_predict(h, s0, A);
            double on = 0, on_sig = 0, off = 0;
            int on_p = -1, on_q = -1;
            for (const auto& pr : probes) {
                const auto& L = pr.L[ci];
                double a = L.coefficients.count(-h) ? std::abs(L.coefficients.at(-h)) : 0.0;
                double sg = L.sigma.count(-h) ? L.sigma.at(-h) : 0.0;
                if (responses) (*responses)[ci].push_back({pr.p, pr.q, h, a, sg, pr.method});
                if (pr.p == R && a - opt.significance * sg > on - opt.significance * on_sig) {
                    on = a;
                    on_sig = sg;
                    on_p = pr.p;
                    on_q = pr.q;
                }
                if (pr.p > R) off = std::max(off, a + opt.significance * sg);
            }
            const double on_lo = on - opt.significance * on_sig;
            const double dev = on_lo > 0 ? off / on_lo : std::numeric_limits<double>::infinity();
            worst = std::max(worst, dev);
            const std::string hs = std::to_string(h);
            rep.details["h" + hs + "_support_rank"] = std::to_string(R);
            rep.details["h" + hs + "_on"] = fmt(on) + " +- " + fmt(on_sig) + " at S_" + std::to_string(on_p) + "," +
                                            std::to_string(on_q);
            rep.details["h" + hs + "_off_upper"] = fmt(off);
            if (!(on_lo > 0))
                rep.failure = "on-stratum response for h=" + hs + " is not significant";
        }
        rep.max_relative_deviation = worst;
        if (alpha < 1) rep.details["note"] = "no pole: nothing to probe";
        finalize(rep);
        out.push_back(std::move(rep));
    }
    return out;
}

}  // namespace jz
