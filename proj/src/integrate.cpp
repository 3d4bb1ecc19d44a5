#include "jz/integrate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <mutex>
#include <thread>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/random/sobol.hpp>

#include "jz/decompositions.hpp"

namespace jz {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr long long kChunk = 8192;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

struct Acc {
    std::vector<cplx> sum;
    std::vector<double> sq;  // |v|^2
    std::vector<cplx> fsum;
    std::vector<double> fsq;
};

void check_inputs(const Algebra& A, const OrbitIntegrand& in, const std::vector<Functional>& fs) {
    if (in.center.size() != A.n || in.precision.rows() != A.n || in.precision.cols() != A.n)
        throw AlgebraMismatch("integrand dimension does not match the algebra");
    for (const auto& p : in.polys)
        if (p.nvars() != A.n) throw AlgebraMismatch("integrand polynomial arity");
    if (!in.m.empty() && static_cast<int>(in.m.size()) != A.r) throw ParameterError("Delta_m tuple length must equal r");
    for (const auto& f : fs) {
        if (f.poly < 0 || f.poly >= static_cast<int>(in.polys.size())) throw ParameterError("functional poly index");
        if (static_cast<int>(f.orbit_coef.size()) != A.r + 1) throw ParameterError("functional orbit coefficients");
        if (f.s_coef.size() != in.s.size()) throw ParameterError("functional s coefficients");
    }
    if (in.s.empty() || in.polys.empty()) throw ParameterError("empty integrand grid");
}

OrbitIntegrals finish(const Algebra& A, const OrbitIntegrand& in, const std::vector<Functional>& fs, const Acc& acc,
                      long long N, const std::string& engine) {
    OrbitIntegrals out;
    out.engine = engine;
    out.samples = N;
    out.n_s = static_cast<int>(in.s.size());
    out.n_orbits = A.r + 1;
    const double dn = static_cast<double>(N);
    auto stats = [&](const cplx& s, double sq, cplx& mean, double& sig) {
        mean = s / dn;
        double var = sq / dn - std::norm(mean);
        sig = std::sqrt(std::max(var, 0.0) / dn);
    };
    out.mean.resize(acc.sum.size());
    out.sigma.resize(acc.sum.size());
    for (std::size_t i = 0; i < acc.sum.size(); ++i) stats(acc.sum[i], acc.sq[i], out.mean[i], out.sigma[i]);
    out.fmean.resize(fs.size());
    out.fsigma.resize(fs.size());
    for (std::size_t i = 0; i < fs.size(); ++i) stats(acc.fsum[i], acc.fsq[i], out.fmean[i], out.fsigma[i]);
    return out;
}

OrbitIntegrals integrate_mc(const Algebra& A, const OrbitIntegrand& in, const std::vector<Functional>& fs,
                            const Budget& budget) {
    const int n = A.n, r = A.r, R = r + 1;
    const int na = static_cast<int>(in.polys.size()), np = static_cast<int>(in.s.size());
    const bool qmc = budget.qmc;
    const int n_rep = qmc ? std::max(2, budget.qmc_replicates) : 1;
    const long long N_req = std::max<long long>(budget.samples, 1);
    const long long per_rep = (N_req + n_rep - 1) / n_rep;
    const long long N = per_rep * n_rep;
    const long long chunks_per_rep = (per_rep + kChunk - 1) / kChunk;
    const long long n_chunks = chunks_per_rep * n_rep;
    std::vector<std::uint64_t> masks(static_cast<std::size_t>(n_rep) * n);
    for (std::size_t i = 0; i < masks.size(); ++i) masks[i] = splitmix64(splitmix64(budget.seed ^ 0x51a7c0deull) + i);

    Eigen::LLT<Mat> llt(in.precision);
    if (llt.info() != Eigen::Success) throw ParameterError("integrand precision must be positive definite");
    const double infl = in.inflation > 0 ? in.inflation : kProposalInflation;
    Mat Lt = llt.matrixU();  // precision = Lt^T Lt
    Mat M = infl * Lt.triangularView<Eigen::Upper>().solve(Mat::Identity(n, n));
    double logdetA = 0;
    for (int i = 0; i < n; ++i) logdetA += 2 * std::log(Lt(i, i));
    const double logK = 0.5 * n * std::log(2 * kPi) + n * std::log(infl) - 0.5 * logdetA;

    std::vector<CompiledPoly<cplx>> polys;
    int stride = 1;
    for (const auto& p : in.polys) {
        polys.emplace_back(p);
        stride = std::max(stride, polys.back().max_degree() + 1);
    }
    std::vector<CompiledPoly<double>> minors, weights;
    int mstride = 1;
    for (const auto& p : A.minor_polys) {
        minors.emplace_back(p);
        mstride = std::max(mstride, minors.back().max_degree() + 1);
    }
    if (in.dual)
        for (const auto& p : A.dual_minor_polys) {
            weights.emplace_back(p);
            mstride = std::max(mstride, weights.back().max_degree() + 1);
        }
    std::vector<int> mexp(r, 0);
    if (!in.m.empty())
        for (int k = 0; k < r; ++k) mexp[k] = in.m[k] - (k + 1 < r ? in.m[k + 1] : 0);
    bool s_real = true;
    for (const auto& s : in.s) s_real = s_real && s.imag() == 0.0;

    // functionals sharing (poly, s_coef) share one s-contraction per sample
    std::vector<int> contraction(fs.size());
    std::vector<const Functional*> unique;
    for (std::size_t o = 0; o < fs.size(); ++o) {
        int found = -1;
        for (std::size_t u = 0; u < unique.size() && found < 0; ++u)
            if (unique[u]->poly == fs[o].poly && unique[u]->s_coef == fs[o].s_coef) found = static_cast<int>(u);
        if (found < 0) {
            found = static_cast<int>(unique.size());
            unique.push_back(&fs[o]);
        }
        contraction[o] = found;
    }
    const std::size_t grid = static_cast<std::size_t>(na) * np * R;
    std::vector<Acc> chunks(static_cast<std::size_t>(n_chunks));
    parallel_chunks(n_chunks, budget.threads, [&](long long c) {
        Acc acc;
        acc.sum.assign(grid, 0.0);
        acc.sq.assign(grid, 0.0);
        acc.fsum.assign(fs.size(), 0.0);
        acc.fsq.assign(fs.size(), 0.0);
        std::mt19937_64 rng(chunk_seed(budget.seed, c));
        std::normal_distribution<double> nd;
        const long long rep = c / chunks_per_rep;
        const long long begin = (c % chunks_per_rep) * kChunk, end = std::min(per_rep, begin + kChunk);
        boost::random::sobol qrng(qmc ? n : 1);
        if (qmc) qrng.seed(static_cast<std::uint64_t>(begin));
        const std::uint64_t* mask = masks.data() + rep * n;
        Vec z(n), y(n), x(n);
        std::vector<double> pw(static_cast<std::size_t>(n) * stride), mpw(static_cast<std::size_t>(n) * mstride);
        std::vector<double> mins(r);
        std::vector<cplx> F(static_cast<std::size_t>(na) * np);
        std::vector<cplx> pv(na);
        std::vector<cplx> D(unique.size());
        for (long long i = begin; i < end; ++i) {
            if (qmc) {
                for (int k = 0; k < n; ++k) {
                    double u = (double((qrng() ^ mask[k]) >> 11) + 0.5) * 0x1.0p-53;
                    z(k) = -std::sqrt(2.0) * boost::math::erfc_inv(2 * u);
                }
            } else {
                for (int k = 0; k < n; ++k) z(k) = nd(rng);
            }
            y.noalias() = M * z;
            x = in.center + y;
            CompiledPoly<double>::fill_powers(x.data(), n, mstride, mpw.data());
            for (int k = 0; k < r; ++k) mins[k] = minors[k].eval(mpw.data(), mstride);
            int j = orbit_index_from_minors(mins.data(), r);
            if (j < 0) continue;
            double dm = 1.0;
            for (int k = 0; k < r; ++k) {
                if (!mexp[k]) continue;
                double b = in.dual ? weights[k].eval(mpw.data(), mstride) : mins[k];
                dm *= mexp[k] > 0 ? std::pow(b, mexp[k]) : 1.0 / std::pow(b, -mexp[k]);
            }
            const double L = std::log(std::abs(mins[r - 1]));
            const double w = std::exp(logK - 0.5 * z.squaredNorm() * (infl * infl - 1.0)) * dm;
            CompiledPoly<cplx>::fill_powers(y.data(), n, stride, pw.data());
            for (int a = 0; a < na; ++a) pv[a] = polys[a].eval(pw.data(), stride) * w;
            for (int p = 0; p < np; ++p) {
                cplx ds = s_real ? cplx(std::exp(in.s[p].real() * L)) : std::exp(in.s[p] * L);
                for (int a = 0; a < na; ++a) {
                    cplx v = ds * pv[a];
                    F[a * np + p] = v;
                    std::size_t idx = (static_cast<std::size_t>(a) * np + p) * R + j;
                    acc.sum[idx] += v;
                    acc.sq[idx] += std::norm(v);
                }
            }
            for (std::size_t u = 0; u < unique.size(); ++u) {
                const Functional& f = *unique[u];
                cplx v = 0.0;
                const cplx* Fa = F.data() + static_cast<std::size_t>(f.poly) * np;
                for (int p = 0; p < np; ++p) v += f.s_coef[p] * Fa[p];
                D[u] = v;
            }
            for (std::size_t o = 0; o < fs.size(); ++o) {
                cplx v = fs[o].orbit_coef[j] * D[contraction[o]];
                acc.fsum[o] += v;
                acc.fsq[o] += std::norm(v);
            }
        }
        chunks[static_cast<std::size_t>(c)] = std::move(acc);
    });
    Acc tot;
    tot.sum.assign(grid, 0.0);
    tot.sq.assign(grid, 0.0);
    tot.fsum.assign(fs.size(), 0.0);
    tot.fsq.assign(fs.size(), 0.0);
    for (const auto& a : chunks) {
        for (std::size_t i = 0; i < grid; ++i) {
            tot.sum[i] += a.sum[i];
            tot.sq[i] += a.sq[i];
        }
        for (std::size_t i = 0; i < fs.size(); ++i) {
            tot.fsum[i] += a.fsum[i];
            tot.fsq[i] += a.fsq[i];
        }
    }
    if (!qmc) return finish(A, in, fs, tot, N, "monte_carlo");
    OrbitIntegrals out = finish(A, in, fs, tot, N, "rqmc_sobol");
    // replicate means are independent; their spread gives the error of the grand mean
    std::vector<cplx> rs(grid), rf(fs.size());
    std::vector<double> vs(grid, 0.0), vf(fs.size(), 0.0);
    for (int q = 0; q < n_rep; ++q) {
        std::fill(rs.begin(), rs.end(), cplx(0.0));
        std::fill(rf.begin(), rf.end(), cplx(0.0));
        for (long long c = q * chunks_per_rep; c < (q + 1) * chunks_per_rep; ++c) {
            const auto& a = chunks[static_cast<std::size_t>(c)];
            for (std::size_t i = 0; i < grid; ++i) rs[i] += a.sum[i];
            for (std::size_t i = 0; i < fs.size(); ++i) rf[i] += a.fsum[i];
        }
        for (std::size_t i = 0; i < grid; ++i) vs[i] += std::norm(rs[i] / double(per_rep) - out.mean[i]);
        for (std::size_t i = 0; i < fs.size(); ++i) vf[i] += std::norm(rf[i] / double(per_rep) - out.fmean[i]);
    }
    const double dq = double(n_rep) * (n_rep - 1);
    for (std::size_t i = 0; i < grid; ++i) out.sigma[i] = std::sqrt(vs[i] / dq);
    for (std::size_t i = 0; i < fs.size(); ++i) out.fsigma[i] = std::sqrt(vf[i] / dq);
    return out;
}

// Rank one: x in R, Omega_0 = (0, inf), Omega_1 = (-inf, 0).
OrbitIntegrals integrate_rank1(const Algebra&, const OrbitIntegrand& in, const std::vector<Functional>& fs) {
    const int na = static_cast<int>(in.polys.size()), np = static_cast<int>(in.s.size());
    const double c = in.center(0), prec = in.precision(0, 0);
    if (!(prec > 0)) throw ParameterError("integrand precision must be positive");
    const double sd = 1.0 / std::sqrt(prec);
    const int m1 = in.m.empty() ? 0 : in.m[0];
    boost::math::quadrature::tanh_sinh<double> ts;
    boost::math::quadrature::exp_sinh<double> es;
    const double tol = 1e-13;

    OrbitIntegrals out;
    out.engine = "direct_quadrature";
    out.samples = 0;
    out.n_s = np;
    out.n_orbits = 2;
    out.mean.assign(static_cast<std::size_t>(na) * np * 2, 0.0);
    out.sigma.assign(out.mean.size(), 0.0);
    for (int a = 0; a < na; ++a) {
        const CPoly& poly = in.polys[a];
        for (int p = 0; p < np; ++p) {
            const cplx s = in.s[p];
            for (int j = 0; j < 2; ++j) {
                const double sign = j == 0 ? 1.0 : -1.0;
                auto F = [&](double t) -> cplx {
                    if (!(t > 0) || !std::isfinite(t)) return 0.0;
                    double x = sign * t, y = x - c;
                    CVec yv(1);
                    yv(0) = y;
                    double g = std::exp(-0.5 * prec * y * y);
                    if (g == 0.0) return 0.0;
                    g *= std::pow(x, m1);  // Delta*_1 = Delta_1 at rank one
                    return std::exp(s * std::log(t)) * g * poly.evaluate(yv);
                };
                double tc = sign * c;
                double t2 = std::max(tc + 14 * sd, 14 * sd);
                double t1 = std::max(tc - 14 * sd, 0.0);
                std::vector<std::pair<double, double>> pieces;
                if (t1 > 0) pieces.push_back({0.0, t1});
                pieces.push_back({t1, t2});
                cplx val = 0.0;
                double err = 0.0, l1 = 0.0;
                for (int part = 0; part < 2; ++part) {
                    auto comp = [&](double t) {
                        cplx v = F(t);
                        return part == 0 ? v.real() : v.imag();
                    };
                    for (auto [lo, hi] : pieces) {
                        double e = 0, L1 = 0;
                        double v = ts.integrate(comp, lo, hi, tol, &e, &L1);
                        (part == 0 ? val.real(val.real() + v) : val.imag(val.imag() + v));
                        err += e;
                        l1 += L1;
                    }
                    double e = 0, L1 = 0;
                    auto tail = [&](double u) { return comp(t2 + u); };
                    double v = es.integrate(tail, tol, &e, &L1);
                    (part == 0 ? val.real(val.real() + v) : val.imag(val.imag() + v));
                    err += e;
                    l1 += L1;
                }
                std::size_t idx = (static_cast<std::size_t>(a) * np + p) * 2 + j;
                out.mean[idx] = val;
                out.sigma[idx] = std::max(err, 1e-14 * l1) + 1e-300;
            }
        }
    }
    out.fmean.assign(fs.size(), 0.0);
    out.fsigma.assign(fs.size(), 0.0);
    for (std::size_t o = 0; o < fs.size(); ++o) {
        const auto& f = fs[o];
        for (int p = 0; p < np; ++p)
            for (int j = 0; j < 2; ++j) {
                cplx w = f.s_coef[p] * f.orbit_coef[j];
                out.fmean[o] += w * out.value(f.poly, p, j);
                out.fsigma[o] += std::abs(w) * out.error(f.poly, p, j);
            }
    }
    return out;
}

}  // namespace

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    unsigned hc = std::thread::hardware_concurrency();
    return hc ? static_cast<int>(hc) : 1;
}

std::uint64_t chunk_seed(std::uint64_t base, long long chunk) {
    return splitmix64(splitmix64(base) ^ (0xd1b54a32d192ed03ull * static_cast<std::uint64_t>(chunk + 1)));
}

void parallel_chunks(long long n_chunks, int threads, const std::function<void(long long)>& body) {
    int T = std::min<long long>(resolve_threads(threads), std::max<long long>(n_chunks, 1));
    if (T <= 1) {
        for (long long c = 0; c < n_chunks; ++c) body(c);
        return;
    }
    std::atomic<long long> next{0};
    std::exception_ptr err;
    std::mutex mu;
    std::vector<std::thread> pool;
    for (int t = 0; t < T; ++t)
        pool.emplace_back([&] {
            for (;;) {
                long long c = next.fetch_add(1);
                if (c >= n_chunks) break;
                try {
                    body(c);
                } catch (...) {
                    std::lock_guard<std::mutex> lk(mu);
                    if (!err) err = std::current_exception();
                    next.store(n_chunks);
                }
            }
        });
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
}

OrbitIntegrals integrate_orbits(const Algebra& A, const OrbitIntegrand& in, const std::vector<Functional>& functionals,
                                const Budget& budget) {
    check_inputs(A, in, functionals);
    if (A.r == 1) return integrate_rank1(A, in, functionals);
    return integrate_mc(A, in, functionals, budget);
}

}  // namespace jz
