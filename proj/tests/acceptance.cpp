// Acceptance run: one PASS/FAIL line per criterion.
// Usage: acceptance [criterion numbers...]   (default: all)

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "jz/decompositions.hpp"
#include "jz/gamma.hpp"
#include "jz/report.hpp"
#include "jz/suite.hpp"
#include "jz/verify.hpp"
#include "jz/zeta.hpp"

using namespace jz;

namespace {

struct Outcome {
    bool pass = false;
    std::string summary;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(double x, int prec = 4) {
    std::ostringstream os;
    os.precision(prec);
    os << x;
    return os.str();
}

const std::vector<std::vector<cplx>> kCoeffs{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 1}, {1, -1, 1}};

std::vector<Algebra> desk_families() {
    return {make_algebra(Family::SymR, 2), make_algebra(Family::HermC, 2), make_algebra(Family::Spin, 2, 5)};
}

std::string tag(const Algebra& A) { return family_name(A.family) + "(n=" + std::to_string(A.n) + ")"; }

// ------------------------------------------------------------------ 1

Outcome gamma_consistency() {
    Outcome o{true, ""};
    double worst = 0, slowest = 0;
    for (const auto& A : desk_families()) {
        const auto t0 = Clock::now();
        const double s_min = (A.r - 1) * A.d / 2.0;
        for (double ds : {1.0, 2.5, 4.0}) {
            const double s = s_min + ds;
            Budget b;
            b.samples = 10'000'000;
            b.seed = 101;
            const auto mc = gamma_omega_mc(A, s, b);
            const double exact = gamma_omega(cplx(s - double(A.n) / A.r, 0), Partition::zero(A.r), A).real();
            const double rel = std::abs(mc.value.real() - exact) / std::abs(exact);
            worst = std::max(worst, rel);
            if (rel > 0.02) {
                o.pass = false;
                o.summary += tag(A) + " s=" + fmt(s) + " rel " + fmt(rel) + "; ";
            }
        }
        const double dt = seconds_since(t0);
        slowest = std::max(slowest, dt);
        if (dt > 60) {
            o.pass = false;
            o.summary += tag(A) + " took " + fmt(dt) + " s; ";
        }
    }
    o.summary += "max relative deviation " + fmt(worst) + " (limit 0.02), slowest family " + fmt(slowest, 3) +
                 " s at 1e7 samples";
    return o;
}

// ------------------------------------------------------------------ 2, 3

struct PoleCase {
    Algebra A;
    Partition m;
    Rational s0;
    TestFunction phi;
    std::vector<LaurentExpansion> L;
};

Budget laurent_budget() {
    Budget b;
    b.samples = 1 << 20;
    b.seed = 17;
    b.qmc = true;
    return b;
}

LaurentOptions laurent_options() {
    LaurentOptions lo;
    lo.inflation = 1.4;
    return lo;
}

std::vector<PoleCase>& pole_cases() {
    static std::vector<PoleCase> cases;
    return cases;
}

Outcome pole_order_matrix() {
    const auto t0 = Clock::now();
    auto& cases = pole_cases();
    cases.clear();
    int agree = 0, total = 0;
    std::string mismatches;
    for (const auto& A : desk_families()) {
        Vec center = Vec::Zero(A.n);
        const double off[] = {0.3, -0.2, 0.25, -0.1};
        for (int i = 0; i < std::min(4, A.n); ++i) center[i] = off[i];
        const auto phi = TestFunction::gaussian(center, 1.0);
        for (const char* ms : {"0,0", "1,0", "2,0", "1,1"}) {
            const Partition m = Partition::parse(ms, 2);
            const auto poles = pole_set(m.parts, A, Rational(-20), Rational(0));
            for (int p = 0; p < 3; ++p) {
                const Rational s0 = poles[p].s0;
                auto L = laurent_multi(A, kCoeffs, Weight{m.parts, false}, phi, to_double(s0), laurent_budget(),
                                       laurent_options());
                for (std::size_t c = 0; c < kCoeffs.size(); ++c) {
                    const int pred = pole_order_predict(kCoeffs[c], m.parts, s0, A).predicted_order;
                    ++total;
                    if (pred == L[c].order)
                        ++agree;
                    else
                        mismatches += " " + tag(A) + " m=" + m.str() + " s0=" + rational_to_string(s0) + " c" +
                                      std::to_string(c) + " predicted " + std::to_string(pred) + " measured " +
                                      std::to_string(L[c].order) + ";";
                }
                cases.push_back({A, m, s0, phi, L});
            }
        }
    }
    const double dt = seconds_since(t0);
    Outcome o;
    o.pass = agree == total && dt <= 600;
    o.summary = std::to_string(agree) + "/" + std::to_string(total) + " orders agree, " + fmt(dt, 3) +
                " s (limit 600)" + mismatches;
    return o;
}

Outcome support_rank() {
    if (pole_cases().empty()) pole_order_matrix();
    int probed = 0, passed = 0, coefficients = 0;
    std::string fails;
    SupportProbeOptions opt;
    opt.laurent = laurent_options();
    opt.probe_samples = 1 << 18;
    for (const auto& pc : pole_cases()) {
        bool any = false;
        for (const auto& L : pc.L) any = any || L.order >= 1;
        if (!any) continue;
        const auto reps = check_support_rank(pc.A, kCoeffs, pc.m, pc.s0, pc.phi, pc.L, laurent_budget(), opt);
        for (std::size_t c = 0; c < reps.size(); ++c) {
            const int order = pc.L[c].order;
            if (order < 1) continue;
            ++probed;
            coefficients += order;
            if (reps[c].pass)
                ++passed;
            else
                fails += " " + tag(pc.A) + " m=" + pc.m.str() + " s0=" + rational_to_string(pc.s0) + " c" +
                         std::to_string(c) + ": " + reps[c].failure + ";";
        }
    }
    Outcome o;
    o.pass = probed > 0 && passed == probed;
    o.summary = std::to_string(passed) + "/" + std::to_string(probed) + " poles (" + std::to_string(coefficients) +
                " coefficients A_-h) with on-stratum response > 10x off-stratum" + fails;
    return o;
}

// ------------------------------------------------------------------ 4

Outcome homogeneity() {
    const auto t0 = Clock::now();
    int total = 0, passed = 0, informative = 0, detected = 0;
    double worst_sigma = 0;
    long long max_n = 0;
    std::map<std::string, int> informative_by_family;
    std::string fails;
    for (const auto& A : desk_families()) {
        const auto phi = TestFunction::gaussian(probe_offset(A.n), 1.0);
        for (const char* ms : {"0,0", "1,0", "2,1"}) {
            const Partition m = Partition::parse(ms, 2);
            const auto space = build_Pm(A, m);
            for (double s : {0.4, 0.9}) {
                std::map<long long, std::vector<std::vector<ZetaValue>>> base;
                auto base_at = [&](long long n) -> const std::vector<std::vector<ZetaValue>>& {
                    auto it = base.find(n);
                    if (it != base.end()) return it->second;
                    Budget b;
                    b.samples = n;
                    b.seed = check_seed(4, "base/" + tag(A) + "/" + m.str() + "/" + fmt(s));
                    b.qmc = true;
                    return base[n] = vector_zeta_orbits(A, space, phi, s, b);
                };
                for (int w = 0; w < 20; ++w) {
                    const auto key = "word/" + tag(A) + "/" + m.str() + "/" + fmt(s) + "/" + std::to_string(w);
                    const auto g = random_group_element(A, check_seed(4, key), GroupStyle::Word, 4);
                    Budget b;
                    b.samples = 1 << 20;
                    b.seed = check_seed(4, "g/" + key);
                    CheckReport r;
                    for (;;) {
                        HomogeneityOptions opt;
                        opt.base = &base_at(b.samples);
                        r = check_homogeneity(A, -1, space, s, g, phi, b, opt);
                        if (r.sigma <= opt.sigma_cap || b.samples >= (1LL << 23)) break;
                        b.samples *= 4;
                    }
                    max_n = std::max(max_n, b.samples);
                    ++total;
                    worst_sigma = std::max(worst_sigma, r.sigma);
                    if (r.control->informative) {
                        ++informative;
                        ++informative_by_family[tag(A)];
                        if (r.control->detected) ++detected;
                    }
                    if (r.pass)
                        ++passed;
                    else if (fails.size() < 400)
                        fails += " " + key + ": dev " + fmt(r.max_relative_deviation) + " sigma " + fmt(r.sigma) +
                                 (r.failure.empty() ? "" : " (" + r.failure + ")") + ";";
                }
            }
        }
    }
    Outcome o;
    o.pass = passed == total && informative == detected && informative_by_family.size() == 3;
    o.summary = std::to_string(passed) + "/" + std::to_string(total) + " pass (dev <= 3 sigma, sigma <= 1e-2), " +
                "control detected in " + std::to_string(detected) + "/" + std::to_string(informative) +
                " informative words, max sigma " + fmt(worst_sigma) + ", max samples " + std::to_string(max_n) +
                ", " + fmt(seconds_since(t0), 3) + " s" + fails;
    return o;
}

// ------------------------------------------------------------------ 5

Outcome dimension() {
    int ok = 0, total = 0;
    std::string detail;
    for (const auto& A : {make_algebra(Family::SymR, 2), make_algebra(Family::Spin, 2, 5)}) {
        for (double s : {0.7, 1.3}) {
            BatteryOptions bo;
            bo.size = A.r + 3;
            bo.seed = 5;
            Budget b;
            b.samples = 1 << 18;
            b.seed = 55;
            const auto r = dimension_probe(A, Partition::zero(A.r), s, make_battery(A, bo), b);
            ++total;
            const bool good = r.pass && r.details.at("rank") == "3" && r.details.at("rank_with_duplicates") == "3";
            ok += good;
            detail += " " + tag(A) + " s=" + fmt(s) + ": rank " + r.details.at("rank") + ", with duplicates " +
                      r.details.at("rank_with_duplicates") + ", control " + r.details.at("control_rank") + ";";
        }
    }
    return {ok == total, std::to_string(ok) + "/" + std::to_string(total) + " probes at rank r+1 = 3;" + detail};
}

// ------------------------------------------------------------------ 6

Outcome chart_recursion() {
    auto A = make_algebra(Family::SymR, 2);
    const auto f = default_chart_test_function(A);
    int ok = 0, total = 0;
    double worst = 0;
    std::string fails;
    for (double s : {1.0, 2.0})
        for (int j = 0; j <= 2; ++j) {
            Budget b;
            b.samples = 1 << 19;
            b.seed = 60 + j + 3 * static_cast<int>(s);
            const auto r = check_chart_recursion(A, j, Partition::zero(2), s, f, b);
            ++total;
            const bool good = r.pass && r.control && r.control->detected;
            ok += good;
            worst = std::max(worst, r.max_relative_deviation / std::max(r.sigma, 1e-300));
            if (!good) fails += " j=" + std::to_string(j) + " s=" + fmt(s) + ";";
        }
    return {ok == total, std::to_string(ok) + "/" + std::to_string(total) +
                             " (j, s) within 3 sigma with the exponent control detected, worst " + fmt(worst, 3) +
                             " sigma" + fails};
}

// ------------------------------------------------------------------ 7

Outcome functional_equation() {
    auto S = make_algebra(Family::SymR, 2);
    BatteryOptions bo;
    bo.centered = true;
    bo.size = 12;
    bo.max_degree = 2;
    bo.seed = 1;
    Budget b;
    b.samples = 1 << 22;
    b.seed = 3;
    FunctionalEquationFit fit;
    const auto r = check_functional_equation_span(S, Partition::zero(2), 0.4, make_battery(S, bo), b, {}, &fit);
    double res = 0, split = 0;
    for (double v : fit.residual) res = std::max(res, v);
    for (double v : fit.split_deviation) split = std::max(split, v);

    auto R = make_algebra(Family::Real, 1);
    BatteryOptions b1;
    b1.centered = true;
    b1.size = 6;
    double err1 = 0;
    bool pass1 = true;
    for (double s : {0.4, 0.7}) {
        FunctionalEquationFit f1;
        const auto r1 = check_functional_equation_span(R, Partition::zero(1), s, make_battery(R, b1), Budget{}, {}, &f1);
        pass1 = pass1 && r1.pass;
        // x_+^s: Gamma(s) e^{-i pi s / 2} from the positive half-line, Gamma(s) e^{i pi s / 2} from the negative
        const cplx ph = std::exp(cplx(0, M_PI * s / 2));
        const double g = std::tgamma(s);
        const cplx want[2][2] = {{g / ph, g * ph}, {g * ph, g / ph}};
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k) err1 = std::max(err1, std::abs(f1.v[j][k] - want[j][k]) / std::abs(want[j][k]));
    }
    Outcome o;
    o.pass = r.pass && res <= 0.01 && split <= 0.01 && pass1 && err1 <= 1e-6;
    o.summary = "Sym(2,R) s=0.4: residual " + fmt(res) + ", split-half " + fmt(split) + " (limits 0.01); rank one: " +
                "classical constants to " + fmt(err1, 3) + " relative (limit 1e-6)";
    return o;
}

// ------------------------------------------------------------------ 8

Outcome equivariance() {
    std::vector<Algebra> as{make_algebra(Family::Real, 1), make_algebra(Family::SymR, 2),
                            make_algebra(Family::HermC, 2)};
    if (hermh_enabled()) as.push_back(make_algebra(Family::HermH, 2));
    for (int n : {3, 4, 5, 6}) as.push_back(make_algebra(Family::Spin, 2, n));
    int ok = 0, total = 0;
    double worst = 0;
    std::string fails;
    for (const auto& A : as)
        for (const auto& m : partitions_up_to(A.r, 3)) {
            const auto key = "eq/" + tag(A) + "/" + m.str();
            const auto seed = check_seed(8, key);
            std::mt19937_64 rng(seed);
            std::normal_distribution<double> nd;
            std::vector<GroupElement> gs;
            std::vector<Vec> xs;
            for (int i = 0; i < 50; ++i) {
                gs.push_back(random_group_element(A, chunk_seed(seed, i), GroupStyle::Word, 4));
                Vec x(A.n);
                for (int k = 0; k < A.n; ++k) x[k] = nd(rng);
                xs.push_back(x);
            }
            const auto r = check_equivariance_hm(A, build_Pm(A, m), gs, xs, 1e-6);
            ++total;
            ok += r.pass;
            worst = std::max(worst, r.max_relative_deviation);
            if (!r.pass) fails += " " + key + ";";
        }
    return {ok == total, std::to_string(ok) + "/" + std::to_string(total) +
                             " (family, m) grids of 50 pairs, max deviation " + fmt(worst, 3) + " (limit 1e-6)" +
                             fails};
}

// ------------------------------------------------------------------ 9

Outcome exact_identities() {
    auto S = make_algebra(Family::SymR, 2);
    int ok = 0, total = 0, identities = 0;
    for (const auto& m : partitions_up_to(2, 2)) {
        const auto r = check_exact_identities(S, m, 20, 9);
        ++total;
        ok += r.pass && r.details.at("mismatches") == "0";
        identities += std::stoi(r.details.at("identities_checked"));
    }
    return {ok == total, std::to_string(ok) + "/" + std::to_string(total) + " partitions, " +
                             std::to_string(identities) + " rational identities on 20 points each, 0 mismatches " +
                             "required"};
}

// ------------------------------------------------------------------ 10

std::string read_file(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

Outcome determinism() {
    // every default check on every family of rank <= 2, at a reduced sample count
    RunConfig cfg;
    cfg.family = "all";
    cfg.samples = 1 << 13;
    cfg.words = 1;
    cfg.max_samples = cfg.samples;
    cfg.seed = 10;
    const auto dir = std::filesystem::temp_directory_path() / "jz_acceptance_determinism";
    std::filesystem::create_directories(dir);
    std::size_t checks = 0;
    for (int run = 0; run < 2; ++run) {
        const auto reports = run_suite("all", cfg);
        checks = reports.size();
        json res = json::array();
        std::string csv = check_csv_header() + "\n";
        for (const auto& r : reports) {
            res.push_back(to_json(r));
            csv += check_csv_row(r) + "\n";
        }
        std::ofstream(dir / ("report" + std::to_string(run) + ".json"), std::ios::binary)
            << dump_document(make_document("verify/all", config_json(cfg), res));
        std::ofstream(dir / ("summary" + std::to_string(run) + ".csv"), std::ios::binary) << csv;
    }
    const auto j0 = read_file(dir / "report0.json"), j1 = read_file(dir / "report1.json");
    const auto c0 = read_file(dir / "summary0.csv"), c1 = read_file(dir / "summary1.csv");
    std::filesystem::remove_all(dir);
    return {!j0.empty() && j0 == j1 && c0 == c1,
            std::to_string(checks) + " checks, JSON " + std::to_string(j0.size()) + " bytes " +
                (j0 == j1 ? "identical" : "DIFFERENT") + ", summary CSV " + (c0 == c1 ? "identical" : "DIFFERENT")};
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"Gamma_Omega Monte Carlo vs product formula", gamma_consistency},
        {"pole-order matrix", pole_order_matrix},
        {"support-rank probing", support_rank},
        {"homogeneity", homogeneity},
        {"dimension probe", dimension},
        {"chart recursion", chart_recursion},
        {"functional-equation span", functional_equation},
        {"equivariance of h_m", equivariance},
        {"exact-arithmetic identities", exact_identities},
        {"determinism", determinism},
    };
    std::set<int> only;
    for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        if (!only.empty() && !only.count(id)) continue;
        const auto t0 = Clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += !o.pass;
        std::cout << "criterion " << id << " [" << criteria[i].first << "]: " << (o.pass ? "PASS" : "FAIL") << " - "
                  << o.summary << " (" << fmt(seconds_since(t0), 3) << " s)" << std::endl;
    }
    return failed == 0 ? 0 : 1;
}
