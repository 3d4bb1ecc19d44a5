#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "jz/decompositions.hpp"
#include "jz/gamma.hpp"
#include "jz/report.hpp"
#include "jz/suite.hpp"
#include "jz/zeta.hpp"

using namespace jz;

namespace {

enum Exit { kPass = 0, kCheckFailure = 1, kUsage = 2, kBudget = 3 };

struct Options {
    RunConfig cfg;
    std::string s_text;
    std::string out;
    std::string summary;
    std::string format = "json";
    std::string element;
    std::string center;
    double width = 1.0;
    std::string lo = "-6", hi = "0";
    bool rqmc = false;
    bool measure = false;
    std::string suite;
};

// Flat table: JSON rows for documents, the same rows flattened for CSV.
struct Table {
    std::vector<std::string> columns;
    json rows = json::array();
};

std::string cell(const json& v) {
    if (v.is_string()) return csv_escape(v.get<std::string>());
    if (v.is_null()) return "";
    return csv_escape(v.dump());
}

void write_output(const Options& o, const std::string& text) {
    if (o.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(o.out, std::ios::binary);
    if (!f) throw ParameterError("cannot open output file '" + o.out + "'");
    f << text;
}

json config_document(const Options& o) {
    json c = config_json(o.cfg);
    if (!o.element.empty()) c["x"] = o.element;
    if (!o.center.empty()) c["center"] = o.center;
    c["width"] = o.width;
    c["window"] = json{o.lo, o.hi};
    c["rqmc"] = o.rqmc;
    return c;
}

void emit(const Options& o, const std::string& kind, const Table& t) {
    if (o.format == "csv") {
        std::string text;
        for (std::size_t k = 0; k < t.columns.size(); ++k) text += (k ? "," : "") + t.columns[k];
        text += "\n";
        for (const auto& row : t.rows) {
            for (std::size_t k = 0; k < t.columns.size(); ++k) {
                const auto& key = t.columns[k];
                text += (k ? "," : "") + (row.contains(key) ? cell(row[key]) : std::string());
            }
            text += "\n";
        }
        write_output(o, text);
    } else {
        write_output(o, dump_document(make_document(kind, config_document(o), t.rows)));
    }
}

Algebra single_algebra(const Options& o) {
    auto as = config_algebras(o.cfg);
    if (as.size() != 1) throw ParameterError("this command needs a single algebra, not --family all");
    return as[0];
}

Partition partition_of(const Options& o, const Algebra& A) {
    return o.cfg.m.empty() ? Partition::zero(A.r) : Partition::parse(o.cfg.m, A.r);
}

std::vector<cplx> coefficients_of(const Options& o, const Algebra& A) {
    if (!o.cfg.c.empty()) return parse_coefficients(o.cfg.c, A.r + 1);
    std::vector<cplx> c(A.r + 1, 0.0);
    c[0] = 1.0;
    return c;
}

Budget budget_of(const Options& o, long long dflt) {
    Budget b;
    b.samples = o.cfg.samples > 0 ? o.cfg.samples : dflt;
    b.seed = o.cfg.seed;
    b.threads = o.cfg.threads;
    b.qmc = o.rqmc;
    return b;
}

TestFunction test_function_of(const Options& o, const Algebra& A) {
    Vec c = o.center.empty() ? Vec(Vec::Zero(A.n)) : parse_element(A, o.center);
    return TestFunction::gaussian(c, o.width);
}

int cmd_info(const Options& o) {
    Table t{{"family", "rank", "d", "n", "n_over_r", "hermh_enabled", "method"}};
    for (const auto& A : config_algebras(o.cfg))
        t.rows.push_back(json{{"family", family_name(A.family)},
                              {"rank", A.r},
                              {"d", A.d},
                              {"n", A.n},
                              {"n_over_r", static_cast<double>(A.n) / A.r},
                              {"hermh_enabled", hermh_enabled()},
                              {"method", "structure_constants"}});
    emit(o, "info", t);
    return kPass;
}

int cmd_spectral(const Options& o) {
    const Algebra A = single_algebra(o);
    const Vec x = parse_element(A, o.element);
    const auto sd = spectral(A, x);
    Table t{{"i", "eigenvalue", "idempotent", "residual", "method"}};
    for (std::size_t i = 0; i < sd.eigenvalues.size(); ++i)
        t.rows.push_back(json{{"i", i + 1},
                              {"eigenvalue", sd.eigenvalues[i]},
                              {"idempotent", to_json(sd.frame.idempotents[i])},
                              {"residual", sd.residual},
                              {"method", "spectral_decomposition"}});
    emit(o, "spectral", t);
    return kPass;
}

int cmd_orbit(const Options& o) {
    const Algebra A = single_algebra(o);
    const Vec x = parse_element(A, o.element);
    const auto rs = rank_signature(A, x);
    Table t{{"x", "rank", "p", "q", "orbit", "boundary_ambiguous", "method"}};
    t.rows.push_back(json{{"x", format_element(A, x)},
                          {"rank", rs.rank},
                          {"p", rs.label.p},
                          {"q", rs.label.q},
                          {"orbit", orbit_name(A, rs.label)},
                          {"boundary_ambiguous", rs.boundary_ambiguous},
                          {"method", "spectral_signature"}});
    emit(o, "orbit", t);
    return kPass;
}

int cmd_gamma(const Options& o) {
    const Algebra A = single_algebra(o);
    const Partition m = partition_of(o, A);
    Table t{{"s", "m", "re", "im", "abs_error_estimate", "method", "samples"}};
    for (double s : o.cfg.s) {
        const cplx g = gamma_omega(cplx(s, 0), m, A);
        t.rows.push_back(json{{"s", s}, {"m", m.str()}, {"re", g.real()}, {"im", g.imag()},
                              {"abs_error_estimate", 0.0}, {"method", "product_formula"}, {"samples", 0}});
        if (o.cfg.samples > 0 && m.is_zero()) {
            const auto v = gamma_omega_mc(A, s, budget_of(o, o.cfg.samples));
            t.rows.push_back(json{{"s", s}, {"m", m.str()}, {"re", v.value.real()}, {"im", v.value.imag()},
                                  {"abs_error_estimate", v.abs_error_estimate}, {"method", v.engine},
                                  {"samples", v.samples}});
        }
    }
    emit(o, "gamma", t);
    return kPass;
}

int cmd_criticals(const Options& o) {
    const Algebra A = single_algebra(o);
    const Partition m = partition_of(o, A);
    Table t{{"s0", "s0_value", "multiplicity", "method"}};
    for (const auto& cp : critical_set(m, A, rational_from_string(o.lo), rational_from_string(o.hi)))
        t.rows.push_back(json{{"s0", rational_to_string(cp.s0)},
                              {"s0_value", to_double(cp.s0)},
                              {"multiplicity", cp.multiplicity},
                              {"method", "exact_gamma_factors"}});
    emit(o, "criticals", t);
    return kPass;
}

int cmd_poleatlas(const Options& o) {
    const Algebra A = single_algebra(o);
    const Partition m = partition_of(o, A);
    const auto c = coefficients_of(o, A);
    Table t{{"s0", "s0_value", "o_mult", "odd_d", "degP", "degP0", "degP1", "eps", "predicted_order",
             "support_ranks", "status", "method"}};
    if (o.measure)
        t.columns.insert(t.columns.end(), {"measured_order", "measured_engine", "measured_samples"});
    const auto fp = TestFunction::gaussian(probe_offset(A.n), 1.0);
    for (const auto& cp : pole_set(m.parts, A, rational_from_string(o.lo), rational_from_string(o.hi))) {
        json row{{"s0", rational_to_string(cp.s0)}, {"s0_value", to_double(cp.s0)}};
        try {
            const auto p = pole_order_predict(c, m.parts, cp.s0, A);
            std::string ranks;
            for (const auto& [h, q] : p.support_rank_by_h)
                ranks += (ranks.empty() ? "" : ";") + ("h" + std::to_string(h) + "=" + std::to_string(q));
            row.update(json{{"o_mult", p.o_mult}, {"odd_d", p.odd_d}, {"degP", p.degP}, {"degP0", p.degP0},
                            {"degP1", p.degP1}, {"eps", p.eps}, {"predicted_order", p.predicted_order},
                            {"support_ranks", ranks}, {"status", "ok"}, {"method", "exact_predictor"}});
        } catch (const UnsupportedPointError& e) {
            row.update(json{{"status", std::string("unsupported: ") + e.what()}, {"method", "exact_predictor"}});
        }
        if (o.measure) {
            LaurentOptions lo;
            lo.n_points = o.cfg.circle_points;
            Budget b = budget_of(o, 1LL << 20);
            b.qmc = true;
            const auto L = laurent_multi(A, {c}, Weight{m.parts, false}, fp, to_double(cp.s0), b, lo)[0];
            row.update(json{{"measured_order", L.order}, {"measured_engine", L.engine},
                            {"measured_samples", L.samples}});
        }
        t.rows.push_back(row);
    }
    emit(o, "poleatlas", t);
    return kPass;
}

int cmd_zeta(const Options& o) {
    const Algebra A = single_algebra(o);
    const Partition m = partition_of(o, A);
    const auto f = test_function_of(o, A);
    Table t{{"j", "s", "m", "re", "im", "abs_error_estimate", "method", "engine", "bernstein_shift", "samples"}};
    for (double s : o.cfg.s) {
        const auto vals = zeta_eval_orbits(A, m, f, cplx(s, 0), budget_of(o, 1LL << 20));
        for (int j = 0; j <= A.r; ++j) {
            if (o.cfg.j >= 0 && j != o.cfg.j) continue;
            json row{{"j", j}, {"s", s}, {"m", m.str()}};
            row.update(to_json(vals[j]));
            t.rows.push_back(row);
        }
    }
    emit(o, "zeta", t);
    return kPass;
}

int cmd_laurent(const Options& o) {
    const Algebra A = single_algebra(o);
    const Partition m = partition_of(o, A);
    const auto c = coefficients_of(o, A);
    const auto f = test_function_of(o, A);
    LaurentOptions lo;
    lo.n_points = o.cfg.circle_points;
    Table t{{"s0", "h", "re", "im", "sigma", "noise_floor", "order", "predicted_order", "method", "engine",
             "samples"}};
    for (double s0 : o.cfg.s) {
        const auto L = laurent(A, c, m, f, cplx(s0, 0), budget_of(o, 1LL << 20), lo);
        json predicted = nullptr;
        Rational q;
        if (snap_half_integer(s0, q)) {
            try {
                predicted = pole_order_predict(c, m.parts, q, A).predicted_order;
            } catch (const UnsupportedPointError&) {
            }
        }
        for (const auto& [h, a] : L.coefficients)
            t.rows.push_back(json{{"s0", s0}, {"h", h}, {"re", a.real()}, {"im", a.imag()},
                                  {"sigma", L.sigma.at(h)}, {"noise_floor", L.noise_floor.at(h)},
                                  {"order", L.order}, {"predicted_order", predicted}, {"method", "contour_dft"},
                                  {"engine", L.engine}, {"samples", L.samples}});
    }
    emit(o, "laurent", t);
    return kPass;
}

std::string summary_path(const Options& o) {
    if (!o.summary.empty()) return o.summary;
    if (!o.out.empty() && o.format == "json") return o.out + ".summary.csv";
    return "";
}

int cmd_verify(const Options& o) {
    const auto reports = run_suite(o.suite, o.cfg);
    const std::string sp = summary_path(o);
    if (o.format == "csv") {
        std::string text = check_csv_header() + "\n";
        for (const auto& r : reports) text += check_csv_row(r) + "\n";
        write_output(o, text);
    } else {
        json results = json::array();
        for (const auto& r : reports) results.push_back(to_json(r));
        write_output(o, dump_document(make_document("verify/" + o.suite, config_document(o), results)));
    }
    if (!sp.empty()) {
        const bool fresh = !std::ifstream(sp).good();
        std::ofstream f(sp, std::ios::app | std::ios::binary);
        if (!f) throw ParameterError("cannot open summary file '" + sp + "'");
        if (fresh) f << check_csv_header() << "\n";
        for (const auto& r : reports) f << check_csv_row(r) << "\n";
    }
    int failed = 0;
    const CheckReport* first = nullptr;
    for (const auto& r : reports)
        if (!r.pass) {
            ++failed;
            if (!first) first = &r;
        }
    std::cerr << o.suite << ": " << reports.size() << " checks, " << failed << " failed\n";
    if (!first) return kPass;
    std::cerr << "first failing check: " << first->name << " [" << first->details.at("check_key") << "]"
              << (first->failure.empty() ? "" : ": " + first->failure) << "\n";
    return is_budget_failure(*first) ? kBudget : kCheckFailure;
}

void add_common(CLI::App& app, Options& o) {
    app.add_option("--family", o.cfg.family, "symr, hermc, hermh, spin, real or all")->capture_default_str();
    app.add_option("--rank", o.cfg.rank, "rank r")->capture_default_str();
    app.add_option("--dim", o.cfg.dim, "dimension n (spin factors)");
    app.add_option("--m", o.cfg.m, "partition, e.g. 2,1");
    app.add_option("--s", o.s_text, "comma-separated real s values");
    app.add_option("--j", o.cfg.j, "orbit index (-1: all)")->capture_default_str();
    app.add_option("--c", o.cfg.c, "orbit coefficients c_0..c_r, e.g. 1,0,1 or 1,0.5i,0");
    app.add_option("--seed", o.cfg.seed, "run seed")->capture_default_str();
    app.add_option("--samples", o.cfg.samples, "Monte Carlo samples (0: per-command default)");
    app.add_option("--circle-points", o.cfg.circle_points, "points on the Laurent contour")->capture_default_str();
    app.add_option("--tol", o.cfg.tol, "tolerance override (0: per-check default)");
    app.add_option("--out", o.out, "output file (default stdout)");
    app.add_option("--summary", o.summary, "summary CSV to append to (verify)");
    app.add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
    app.add_option("--threads", o.cfg.threads, "worker cap (0: hardware concurrency)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Jordan algebra zeta distributions: decompositions, poles and verification suites"};
    app.require_subcommand(1);
    Options o;

    auto* info = app.add_subcommand("info", "algebra descriptor (r, d, n)");
    auto* spec = app.add_subcommand("spectral", "eigenvalues and Jordan frame of an element");
    auto* orbit = app.add_subcommand("orbit", "orbit label Omega_q / S_{p,q} of an element");
    auto* gamma = app.add_subcommand("gamma", "Gamma_Omega(s + m) by the product formula (and Monte Carlo)");
    auto* crit = app.add_subcommand("criticals", "critical points of Gamma_Omega(s + n/r - m*) in a window");
    auto* atlas = app.add_subcommand("poleatlas", "predicted pole orders and support ranks in a window");
    auto* zeta = app.add_subcommand("zeta", "Phi_j^m(f, s) for a Gaussian test function");
    auto* laur = app.add_subcommand("laurent", "Laurent coefficients of sum_j c_j Phi_j^m at s0");
    auto* verify = app.add_subcommand("verify", "verification suites");
    for (auto* sc : {info, spec, orbit, gamma, crit, atlas, zeta, laur, verify}) add_common(*sc, o);
    for (auto* sc : {spec, orbit}) sc->add_option("--x,x", o.element, "element: JSON coordinates or literal")->required();
    for (auto* sc : {crit, atlas}) {
        sc->add_option("--lo", o.lo, "window lower end (rational)")->capture_default_str();
        sc->add_option("--hi", o.hi, "window upper end (rational)")->capture_default_str();
    }
    atlas->add_flag("--measure", o.measure, "also extract the order from Laurent data");
    for (auto* sc : {zeta, laur}) {
        sc->add_option("--center", o.center, "test-function center (element literal, default 0)");
        sc->add_option("--width", o.width, "test-function width")->capture_default_str();
    }
    for (auto* sc : {atlas, zeta, laur}) sc->add_flag("--rqmc", o.rqmc, "randomized quasi-Monte Carlo sampler");
    verify->add_option("suite", o.suite, "homogeneity, chart, funceq, dimension, equivariance or all")
        ->required()
        ->check(CLI::IsMember(suite_names()));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kPass : kUsage;
    }

    try {
        if (!o.s_text.empty()) o.cfg.s = parse_real_list(o.s_text);
        validate(o.cfg);
        for (auto* sc : {gamma, zeta, laur})
            if (*sc && o.cfg.s.empty()) throw ParameterError("--s is required");
        if (*info) return cmd_info(o);
        if (*spec) return cmd_spectral(o);
        if (*orbit) return cmd_orbit(o);
        if (*gamma) return cmd_gamma(o);
        if (*crit) return cmd_criticals(o);
        if (*atlas) return cmd_poleatlas(o);
        if (*zeta) return cmd_zeta(o);
        if (*laur) return cmd_laurent(o);
        return cmd_verify(o);
    } catch (const BudgetError& e) {
        std::cerr << "budget error: " << e.what() << "\n";
        return kBudget;
    } catch (const ConditioningError& e) {
        std::cerr << "conditioning error: " << e.what() << "\n";
        return kBudget;
    } catch (const IndeterminateOrderError& e) {
        std::cerr << "indeterminate order: " << e.what() << "\n";
        return kBudget;
    } catch (const SolverError& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return kBudget;
    } catch (const InvariantViolation& e) {
        std::cerr << "invariant violation: " << e.what() << "\n";
        return kBudget;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
}
