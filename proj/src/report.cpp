#include "jz/report.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace jz {

namespace {

std::string num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string csv_num(double x) {
    if (std::isnan(x)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

[[noreturn]] void parse_fail(const std::string& what, std::size_t pos) {
    throw ParameterError("element parse error at position " + std::to_string(pos) + ": " + what);
}

std::size_t skip_ws(const std::string& t, std::size_t i) {
    while (i < t.size() && std::isspace(static_cast<unsigned char>(t[i]))) ++i;
    return i;
}

double read_number(const std::string& t, std::size_t& i) {
    i = skip_ws(t, i);
    const char* begin = t.c_str() + i;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) parse_fail("expected a number", i);
    i += static_cast<std::size_t>(end - begin);
    return v;
}

void expect(const std::string& t, std::size_t& i, char c) {
    i = skip_ws(t, i);
    if (i >= t.size() || t[i] != c) parse_fail(std::string("expected '") + c + "'", i);
    ++i;
}

Vec parse_spin_literal(const Algebra& A, const std::string& t) {
    if (A.family != Family::Spin) parse_fail("'(lambda|u)' literals are only valid for spin factors", 0);
    std::size_t i = 0;
    expect(t, i, '(');
    const double lambda = read_number(t, i);
    expect(t, i, '|');
    Vec u(A.n - 1);
    for (int k = 0; k < A.n - 1; ++k) {
        if (k > 0) expect(t, i, ',');
        u[k] = read_number(t, i);
    }
    expect(t, i, ')');
    i = skip_ws(t, i);
    if (i != t.size()) parse_fail("trailing characters", i);
    return from_spin_model(A, lambda, u);
}

// Components of one matrix entry in the units 1, i, j, k (first d of them).
std::vector<double> entry_components(const json& e, int d, int row, int col) {
    const int width = std::max(d, 1);
    std::vector<double> c(std::max(width, 4), 0.0);
    auto where = [&] { return " in row " + std::to_string(row) + ", column " + std::to_string(col); };
    if (e.is_number()) {
        c[0] = e.get<double>();
    } else if (e.is_array()) {
        if (static_cast<int>(e.size()) > width || e.empty())
            throw ParameterError("entry has " + std::to_string(e.size()) + " components, at most " +
                                 std::to_string(width) + " allowed" + where());
        for (std::size_t t = 0; t < e.size(); ++t) {
            if (!e[t].is_number()) throw ParameterError("non-numeric entry component" + where());
            c[t] = e[t].get<double>();
        }
    } else {
        throw ParameterError("entry must be a number or an array of components" + where());
    }
    return c;
}

Vec parse_matrix_literal(const Algebra& A, const json& rows) {
    if (A.family == Family::Spin) throw ParameterError("spin factors take coordinates or '(lambda|u_1,...)'");
    const int r = A.r, d = A.d;
    if (static_cast<int>(rows.size()) != r)
        throw ParameterError("matrix literal has " + std::to_string(rows.size()) + " rows, expected " +
                             std::to_string(r));
    for (int i = 0; i < r; ++i)
        if (!rows[i].is_array() || static_cast<int>(rows[i].size()) != r)
            throw ParameterError("row " + std::to_string(i) + " must have " + std::to_string(r) + " entries");
    double scale = 0;
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j)
            for (double v : entry_components(rows[i][j], d, i, j)) scale = std::max(scale, std::abs(v));
    const double tol = 1e-12 * std::max(scale, 1.0);
    Vec x = Vec::Zero(A.n);
    for (int i = 0; i < r; ++i) {
        auto c = entry_components(rows[i][i], d, i, i);
        for (std::size_t t = 1; t < c.size(); ++t)
            if (std::abs(c[t]) > tol) throw ParameterError("diagonal entry " + std::to_string(i) + " is not real");
        x[i] = c[0];
        for (int j = i + 1; j < r; ++j) {
            auto a = entry_components(rows[i][j], d, i, j);
            auto b = entry_components(rows[j][i], d, j, i);
            for (int t = 0; t < 4; ++t) {
                const double conj = t == 0 ? b[t] : -b[t];
                if (std::abs(a[t] - conj) > tol)
                    throw ParameterError("matrix literal is not Hermitian at (" + std::to_string(j) + ", " +
                                         std::to_string(i) + ")");
            }
            const int off = A.block_offset(i, j);
            for (int t = 0; t < d; ++t) x[off + t] = std::sqrt(2.0) * a[t];
        }
    }
    return x;
}

}  // namespace

Vec parse_element(const Algebra& A, const std::string& text) {
    const std::size_t first = skip_ws(text, 0);
    if (first < text.size() && text[first] == '(') return parse_spin_literal(A, text.substr(first));
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        parse_fail(e.what(), e.byte);
    }
    if (j.is_number()) {
        if (A.n != 1) throw ParameterError("a bare number is only an element of the real line");
        return Vec::Constant(1, j.get<double>());
    }
    if (!j.is_array() || j.empty()) throw ParameterError("element must be a non-empty JSON array or a literal");
    if (j[0].is_array()) return parse_matrix_literal(A, j);
    if (static_cast<int>(j.size()) != A.n)
        throw ParameterError("expected " + std::to_string(A.n) + " coordinates, got " + std::to_string(j.size()));
    Vec x(A.n);
    for (int i = 0; i < A.n; ++i) {
        if (!j[i].is_number()) throw ParameterError("coordinate " + std::to_string(i) + " is not a number");
        x[i] = j[i].get<double>();
    }
    return x;
}

std::string format_element(const Algebra& A, const Vec& x) {
    A.check(x);
    std::ostringstream os;
    if (A.family == Family::Spin) {
        double lambda;
        Vec u;
        to_spin_model(A, x, lambda, u);
        os << '(' << num(lambda) << '|';
        for (int k = 0; k < u.size(); ++k) os << (k ? "," : "") << num(u[k]);
        os << ')';
        return os.str();
    }
    const int r = A.r, d = A.d;
    auto entry = [&](int i, int j) {
        if (i == j) return num(x[i]);
        const int off = A.block_offset(std::min(i, j), std::max(i, j));
        const double sign = i < j ? 1.0 : -1.0;
        if (d == 1) return num(x[off] / std::sqrt(2.0));
        std::string s = "[";
        for (int t = 0; t < d; ++t) {
            const double v = (t == 0 ? 1.0 : sign) * x[off + t] / std::sqrt(2.0);
            s += (t ? "," : "") + num(v == 0.0 ? 0.0 : v);
        }
        return s + "]";
    };
    os << '[';
    for (int i = 0; i < r; ++i) {
        os << (i ? "," : "") << '[';
        for (int j = 0; j < r; ++j) os << (j ? "," : "") << entry(i, j);
        os << ']';
    }
    os << ']';
    return os.str();
}

json to_json(const cplx& z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

json to_json(const Vec& v) {
    json a = json::array();
    for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

json to_json(const ZetaValue& v) {
    return json{{"re", v.value.real()},
                {"im", v.value.imag()},
                {"abs_error_estimate", v.abs_error_estimate},
                {"method", zeta_method_name(v.method)},
                {"engine", v.engine},
                {"bernstein_shift", v.k},
                {"samples", v.samples}};
}

json to_json(const LaurentExpansion& L) {
    json coeffs = json::array();
    for (const auto& [h, a] : L.coefficients) {
        json c{{"h", h}, {"re", a.real()}, {"im", a.imag()}};
        auto s = L.sigma.find(h);
        c["sigma"] = s == L.sigma.end() ? 0.0 : s->second;
        auto f = L.noise_floor.find(h);
        c["noise_floor"] = f == L.noise_floor.end() ? 0.0 : f->second;
        coeffs.push_back(c);
    }
    return json{{"s0", to_json(L.s0)},       {"order", L.order},   {"method", "contour_dft"},
                {"engine", L.engine},        {"bernstein_shift", L.k}, {"samples", L.samples},
                {"radius", L.radius},        {"circle_points", L.n_points}, {"coefficients", coeffs}};
}

json to_json(const PoleReport& p) {
    json ranks = json::object();
    for (const auto& [h, q] : p.support_rank_by_h) ranks[std::to_string(h)] = q;
    return json{{"s0", p.s0.str()},
                {"s0_value", static_cast<double>(p.s0)},
                {"o_mult", p.o_mult},
                {"odd_d", p.odd_d},
                {"degP", p.degP},
                {"degP0", p.degP0},
                {"degP1", p.degP1},
                {"eps", p.eps},
                {"predicted_order", p.predicted_order},
                {"support_rank_by_h", ranks},
                {"method", "exact_predictor"}};
}

json to_json(const CheckReport& r) {
    json details = json::object();
    for (const auto& [k, v] : r.details) details[k] = v;
    json out{{"name", r.name},
             {"pass", r.pass},
             {"max_relative_deviation", r.max_relative_deviation},
             {"tolerance", r.tolerance},
             {"sigma", r.sigma},
             {"samples", r.samples},
             {"method", r.method},
             {"failure", r.failure},
             {"details", details}};
    if (r.control) {
        const auto& c = *r.control;
        out["control"] = json{{"perturbation", c.perturbation}, {"deviation", c.deviation},
                              {"sigma", c.sigma},               {"threshold", c.threshold},
                              {"informative", c.informative},   {"detected", c.detected}};
    } else {
        out["control"] = nullptr;
    }
    return out;
}

json to_json(const SpectralData& sd) {
    json frame = json::array();
    for (const auto& e : sd.frame.idempotents) frame.push_back(to_json(e));
    return json{{"eigenvalues", sd.eigenvalues}, {"frame", frame}, {"residual", sd.residual},
                {"method", "spectral_decomposition"}};
}

json make_document(const std::string& kind, const json& config, const json& results) {
    return json{{"schema", kReportSchema}, {"kind", kind}, {"config", config}, {"results", results}};
}

std::string dump_document(const json& doc) { return doc.dump(2) + "\n"; }

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string check_csv_header() {
    return "schema,name,pass,max_relative_deviation,tolerance,sigma,samples,method,control,control_informative,"
           "control_detected,failure,details";
}

std::string check_csv_row(const CheckReport& r) {
    std::string details;
    for (const auto& [k, v] : r.details) details += (details.empty() ? "" : ";") + k + "=" + v;
    std::ostringstream os;
    os << kReportSchema << ',' << csv_escape(r.name) << ',' << (r.pass ? "true" : "false") << ','
       << csv_num(r.max_relative_deviation) << ',' << csv_num(r.tolerance) << ',' << csv_num(r.sigma) << ','
       << r.samples << ',' << csv_escape(r.method) << ',';
    if (r.control)
        os << csv_escape(r.control->perturbation) << ',' << (r.control->informative ? "true" : "false") << ','
           << (r.control->detected ? "true" : "false");
    else
        os << ",,";
    os << ',' << csv_escape(r.failure) << ',' << csv_escape(details);
    return os.str();
}

}  // namespace jz
