#include "jz/polyrep.hpp"

#include <cmath>
#include <map>
#include <random>
#include <sstream>

#include "jz/decompositions.hpp"

namespace jz {

Partition::Partition(std::vector<int> p) : parts(std::move(p)) {
    if (parts.empty()) throw ParameterError("partition must be non-empty");
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (parts[i] < 0) throw ParameterError("partition parts must be nonnegative");
        if (i && parts[i] > parts[i - 1]) throw ParameterError("partition must be weakly decreasing");
    }
}

Partition Partition::parse(const std::string& s, int r) {
    std::vector<int> v;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        std::size_t pos = 0;
        int val = 0;
        try {
            val = std::stoi(tok, &pos);
        } catch (const std::exception&) {
            throw ParameterError("partition: cannot parse '" + tok + "'");
        }
        while (pos < tok.size() && std::isspace(static_cast<unsigned char>(tok[pos]))) ++pos;
        if (pos != tok.size()) throw ParameterError("partition: cannot parse '" + tok + "'");
        v.push_back(val);
    }
    if (static_cast<int>(v.size()) > r) throw ParameterError("partition has more than r parts");
    v.resize(r, 0);
    return Partition(v);
}

int Partition::abs() const {
    int s = 0;
    for (int p : parts) s += p;
    return s;
}

Partition Partition::complement() const {
    std::vector<int> c(parts.size());
    const int r = this->r();
    for (int i = 0; i < r; ++i) c[i] = parts[0] - parts[r - 1 - i];
    return Partition(c);
}

std::vector<int> Partition::neg_star() const {
    std::vector<int> c(parts.size());
    const int r = this->r();
    for (int i = 0; i < r; ++i) c[i] = -parts[r - 1 - i];
    return c;
}

Partition Partition::prime() const {
    if (r() < 2) throw ParameterError("m' needs r >= 2");
    return Partition(std::vector<int>(parts.begin() + 1, parts.end()));
}

Partition Partition::one() const {
    std::vector<int> c(parts.size());
    for (int i = 0; i < r(); ++i) c[i] = parts[i] - parts.back();
    return Partition(c);
}

std::string Partition::str() const {
    std::string s;
    for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? "," : "") + std::to_string(parts[i]);
    return s;
}

namespace {

template <class S>
S power_function(const std::vector<S>& minors, const std::vector<int>& m) {
    const int r = static_cast<int>(m.size());
    S out(1);
    for (int k = 0; k < r; ++k) {
        int e = m[k] - (k + 1 < r ? m[k + 1] : 0);
        if (e == 0) continue;
        if (minors[k] == S(0)) {
            if (e < 0) throw SingularityError("power function: zero minor with negative exponent", 0.0);
            return S(0);
        }
        S b = e > 0 ? minors[k] : S(S(1) / minors[k]);
        for (int t = 0; t < std::abs(e); ++t) out *= b;
    }
    return out;
}

template <class S>
std::vector<S> eval_minors(const std::vector<Polynomial<S>>& polys, const VecT<S>& x) {
    std::vector<S> v;
    for (const auto& p : polys) v.push_back(p.evaluate(x));
    return v;
}

template <class S>
void check_m(const AlgebraT<S>& A, const std::vector<int>& m) {
    if (static_cast<int>(m.size()) != A.r) throw ParameterError("exponent tuple length must equal r");
}

double factorial_weight(const Exponent& e) {
    double w = 1;
    for (int v : e)
        for (int k = 2; k <= v; ++k) w *= k;
    return w;
}

Rational factorial_weight_q(const Exponent& e) {
    Rational w(1);
    for (int v : e)
        for (int k = 2; k <= v; ++k) w *= k;
    return w;
}

struct MonomialIndex {
    std::vector<Exponent> mons;
    std::map<Exponent, int> index;
    MonomialIndex(int n, int deg) : mons(homogeneous_exponents(n, deg)) {
        for (std::size_t i = 0; i < mons.size(); ++i) index[mons[i]] = static_cast<int>(i);
    }
    int size() const { return static_cast<int>(mons.size()); }
};

// Fischer-orthonormal basis of the span of polynomials produced by `draw(i)`.
template <class Draw>
std::vector<Poly> stabilized_span(const MonomialIndex& mi, Draw draw, const BuildOptions& opt,
                                  std::vector<int>& history, int& used) {
    const int M = mi.size();
    std::vector<double> sw(M);
    for (int a = 0; a < M; ++a) sw[a] = std::sqrt(factorial_weight(mi.mons[a]));
    std::vector<Vec> rows;
    auto add = [&](int count) {
        for (int t = 0; t < count; ++t) {
            Poly p = draw(used++);
            Vec w = Vec::Zero(M);
            for (const auto& [e, c] : p.terms()) w(mi.index.at(e)) = c * sw[mi.index.at(e)];
            double nrm = w.norm();
            if (nrm > 0) rows.push_back(w / nrm);
        }
    };
    auto rank_of = [&](Mat* V) {
        Mat R(rows.size(), M);
        for (std::size_t i = 0; i < rows.size(); ++i) R.row(i) = rows[i].transpose();
        Eigen::BDCSVD<Mat> svd(R, V ? Eigen::ComputeThinV : 0);
        const auto& s = svd.singularValues();
        int rank = 0;
        for (int i = 0; i < s.size(); ++i)
            if (s(i) > opt.tol * s(0)) ++rank;
        if (V) *V = svd.matrixV().leftCols(rank);
        return rank;
    };
    add(std::max(opt.sample_count, 1));
    int rank = rank_of(nullptr);
    history.push_back(rank);
    while (true) {
        if (used + 10 > opt.max_samples)
            throw BudgetError("build_Pm: rank not stabilized (last ranks " +
                                  std::to_string(history.size() > 1 ? history[history.size() - 2] : -1) +
                                  ", " + std::to_string(history.back()) + ")",
                              history.back(), history.size() > 1 ? history[history.size() - 2] : -1);
        add(10);
        int nr = rank_of(nullptr);
        history.push_back(nr);
        if (nr <= rank) break;
        rank = nr;
    }
    Mat V;
    rank_of(&V);
    std::vector<Poly> basis;
    for (int i = 0; i < V.cols(); ++i) {
        // fix the sign by the largest coefficient for reproducible bases
        int arg = 0;
        V.col(i).cwiseAbs().maxCoeff(&arg);
        double sgn = V(arg, i) < 0 ? -1.0 : 1.0;
        Poly p(static_cast<int>(mi.mons.empty() ? 0 : mi.mons[0].size()));
        for (int a = 0; a < M; ++a)
            if (V(a, i) != 0) p.add_term(mi.mons[a], sgn * V(a, i) / sw[a]);
        basis.push_back(p);
    }
    return basis;
}

Vec cone_point(const Algebra& A, std::mt19937_64& rng) {
    std::normal_distribution<double> N(0.0, 0.5);
    Vec x = 1.5 * A.e;
    for (int i = 0; i < A.n; ++i) x(i) += N(rng);
    return x;
}

// det(x)^{m_1} P(x^{-1})
double contragredient_value(const Algebra& A, int m1, const Poly& P, const Vec& x) {
    Vec xi = inverse(A, x);
    return std::pow(det(A, x), m1) * P.evaluate(xi);
}

// Fits det^{m_1} P_i(x^{-1}) in the complement basis for each P_i.
std::vector<Poly> fit_contragredient(const Algebra& A, const Partition& m, const std::vector<Poly>& comp,
                                     const std::vector<Poly>& Ps) {
    const int K = static_cast<int>(comp.size());
    const int npts = 3 * K + 20;
    std::mt19937_64 rng(0xc0117a);
    Mat E(npts, K), T(npts, Ps.size());
    std::vector<CompiledPoly<double>> cb(comp.begin(), comp.end());
    for (int i = 0; i < npts; ++i) {
        Vec x = cone_point(A, rng);
        for (int g = 0; g < K; ++g) E(i, g) = cb[g](x);
        for (std::size_t a = 0; a < Ps.size(); ++a) T(i, a) = contragredient_value(A, m[0], Ps[a], x);
    }
    Mat coef = E.colPivHouseholderQr().solve(T);
    double res = (E * coef - T).norm() / std::max(T.norm(), 1e-300);
    if (res > 1e-8) throw SolverError("contragredient: fit residual above tolerance", res);
    std::vector<Poly> out;
    for (std::size_t a = 0; a < Ps.size(); ++a) {
        Poly f(A.n);
        for (int g = 0; g < K; ++g) f += comp[g] * coef(g, a);
        out.push_back(f.pruned(1e-14));
    }
    return out;
}

// Rational group elements: P(a), tau(z) and tau(z)^T, in words of three letters.
MatT<Rational> rational_group_word(const ExactAlgebra& A, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> pick(0, 2), small(-3, 3), pos(1, 4);
    MatT<Rational> g = MatT<Rational>::Identity(A.n, A.n);
    for (int letter = 0; letter < 3; ++letter) {
        int kind = pick(rng);
        MatT<Rational> h;
        if (kind == 0 || A.r < 2) {
            VecT<Rational> a = VecT<Rational>::Zero(A.n);
            for (int i = 0; i < A.r; ++i) a(i) = Rational(pos(rng), 2);
            h = P_op(A, a);
        } else {
            std::uniform_int_distribution<int> J(0, A.r - 2);
            int j = J(rng);
            VecT<Rational> z = VecT<Rational>::Zero(A.n);
            for (int k = j + 1; k < A.r; ++k)
                for (int t = 0; t < A.d; ++t) z(A.block_offset(j, k) + t) = Rational(small(rng), 2);
            VecT<Rational> ej = VecT<Rational>::Zero(A.n);
            ej(j) = 1;
            MatT<Rational> N = Rational(2) * box_op(A, z, ej);
            h = MatT<Rational>::Identity(A.n, A.n);
            MatT<Rational> term = MatT<Rational>::Identity(A.n, A.n);
            for (int k = 1; k <= A.n; ++k) {
                term = MatT<Rational>(term * N);
                for (int i = 0; i < term.rows(); ++i)
                    for (int c = 0; c < term.cols(); ++c) term(i, c) /= k;
                h += term;
            }
            if (kind == 2) h = MatT<Rational>(h.transpose());
        }
        g = MatT<Rational>(g * h);
    }
    return g;
}

std::vector<QPoly> exact_span(const MonomialIndex& mi, const std::vector<QPoly>& polys, int& rank_out) {
    const int M = mi.size();
    MatT<Rational> R(static_cast<int>(polys.size()), M);
    R.setZero();
    for (std::size_t i = 0; i < polys.size(); ++i)
        for (const auto& [e, c] : polys[i].terms()) R(static_cast<int>(i), mi.index.at(e)) = c;
    // reduced row echelon form
    int row = 0;
    for (int col = 0; col < M && row < R.rows(); ++col) {
        int piv = -1;
        for (int i = row; i < R.rows(); ++i)
            if (R(i, col) != 0) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        R.row(row).swap(R.row(piv));
        Rational inv = Rational(1) / R(row, col);
        for (int c = 0; c < M; ++c) R(row, c) *= inv;
        for (int i = 0; i < R.rows(); ++i) {
            if (i == row || R(i, col) == 0) continue;
            Rational f = R(i, col);
            for (int c = 0; c < M; ++c) R(i, c) -= f * R(row, c);
        }
        ++row;
    }
    rank_out = row;
    std::vector<QPoly> basis;
    const int nv = mi.mons.empty() ? 0 : static_cast<int>(mi.mons[0].size());
    for (int i = 0; i < row; ++i) {
        QPoly p(nv);
        for (int c = 0; c < M; ++c) p.add_term(mi.mons[c], R(i, c));
        basis.push_back(p);
    }
    return basis;
}

QPoly exact_contragredient_poly(const ExactAlgebra& A, int m1, int degree, const QPoly& P) {
    MonomialIndex mi(A.n, degree);
    const int K = mi.size(), npts = K + 4;
    std::mt19937_64 rng(0xe4ac7);
    std::uniform_int_distribution<int> U(-3, 3);
    MatT<Rational> E(npts, K);
    VecT<Rational> t(npts);
    for (int i = 0; i < npts; ++i) {
        VecT<Rational> x;
        Rational dx;
        do {
            x = A.e;
            for (int c = 0; c < A.n; ++c) x(c) += Rational(U(rng), 5);
            dx = det_generic(A, x);
        } while (dx == 0);
        VecT<Rational> xi = inverse(A, x);
        Rational dp(1);
        for (int k = 0; k < m1; ++k) dp *= dx;
        t(i) = dp * P.evaluate(xi);
        for (int c = 0; c < K; ++c) {
            Rational v(1);
            for (int q = 0; q < A.n; ++q)
                for (int k = 0; k < mi.mons[c][q]; ++k) v *= x(q);
            E(i, c) = v;
        }
    }
    VecT<Rational> sol = E.fullPivLu().solve(t);
    VecT<Rational> chk = E * sol;
    if (chk != t) throw SolverError("exact contragredient: inconsistent system", 1.0);
    QPoly out(A.n);
    for (int c = 0; c < K; ++c) out.add_term(mi.mons[c], sol(c));
    return out;
}

}  // namespace

double delta_power(const Algebra& A, const std::vector<int>& m, const Vec& x) {
    check_m(A, m);
    return power_function(eval_minors(A.minor_polys, x), m);
}

double dual_delta_power(const Algebra& A, const std::vector<int>& m, const Vec& x) {
    check_m(A, m);
    return power_function(eval_minors(A.dual_minor_polys, x), m);
}

Rational delta_power(const ExactAlgebra& A, const std::vector<int>& m, const VecT<Rational>& x) {
    check_m(A, m);
    return power_function(eval_minors(A.minor_polys, x), m);
}

Rational dual_delta_power(const ExactAlgebra& A, const std::vector<int>& m, const VecT<Rational>& x) {
    check_m(A, m);
    return power_function(eval_minors(A.dual_minor_polys, x), m);
}

PolySpace build_Pm(const Algebra& A, const Partition& m, const BuildOptions& opt) {
    if (m.r() != A.r) throw ParameterError("partition length must equal the rank");
    PolySpace sp;
    sp.m = m;
    auto span_of = [&](const Partition& p, std::vector<int>& hist, int& used) {
        MonomialIndex mi(A.n, p.abs());
        if (mi.size() > opt.max_monomials)
            throw ParameterError("build_Pm: degree too large for the monomial cap");
        Poly dm = delta_power_poly(A, p);
        auto draw = [&](int i) {
            GroupElement g = random_group_element(A, opt.seed + 7919ull * static_cast<std::uint64_t>(i),
                                                  GroupStyle::Word, 4);
            return dm.compose_linear(g.op);
        };
        return stabilized_span(mi, draw, opt, hist, used);
    };
    sp.basis = span_of(m, sp.rank_history, sp.samples_used);
    std::vector<int> h2;
    int u2 = 0;
    Partition mc = m.complement();
    sp.complement_basis = mc == m ? sp.basis : span_of(mc, h2, u2);
    const int D = sp.dim();
    sp.fischer_gram.resize(D, D);
    for (int a = 0; a < D; ++a)
        for (int b = 0; b < D; ++b) sp.fischer_gram(a, b) = fischer_product(sp.basis[a], sp.basis[b]);
    sp.dual_basis = fit_contragredient(A, m, sp.complement_basis, sp.basis);
    return sp;
}

ExactPolySpace build_Pm_exact(const ExactAlgebra& A, const Partition& m, const BuildOptions& opt) {
    if (m.r() != A.r) throw ParameterError("partition length must equal the rank");
    ExactPolySpace sp;
    sp.m = m;
    auto span_of = [&](const Partition& p, std::vector<int>& hist, int& used) {
        MonomialIndex mi(A.n, p.abs());
        QPoly dm = delta_power_poly(A, p);
        std::mt19937_64 rng(opt.seed);
        std::vector<QPoly> polys;
        int rank = 0, last = -1;
        std::vector<QPoly> basis;
        auto add = [&](int count) {
            for (int t = 0; t < count; ++t, ++used) polys.push_back(dm.compose_linear(rational_group_word(A, rng)));
        };
        add(std::max(opt.sample_count, 1));
        basis = exact_span(mi, polys, rank);
        hist.push_back(rank);
        while (rank != last) {
            if (used + 10 > opt.max_samples) throw BudgetError("build_Pm_exact: rank not stabilized", rank, last);
            last = rank;
            add(10);
            basis = exact_span(mi, polys, rank);
            hist.push_back(rank);
            polys = basis;  // keep the system small
        }
        return basis;
    };
    sp.basis = span_of(m, sp.rank_history, sp.samples_used);
    std::vector<int> h2;
    int u2 = 0;
    sp.complement_basis = span_of(m.complement(), h2, u2);
    const int D = sp.dim();
    sp.fischer_gram.resize(D, D);
    for (int a = 0; a < D; ++a)
        for (int b = 0; b < D; ++b) sp.fischer_gram(a, b) = fischer_product(sp.basis[a], sp.basis[b]);
    MatT<Rational> Ginv = sp.fischer_gram.fullPivLu().inverse();
    for (int a = 0; a < D; ++a) {
        QPoly dual(A.n);
        for (int b = 0; b < D; ++b) dual += sp.basis[b] * Ginv(b, a);
        sp.dual_basis.push_back(exact_contragredient_poly(A, m[0], m.complement().abs(), dual));
    }
    return sp;
}

Mat pi_m_matrix(const Algebra& A, const GroupElement& g, const PolySpace& space) {
    const int D = space.dim();
    Eigen::JacobiSVD<Mat> svd(space.fischer_gram);
    double cond = svd.singularValues()(0) / svd.singularValues()(D - 1);
    if (!(cond < 1e8)) throw ConditioningError("pi_m_matrix: basis ill-conditioned", cond);
    Mat ginv = g.op.inverse();
    Mat B(D, D);
    for (int a = 0; a < D; ++a) {
        Poly q = space.basis[a].compose_linear(ginv);
        for (int b = 0; b < D; ++b) B(b, a) = fischer_product(space.basis[b], q);
    }
    (void)A;
    return space.fischer_gram.ldlt().solve(B);
}

MatT<Rational> pi_m_matrix(const ExactAlgebra& A, const MatT<Rational>& g, const ExactPolySpace& space) {
    (void)A;
    const int D = space.dim();
    MatT<Rational> ginv = g.fullPivLu().inverse();
    MatT<Rational> B(D, D);
    for (int a = 0; a < D; ++a) {
        QPoly q = space.basis[a].compose_linear(ginv);
        for (int b = 0; b < D; ++b) B(b, a) = fischer_product(space.basis[b], q);
    }
    return space.fischer_gram.fullPivLu().solve(B);
}

Vec coordinates_in(const PolySpace& space, const Poly& P, double tol) {
    const int D = space.dim();
    Vec b(D);
    for (int a = 0; a < D; ++a) b(a) = fischer_product(space.basis[a], P);
    Vec c = space.fischer_gram.ldlt().solve(b);
    Poly proj(P.nvars());
    for (int a = 0; a < D; ++a) proj += space.basis[a] * c(a);
    double nP = std::sqrt(std::max(fischer_product(P, P), 0.0));
    Poly diff = P - proj;
    double nd = std::sqrt(std::max(fischer_product(diff, diff), 0.0));
    if (nd > tol * std::max(nP, 1e-300))
        throw ParameterError("polynomial is not in P_m (relative residual " + std::to_string(nd / nP) + ")");
    return c;
}

Poly contragredient(const Algebra& A, const PolySpace& space, const Poly& P) {
    coordinates_in(space, P);
    return fit_contragredient(A, space.m, space.complement_basis, {P})[0];
}

QPoly contragredient(const ExactAlgebra& A, const ExactPolySpace& space, const QPoly& P) {
    return exact_contragredient_poly(A, space.m[0], space.m.complement().abs(), P);
}

Vec h_m(const Algebra& A, const PolySpace& space, const Vec& x) {
    A.check(x);
    Vec h(space.dim());
    for (int a = 0; a < space.dim(); ++a) h(a) = space.dual_basis[a].evaluate(x);
    return h;
}

SphericalResult is_spherical(const Algebra& A, const std::vector<int>& w) {
    if (static_cast<int>(w.size()) != A.r) throw ParameterError("weight length must equal r");
    for (std::size_t i = 1; i < w.size(); ++i)
        if (w[i] < w[i - 1]) throw ParameterError("weight must be weakly increasing");
    SphericalResult res;
    for (std::size_t i = 0; i < w.size(); ++i)
        if ((w.back() - w[i]) % 2 != 0) return res;
    std::vector<int> m(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) m[i] = (w.back() - w[i]) / 2;
    res.spherical = true;
    res.m = Partition(m);
    res.beta = Rational(A.r * w.back(), 2 * A.n);
    return res;
}

}  // namespace jz
