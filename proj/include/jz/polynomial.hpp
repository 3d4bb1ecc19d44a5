#pragma once

#include <algorithm>
#include <map>
#include <vector>

#include "jz/errors.hpp"
#include "jz/types.hpp"

namespace jz {

using Exponent = std::vector<int>;

// All exponent vectors of total degree `degree` in `nvars` variables,
// in lexicographic order.
std::vector<Exponent> homogeneous_exponents(int nvars, int degree);

// Multivariate polynomial stored sparsely by exponent multi-index.
template <class S>
class Polynomial {
public:
    using Terms = std::map<Exponent, S>;

    Polynomial() = default;
    explicit Polynomial(int nvars) : nvars_(nvars) {}

    static Polynomial constant(int nvars, const S& c) {
        Polynomial p(nvars);
        p.add_term(Exponent(nvars, 0), c);
        return p;
    }
    static Polynomial variable(int nvars, int i) {
        Polynomial p(nvars);
        Exponent e(nvars, 0);
        e[i] = 1;
        p.add_term(e, S(1));
        return p;
    }
    // sum_i a_i x_i + b
    static Polynomial linear(const VecT<S>& a, const S& b = S(0)) {
        const int n = static_cast<int>(a.size());
        Polynomial p(n);
        for (int i = 0; i < n; ++i) p.add_term(unit(n, i), a(i));
        p.add_term(Exponent(n, 0), b);
        return p;
    }

    int nvars() const { return nvars_; }
    const Terms& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }

    void add_term(const Exponent& e, const S& c) {
        if (is_exact_zero(c)) return;
        auto it = terms_.find(e);
        if (it == terms_.end()) {
            terms_.emplace(e, c);
        } else {
            it->second += c;
            if (is_exact_zero(it->second)) terms_.erase(it);
        }
    }

    S coefficient(const Exponent& e) const {
        auto it = terms_.find(e);
        return it == terms_.end() ? S(0) : it->second;
    }

    int degree() const {
        int d = -1;
        for (const auto& [e, c] : terms_) d = std::max(d, total(e));
        return d;
    }

    bool is_homogeneous(int deg) const {
        for (const auto& [e, c] : terms_)
            if (total(e) != deg) return false;
        return true;
    }

    Polynomial& operator+=(const Polynomial& o) {
        check(o);
        for (const auto& [e, c] : o.terms_) add_term(e, c);
        return *this;
    }
    Polynomial& operator-=(const Polynomial& o) {
        check(o);
        for (const auto& [e, c] : o.terms_) add_term(e, S(-c));
        return *this;
    }
    Polynomial& operator*=(const S& s) {
        if (is_exact_zero(s)) {
            terms_.clear();
            return *this;
        }
        for (auto& [e, c] : terms_) c *= s;
        return *this;
    }
    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
    friend Polynomial operator*(Polynomial a, const S& s) { return a *= s; }
    friend Polynomial operator*(const S& s, Polynomial a) { return a *= s; }
    Polynomial operator-() const { return (*this) * S(-1); }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        a.check(b);
        Polynomial out(a.nvars_);
        Exponent e(a.nvars_);
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_) {
                for (int i = 0; i < a.nvars_; ++i) e[i] = ea[i] + eb[i];
                out.add_term(e, ca * cb);
            }
        return out;
    }
    Polynomial& operator*=(const Polynomial& o) { return *this = (*this) * o; }

    Polynomial pow(int k) const {
        if (k < 0) throw ParameterError("Polynomial::pow: negative exponent");
        Polynomial out = constant(nvars_, S(1)), base = *this;
        while (k) {
            if (k & 1) out *= base;
            k >>= 1;
            if (k) base = base * base;
        }
        return out;
    }

    Polynomial derivative(int i) const {
        Polynomial out(nvars_);
        for (const auto& [e, c] : terms_) {
            if (e[i] == 0) continue;
            Exponent f = e;
            --f[i];
            out.add_term(f, c * S(e[i]));
        }
        return out;
    }

    // Homogeneous component of the given degree.
    Polynomial homogeneous_part(int deg) const {
        Polynomial out(nvars_);
        for (const auto& [e, c] : terms_)
            if (total(e) == deg) out.terms_.emplace(e, c);
        return out;
    }

    template <class T>
    T evaluate(const VecT<T>& x) const {
        if (x.size() != nvars_) throw AlgebraMismatch("Polynomial::evaluate: wrong arity");
        T acc(0);
        for (const auto& [e, c] : terms_) {
            T t = T(c);
            for (int i = 0; i < nvars_; ++i)
                for (int k = 0; k < e[i]; ++k) t *= x(i);
            acc += t;
        }
        return acc;
    }

    // p(M y + b) as a polynomial in y; M has nvars rows.
    Polynomial compose_affine(const MatT<S>& M, const VecT<S>& b) const {
        if (M.rows() != nvars_ || b.size() != nvars_)
            throw AlgebraMismatch("Polynomial::compose_affine: shape");
        const int m = static_cast<int>(M.cols());
        int maxdeg = 0;
        for (const auto& [e, c] : terms_)
            for (int v : e) maxdeg = std::max(maxdeg, v);
        std::vector<std::vector<Polynomial>> powers(nvars_);
        for (int i = 0; i < nvars_; ++i) {
            VecT<S> row = M.row(i).transpose();
            Polynomial li = linear(row, b(i));
            powers[i].push_back(constant(m, S(1)));
            for (int k = 1; k <= maxdeg; ++k) powers[i].push_back(powers[i].back() * li);
        }
        Polynomial out(m);
        for (const auto& [e, c] : terms_) {
            Polynomial t = constant(m, c);
            for (int i = 0; i < nvars_; ++i)
                if (e[i]) t *= powers[i][e[i]];
            out += t;
        }
        return out;
    }

    Polynomial compose_linear(const MatT<S>& M) const {
        return compose_affine(M, VecT<S>::Zero(nvars_));
    }

    // p(y + c)
    Polynomial shift(const VecT<S>& c) const {
        return compose_affine(MatT<S>::Identity(nvars_, nvars_), c);
    }

    template <class U>
    Polynomial<U> cast() const {
        Polynomial<U> out(nvars_);
        for (const auto& [e, c] : terms_) out.add_term(e, convert<U>(c));
        return out;
    }

    // Drops coefficients with |c| <= rel * max|c| (floating types only).
    Polynomial pruned(double rel) const {
        double mx = 0;
        for (const auto& [e, c] : terms_) mx = std::max(mx, magnitude(c));
        Polynomial out(nvars_);
        for (const auto& [e, c] : terms_)
            if (magnitude(c) > rel * mx) out.terms_.emplace(e, c);
        return out;
    }

    double max_abs_coefficient() const {
        double mx = 0;
        for (const auto& [e, c] : terms_) mx = std::max(mx, magnitude(c));
        return mx;
    }

    static int total(const Exponent& e) {
        int s = 0;
        for (int v : e) s += v;
        return s;
    }

private:
    static Exponent unit(int n, int i) {
        Exponent e(n, 0);
        e[i] = 1;
        return e;
    }
    void check(const Polynomial& o) const {
        if (o.nvars_ != nvars_) throw AlgebraMismatch("Polynomial: arity mismatch");
    }
    template <class U, class V>
    static U convert(const V& v) {
        if constexpr (std::is_same_v<V, Rational> && !std::is_same_v<U, Rational>)
            return U(static_cast<double>(v));
        else
            return U(v);
    }

    int nvars_ = 0;
    Terms terms_;
};

using Poly = Polynomial<double>;
using CPoly = Polynomial<cplx>;
using QPoly = Polynomial<Rational>;

// Flattened polynomial for repeated evaluation at double points.
template <class S>
class CompiledPoly {
public:
    CompiledPoly() = default;
    explicit CompiledPoly(const Polynomial<S>& p) : nvars_(p.nvars()) {
        for (const auto& [e, c] : p.terms()) {
            coeff_.push_back(c);
            start_.push_back(static_cast<int>(var_.size()));
            for (int i = 0; i < nvars_; ++i)
                if (e[i]) {
                    var_.push_back(i);
                    exp_.push_back(e[i]);
                    maxdeg_ = std::max(maxdeg_, e[i]);
                }
        }
        start_.push_back(static_cast<int>(var_.size()));
    }

    int nvars() const { return nvars_; }
    int max_degree() const { return maxdeg_; }
    std::size_t size() const { return coeff_.size(); }

    // pw[i * stride + k] = x_i^k, stride >= max_degree()+1
    S eval(const double* pw, int stride) const {
        S acc(0);
        const std::size_t nt = coeff_.size();
        for (std::size_t t = 0; t < nt; ++t) {
            double m = 1.0;
            for (int q = start_[t]; q < start_[t + 1]; ++q) m *= pw[var_[q] * stride + exp_[q]];
            acc += coeff_[t] * m;
        }
        return acc;
    }

    S operator()(const Vec& x) const {
        const int stride = maxdeg_ + 1;
        std::vector<double> pw(static_cast<std::size_t>(nvars_) * stride);
        fill_powers(x.data(), nvars_, stride, pw.data());
        return eval(pw.data(), stride);
    }

    static void fill_powers(const double* x, int nvars, int stride, double* pw) {
        for (int i = 0; i < nvars; ++i) {
            double* row = pw + static_cast<std::size_t>(i) * stride;
            row[0] = 1.0;
            for (int k = 1; k < stride; ++k) row[k] = row[k - 1] * x[i];
        }
    }

private:
    int nvars_ = 0;
    int maxdeg_ = 0;
    std::vector<S> coeff_;
    std::vector<int> start_;
    std::vector<int> var_;
    std::vector<int> exp_;
};

// Fischer product <p,q>_F = p(d)q at 0 in orthonormal coordinates:
// sum_alpha alpha! p_alpha q_alpha.
double fischer_product(const Poly& p, const Poly& q);
Rational fischer_product(const QPoly& p, const QPoly& q);

}  // namespace jz
