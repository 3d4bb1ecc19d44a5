#include "jz/polynomial.hpp"

namespace jz {

namespace {
void rec(int nvars, int i, int left, Exponent& cur, std::vector<Exponent>& out) {
    if (i == nvars - 1) {
        cur[i] = left;
        out.push_back(cur);
        return;
    }
    for (int k = left; k >= 0; --k) {
        cur[i] = k;
        rec(nvars, i + 1, left - k, cur, out);
    }
}

template <class S>
S fischer_impl(const Polynomial<S>& p, const Polynomial<S>& q) {
    if (p.nvars() != q.nvars()) throw AlgebraMismatch("fischer_product: arity mismatch");
    S acc(0);
    for (const auto& [e, c] : p.terms()) {
        S w = q.coefficient(e);
        if (is_exact_zero(w)) continue;
        S f(1);
        for (int v : e)
            for (int k = 2; k <= v; ++k) f *= S(k);
        acc += c * w * f;
    }
    return acc;
}
}  // namespace

std::vector<Exponent> homogeneous_exponents(int nvars, int degree) {
    std::vector<Exponent> out;
    if (nvars == 0) return out;
    Exponent cur(nvars, 0);
    rec(nvars, 0, degree, cur, out);
    return out;
}

double fischer_product(const Poly& p, const Poly& q) { return fischer_impl(p, q); }
Rational fischer_product(const QPoly& p, const QPoly& q) { return fischer_impl(p, q); }

}  // namespace jz
