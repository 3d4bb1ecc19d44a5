#include "jz/gamma.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace jz {

namespace {

constexpr double kPi = 3.14159265358979323846;

const double kLanczos[9] = {0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
                            771.32342877765313,   -176.61502916214059,   12.507343278686905,
                            -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

bool is_nonpositive_integer(const Rational& q) { return q <= 0 && denominator(q) == 1; }

Rational floor_q(const Rational& q) {
    boost::multiprecision::cpp_int n = numerator(q), d = denominator(q);
    boost::multiprecision::cpp_int f = n / d;
    if (n < 0 && f * d != n) f -= 1;
    return Rational(f);
}

}  // namespace

cplx lgamma_complex(cplx z) {
    if (z.real() < 0.5) {
        // log Gamma(z) = log pi - log sin(pi z) - log Gamma(1 - z)
        cplx s = std::sin(kPi * z);
        if (std::abs(s) == 0.0) throw PoleError("lgamma: pole", {});
        return std::log(kPi) - std::log(s) - lgamma_complex(1.0 - z);
    }
    z -= 1.0;
    cplx x = kLanczos[0];
    for (int i = 1; i < 9; ++i) x += kLanczos[i] / (z + double(i));
    cplx t = z + 7.5;
    return 0.5 * std::log(2 * kPi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

cplx gamma_complex(cplx z) {
    if (z.imag() == 0.0 && z.real() > 0 && z.real() < 170) return std::tgamma(z.real());
    return std::exp(lgamma_complex(z));
}

Rational gamma_factor_shift(const std::vector<int>& m, const Algebra& A, int j) {
    return Rational(m[j - 1] + 1) + Rational((A.r - j) * A.d, 2);
}

cplx log_gamma_omega(cplx s, const Partition& m, const Algebra& A) {
    if (m.r() != A.r) throw ParameterError("partition length must equal r");
    std::vector<int> bad;
    cplx acc = 0.5 * (A.n - A.r) * std::log(2 * kPi);
    for (int j = 1; j <= A.r; ++j) {
        cplx arg = s + to_double(gamma_factor_shift(m.parts, A, j));
        double rn = std::round(arg.real());
        if (std::abs(arg.imag()) < 1e-12 && rn <= 0 && std::abs(arg.real() - rn) < 1e-12) {
            bad.push_back(j);
            continue;
        }
        acc += lgamma_complex(arg);
    }
    if (!bad.empty()) throw PoleError("gamma_omega: pole of a Gamma factor", bad);
    return acc;
}

cplx gamma_omega(cplx s, const std::vector<int>& m, const Algebra& A) {
    if (static_cast<int>(m.size()) != A.r) throw ParameterError("tuple length must equal r");
    std::vector<int> bad;
    cplx prod = std::pow(2 * kPi, 0.5 * (A.n - A.r));
    for (int j = 1; j <= A.r; ++j) {
        cplx arg = s + to_double(gamma_factor_shift(m, A, j));
        double rn = std::round(arg.real());
        if (std::abs(arg.imag()) < 1e-12 && rn <= 0 && std::abs(arg.real() - rn) < 1e-12) {
            bad.push_back(j);
            continue;
        }
        prod *= gamma_complex(arg);
    }
    if (!bad.empty()) throw PoleError("gamma_omega: pole of a Gamma factor", bad);
    return prod;
}

cplx gamma_omega(cplx s, const Partition& m, const Algebra& A) { return gamma_omega(s, m.parts, A); }

cplx bernstein_ratio(cplx s, int k, const std::vector<int>& m, const Algebra& A) {
    cplx prod = 1.0;
    for (int j = 1; j <= A.r; ++j) {
        double sh = to_double(gamma_factor_shift(m, A, j));
        for (int i = 0; i < k; ++i) prod *= s + double(i) + sh;
    }
    return prod;
}

std::vector<int> bernstein_zero_factors(cplx s, int k, const std::vector<int>& m, const Algebra& A, double tol) {
    std::vector<int> bad;
    for (int j = 1; j <= A.r; ++j) {
        double sh = to_double(gamma_factor_shift(m, A, j));
        for (int i = 0; i < k; ++i)
            if (std::abs(s + double(i) + sh) < tol) {
                bad.push_back(j);
                break;
            }
    }
    return bad;
}

int o_mult(const Rational& s0, const std::vector<int>& m, const Algebra& A) {
    if (static_cast<int>(m.size()) != A.r) throw ParameterError("tuple length must equal r");
    int o = 0;
    for (int j = 1; j <= A.r; ++j)
        if (is_nonpositive_integer(s0 + gamma_factor_shift(m, A, j))) ++o;
    return o;
}

int o_mult(const Rational& s0, const Partition& m, const Algebra& A) { return o_mult(s0, m.parts, A); }

namespace {

// Poles of prod_j Gamma(s + a_j) in [lo, hi].
std::vector<CriticalPoint> gamma_product_poles(const std::vector<Rational>& shifts, const Rational& lo,
                                               const Rational& hi) {
    std::map<Rational, int> count;
    if (hi < lo) return {};
    for (const auto& a : shifts) {
        // s = -a - i, i >= 0, lo <= s <= hi
        Rational top = -a;
        Rational start = top;
        if (start > hi) {
            Rational steps = floor_q(Rational(start - hi));
            start -= steps;
            if (start > hi) start -= 1;
        }
        for (Rational s = start; s >= lo; s -= 1) count[s] += 1;
    }
    std::vector<CriticalPoint> out;
    for (auto it = count.rbegin(); it != count.rend(); ++it) out.push_back({it->first, it->second});
    return out;
}

}  // namespace

std::vector<CriticalPoint> critical_set(const Partition& m, const Algebra& A, const Rational& lo, const Rational& hi) {
    if (m.r() != A.r) throw ParameterError("partition length must equal r");
    std::vector<Rational> shifts;
    for (int j = 1; j <= A.r; ++j) shifts.push_back(Rational(1 - m[j - 1]) + Rational((j - 1) * A.d, 2));
    return gamma_product_poles(shifts, lo, hi);
}

std::vector<CriticalPoint> pole_set(const std::vector<int>& m, const Algebra& A, const Rational& lo,
                                    const Rational& hi) {
    if (static_cast<int>(m.size()) != A.r) throw ParameterError("tuple length must equal r");
    std::vector<Rational> shifts;
    for (int j = 1; j <= A.r; ++j) shifts.push_back(gamma_factor_shift(m, A, j));
    return gamma_product_poles(shifts, lo, hi);
}

bool is_critical(const Rational& s, const Partition& m, const Algebra& A) {
    for (int j = 1; j <= A.r; ++j)
        if (is_nonpositive_integer(s + Rational(1 - m[j - 1]) + Rational((j - 1) * A.d, 2))) return true;
    return false;
}

HomogeneityBounds homogeneity_bounds(int p, const Partition& m, const Algebra& A) {
    if (m.r() != A.r) throw ParameterError("partition length must equal r");
    if (p <= 0 || p >= A.r) throw ParameterError("homogeneity_bounds: need 0 < p < r");
    Rational nr(A.n, A.r);
    HomogeneityBounds b;
    b.s_max_rank_p = -(nr - Rational(A.d * p, 2)) + m[A.r - p - 1];
    b.s_max_origin = -nr + m[A.r - 1];
    return b;
}

bool snap_half_integer(double s, Rational& q, double tol) {
    double t = std::round(2 * s);
    if (std::abs(2 * s - t) > 2 * tol) return false;
    q = Rational(static_cast<long long>(t), 2);
    return true;
}

}  // namespace jz
