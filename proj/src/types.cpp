#include "jz/types.hpp"

#include <atomic>
#include <cctype>
#include <cmath>
#include <sstream>

#include "jz/errors.hpp"

namespace jz {

namespace {
std::atomic<double> g_tol{1e-9};
}

double default_tolerance() { return g_tol.load(); }
void set_default_tolerance(double tol) {
    if (!(tol > 0)) throw ParameterError("tolerance must be positive");
    g_tol.store(tol);
}

double to_double(double x) { return x; }
double to_double(const Rational& x) { return static_cast<double>(x); }

Rational rational_from_string(const std::string& in) {
    std::string s;
    for (char c : in)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw ParameterError("empty number");
    try {
        auto slash = s.find('/');
        if (slash != std::string::npos) {
            boost::multiprecision::cpp_int num(s.substr(0, slash)), den(s.substr(slash + 1));
            if (den == 0) throw ParameterError("zero denominator in '" + in + "'");
            return Rational(num, den);
        }
        bool neg = false;
        std::size_t pos = 0;
        if (s[0] == '-' || s[0] == '+') {
            neg = s[0] == '-';
            pos = 1;
        }
        std::string mant = s.substr(pos);
        int exp10 = 0;
        auto epos = mant.find_first_of("eE");
        if (epos != std::string::npos) {
            exp10 = std::stoi(mant.substr(epos + 1));
            mant = mant.substr(0, epos);
        }
        auto dot = mant.find('.');
        std::string digits = mant;
        if (dot != std::string::npos) {
            digits = mant.substr(0, dot) + mant.substr(dot + 1);
            exp10 -= static_cast<int>(mant.size() - dot - 1);
        }
        if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
            throw ParameterError("not a number: '" + in + "'");
        boost::multiprecision::cpp_int num(digits), p10 = 1;
        for (int i = 0; i < std::abs(exp10); ++i) p10 *= 10;
        Rational q = exp10 >= 0 ? Rational(num * p10) : Rational(num, p10);
        return neg ? Rational(-q) : q;
    } catch (const ParameterError&) {
        throw;
    } catch (const std::exception&) {
        throw ParameterError("not a number: '" + in + "'");
    }
}

Rational rational_from_double(double x, long max_den) {
    if (!std::isfinite(x)) throw ParameterError("non-finite value has no rational form");
    // continued fraction convergents
    long long h0 = 0, h1 = 1, k0 = 1, k1 = 0;
    double v = x;
    for (int it = 0; it < 64; ++it) {
        double a = std::floor(v);
        long long ai = static_cast<long long>(a);
        long long h2 = ai * h1 + h0, k2 = ai * k1 + k0;
        if (k2 > max_den) break;
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        double frac = v - a;
        if (std::abs(frac) < 1e-15) break;
        v = 1.0 / frac;
    }
    return Rational(h1, k1);
}

std::string rational_to_string(const Rational& q) {
    std::ostringstream os;
    os << numerator(q);
    if (denominator(q) != 1) os << "/" << denominator(q);
    return os.str();
}

}  // namespace jz
