#pragma once

#include <complex>
#include <cstdint>

#include <iterator>

#include <Eigen/Dense>

// Boost 1.74 probes std::iterator_traits<C::const_iterator>::value_type while
// checking operator overloads against Eigen types; Eigen 3.4 declares
// const_iterator = void for non-vector expressions, which is a hard error in
// C++20. A value_type that is neither integral nor byte sized keeps the trait false.
namespace jz::detail {
struct NotAByte {
    char pad[2];
};
}  // namespace jz::detail
template <>
struct std::iterator_traits<void> {
    using value_type = jz::detail::NotAByte;
};

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/eigen.hpp>

namespace jz {

using cplx = std::complex<double>;
using Rational = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend,
                                               boost::multiprecision::et_off>;

template <class S>
using VecT = Eigen::Matrix<S, Eigen::Dynamic, 1>;
template <class S>
using MatT = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;

using Vec = VecT<double>;
using Mat = MatT<double>;
using CVec = VecT<cplx>;
using CMat = MatT<cplx>;

// Global relative tolerance for algebraic identities at double precision.
double default_tolerance();
void set_default_tolerance(double tol);

// Magnitude used in relative comparisons; exact types compare exactly.
inline double magnitude(double x) { return std::abs(x); }
inline double magnitude(const cplx& x) { return std::abs(x); }
inline double magnitude(const Rational& x) {
    return std::abs(static_cast<double>(x));
}

template <class S>
inline bool is_exact_zero(const S& x) {
    return x == S(0);
}

double to_double(double x);
double to_double(const Rational& x);
Rational rational_from_string(const std::string& s);  // "3/2", "-1.25", "2"
Rational rational_from_double(double x, long max_den = 1 << 20);
std::string rational_to_string(const Rational& q);

}  // namespace jz
