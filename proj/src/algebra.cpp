#include "jz/algebra.hpp"

#include <cctype>
#include <cmath>

namespace jz {

std::string family_name(Family f) {
    switch (f) {
        case Family::Real: return "real";
        case Family::SymR: return "symr";
        case Family::HermC: return "hermc";
        case Family::HermH: return "hermh";
        case Family::Spin: return "spin";
    }
    return "?";
}

Family parse_family(const std::string& s) {
    std::string t;
    for (char c : s) t += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (t == "real" || t == "r") return Family::Real;
    if (t == "symr" || t == "sym") return Family::SymR;
    if (t == "hermc" || t == "herm") return Family::HermC;
    if (t == "hermh") return Family::HermH;
    if (t == "spin") return Family::Spin;
    throw ParameterError("unknown family '" + s + "'");
}

bool hermh_enabled() {
#ifdef JZ_DISABLE_HERMH
    return false;
#else
    return true;
#endif
}

namespace {

// Complex q x q representations of the field units (q = 1 for R, C; 2 for H).
std::vector<CMat> field_units(int d) {
    const cplx I(0, 1);
    std::vector<CMat> u;
    if (d == 1) {
        u.push_back(CMat::Constant(1, 1, 1.0));
    } else if (d == 2) {
        u.push_back(CMat::Constant(1, 1, 1.0));
        u.push_back(CMat::Constant(1, 1, I));
    } else {
        CMat one = CMat::Identity(2, 2), qi(2, 2), qj(2, 2), qk(2, 2);
        qi << I, 0, 0, -I;
        qj << 0, 1, -1, 0;
        qk << 0, I, I, 0;
        u = {one, qi, qj, qk};
    }
    return u;
}

template <class S>
std::vector<Polynomial<S>> symbolic_mul(const AlgebraT<S>& A, const std::vector<Polynomial<S>>& X,
                                        const std::vector<Polynomial<S>>& Y) {
    std::vector<Polynomial<S>> Z(A.n, Polynomial<S>(A.n));
    for (int i = 0; i < A.n; ++i)
        for (int j = 0; j < A.n; ++j) {
            bool any = false;
            for (int k = 0; k < A.n; ++k)
                if (!is_exact_zero(A.C[k](i, j))) any = true;
            if (!any || X[i].is_zero() || Y[j].is_zero()) continue;
            Polynomial<S> xy = X[i] * Y[j];
            for (int k = 0; k < A.n; ++k)
                if (!is_exact_zero(A.C[k](i, j))) Z[k] += xy * A.C[k](i, j);
        }
    return Z;
}

template <class S>
Polynomial<S> symbolic_inner(const std::vector<Polynomial<S>>& X, const std::vector<Polynomial<S>>& Y) {
    Polynomial<S> out(X.empty() ? 0 : X[0].nvars());
    for (std::size_t i = 0; i < X.size(); ++i)
        if (!X[i].is_zero() && !Y[i].is_zero()) out += X[i] * Y[i];
    return out;
}

// det as the r-th elementary symmetric function of the eigenvalues, via
// Newton's identities on the power traces tr(x^k) = <x^k, e>.
template <class S>
Polynomial<S> build_det_poly(const AlgebraT<S>& A) {
    const int n = A.n, r = A.r;
    std::vector<Polynomial<S>> X(n);
    for (int i = 0; i < n; ++i) X[i] = Polynomial<S>::variable(n, i);
    std::vector<std::vector<Polynomial<S>>> pw{X};  // pw[k-1] = x^k
    for (int k = 2; k <= (r + 1) / 2 + 1 && k <= r; ++k) pw.push_back(symbolic_mul(A, pw.back(), X));
    std::vector<Polynomial<S>> E(n);
    for (int i = 0; i < n; ++i) E[i] = Polynomial<S>::constant(n, A.e(i));
    auto power_trace = [&](int k) {
        // tr(x^k) = <x^a, x^b> with a + b = k, using associativity of the trace form
        if (k == 1) return symbolic_inner(X, E);
        int a = k / 2, b = k - a;
        while (static_cast<int>(pw.size()) < b) pw.push_back(symbolic_mul(A, pw.back(), X));
        return symbolic_inner(pw[a - 1], pw[b - 1]);
    };
    std::vector<Polynomial<S>> p(r + 1), sigma(r + 1);
    sigma[0] = Polynomial<S>::constant(n, S(1));
    for (int k = 1; k <= r; ++k) p[k] = power_trace(k);
    for (int k = 1; k <= r; ++k) {
        Polynomial<S> acc(n);
        for (int i = 1; i <= k; ++i) {
            Polynomial<S> t = sigma[k - i] * p[i];
            if (i % 2 == 0) t *= S(-1);
            acc += t;
        }
        sigma[k] = acc * (S(1) / S(k));
    }
    return sigma[r];
}

template <class S>
void build_minor_polys(AlgebraT<S>& A) {
    A.det_poly = build_det_poly(A);
    if constexpr (!std::is_same_v<S, Rational>) A.det_poly = A.det_poly.pruned(1e-14);
    A.minor_polys.clear();
    A.dual_minor_polys.clear();
    for (int k = 1; k <= A.r; ++k) {
        VecT<S> c = VecT<S>::Zero(A.n), cs = VecT<S>::Zero(A.n);
        for (int i = 0; i < k; ++i) c(i) = S(1);
        for (int i = A.r - k; i < A.r; ++i) cs(i) = S(1);
        Polynomial<S> m = A.det_poly.compose_affine(P_op(A, c), VecT<S>(A.e - c));
        Polynomial<S> ms = A.det_poly.compose_affine(P_op(A, cs), VecT<S>(A.e - cs));
        if constexpr (!std::is_same_v<S, Rational>) {
            m = m.pruned(1e-14);
            ms = ms.pruned(1e-14);
        }
        A.minor_polys.push_back(m);
        A.dual_minor_polys.push_back(ms);
    }
}

void structure_from_matrices(Algebra& A) {
    const int n = A.n;
    const double q = A.field_block;
    A.C.assign(n, Mat::Zero(n, n));
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            CMat P = 0.5 * (A.basis_matrices[i] * A.basis_matrices[j] +
                            A.basis_matrices[j] * A.basis_matrices[i]);
            for (int k = 0; k < n; ++k) {
                double c = (P * A.basis_matrices[k]).trace().real() / q;
                if (std::abs(c) < 1e-15) c = 0;
                A.C[k](i, j) = c;
                A.C[k](j, i) = c;
            }
        }
}

}  // namespace

CMat to_matrix(const Algebra& A, const Vec& x) {
    A.check(x);
    if (A.basis_matrices.empty()) throw ParameterError("to_matrix: family has no matrix model");
    CMat X = CMat::Zero(A.basis_matrices[0].rows(), A.basis_matrices[0].cols());
    for (int i = 0; i < A.n; ++i) X += x(i) * A.basis_matrices[i];
    return X;
}

Vec from_matrix(const Algebra& A, const CMat& X) {
    if (A.basis_matrices.empty()) throw ParameterError("from_matrix: family has no matrix model");
    Vec x(A.n);
    for (int i = 0; i < A.n; ++i) x(i) = (X * A.basis_matrices[i]).trace().real() / A.field_block;
    return x;
}

void to_spin_model(const Algebra& A, const Vec& x, double& lambda, Vec& u) {
    A.check(x);
    if (A.family != Family::Spin) throw ParameterError("to_spin_model: not a Spin factor");
    lambda = 0.5 * (x(0) + x(1));
    u.resize(A.n - 1);
    u(0) = 0.5 * (x(0) - x(1));
    for (int i = 2; i < A.n; ++i) u(i - 1) = x(i) / std::sqrt(2.0);
}

Vec from_spin_model(const Algebra& A, double lambda, const Vec& u) {
    if (A.family != Family::Spin || u.size() != A.n - 1)
        throw ParameterError("from_spin_model: shape");
    Vec x(A.n);
    x(0) = lambda + u(0);
    x(1) = lambda - u(0);
    for (int i = 2; i < A.n; ++i) x(i) = std::sqrt(2.0) * u(i - 1);
    return x;
}

cplx pfaffian(CMat M) {
    const int n = static_cast<int>(M.rows());
    if (n % 2) return 0.0;
    cplx pf = 1.0;
    for (int k = 0; k < n - 1; k += 2) {
        int piv = k + 1;
        double best = std::abs(M(k, k + 1));
        for (int i = k + 2; i < n; ++i)
            if (std::abs(M(k, i)) > best) {
                best = std::abs(M(k, i));
                piv = i;
            }
        if (piv != k + 1) {
            M.row(k + 1).swap(M.row(piv));
            M.col(k + 1).swap(M.col(piv));
            pf = -pf;
        }
        if (M(k, k + 1) == 0.0) return 0.0;
        pf *= M(k, k + 1);
        if (k + 2 < n) {
            CVec tau = M.row(k).tail(n - k - 2).transpose() / M(k, k + 1);
            // eliminate row/col k from the trailing block
            CVec mk1 = M.row(k + 1).tail(n - k - 2).transpose();
            M.bottomRightCorner(n - k - 2, n - k - 2) += mk1 * tau.transpose() - tau * mk1.transpose();
        }
    }
    return pf;
}

double det_model(const Algebra& A, const Vec& x) {
    A.check(x);
    switch (A.family) {
        case Family::Real: return x(0);
        case Family::Spin: {
            double lam;
            Vec u;
            to_spin_model(A, x, lam, u);
            return lam * lam - u.squaredNorm();
        }
        case Family::SymR:
        case Family::HermC: return to_matrix(A, x).determinant().real();
        case Family::HermH: {
            CMat X = to_matrix(A, x);
            const int m = static_cast<int>(X.rows());
            CMat J = CMat::Zero(m, m);
            for (int b = 0; b < m; b += 2) {
                J(b, b + 1) = 1.0;
                J(b + 1, b) = -1.0;
            }
            return (pfaffian(X * J) / pfaffian(J)).real();
        }
    }
    return 0;
}

Algebra make_algebra(Family family, int r, int n_opt) {
    if (family == Family::Spin) {
        if (n_opt < 3) throw ParameterError("Spin factor requires n >= 3");
        if (r > 2) throw ParameterError("Spin factor has rank 2");
        if (r != 1) r = 2;
    }
    if (r < 1) throw ParameterError("rank must be >= 1");
    if (r == 1) family = Family::Real;
    if (family == Family::HermH && !hermh_enabled())
        throw ParameterError("Herm(r,H) support is disabled in this build");
    if (family == Family::Real && r != 1) throw ParameterError("the real line has rank 1");

    Algebra A;
    A.family = family;
    A.r = r;
    switch (family) {
        case Family::Real: A.d = 0; break;
        case Family::SymR: A.d = 1; break;
        case Family::HermC: A.d = 2; break;
        case Family::HermH: A.d = 4; break;
        case Family::Spin: A.d = n_opt - 2; break;
    }
    A.n = r + A.d * r * (r - 1) / 2;
    const int n = A.n;
    A.e = Vec::Zero(n);
    A.e.head(r).setOnes();

    if (family == Family::Real) {
        A.C.assign(1, Mat::Ones(1, 1));
    } else if (family == Family::Spin) {
        // structure constants from the (lambda,u) product, <x,y> = 2(lambda mu + (u,v))
        std::vector<Vec> basis_lu(n);
        for (int i = 0; i < n; ++i) basis_lu[i] = Vec::Zero(n);  // [lambda, u_1..u_{n-1}]
        basis_lu[0](0) = 0.5;
        basis_lu[0](1) = 0.5;
        basis_lu[1](0) = 0.5;
        basis_lu[1](1) = -0.5;
        for (int i = 2; i < n; ++i) basis_lu[i](i) = 1.0 / std::sqrt(2.0);
        auto mul = [&](const Vec& a, const Vec& b) {
            Vec c(n);
            c(0) = a(0) * b(0) + a.tail(n - 1).dot(b.tail(n - 1));
            c.tail(n - 1) = a(0) * b.tail(n - 1) + b(0) * a.tail(n - 1);
            return c;
        };
        auto ip = [&](const Vec& a, const Vec& b) { return 2.0 * a.dot(b); };
        A.C.assign(n, Mat::Zero(n, n));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                Vec p = mul(basis_lu[i], basis_lu[j]);
                for (int k = 0; k < n; ++k) {
                    double c = ip(p, basis_lu[k]);
                    A.C[k](i, j) = std::abs(c) < 1e-15 ? 0.0 : c;
                }
            }
    } else {
        auto units = field_units(A.d);
        const int q = static_cast<int>(units[0].rows());
        A.field_block = q;
        const int m = r * q;
        A.basis_matrices.assign(n, CMat::Zero(m, m));
        for (int i = 0; i < r; ++i)
            A.basis_matrices[i].block(i * q, i * q, q, q) = CMat::Identity(q, q);
        for (int i = 0; i < r; ++i)
            for (int j = i + 1; j < r; ++j) {
                int off = A.block_offset(i, j);
                for (int t = 0; t < A.d; ++t) {
                    CMat& B = A.basis_matrices[off + t];
                    B.block(i * q, j * q, q, q) = units[t] / std::sqrt(2.0);
                    B.block(j * q, i * q, q, q) = units[t].adjoint() / std::sqrt(2.0);
                }
            }
        structure_from_matrices(A);
    }
    build_minor_polys(A);
    return A;
}

ExactAlgebra exact_algebra(const Algebra& A) {
    ExactAlgebra Q;
    Q.family = A.family;
    Q.r = A.r;
    Q.d = A.d;
    Q.n = A.n;
    Q.field_block = A.field_block;
    auto conv = [](double v) {
        Rational q = rational_from_double(v, 64);
        if (std::abs(static_cast<double>(q) - v) > 1e-12)
            throw ParameterError("exact mode: structure constants are not small rationals");
        return q;
    };
    Q.C.assign(A.n, MatT<Rational>(A.n, A.n));
    for (int k = 0; k < A.n; ++k)
        for (int i = 0; i < A.n; ++i)
            for (int j = 0; j < A.n; ++j) Q.C[k](i, j) = conv(A.C[k](i, j));
    Q.e = VecT<Rational>(A.n);
    for (int i = 0; i < A.n; ++i) Q.e(i) = conv(A.e(i));
    build_minor_polys(Q);
    return Q;
}

}  // namespace jz
