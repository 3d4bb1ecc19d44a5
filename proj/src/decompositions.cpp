#include "jz/decompositions.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace jz {

namespace {

double tol_or_default(double tol) { return tol < 0 ? default_tolerance() : tol; }

// Quaternionic partner J conj(v) of an eigenvector in the complex model.
CVec quaternion_partner(const CVec& v) {
    CVec w(v.size());
    for (int b = 0; b + 1 < v.size(); b += 2) {
        w(b) = std::conj(v(b + 1));
        w(b + 1) = -std::conj(v(b));
    }
    return w;
}

SpectralData spectral_matrix(const Algebra& A, const Vec& x) {
    SpectralData sd;
    CMat X = to_matrix(A, x);
    std::vector<std::pair<double, Vec>> pairs;
    if (A.family == Family::SymR) {
        Eigen::SelfAdjointEigenSolver<Mat> es(X.real());
        for (int i = 0; i < A.r; ++i) {
            Vec v = es.eigenvectors().col(i);
            CMat E = (v * v.transpose()).cast<cplx>();
            pairs.emplace_back(es.eigenvalues()(i), from_matrix(A, E));
        }
    } else if (A.family == Family::HermC) {
        Eigen::SelfAdjointEigenSolver<CMat> es(X);
        for (int i = 0; i < A.r; ++i) {
            CVec v = es.eigenvectors().col(i);
            pairs.emplace_back(es.eigenvalues()(i), from_matrix(A, v * v.adjoint()));
        }
    } else {
        Eigen::SelfAdjointEigenSolver<CMat> es(X);
        std::vector<CVec> chosen;
        for (int i = 0; i < 2 * A.r && static_cast<int>(pairs.size()) < A.r; ++i) {
            CVec v = es.eigenvectors().col(i);
            for (const auto& c : chosen) v -= c * c.dot(v);
            if (v.norm() < 0.5) continue;
            v.normalize();
            CVec w = quaternion_partner(v);
            w -= v * v.dot(w);
            w.normalize();
            chosen.push_back(v);
            chosen.push_back(w);
            double lam = (v.adjoint() * X * v)(0, 0).real();
            pairs.emplace_back(lam, from_matrix(A, v * v.adjoint() + w * w.adjoint()));
        }
        if (static_cast<int>(pairs.size()) != A.r)
            throw SolverError("spectral: quaternionic eigenspaces not resolved", 1.0);
    }
    std::stable_sort(pairs.begin(), pairs.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (auto& [lam, c] : pairs) {
        sd.eigenvalues.push_back(lam);
        sd.frame.idempotents.push_back(c);
    }
    return sd;
}

SpectralData spectral_spin(const Algebra& A, const Vec& x) {
    double lam;
    Vec u;
    to_spin_model(A, x, lam, u);
    double nu = u.norm();
    SpectralData sd;
    if (nu <= 1e-300) {
        sd.eigenvalues = {lam, lam};
        sd.frame = canonical_frame(A);
        return sd;
    }
    Vec dir = u / (2 * nu);
    sd.eigenvalues = {lam + nu, lam - nu};
    sd.frame.idempotents = {from_spin_model(A, 0.5, dir), from_spin_model(A, 0.5, Vec(-dir))};
    return sd;
}

Mat nilpotent_exp(const Mat& N) {
    const int n = static_cast<int>(N.rows());
    Mat out = Mat::Identity(n, n), term = Mat::Identity(n, n);
    for (int k = 1; k <= n; ++k) {
        term = term * N / double(k);
        if (term.norm() == 0) break;
        out += term;
    }
    return out;
}

}  // namespace

Frame canonical_frame(const Algebra& A) {
    Frame F;
    for (int i = 0; i < A.r; ++i) F.idempotents.push_back(frame_idempotent(A, i));
    return F;
}

void check_frame(const Algebra& A, const Frame& F, double tol) {
    tol = tol_or_default(tol);
    if (static_cast<int>(F.idempotents.size()) != A.r)
        throw InvariantViolation("frame must have r idempotents");
    Vec sum = Vec::Zero(A.n);
    for (int i = 0; i < A.r; ++i) {
        const Vec& ci = F.idempotents[i];
        A.check(ci);
        sum += ci;
        if (std::abs(trace(A, ci) - 1.0) > 1e3 * tol)
            throw InvariantViolation("frame idempotent is not primitive");
        for (int j = 0; j < A.r; ++j) {
            Vec p = jordan_mul(A, ci, F.idempotents[j]);
            Vec expect = i == j ? ci : Vec(Vec::Zero(A.n));
            if ((p - expect).norm() > 1e3 * tol)
                throw InvariantViolation("frame idempotents are not orthogonal idempotents");
        }
    }
    if ((sum - A.e).norm() > 1e3 * tol) throw InvariantViolation("frame does not sum to the unit");
}

SpectralData spectral(const Algebra& A, const Vec& x, double tol) {
    A.check(x);
    tol = tol_or_default(tol);
    SpectralData sd;
    switch (A.family) {
        case Family::Real:
            sd.eigenvalues = {x(0)};
            sd.frame = canonical_frame(A);
            break;
        case Family::Spin: sd = spectral_spin(A, x); break;
        default: sd = spectral_matrix(A, x); break;
    }
    sd.residual = (reconstruct(A, sd) - x).norm();
    if (sd.residual > tol * std::max(1.0, x.norm()))
        throw SolverError("spectral: reconstruction residual above tolerance", sd.residual);
    return sd;
}

Vec reconstruct(const Algebra& A, const SpectralData& sd) {
    Vec x = Vec::Zero(A.n);
    for (std::size_t i = 0; i < sd.eigenvalues.size(); ++i)
        x += sd.eigenvalues[i] * sd.frame.idempotents[i];
    return x;
}

RankSignature rank_signature(const Algebra& A, const Vec& x, double tol) {
    SpectralData sd = spectral(A, x);
    double thr = tol < 0 ? 1e-10 * x.norm() : tol;
    RankSignature rs;
    for (double lam : sd.eigenvalues) {
        double a = std::abs(lam);
        if (a > thr) {
            ++rs.rank;
            if (lam < 0) ++rs.label.q;
        } else if (a > 0) {
            rs.boundary_ambiguous = true;
        }
    }
    rs.label.p = rs.rank;
    return rs;
}

std::string orbit_name(const Algebra& A, const OrbitLabel& l) {
    if (l.p == A.r) return "Omega_" + std::to_string(l.q);
    return "S_{" + std::to_string(l.p) + "," + std::to_string(l.q) + "}";
}

Vec o_pq(const Algebra& A, int p, int q) {
    if (p < 0 || p > A.r || q < 0 || q > p) throw ParameterError("o_pq: need 0 <= q <= p <= r");
    Vec x = Vec::Zero(A.n);
    for (int i = 0; i < p - q; ++i) x(i) = 1;
    for (int i = 0; i < q; ++i) x(p - q + i) = -1;
    return x;
}

std::map<std::pair<int, int>, Mat> peirce_projectors(const Algebra& A, const Frame& F) {
    check_frame(A, F);
    std::map<std::pair<int, int>, Mat> out;
    std::vector<Mat> L;
    for (const auto& c : F.idempotents) L.push_back(L_op(A, c));
    for (int i = 0; i < A.r; ++i) {
        out[{i, i}] = P_op(A, F.idempotents[i]);
        for (int j = i + 1; j < A.r; ++j) out[{i, j}] = 4.0 * L[i] * L[j];
    }
    return out;
}

GroupElement frobenius(const Algebra& A, const Vec& z, int j, const Frame& F, double tol) {
    A.check(z);
    tol = tol_or_default(tol);
    if (j < 0 || j >= A.r) throw ParameterError("frobenius: index out of range");
    auto proj = peirce_projectors(A, F);
    Vec zin = Vec::Zero(A.n);
    for (int k = j + 1; k < A.r; ++k) zin += proj.at({j, k}) * z;
    if ((z - zin).norm() > tol * std::max(1.0, z.norm()))
        throw InvariantViolation("frobenius: parameter outside the admissible Peirce blocks");
    Mat N = 2.0 * box_op(A, z, F.idempotents[j]);
    GroupElement g = group_from_operator(nilpotent_exp(N), {"tau"});
    return g;
}

GroupElement frobenius(const Algebra& A, const Vec& z, int j) {
    return frobenius(A, z, j, canonical_frame(A));
}

GaussFactorization gauss_factor(const Algebra& A, const Vec& x, const Frame& F, double tol) {
    A.check(x);
    tol = tol_or_default(tol);
    auto proj = peirce_projectors(A, F);
    const double scale = std::max(x.norm(), 1e-300);
    GaussFactorization g;
    Vec rest = x;
    for (int j = 0; j < A.r; ++j) {
        const Vec& c = F.idempotents[j];
        double u = inner(A, rest, c);
        if (std::abs(u) <= tol * scale)
            throw ChartDomainError("gauss_factor: leading minor Delta_" + std::to_string(j + 1) +
                                       " vanishes",
                                   j + 1);
        g.diagonal.push_back(u);
        if (j == A.r - 1) {
            if ((rest - u * c).norm() > 1e3 * tol * scale)
                throw InvariantViolation("gauss_factor: elimination left a residual");
            break;
        }
        Vec z = Vec::Zero(A.n);
        for (int k = j + 1; k < A.r; ++k) z += proj.at({j, k}) * rest;
        z /= u;
        g.frobenius_params.push_back(z);
        Mat N = 2.0 * box_op(A, z, c);
        rest = rest - nilpotent_exp(N) * (u * c);
    }
    return g;
}

GaussFactorization gauss_factor(const Algebra& A, const Vec& x, double tol) {
    return gauss_factor(A, x, canonical_frame(A), tol);
}

Vec gauss_recompose(const Algebra& A, const GaussFactorization& g, const Frame& F) {
    Vec x = Vec::Zero(A.n);
    for (int k = 0; k < A.r; ++k) x += g.diagonal[k] * F.idempotents[k];
    for (int j = static_cast<int>(g.frobenius_params.size()) - 1; j >= 0; --j)
        x = nilpotent_exp(2.0 * box_op(A, g.frobenius_params[j], F.idempotents[j])) * x;
    return x;
}

double minor_k(const Algebra& A, const Vec& x, int k) {
    if (k < 1 || k > A.r) throw ParameterError("minor_k: k out of range");
    return A.minor_polys[k - 1].evaluate(x);
}

double dual_minor_k(const Algebra& A, const Vec& x, int k) {
    if (k < 1 || k > A.r) throw ParameterError("dual_minor_k: k out of range");
    return A.dual_minor_polys[k - 1].evaluate(x);
}

int orbit_index_from_minors(const double* minors, int r) {
    int changes = 0;
    double prev = 1.0;
    for (int k = 0; k < r; ++k) {
        if (minors[k] == 0.0) return -1;
        if ((minors[k] < 0) != (prev < 0)) ++changes;
        prev = minors[k];
    }
    return changes;
}

Algebra peirce_subalgebra(const Algebra& A) {
    if (A.r < 2) throw ParameterError("peirce_subalgebra: rank 1 has no proper subalgebra");
    if (A.r == 2) return make_algebra(Family::Real, 1);
    return make_algebra(A.family, A.r - 1);
}

std::vector<int> subalgebra_coords(const Algebra& A) {
    std::vector<int> idx;
    for (int i = 1; i < A.r; ++i) idx.push_back(i);
    for (int i = 1; i < A.r; ++i)
        for (int j = i + 1; j < A.r; ++j)
            for (int t = 0; t < A.d; ++t) idx.push_back(A.block_offset(i, j) + t);
    return idx;
}

std::vector<int> chart_w_coords(const Algebra& A) {
    std::vector<int> idx;
    for (int k = 1; k < A.r; ++k)
        for (int t = 0; t < A.d; ++t) idx.push_back(A.block_offset(0, k) + t);
    return idx;
}

Vec phi_chart(const Algebra& A, double u, const Vec& z, const Vec& v) {
    auto wi = chart_w_coords(A);
    auto vi = subalgebra_coords(A);
    if (z.size() != static_cast<int>(wi.size()) || v.size() != static_cast<int>(vi.size()))
        throw AlgebraMismatch("phi_chart: block sizes");
    Vec zf = Vec::Zero(A.n), x = Vec::Zero(A.n);
    for (std::size_t i = 0; i < wi.size(); ++i) zf(wi[i]) = z(i);
    for (std::size_t i = 0; i < vi.size(); ++i) x(vi[i]) = v(i);
    Mat T = nilpotent_exp(2.0 * box_op(A, zf, frame_idempotent(A, 0)));
    return T * (u * frame_idempotent(A, 0)) + x;
}

ChartPoint phi_chart_inverse(const Algebra& A, const Vec& x, double tol) {
    A.check(x);
    tol = tol_or_default(tol);
    if (A.r < 2) throw ParameterError("phi_chart: rank must be >= 2");
    ChartPoint cp;
    cp.u = x(0);
    if (std::abs(cp.u) <= tol * std::max(x.norm(), 1e-300))
        throw ChartDomainError("phi_chart_inverse: x_11 vanishes", 1);
    auto wi = chart_w_coords(A);
    auto vi = subalgebra_coords(A);
    Vec zf = Vec::Zero(A.n);
    cp.z.resize(wi.size());
    for (std::size_t i = 0; i < wi.size(); ++i) {
        cp.z(i) = x(wi[i]) / cp.u;
        zf(wi[i]) = cp.z(i);
    }
    Mat T = nilpotent_exp(2.0 * box_op(A, zf, frame_idempotent(A, 0)));
    Vec v = x - T * (cp.u * frame_idempotent(A, 0));
    cp.v.resize(vi.size());
    for (std::size_t i = 0; i < vi.size(); ++i) cp.v(i) = v(vi[i]);
    return cp;
}

}  // namespace jz
