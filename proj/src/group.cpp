#include "jz/group.hpp"

#include <cmath>
#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include "jz/decompositions.hpp"

namespace jz {

GroupStyle parse_group_style(const std::string& s) {
    if (s == "diagonal") return GroupStyle::Diagonal;
    if (s == "frobenius") return GroupStyle::Frobenius;
    if (s == "automorphism") return GroupStyle::Automorphism;
    if (s == "word") return GroupStyle::Word;
    throw ParameterError("unknown group style '" + s + "'");
}

std::string group_style_name(GroupStyle s) {
    switch (s) {
        case GroupStyle::Diagonal: return "diagonal";
        case GroupStyle::Frobenius: return "frobenius";
        case GroupStyle::Automorphism: return "automorphism";
        case GroupStyle::Word: return "word";
    }
    return "?";
}

GroupElement group_from_operator(const Mat& op, std::vector<std::string> word) {
    GroupElement g;
    g.op = op;
    g.det_v = op.determinant();
    g.word = std::move(word);
    return g;
}

GroupElement group_identity(const Algebra& A) { return group_from_operator(Mat::Identity(A.n, A.n)); }

GroupElement group_scalar(const Algebra& A, double lambda) {
    return group_from_operator(lambda * Mat::Identity(A.n, A.n), {"scalar"});
}

GroupElement compose(const GroupElement& g1, const GroupElement& g2) {
    GroupElement g;
    g.op = g1.op * g2.op;
    g.det_v = g1.det_v * g2.det_v;
    g.word = g1.word;
    g.word.insert(g.word.end(), g2.word.begin(), g2.word.end());
    return g;
}

GroupElement group_inverse(const GroupElement& g) {
    GroupElement h;
    h.op = g.op.inverse();
    h.det_v = 1.0 / g.det_v;
    for (auto it = g.word.rbegin(); it != g.word.rend(); ++it) h.word.push_back(*it + "^-1");
    return h;
}

GroupElement quadratic_generator(const Algebra& A, const Vec& a) {
    if (a.size() != A.r) throw AlgebraMismatch("quadratic_generator: need r diagonal entries");
    Vec x = Vec::Zero(A.n);
    x.head(A.r) = a;
    return group_from_operator(P_op(A, x), {"P"});
}

GroupElement automorphism_generator(const Algebra& A, const std::vector<std::pair<Vec, Vec>>& pairs) {
    Mat D = Mat::Zero(A.n, A.n);
    for (const auto& [a, b] : pairs) {
        Mat La = L_op(A, a), Lb = L_op(A, b);
        D += La * Lb - Lb * La;
    }
    Mat K = D.exp();
    GroupElement g = group_from_operator(K, {"k"});
    return g;
}

namespace {

GroupElement draw(const Algebra& A, std::mt19937_64& rng, GroupStyle style) {
    std::normal_distribution<double> N(0.0, 1.0);
    switch (style) {
        case GroupStyle::Diagonal: {
            Vec a(A.r);
            for (int i = 0; i < A.r; ++i) a(i) = std::exp(0.4 * N(rng));
            return quadratic_generator(A, a);
        }
        case GroupStyle::Frobenius: {
            if (A.r < 2) return group_identity(A);
            std::uniform_int_distribution<int> J(0, A.r - 2);
            int j = J(rng);
            Vec z = Vec::Zero(A.n);
            for (int k = j + 1; k < A.r; ++k)
                for (int t = 0; t < A.d; ++t) z(A.block_offset(j, k) + t) = 0.5 * N(rng);
            return frobenius(A, z, j);
        }
        case GroupStyle::Automorphism: {
            std::vector<std::pair<Vec, Vec>> pairs;
            for (int t = 0; t < 2; ++t) {
                Vec a(A.n), b(A.n);
                for (int i = 0; i < A.n; ++i) a(i) = 0.6 * N(rng);
                for (int i = 0; i < A.n; ++i) b(i) = 0.6 * N(rng);
                pairs.emplace_back(a, b);
            }
            return automorphism_generator(A, pairs);
        }
        case GroupStyle::Word: break;
    }
    return group_identity(A);
}

}  // namespace

GroupElement random_group_element(const Algebra& A, std::uint64_t seed, GroupStyle style, int word_length) {
    std::mt19937_64 rng(seed);
    if (style != GroupStyle::Word) return draw(A, rng, style);
    GroupElement g = group_identity(A);
    std::uniform_int_distribution<int> pick(0, 2);
    for (int i = 0; i < word_length; ++i) {
        GroupStyle s = static_cast<GroupStyle>(pick(rng));
        g = compose(g, draw(A, rng, s));
    }
    return g;
}

}  // namespace jz
