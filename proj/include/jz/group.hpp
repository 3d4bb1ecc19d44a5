#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "jz/algebra.hpp"

namespace jz {

// Element of the structure group acting linearly on coordinates.
struct GroupElement {
    Mat op;
    double det_v = 1.0;             // Det of the operator, the character chi
    std::vector<std::string> word;  // generator labels, empty when not built from generators

    Vec apply(const Vec& x) const { return op * x; }
};

enum class GroupStyle { Diagonal, Frobenius, Automorphism, Word };

GroupStyle parse_group_style(const std::string& s);
std::string group_style_name(GroupStyle s);

GroupElement group_identity(const Algebra& A);
GroupElement group_scalar(const Algebra& A, double lambda);
GroupElement group_from_operator(const Mat& op, std::vector<std::string> word = {});
GroupElement compose(const GroupElement& g1, const GroupElement& g2);  // g1 g2
GroupElement group_inverse(const GroupElement& g);

// P(a) for a = sum a_i e_i over the canonical frame.
GroupElement quadratic_generator(const Algebra& A, const Vec& a);

// exp(D) for the inner derivation D = sum_t [L(a_t), L(b_t)].
GroupElement automorphism_generator(const Algebra& A, const std::vector<std::pair<Vec, Vec>>& pairs);

// Seeded generator draw. Words have `word_length` letters from the three
// generator styles; every letter preserves the cone Omega.
GroupElement random_group_element(const Algebra& A, std::uint64_t seed, GroupStyle style,
                                  int word_length = 4);

}  // namespace jz
