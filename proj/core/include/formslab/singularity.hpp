#pragma once

#include <variant>
#include <vector>

#include "formslab/pole_pair.hpp"
#include "formslab/rational.hpp"

namespace formslab {

struct RootWithMultiplicity {
    Rational root;
    int multiplicity = 1;

    friend bool operator==(const RootWithMultiplicity&, const RootWithMultiplicity&) = default;
};

/// Roots of a Sato-Bernstein polynomial: distinct, strictly negative
/// rationals, sorted in decreasing order, each with multiplicity >= 1.
class RationalRootMultiset {
public:
    RationalRootMultiset() = default;
    // Merges repeated roots; throws InputError on a nonnegative root or a
    // nonpositive multiplicity.
    explicit RationalRootMultiset(std::vector<RootWithMultiplicity> roots);

    const std::vector<RootWithMultiplicity>& roots() const { return roots_; }
    bool empty() const { return roots_.empty(); }
    int degree() const;
    int multiplicity_of(const Rational& root) const;

    friend bool operator==(const RationalRootMultiset&, const RationalRootMultiset&) = default;

private:
    std::vector<RootWithMultiplicity> roots_;
};

// Monomial y^k: B(s) = prod_i prod_{j=1..k_i} (s + j/k_i).
RationalRootMultiset sb_monomial(const std::vector<int>& k);

// y_1^2 + ... + y_n^2: B(s) = (s + 1)(s + n/2).
RationalRootMultiset sb_sum_of_squares(int n);

struct InfiniteThreshold {
    friend bool operator==(const InfiniteThreshold&, const InfiniteThreshold&) = default;
};

using LctResult = std::variant<ExactPolePair, InfiniteThreshold>;

// r = min_i (h_i + 1)/k_i over i with k_i > 0, m = number of minimisers;
// infinite when k = 0.
LctResult lct_monomial_real(const std::vector<int>& k, const std::vector<int>& h);
LctResult lct_monomial_complex(const std::vector<int>& k, const std::vector<int>& h);

// (minus the largest root, its multiplicity).
ExactPolePair largest_root_data(const RationalRootMultiset& roots);

// (p, 1) for a smooth complete intersection of p forms; with
// `squared_form` set, the pair of P_F = ||F||^2, namely (p/2, 1).
ExactPolePair predicted_pair_smooth(int p, bool squared_form = false);

}  // namespace formslab
