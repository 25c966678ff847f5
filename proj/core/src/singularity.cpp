#include "formslab/singularity.hpp"

#include <algorithm>
#include <map>
#include <optional>

#include "formslab/errors.hpp"

namespace formslab {

RationalRootMultiset::RationalRootMultiset(std::vector<RootWithMultiplicity> roots) {
    std::map<Rational, int, std::greater<>> merged;
    for (const auto& r : roots) {
        if (!(r.root < Rational(0))) throw InputError("root multiset: roots must be strictly negative");
        if (r.multiplicity < 1) throw InputError("root multiset: multiplicities must be positive");
        merged[r.root] += r.multiplicity;
    }
    for (const auto& [root, mult] : merged) roots_.push_back({root, mult});
}

int RationalRootMultiset::degree() const {
    int d = 0;
    for (const auto& r : roots_) d += r.multiplicity;
    return d;
}

int RationalRootMultiset::multiplicity_of(const Rational& root) const {
    for (const auto& r : roots_)
        if (r.root == root) return r.multiplicity;
    return 0;
}

RationalRootMultiset sb_monomial(const std::vector<int>& k) {
    if (std::any_of(k.begin(), k.end(), [](int e) { return e < 0; }))
        throw InputError("sb_monomial: exponents must be nonnegative");
    if (std::all_of(k.begin(), k.end(), [](int e) { return e == 0; }))
        throw InputError("sb_monomial: the constant monomial has no Sato-Bernstein polynomial here");
    std::vector<RootWithMultiplicity> roots;
    for (int ki : k)
        for (int j = 1; j <= ki; ++j) roots.push_back({Rational(-j, ki), 1});
    return RationalRootMultiset(std::move(roots));
}

RationalRootMultiset sb_sum_of_squares(int n) {
    if (n < 1) throw InputError("sb_sum_of_squares: n must be positive");
    return RationalRootMultiset({{Rational(-1), 1}, {Rational(-n, 2), 1}});
}

namespace {

LctResult lct_monomial(const std::vector<int>& k, const std::vector<int>& h) {
    if (k.size() != h.size()) throw InputError("lct_monomial: k and h differ in length");
    for (std::size_t i = 0; i < k.size(); ++i)
        if (k[i] < 0 || h[i] < 0) throw InputError("lct_monomial: exponents must be nonnegative");
    std::optional<Rational> best;
    int count = 0;
    for (std::size_t i = 0; i < k.size(); ++i) {
        if (k[i] == 0) continue;  // ratio is +infinity
        const Rational ratio(h[i] + 1, k[i]);
        if (!best || ratio < *best) {
            best = ratio;
            count = 1;
        } else if (ratio == *best) {
            ++count;
        }
    }
    if (!best) return InfiniteThreshold{};
    return ExactPolePair{*best, count};
}

}  // namespace

LctResult lct_monomial_real(const std::vector<int>& k, const std::vector<int>& h) { return lct_monomial(k, h); }

LctResult lct_monomial_complex(const std::vector<int>& k, const std::vector<int>& h) { return lct_monomial(k, h); }

ExactPolePair largest_root_data(const RationalRootMultiset& roots) {
    if (roots.empty()) throw InputError("largest_root_data: empty root multiset");
    const auto& top = roots.roots().front();
    return {-top.root, top.multiplicity};
}

ExactPolePair predicted_pair_smooth(int p, bool squared_form) {
    if (p < 1) throw InputError("predicted_pair_smooth: p must be positive");
    return {squared_form ? Rational(p, 2) : Rational(p), 1};
}

}  // namespace formslab
