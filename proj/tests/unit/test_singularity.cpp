#include <functional>

#include "doctest.h"
#include "formslab/errors.hpp"
#include "formslab/singularity.hpp"

using namespace formslab;

namespace {

using R = Rational;

RationalRootMultiset expect(std::vector<RootWithMultiplicity> r) { return RationalRootMultiset(std::move(r)); }

// Calls fn on every vector in {lo..hi}^n.
void each_vector(int n, int lo, int hi, const std::function<void(const std::vector<int>&)>& fn) {
    std::vector<int> k(static_cast<std::size_t>(n), lo);
    for (;;) {
        fn(k);
        int i = 0;
        for (; i < n; ++i) {
            if (k[static_cast<std::size_t>(i)] < hi) {
                ++k[static_cast<std::size_t>(i)];
                break;
            }
            k[static_cast<std::size_t>(i)] = lo;
        }
        if (i == n) return;
    }
}

// Polynomial with roots `roots` expanded as exact coefficients, ascending.
std::vector<R> expand(const RationalRootMultiset& roots) {
    std::vector<R> c{R(1)};
    for (const auto& [root, mult] : roots.roots())
        for (int k = 0; k < mult; ++k) {
            std::vector<R> next(c.size() + 1, R(0));
            for (std::size_t i = 0; i < c.size(); ++i) {
                next[i + 1] = next[i + 1] + c[i];
                next[i] = next[i] - root * c[i];
            }
            c = next;
        }
    return c;
}

}  // namespace

TEST_CASE("sb_monomial") {
    CHECK(sb_monomial({2}) == expect({{R(-1, 2), 1}, {R(-1), 1}}));
    CHECK(sb_monomial({1, 1}) == expect({{R(-1), 2}}));
    CHECK(sb_monomial({2, 3}) == expect({{R(-1, 3), 1}, {R(-1, 2), 1}, {R(-2, 3), 1}, {R(-1), 2}}));
    CHECK(sb_monomial({2, 3}).degree() == 5);
    CHECK(sb_monomial({0, 2}) == sb_monomial({2}));
    CHECK_THROWS_AS(sb_monomial({0, 0}), InputError);
    CHECK_THROWS_AS(sb_monomial({}), InputError);
    CHECK_THROWS_AS(sb_monomial({-1, 2}), InputError);

    // roots sorted descending
    const auto r = sb_monomial({4, 6}).roots();
    for (std::size_t i = 1; i < r.size(); ++i) CHECK(r[i].root < r[i - 1].root);
}

TEST_CASE("sb_monomial as a product: (s+1/2)(s+1) for y^2") {
    const auto c = expand(sb_monomial({2}));
    CHECK(c == std::vector<R>{R(1, 2), R(3, 2), R(1)});
}

TEST_CASE("sb_sum_of_squares") {
    CHECK(sb_sum_of_squares(3) == expect({{R(-1), 1}, {R(-3, 2), 1}}));
    CHECK(sb_sum_of_squares(2) == expect({{R(-1), 2}}));
    CHECK(sb_sum_of_squares(4) == expect({{R(-1), 1}, {R(-2), 1}}));
    CHECK(sb_sum_of_squares(1) == expect({{R(-1, 2), 1}, {R(-1), 1}}));
    CHECK(sb_sum_of_squares(1) == sb_monomial({2}));
    CHECK_THROWS_AS(sb_sum_of_squares(0), InputError);
}

TEST_CASE("RationalRootMultiset validation") {
    CHECK_THROWS_AS(expect({{R(0), 1}}), InputError);
    CHECK_THROWS_AS(expect({{R(1, 2), 1}}), InputError);
    CHECK_THROWS_AS(expect({{R(-1), 0}}), InputError);
    CHECK(expect({{R(-1), 1}, {R(-1), 2}}).multiplicity_of(R(-1)) == 3);
}

TEST_CASE("lct monomial examples") {
    CHECK(lct_monomial_real({2, 2}, {0, 0}) == LctResult{ExactPolePair{R(1, 2), 2}});
    CHECK(lct_monomial_real({1, 0}, {0, 0}) == LctResult{ExactPolePair{R(1), 1}});
    CHECK(lct_monomial_real({3}, {2}) == LctResult{ExactPolePair{R(1), 1}});
    CHECK(lct_monomial_complex({2, 4}, {0, 0}) == LctResult{ExactPolePair{R(1, 4), 1}});
    CHECK(lct_monomial_complex({1, 1, 1, 1}, {0, 0, 0, 0}) == LctResult{ExactPolePair{R(1), 4}});
    CHECK(std::holds_alternative<InfiniteThreshold>(lct_monomial_complex({0, 0}, {0, 0})));
    CHECK_THROWS_AS(lct_monomial_real({1, 2}, {0}), InputError);
}

TEST_CASE("largest_root_data and predicted pairs") {
    CHECK(largest_root_data(sb_monomial({2, 2})) == ExactPolePair{R(1, 2), 2});
    CHECK(LctResult{largest_root_data(sb_monomial({2, 2}))} == lct_monomial_complex({2, 2}, {0, 0}));
    CHECK(LctResult{largest_root_data(sb_monomial({2, 4}))} == lct_monomial_complex({2, 4}, {0, 0}));
    CHECK(largest_root_data(sb_monomial({1})) == ExactPolePair{R(1), 1});
    CHECK_THROWS_AS(largest_root_data(RationalRootMultiset{}), InputError);

    CHECK(predicted_pair_smooth(1) == ExactPolePair{R(1), 1});
    CHECK(predicted_pair_smooth(2) == ExactPolePair{R(2), 1});
    CHECK(predicted_pair_smooth(3, true) == ExactPolePair{R(3, 2), 1});
    CHECK_THROWS_AS(predicted_pair_smooth(0), InputError);
}

TEST_CASE("property: largest root data equals the complex monomial threshold") {
    int checked = 0;
    for (int n = 1; n <= 3; ++n)
        each_vector(n, 1, 6, [&](const std::vector<int>& k) {
            const auto lhs = LctResult{largest_root_data(sb_monomial(k))};
            const auto rhs = lct_monomial_complex(k, std::vector<int>(k.size(), 0));
            CHECK(lhs == rhs);
            ++checked;
        });
    CHECK(checked == 6 + 36 + 216);
}

TEST_CASE("property: roots negative, -1 always present, threshold in range") {
    for (int n = 1; n <= 3; ++n)
        each_vector(n, 0, 5, [&](const std::vector<int>& k) {
            int deg = 0;
            for (int e : k) deg += e;
            if (deg == 0) return;
            const auto roots = sb_monomial(k);
            for (const auto& [root, mult] : roots.roots()) {
                CHECK(root < R(0));
                CHECK(mult >= 1);
            }
            CHECK(roots.multiplicity_of(R(-1)) >= 1);
            CHECK(roots.degree() == deg);

            const auto lct = std::get<ExactPolePair>(lct_monomial_real(k, std::vector<int>(k.size(), 0)));
            CHECK(R(0) < lct.r);
            CHECK(lct.r <= R(n, deg));
        });
    for (int n = 1; n <= 10; ++n) {
        const auto sos = sb_sum_of_squares(n);
        for (const auto& [root, mult] : sos.roots()) CHECK(root < R(0));
    }
}
