#include <cmath>
#include <random>

#include "doctest.h"
#include "formslab/domains.hpp"
#include "formslab/errors.hpp"

using namespace formslab;

namespace {

std::vector<double> random_unit(std::mt19937_64& rng, std::size_t n) {
    std::normal_distribution<double> g;
    std::vector<double> v(n);
    double s = 0.0;
    for (auto& c : v) {
        c = g(rng);
        s += c * c;
    }
    for (auto& c : v) c /= std::sqrt(s);
    return v;
}

Domain triangle() {
    // conv{(0,0), (2,0), (0,3)}
    return Domain::polytope(2, {{{-1, 0}, 0}, {{0, -1}, 0}, {{3, 2}, 6}});
}

}  // namespace

TEST_CASE("contains: closed membership") {
    const auto ball = Domain::ball(2, 1.0);
    CHECK(ball.contains(std::vector<double>{0, 0}));
    CHECK(ball.contains(std::vector<double>{1, 0}));
    CHECK_FALSE(ball.contains(std::vector<double>{1.0001, 0}));
    const auto square = Domain::cube(2, 0.0, 1.0);
    CHECK(square.contains(std::vector<double>{1, 1}));
    CHECK_FALSE(square.contains(std::vector<double>{1, 1.01}));
    CHECK(triangle().contains(std::vector<double>{1, 1.5}));
    CHECK_FALSE(triangle().contains(std::vector<double>{1, 1.6}));
    CHECK_THROWS_AS(ball.contains(std::vector<double>{0}), InputError);
}

TEST_CASE("dilate") {
    CHECK(Domain::ball(2, 1.0).dilate(10).radius() == 10.0);
    const auto box = Domain::cube(3, 0.0, 1.0).dilate(7.0);
    for (const auto& iv : box.intervals()) CHECK(iv == Interval{0.0, 7.0});
    CHECK_THROWS_AS(Domain::ball(2, 1.0).dilate(0.0), InputError);
    CHECK_THROWS_AS(Domain::ball(2, 1.0).dilate(-1.0), InputError);

    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (const auto& K : {Domain::ball(2, 1.3), Domain::cube(2, -0.5, 1.0), triangle()}) {
        for (int trial = 0; trial < 2000; ++trial) {
            std::vector<double> x{u(rng), u(rng)};
            const double T = 0.25 + 4.0 * std::abs(u(rng));
            std::vector<double> tx{T * x[0], T * x[1]};
            CHECK(K.dilate(T).contains(tx) == K.contains(x));
            // dilation composes
            const double a = 1.5;
            CHECK(K.dilate(a).dilate(T).contains(x) == K.dilate(a * T).contains(x));
        }
    }
}

TEST_CASE("bounding_box") {
    const auto bb = Domain::ball(2, 1.0).bounding_box();
    CHECK(bb[0] == Interval{-1, 1});
    CHECK(bb[1] == Interval{-1, 1});
    const auto box = Domain::box({{0, 2}, {-1, 1}});
    CHECK(box.bounding_box() == box.intervals());
    const auto tri = triangle().bounding_box();
    CHECK(tri[0].lo == doctest::Approx(0.0));
    CHECK(tri[0].hi == doctest::Approx(2.0));
    CHECK(tri[1].lo == doctest::Approx(0.0));
    CHECK(tri[1].hi == doctest::Approx(3.0));
}

TEST_CASE("polytope validation") {
    // Half-plane strip: unbounded.
    CHECK_THROWS_AS(Domain::polytope(2, {{{1, 0}, 1}, {{-1, 0}, 1}, {{0, 1}, 1}}), InputError);
    // Empty intersection.
    CHECK_THROWS_AS(Domain::polytope(2, {{{1, 0}, -1}, {{-1, 0}, -1}, {{0, 1}, 1}, {{0, -1}, 1}}), InputError);
    // Degenerate (segment).
    CHECK_THROWS_AS(Domain::polytope(2, {{{0, 1}, 0}, {{0, -1}, 0}, {{1, 0}, 1}, {{-1, 0}, 1}}), InputError);
    CHECK_THROWS_AS(Domain::ball(2, 0.0), InputError);
    CHECK_THROWS_AS(Domain::box({{1, 1}}), InputError);
}

TEST_CASE("support ranges") {
    const std::vector<double> v{0.6, 0.8};
    const auto s = Domain::cube(2, 0.0, 1.0).support(v);
    CHECK(s.lo == doctest::Approx(0.0));
    CHECK(s.hi == doctest::Approx(1.4));
    const auto b = Domain::ball(2, 2.0).support(v);
    CHECK(b.lo == doctest::Approx(-2.0));
    CHECK(b.hi == doctest::Approx(2.0));
    const auto t = triangle().support(v);
    CHECK(t.hi == doctest::Approx(2.4));
}

TEST_CASE("rotation_to") {
    const auto id = rotation_to(std::vector<double>{0, 0, 1});
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) CHECK(id(i, j) == (i == j ? 1.0 : 0.0));

    const auto r = rotation_to(std::vector<double>{1, 0});
    const auto re = r.apply(std::vector<double>{0, 1});
    CHECK(std::abs(re[0] - 1.0) <= 1e-9);
    CHECK(std::abs(re[1]) <= 1e-9);

    const auto flip = rotation_to(std::vector<double>{0, 0, -1});
    const auto fe = flip.apply(std::vector<double>{0, 0, 1});
    CHECK(std::abs(fe[2] + 1.0) <= 1e-12);

    CHECK_THROWS_AS(rotation_to(std::vector<double>{1, 1}), InputError);
}

TEST_CASE("property: rotations are orthogonal, det 1, and send e_n to v") {
    std::mt19937_64 rng(77);
    for (std::size_t n : {2u, 3u, 4u}) {
        for (int trial = 0; trial < 10000; ++trial) {
            const auto v = random_unit(rng, n);
            const auto R = rotation_to(v);
            std::vector<double> en(n, 0.0);
            en[n - 1] = 1.0;
            const auto img = R.apply(en);
            for (std::size_t i = 0; i < n; ++i) REQUIRE(std::abs(img[i] - v[i]) <= 1e-9);
            if (trial % 100 != 0) continue;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) {
                    double s = 0.0;
                    for (std::size_t k = 0; k < n; ++k) s += R(k, i) * R(k, j);
                    CHECK(std::abs(s - (i == j ? 1.0 : 0.0)) <= 1e-9);
                }
            // det via Gaussian elimination on a copy
            std::vector<double> a(n * n);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) a[i * n + j] = R(i, j);
            double det = 1.0;
            for (std::size_t c = 0; c < n; ++c) {
                std::size_t piv = c;
                for (std::size_t r = c + 1; r < n; ++r)
                    if (std::abs(a[r * n + c]) > std::abs(a[piv * n + c])) piv = r;
                if (piv != c) {
                    for (std::size_t k = 0; k < n; ++k) std::swap(a[c * n + k], a[piv * n + k]);
                    det = -det;
                }
                det *= a[c * n + c];
                for (std::size_t r = c + 1; r < n; ++r) {
                    const double f = a[r * n + c] / a[c * n + c];
                    for (std::size_t k = c; k < n; ++k) a[r * n + k] -= f * a[c * n + k];
                }
            }
            CHECK(std::abs(det - 1.0) <= 1e-9);
            // vectors orthogonal to both e_n and v are fixed
            if (n >= 3) {
                std::vector<double> w(n, 0.0);
                w[0] = v[1];
                w[1] = -v[0];  // orthogonal to v and to e_n
                const auto rw = R.apply(w);
                for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(rw[i] - w[i]) <= 1e-9);
            }
        }
    }
}

TEST_CASE("property: star-shaped bodies contain the segment to the origin") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(-2.0, 2.0), t01(0.0, 1.0);
    const auto hexagon = Domain::polytope(2, {{{1, 0}, 1}, {{-1, 0}, 1}, {{1, 1}, 1.5}, {{-1, -1}, 1.5}, {{0, 1}, 1}, {{0, -1}, 1}});
    for (const auto& K : {Domain::ball(2, 1.0), Domain::cube(2, -0.3, 1.0), hexagon}) {
        REQUIRE(K.star_shaped_about_origin());
        for (int trial = 0; trial < 5000; ++trial) {
            std::vector<double> x{u(rng), u(rng)};
            if (!K.contains(x)) continue;
            const double t = t01(rng);
            CHECK(K.contains(std::vector<double>{t * x[0], t * x[1]}));
        }
    }
    CHECK_FALSE(Domain::cube(2, 0.0, 1.0).star_shaped_about_origin());
}

TEST_CASE("JSON descriptors") {
    CHECK(domain_from_json("{\"ball\": 2.5}", 3).radius() == 2.5);
    CHECK(domain_from_json("{\"box\": [[0,1],[-1,2]]}").intervals()[1] == Interval{-1, 2});
    const auto tri = domain_from_json(R"({"polytope": [{"a":[-1,0],"b":0},{"a":[0,-1],"b":0},{"a":[3,2],"b":6}]})");
    CHECK(tri.kind() == Domain::Kind::Polytope);
    CHECK(domain_from_json(domain_to_json(tri)).vertices().size() == 3);
    CHECK_THROWS_AS(domain_from_json("{\"ball\": 1}"), InputError);
    CHECK_THROWS_AS(domain_from_json("{\"sphere\": 1}", 2), InputError);
}
