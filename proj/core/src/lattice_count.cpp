#include "formslab/lattice_count.hpp"

#include <cmath>
#include <vector>

#include "formslab/checked.hpp"
#include "formslab/errors.hpp"
#include "formslab/parallel.hpp"

namespace formslab {

namespace {

struct IntRange {
    std::int64_t lo;
    std::int64_t hi;  // inclusive; empty when hi < lo
};

std::vector<IntRange> integer_ranges(const std::vector<Interval>& box) {
    std::vector<IntRange> out;
    out.reserve(box.size());
    for (const auto& iv : box) {
        const double lo = std::ceil(iv.lo);
        const double hi = std::floor(iv.hi);
        if (!(std::abs(lo) < 9.0e18) || !(std::abs(hi) < 9.0e18))
            throw OverflowError("lattice count: coordinate range exceeds 64 bits");
        out.push_back({static_cast<std::int64_t>(lo), static_cast<std::int64_t>(hi)});
    }
    return out;
}

// Counts points of the integer box satisfying `accept`, slab by slab along
// the last coordinate.
template <class Accept>
std::int64_t count_points(const std::vector<IntRange>& ranges, unsigned threads, const Accept& accept) {
    std::int64_t total_points = 1;
    for (const auto& r : ranges) {
        if (r.hi < r.lo) return 0;
        total_points = checked_mul(total_points, checked_add(checked_sub(r.hi, r.lo), 1), "lattice box size");
    }
    const std::size_t n = ranges.size();
    const IntRange last = ranges.back();
    const auto n_slabs = static_cast<std::size_t>(last.hi - last.lo + 1);

    const auto partial = parallel_map<std::int64_t>(n_slabs, threads, [&](std::size_t slab) {
        std::vector<double> x(n);
        std::vector<std::int64_t> m(n);
        for (std::size_t i = 0; i + 1 < n; ++i) m[i] = ranges[i].lo;
        m[n - 1] = last.lo + static_cast<std::int64_t>(slab);
        std::int64_t count = 0;
        for (;;) {
            for (std::size_t i = 0; i < n; ++i) x[i] = static_cast<double>(m[i]);
            if (accept(x)) ++count;
            // odometer over the first n - 1 coordinates
            std::size_t i = 0;
            for (; i + 1 < n; ++i) {
                if (m[i] < ranges[i].hi) {
                    ++m[i];
                    break;
                }
                m[i] = ranges[i].lo;
            }
            if (i + 1 >= n) break;
        }
        return count;
    });

    std::int64_t total = 0;
    for (const auto c : partial) total = checked_add(total, c, "lattice count");
    return total;
}

}  // namespace

double power_threshold(double T, double exponent) {
    const double v = std::pow(T, exponent);
    const double r = std::round(v);
    if (r != 0.0 && std::abs(v - r) <= 1e-12 * std::abs(r)) return r;
    return v;
}

std::int64_t count_inequality(const CountRequest& req) {
    if (req.system.n() != req.domain.dim()) throw InputError("count_inequality: form and domain dimensions differ");
    if (!(req.T >= 1.0) || !std::isfinite(req.T)) throw InputError("count_inequality: T must be finite and >= 1");
    if (!std::isfinite(req.alpha)) throw InputError("count_inequality: alpha must be finite");
    if (req.threads == 0) throw InputError("count_inequality: threads must be positive");

    const Domain body = req.domain.dilate(req.T);
    const double threshold = power_threshold(req.T, static_cast<double>(req.system.degree()) - req.alpha);
    const auto ranges = integer_ranges(body.bounding_box());
    return count_points(ranges, req.threads, [&](std::span<const double> x) {
        return body.contains(x) && system_norm(req.system, x) <= threshold;
    });
}

std::int64_t count_twisted(const FormSystem& system, const UnimodularMatrix& g, double a, double b, double T,
                           unsigned threads) {
    if (!(a < b)) throw InputError("count_twisted: need a < b");
    if (!(T >= 1.0) || !std::isfinite(T)) throw InputError("count_twisted: T must be finite and >= 1");
    if (threads == 0) throw InputError("count_twisted: threads must be positive");
    if (g.dim() != system.n()) throw InputError("count_twisted: matrix and form dimensions differ");

    const FormSystem twisted = compose(system, g);
    const Domain ball = Domain::ball(system.n(), T);
    const auto ranges = integer_ranges(ball.bounding_box());
    return count_points(ranges, threads, [&](std::span<const double> x) {
        if (!ball.contains(x)) return false;
        const double v = system_norm(twisted, x);
        return a < v && v <= b;
    });
}

}  // namespace formslab
