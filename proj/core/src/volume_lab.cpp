#include "formslab/volume_lab.hpp"

#include <algorithm>
#include <cmath>

#include "formslab/errors.hpp"
#include "formslab/lattice_count.hpp"
#include "formslab/parallel.hpp"
#include "formslab/random.hpp"

namespace formslab {

namespace {

constexpr std::int64_t kBatch = 1 << 15;

// Uniform sampling of `box`; hit(i-th point) decides membership. Sample i
// always consumes the stream keyed by (seed, i).
template <class Hit>
MCEstimate box_monte_carlo(const std::vector<Interval>& box, const McConfig& mc, const Hit& hit) {
    if (mc.n_samples < 1000) throw InputError("Monte Carlo: need at least 1000 samples");
    if (mc.threads == 0) throw InputError("Monte Carlo: threads must be positive");
    double box_volume = 1.0;
    for (const auto& iv : box) box_volume *= iv.length();
    if (!(box_volume > 0.0) || !std::isfinite(box_volume)) throw InputError("Monte Carlo: bounding box has zero volume");

    const std::size_t n = box.size();
    const auto n_batches = static_cast<std::size_t>((mc.n_samples + kBatch - 1) / kBatch);
    const auto hits = parallel_map<std::int64_t>(n_batches, mc.threads, [&](std::size_t b) {
        const std::int64_t begin = static_cast<std::int64_t>(b) * kBatch;
        const std::int64_t end = std::min(mc.n_samples, begin + kBatch);
        std::vector<double> x(n);
        std::vector<double> scratch;
        std::int64_t h = 0;
        for (std::int64_t i = begin; i < end; ++i) {
            CounterRng rng(mc.seed, static_cast<std::uint64_t>(i));
            for (std::size_t j = 0; j < n; ++j) x[j] = rng.uniform(box[j].lo, box[j].hi);
            if (hit(std::span<const double>(x), scratch)) ++h;
        }
        return h;
    });

    std::int64_t total = 0;
    for (auto h : hits) total += h;
    const auto N = static_cast<double>(mc.n_samples);
    const auto H = static_cast<double>(total);
    const double variance = std::max(0.0, (H - H * H / N) / (N - 1.0));
    return {box_volume * H / N, box_volume * std::sqrt(variance / N), mc.n_samples, mc.seed};
}

void require_unit(std::span<const double> v) {
    double s = 0.0;
    for (double c : v) s += c * c;
    if (!(std::abs(std::sqrt(s) - 1.0) <= 1e-9)) throw InputError("direction must be a unit vector");
}

}  // namespace

MCEstimate volume_below(const FormSystem& system, const Domain& domain, double threshold, const McConfig& mc) {
    if (system.n() != domain.dim()) throw InputError("volume: form and domain dimensions differ");
    return box_monte_carlo(domain.bounding_box(), mc, [&](std::span<const double> x, std::vector<double>&) {
        return domain.contains(x) && system_norm(system, x) <= threshold;
    });
}

MCEstimate volume_sublevel(const FormSystem& system, const Domain& domain, double T, double alpha,
                           const McConfig& mc) {
    if (!(T > 0.0) || !std::isfinite(T)) throw InputError("volume: T must be positive and finite");
    const double threshold = power_threshold(T, static_cast<double>(system.degree()) - alpha);
    return volume_below(system, domain.dilate(T), threshold, mc);
}

MCEstimate slice_volume(const FormSystem& system, const Domain& domain, std::span<const double> v, double sigma,
                        double eps, const McConfig& mc) {
    const std::size_t n = domain.dim();
    if (system.n() != n || v.size() != n) throw InputError("slice: dimension mismatch");
    if (n < 2) throw InputError("slice: needs dimension at least 2");
    require_unit(v);
    if (!(eps > 0.0)) throw InputError("slice: eps must be positive");

    const Rotation rot = rotation_to(v);
    const auto center = domain.enclosing_center();
    const double radius = domain.enclosing_radius();
    double height = -sigma;
    for (std::size_t i = 0; i < n; ++i) height += v[i] * center[i];
    const double r2 = radius * radius - height * height;
    if (!(r2 > 0.0)) return {0.0, 0.0, mc.n_samples, mc.seed};
    const double half = std::sqrt(r2);

    // Columns of R other than the last span the slice directions.
    std::vector<Interval> ybox(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        double c = 0.0;
        for (std::size_t k = 0; k < n; ++k) c += rot(k, i) * center[k];
        ybox[i] = {c - half, c + half};
    }

    return box_monte_carlo(ybox, mc, [&](std::span<const double> y, std::vector<double>& x) {
        x.resize(n);
        for (std::size_t k = 0; k < n; ++k) {
            double s = sigma * v[k];
            for (std::size_t i = 0; i + 1 < n; ++i) s += rot(k, i) * y[i];
            x[k] = s;
        }
        return domain.contains(x) && system_norm(system, x) <= eps;
    });
}

FlatnessProfile flatness_profile(const FormSystem& system, const Domain& domain, const std::vector<double>& eps_grid,
                                 std::size_t n_directions, std::size_t n_offsets, const McConfig& mc) {
    if (eps_grid.empty()) throw InputError("flatness: empty eps grid");
    for (std::size_t i = 0; i < eps_grid.size(); ++i) {
        if (!(eps_grid[i] > 0.0)) throw InputError("flatness: eps must be positive");
        if (i > 0 && !(eps_grid[i] < eps_grid[i - 1])) throw InputError("flatness: eps grid must strictly decrease");
    }
    if (n_offsets == 0) throw InputError("flatness: need at least one offset");
    const std::size_t n = domain.dim();

    std::vector<std::vector<double>> directions;
    for (std::size_t i = 0; i < n; ++i)
        for (double sgn : {1.0, -1.0}) {
            std::vector<double> e(n, 0.0);
            e[i] = sgn;
            directions.push_back(std::move(e));
        }
    // Directions come from their own stream so they do not overlap sample streams.
    CounterRng dir_rng(derive_key(mc.seed, 0xF1A7), 0);
    for (std::size_t k = 0; k < n_directions; ++k) {
        std::vector<double> g(n);
        double norm = 0.0;
        while (norm < 1e-12) {
            norm = 0.0;
            for (auto& c : g) {
                c = dir_rng.normal();
                norm += c * c;
            }
            norm = std::sqrt(norm);
        }
        for (auto& c : g) c /= norm;
        directions.push_back(std::move(g));
    }

    struct Slice {
        std::size_t dir;
        double sigma;
    };
    std::vector<Slice> slices;
    for (std::size_t d = 0; d < directions.size(); ++d) {
        const Interval range = domain.support(directions[d]);
        std::vector<double> offsets;
        if (n_offsets == 1) {
            offsets.push_back(0.5 * (range.lo + range.hi));
        } else {
            for (std::size_t k = 0; k < n_offsets; ++k)
                offsets.push_back(range.lo + range.length() * static_cast<double>(k) / static_cast<double>(n_offsets - 1));
        }
        if (range.lo <= 0.0 && 0.0 <= range.hi && std::find(offsets.begin(), offsets.end(), 0.0) == offsets.end())
            offsets.push_back(0.0);
        for (double s : offsets) slices.push_back({d, s});
    }

    FlatnessProfile profile;
    profile.eps_grid = eps_grid;
    profile.directions_sampled = directions.size();
    profile.offsets_sampled = n_offsets;

    const std::size_t per_eps = slices.size();
    const auto estimates = parallel_map<MCEstimate>(eps_grid.size() * per_eps, mc.threads, [&](std::size_t task) {
        const std::size_t e = task / per_eps;
        const Slice& s = slices[task % per_eps];
        McConfig sub = mc;
        sub.threads = 1;
        sub.seed = derive_key(mc.seed, task + 1);
        return slice_volume(system, domain, directions[s.dir], s.sigma, eps_grid[e], sub);
    });

    for (std::size_t e = 0; e < eps_grid.size(); ++e) {
        std::size_t best = e * per_eps;
        for (std::size_t k = e * per_eps; k < (e + 1) * per_eps; ++k)
            if (estimates[k].value > estimates[best].value) best = k;
        profile.M_values.push_back(estimates[best]);
        profile.argmax_direction.push_back(directions[slices[best % per_eps].dir]);
        profile.argmax_offset.push_back(slices[best % per_eps].sigma);
    }
    return profile;
}

FlatnessFit flatness_exponent(const FlatnessProfile& profile) {
    if (profile.eps_grid.size() != profile.M_values.size()) throw InputError("flatness fit: grid and values differ in length");
    // Survivors ordered from smallest eps upwards.
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = profile.eps_grid.size(); i-- > 0;)
        if (profile.M_values[i].value > 0.0) pts.emplace_back(std::log(profile.eps_grid[i]), std::log(profile.M_values[i].value));
    if (pts.size() < 4) throw InsufficientDataError("flatness fit: fewer than 4 usable grid points");
    const std::size_t k = std::max<std::size_t>(4, (pts.size() + 1) / 2);
    pts.resize(k);

    double mx = 0.0;
    double my = 0.0;
    for (const auto& [x, y] : pts) {
        mx += x;
        my += y;
    }
    mx /= static_cast<double>(k);
    my /= static_cast<double>(k);
    double sxx = 0.0;
    double sxy = 0.0;
    for (const auto& [x, y] : pts) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    if (!(sxx > 0.0)) throw InsufficientDataError("flatness fit: degenerate eps grid");
    const double slope = sxy / sxx;
    double sse = 0.0;
    for (const auto& [x, y] : pts) {
        const double r = y - (my + slope * (x - mx));
        sse += r * r;
    }
    const double se = std::sqrt(sse / static_cast<double>(k - 2) / sxx);

    FlatnessFit fit;
    fit.q = slope;
    fit.half_width = 2.0 * se;
    fit.points_used = k;
    fit.pointwise_ratio = pts.front().second / pts.front().first;
    fit.ratio_disagrees = std::abs(fit.pointwise_ratio - fit.q) > 0.1;
    return fit;
}

}  // namespace formslab
