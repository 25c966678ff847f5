#pragma once

#include <cstdint>
#include <vector>

#include "formslab/domains.hpp"
#include "formslab/forms.hpp"

namespace formslab {

/// Monte Carlo estimate with its standard error. `std_error` is the sample
/// standard deviation of the hit indicator over sqrt(n_samples), scaled by
/// the reference (bounding box) volume.
struct MCEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::int64_t n_samples = 0;
    std::uint64_t seed = 0;

    friend bool operator==(const MCEstimate&, const MCEstimate&) = default;
};

struct McConfig {
    std::int64_t n_samples = 1'000'000;
    std::uint64_t seed = 1;
    unsigned threads = 1;
};

// Vol{x in K : ||F(x)|| <= threshold} by uniform sampling of K's bounding box.
MCEstimate volume_below(const FormSystem& system, const Domain& domain, double threshold, const McConfig& mc);

// Vol{x in T.K : ||F(x)|| <= T^(d - alpha)}.
MCEstimate volume_sublevel(const FormSystem& system, const Domain& domain, double T, double alpha,
                           const McConfig& mc);

/// (n-1)-volume of {x in K with v.x = sigma : ||F(x)|| <= eps}.
///
/// Points of the slice are written x = R_v (y, sigma) with y sampled
/// uniformly from a box enclosing the slice of K's circumscribed ball.
MCEstimate slice_volume(const FormSystem& system, const Domain& domain, std::span<const double> v, double sigma,
                        double eps, const McConfig& mc);

struct FlatnessProfile {
    std::vector<double> eps_grid;           // strictly decreasing
    std::vector<MCEstimate> M_values;       // largest sampled slice per eps
    std::vector<std::vector<double>> argmax_direction;
    std::vector<double> argmax_offset;
    std::size_t directions_sampled = 0;
    std::size_t offsets_sampled = 0;
};

// For every eps: max over directions (the 2n signed coordinate directions
// plus `n_directions` uniform random ones) and offsets (a uniform grid of
// `n_offsets` points over the support range, plus sigma = 0 whenever it lies
// in that range) of slice_volume.
FlatnessProfile flatness_profile(const FormSystem& system, const Domain& domain, const std::vector<double>& eps_grid,
                                 std::size_t n_directions, std::size_t n_offsets, const McConfig& mc);

struct FlatnessFit {
    double q = 0.0;
    double half_width = 0.0;       // 2 x standard error of the slope
    std::size_t points_used = 0;
    double pointwise_ratio = 0.0;  // log M / log eps at the smallest usable eps
    bool ratio_disagrees = false;  // |pointwise_ratio - q| > 0.1
};

// Least-squares slope of log M against log eps over the smallest-eps half of
// the grid (never fewer than 4 points). Points with M = 0 are dropped;
// throws InsufficientDataError when fewer than 4 remain.
FlatnessFit flatness_exponent(const FlatnessProfile& profile);

}  // namespace formslab
