#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "formslab/domains.hpp"
#include "formslab/forms.hpp"
#include "formslab/pole_pair.hpp"
#include "formslab/volume_lab.hpp"

namespace formslab {

struct GrowthSample {
    double T = 0.0;
    double value = 0.0;
};

struct FitResult {
    double gamma = 0.0;
    PolePair pair;
    double residual = 0.0;  // RMS error of the log-model
    double T_min = 0.0;
    double T_max = 0.0;
    std::size_t samples_used = 0;
    // r <= n/d + 0.1 (smallest pole lies in (0, n/d]).
    bool pole_in_range = false;
    std::vector<double> residual_by_m;  // parallel to the candidate list
};

/// Fits V(T) = gamma T^n c^r |log c|^(m-1) with c = T^-alpha.
///
/// Samples with V <= 0 or T <= e^(1/alpha) are rejected; the smallest
/// `drop_fraction` of the remaining T values is discarded. For each
/// candidate m, log V - (m-1) log(alpha log T) is regressed on log T; the
/// slope s gives r = (n - s)/alpha and the intercept gives log gamma. The
/// candidate with the smallest RMS residual wins, ties going to smaller m.
/// Throws InsufficientDataError with fewer than 5 survivors.
FitResult fit_volume_growth(std::span<const GrowthSample> samples, int n, int d, double alpha,
                            const std::vector<int>& m_candidates, double drop_fraction = 0.2);

// gamma T^n c^r |log c|^(m-1) for a fitted model.
double growth_model(const FitResult& fit, int n, double alpha, double T);

struct CountVolumeRow {
    double T = 0.0;
    std::int64_t count = 0;
    double volume = 0.0;
    double volume_std_error = 0.0;  // zero when an analytic oracle supplied the volume
    double ratio = 0.0;
};

struct CountVolumeTable {
    std::vector<CountVolumeRow> rows;
    // max |N/V - 1| over the top half of the T grid; absent for a single row.
    std::optional<double> max_deviation;
};

// Exact counts against volumes for 0 < alpha < 1. Volumes come from
// `volume_oracle(T)` when given, Monte Carlo otherwise (seed varied per T).
CountVolumeTable compare_count_volume(const FormSystem& system, const Domain& domain, double alpha,
                                      const std::vector<double>& T_grid, const McConfig& mc,
                                      const std::function<double(double)>& volume_oracle = {});

}  // namespace formslab
