#include "formslab/asym_fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "formslab/errors.hpp"
#include "formslab/lattice_count.hpp"
#include "formslab/random.hpp"

namespace formslab {

namespace {

struct LineFit {
    double slope;
    double intercept;
    double rms;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    const auto k = static_cast<double>(x.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= k;
    my /= k;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (!(sxx > 0.0)) throw InsufficientDataError("fit: all samples share one T");
    const double slope = sxy / sxx;
    const double intercept = my - slope * mx;
    double sse = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (intercept + slope * x[i]);
        sse += r * r;
    }
    return {slope, intercept, std::sqrt(sse / k)};
}

}  // namespace

FitResult fit_volume_growth(std::span<const GrowthSample> samples, int n, int d, double alpha,
                            const std::vector<int>& m_candidates, double drop_fraction) {
    if (!(alpha > 0.0)) throw InputError("fit: alpha must be positive");
    if (n < 1 || d < 1) throw InputError("fit: n and d must be positive");
    if (m_candidates.empty()) throw InputError("fit: empty m candidate set");
    for (int m : m_candidates)
        if (m < 1) throw InputError("fit: m candidates must be positive integers");
    if (!(drop_fraction >= 0.0 && drop_fraction < 1.0)) throw InputError("fit: drop fraction must lie in [0, 1)");

    const double t_floor = std::exp(1.0 / alpha);
    std::vector<GrowthSample> kept;
    for (const auto& s : samples)
        if (s.value > 0.0 && std::isfinite(s.value) && s.T > t_floor && std::isfinite(s.T)) kept.push_back(s);
    std::sort(kept.begin(), kept.end(), [](const GrowthSample& a, const GrowthSample& b) { return a.T < b.T; });
    const auto drop = static_cast<std::size_t>(std::floor(drop_fraction * static_cast<double>(kept.size())));
    kept.erase(kept.begin(), kept.begin() + static_cast<std::ptrdiff_t>(drop));
    if (kept.size() < 5) throw InsufficientDataError("fit: fewer than 5 usable samples");

    std::vector<double> x;
    std::vector<double> loglog;
    std::vector<double> logv;
    for (const auto& s : kept) {
        x.push_back(std::log(s.T));
        loglog.push_back(std::log(alpha * std::log(s.T)));
        logv.push_back(std::log(s.value));
    }

    FitResult best;
    bool have = false;
    std::vector<double> y(x.size());
    for (int m : m_candidates) {
        for (std::size_t i = 0; i < x.size(); ++i) y[i] = logv[i] - (m - 1) * loglog[i];
        const LineFit line = least_squares(x, y);
        best.residual_by_m.push_back(line.rms);
        const bool better = !have || line.rms < best.residual - 1e-12 ||
                            (std::abs(line.rms - best.residual) <= 1e-12 && m < best.pair.m);
        if (better) {
            have = true;
            best.gamma = std::exp(line.intercept);
            best.pair = {(n - line.slope) / alpha, m};
            best.residual = line.rms;
        }
    }
    best.T_min = kept.front().T;
    best.T_max = kept.back().T;
    best.samples_used = kept.size();
    best.pole_in_range = best.pair.r <= static_cast<double>(n) / d + 0.1;
    return best;
}

double growth_model(const FitResult& fit, int n, double alpha, double T) {
    const double logc = alpha * std::log(T);
    return fit.gamma * std::pow(T, n) * std::pow(T, -alpha * fit.pair.r) * std::pow(logc, fit.pair.m - 1);
}

CountVolumeTable compare_count_volume(const FormSystem& system, const Domain& domain, double alpha,
                                      const std::vector<double>& T_grid, const McConfig& mc,
                                      const std::function<double(double)>& volume_oracle) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw InputError("compare_count_volume: need 0 < alpha < 1");
    if (T_grid.empty()) throw InputError("compare_count_volume: empty T grid");
    std::vector<double> grid = T_grid;
    std::sort(grid.begin(), grid.end());

    CountVolumeTable table;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double T = grid[i];
        CountVolumeRow row;
        row.T = T;
        row.count = count_inequality({system, domain, T, alpha, mc.threads});
        if (volume_oracle) {
            row.volume = volume_oracle(T);
        } else {
            McConfig sub = mc;
            sub.seed = derive_key(mc.seed, i);
            const MCEstimate est = volume_sublevel(system, domain, T, alpha, sub);
            row.volume = est.value;
            row.volume_std_error = est.std_error;
        }
        row.ratio = row.volume > 0.0 ? static_cast<double>(row.count) / row.volume : std::numeric_limits<double>::infinity();
        table.rows.push_back(row);
    }
    if (table.rows.size() > 1) {
        double worst = 0.0;
        for (std::size_t i = table.rows.size() / 2; i < table.rows.size(); ++i)
            worst = std::max(worst, std::abs(table.rows[i].ratio - 1.0));
        table.max_deviation = worst;
    }
    return table;
}

}  // namespace formslab
