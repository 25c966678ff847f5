#pragma once

#include <cstdint>
#include <vector>

#include "formslab/forms.hpp"
#include "formslab/pole_pair.hpp"

namespace formslab {

/// Random element of SL_n(R): i.i.d. standard Gaussian entries, first
/// column negated if det < 0, then scaled by det^(-1/n). Draws with
/// |det| < 1e-6 or operator norm above `norm_bound` are rejected. The draw
/// is absolutely continuous, not Haar; almost-everywhere statements are
/// insensitive to the difference. Throws ConfigError after 10^4
/// consecutive rejections.
UnimodularMatrix sample_unimodular(std::size_t n, std::uint64_t seed, double norm_bound);

/// Is there m in Z^n with 1 <= ||m|| <= kappa eps^(-f_exponent) and
/// ||F(g m)|| < eps? Exhaustive over the ball. A single quadratic form is
/// searched line by line (solving for the last coordinate); other systems
/// are enumerated point by point. Throws BudgetError if the radius exceeds
/// 10^4.
bool uniform_approx_trial(const FormSystem& system, const UnimodularMatrix& g, double eps, double f_exponent,
                          double kappa);

struct TwistExperiment {
    FormSystem system;
    PolePair pair;
    std::vector<double> eps_schedule;  // decreasing
    std::vector<double> T_schedule;    // increasing
    std::size_t n_matrices = 200;
    double kappa = 10.0;
    double delta = 0.2;
    std::uint64_t seed = 42;
    double norm_bound = 10.0;
    unsigned threads = 1;
};

struct WilsonInterval {
    double lo = 0.0;
    double hi = 1.0;
};

// 95% Wilson score interval for a binomial proportion.
WilsonInterval wilson_interval(std::int64_t successes, std::int64_t total, double z = 1.959963984540054);

struct SuccessPoint {
    double eps = 0.0;
    std::int64_t successes = 0;
    std::int64_t total = 0;
    double fraction = 0.0;
    WilsonInterval interval;
};

// Matrix i is sample_unimodular(n, derive_key(seed, i), norm_bound); the
// same matrices are used at every eps.
std::vector<UnimodularMatrix> experiment_matrices(const TwistExperiment& exp);
std::vector<SuccessPoint> success_curve(const TwistExperiment& exp, double f_exponent);

struct TwistedCountRow {
    double T = 0.0;
    std::int64_t count = 0;
    double prediction = 0.0;  // the bracketed growth law with gamma = 1
    double normalized = 0.0;  // count / prediction
};

// Counts a < ||F(g m)|| <= b over ||m|| <= T against
// T^(n - r d) (b^r |log(b/T^d)|^(m-1) - a^r |log(a/T^d)|^(m-1)).
// Requires 0 <= a < b and r < n/d.
std::vector<TwistedCountRow> twisted_count_series(const FormSystem& system, const UnimodularMatrix& g, double a,
                                                  double b, const std::vector<double>& T_grid, const PolePair& pair,
                                                  unsigned threads = 1);

// (max - min) / mean.
double relative_spread(const std::vector<double>& values);

}  // namespace formslab
