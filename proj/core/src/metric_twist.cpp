#include "formslab/metric_twist.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "formslab/errors.hpp"
#include "formslab/lattice_count.hpp"
#include "formslab/parallel.hpp"
#include "formslab/random.hpp"

namespace formslab {

namespace {

constexpr double kMaxSearchRadius = 1e4;

// Q(m', t) = A t^2 + B(m') t + C(m') for a quadratic form, t the last coordinate.
struct QuadraticSplit {
    std::size_t n;
    double A = 0.0;
    std::vector<double> cross;  // coefficient of x_j x_n, j < n-1
    std::vector<double> inner;  // (n-1)x(n-1) upper-triangular coefficients
};

QuadraticSplit split_quadratic(const HomogeneousForm& q) {
    const std::size_t n = q.n();
    QuadraticSplit s{n, 0.0, std::vector<double>(n - 1, 0.0), std::vector<double>((n - 1) * (n - 1), 0.0)};
    for (const auto& t : q.terms()) {
        std::size_t first = n;
        std::size_t second = n;
        for (std::size_t i = 0; i < n; ++i) {
            for (unsigned k = 0; k < t.exponents[i]; ++k) {
                if (first == n) first = i;
                else second = i;
            }
        }
        if (second == n - 1 && first == n - 1) s.A += t.coeff;
        else if (second == n - 1) s.cross[first] += t.coeff;
        else s.inner[first * (n - 1) + second] += t.coeff;
    }
    return s;
}

// Real roots of a t^2 + b t + c = 0.
void push_roots(double a, double b, double c, std::vector<double>& out) {
    if (a == 0.0) {
        if (b != 0.0) out.push_back(-c / b);
        return;
    }
    const double disc = b * b - 4.0 * a * c;
    if (disc < 0.0) return;
    const double sq = std::sqrt(disc);
    const double qv = -0.5 * (b + std::copysign(sq, b));
    if (qv != 0.0) {
        out.push_back(qv / a);
        out.push_back(c / qv);
    } else {
        out.push_back(0.0);
    }
}

bool quadratic_search(const HomogeneousForm& q, double eps, double radius) {
    const std::size_t n = q.n();
    const QuadraticSplit s = split_quadratic(q);
    const double r2 = radius * radius;
    const auto bound = static_cast<std::int64_t>(std::floor(radius));
    std::vector<std::int64_t> head(n - 1, -bound);
    std::vector<double> x(n);
    std::vector<double> breaks;

    auto hit = [&](std::int64_t t) {
        x[n - 1] = static_cast<double>(t);
        double norm2 = 0.0;
        bool nonzero = false;
        for (std::size_t i = 0; i < n; ++i) {
            norm2 += x[i] * x[i];
            nonzero = nonzero || x[i] != 0.0;
        }
        return nonzero && norm2 <= r2 && std::abs(evaluate(q, x)) < eps;
    };

    for (;;) {
        double head2 = 0.0;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            x[i] = static_cast<double>(head[i]);
            head2 += x[i] * x[i];
        }
        if (head2 <= r2) {
            const double tmax = std::floor(std::sqrt(r2 - head2));
            double B = 0.0;
            double C = 0.0;
            for (std::size_t i = 0; i + 1 < n; ++i) {
                B += s.cross[i] * x[i];
                for (std::size_t j = i; j + 1 < n; ++j) C += s.inner[i * (n - 1) + j] * x[i] * x[j];
            }
            breaks.clear();
            push_roots(s.A, B, C - eps, breaks);
            push_roots(s.A, B, C + eps, breaks);
            breaks.push_back(-tmax);
            breaks.push_back(tmax);
            for (auto& b : breaks) b = std::clamp(b, -tmax, tmax);
            std::sort(breaks.begin(), breaks.end());
            for (std::size_t k = 0; k + 1 < breaks.size(); ++k) {
                const double lo = breaks[k];
                const double hi = breaks[k + 1];
                const double mid = 0.5 * (lo + hi);
                const double qmid = s.A * mid * mid + B * mid + C;
                // Pad by one so a root lost to rounding cannot hide a witness.
                if (std::abs(qmid) >= eps && std::floor(hi) - std::ceil(lo) > 1.0) continue;
                const auto t0 = static_cast<std::int64_t>(std::max(-tmax, std::ceil(lo) - 1.0));
                const auto t1 = static_cast<std::int64_t>(std::min(tmax, std::floor(hi) + 1.0));
                for (std::int64_t t = t0; t <= t1; ++t)
                    if (hit(t)) return true;
            }
        }
        std::size_t i = 0;
        for (; i + 1 < n; ++i) {
            if (head[i] < bound) {
                ++head[i];
                break;
            }
            head[i] = -bound;
        }
        if (i + 1 >= n) return false;
    }
}

bool brute_force_search(const FormSystem& system, double eps, double radius) {
    const std::size_t n = system.n();
    const double r2 = radius * radius;
    const auto bound = static_cast<std::int64_t>(std::floor(radius));
    std::vector<std::int64_t> m(n, -bound);
    std::vector<double> x(n);
    for (;;) {
        double norm2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = static_cast<double>(m[i]);
            norm2 += x[i] * x[i];
        }
        if (norm2 >= 1.0 && norm2 <= r2 && system_norm(system, x) < eps) return true;
        std::size_t i = 0;
        for (; i < n; ++i) {
            if (m[i] < bound) {
                ++m[i];
                break;
            }
            m[i] = -bound;
        }
        if (i >= n) return false;
    }
}

}  // namespace

UnimodularMatrix sample_unimodular(std::size_t n, std::uint64_t seed, double norm_bound) {
    if (n < 2) throw InputError("sample_unimodular: n must be at least 2");
    if (!(norm_bound > 0.0)) throw InputError("sample_unimodular: norm bound must be positive");
    for (std::uint64_t attempt = 0; attempt < 10000; ++attempt) {
        CounterRng rng(seed, attempt);
        Eigen::MatrixXd m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rng.normal();
        double det = m.determinant();
        if (std::abs(det) < 1e-6) continue;
        if (det < 0.0) {
            m.col(0) *= -1.0;
            det = -det;
        }
        m *= std::pow(det, -1.0 / static_cast<double>(n));
        std::vector<std::vector<double>> rows(n, std::vector<double>(n));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) rows[i][j] = m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        if (std::abs(m.determinant() - 1.0) > 1e-9) continue;
        auto g = UnimodularMatrix::from_rows(rows);
        if (g.operator_norm() > norm_bound) continue;
        return g;
    }
    throw ConfigError("sample_unimodular: 10^4 consecutive rejections; raise the norm bound");
}

bool uniform_approx_trial(const FormSystem& system, const UnimodularMatrix& g, double eps, double f_exponent,
                          double kappa) {
    if (!(eps > 0.0 && eps < 1.0)) throw InputError("uniform_approx_trial: eps must lie in (0, 1)");
    if (!(kappa >= 1.0)) throw InputError("uniform_approx_trial: kappa must be at least 1");
    if (g.dim() != system.n()) throw InputError("uniform_approx_trial: matrix and form dimensions differ");
    const double radius = kappa * std::pow(eps, -f_exponent);
    if (radius < 1.0) return false;
    if (radius > kMaxSearchRadius) throw BudgetError("uniform_approx_trial: search radius exceeds 10^4");

    const FormSystem twisted = compose(system, g);
    if (twisted.size() == 1 && twisted.degree() == 2 && twisted.n() >= 2) return quadratic_search(twisted[0], eps, radius);
    return brute_force_search(twisted, eps, radius);
}

WilsonInterval wilson_interval(std::int64_t successes, std::int64_t total, double z) {
    if (total <= 0) return {0.0, 1.0};
    const auto n = static_cast<double>(total);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double centre = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / (1.0 + z2 / n);
    return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

std::vector<UnimodularMatrix> experiment_matrices(const TwistExperiment& exp) {
    std::vector<UnimodularMatrix> out;
    out.reserve(exp.n_matrices);
    for (std::size_t i = 0; i < exp.n_matrices; ++i)
        out.push_back(sample_unimodular(exp.system.n(), derive_key(exp.seed, i), exp.norm_bound));
    return out;
}

std::vector<SuccessPoint> success_curve(const TwistExperiment& exp, double f_exponent) {
    if (exp.n_matrices < 10) throw InputError("success_curve: need at least 10 matrices");
    if (exp.eps_schedule.empty()) throw InputError("success_curve: empty eps schedule");
    for (std::size_t i = 1; i < exp.eps_schedule.size(); ++i)
        if (!(exp.eps_schedule[i] < exp.eps_schedule[i - 1])) throw InputError("success_curve: eps schedule must decrease");

    const auto matrices = experiment_matrices(exp);
    const auto outcomes = parallel_map<std::vector<char>>(matrices.size(), exp.threads, [&](std::size_t i) {
        std::vector<char> row;
        row.reserve(exp.eps_schedule.size());
        for (double eps : exp.eps_schedule)
            row.push_back(uniform_approx_trial(exp.system, matrices[i], eps, f_exponent, exp.kappa) ? 1 : 0);
        return row;
    });

    std::vector<SuccessPoint> curve;
    for (std::size_t e = 0; e < exp.eps_schedule.size(); ++e) {
        SuccessPoint pt;
        pt.eps = exp.eps_schedule[e];
        pt.total = static_cast<std::int64_t>(matrices.size());
        for (const auto& row : outcomes) pt.successes += row[e];
        pt.fraction = static_cast<double>(pt.successes) / static_cast<double>(pt.total);
        pt.interval = wilson_interval(pt.successes, pt.total);
        curve.push_back(pt);
    }
    return curve;
}

std::vector<TwistedCountRow> twisted_count_series(const FormSystem& system, const UnimodularMatrix& g, double a,
                                                  double b, const std::vector<double>& T_grid, const PolePair& pair,
                                                  unsigned threads) {
    if (!(a >= 0.0 && a < b)) throw InputError("twisted_count_series: need 0 <= a < b");
    const double n = static_cast<double>(system.n());
    const double d = system.degree();
    if (!(pair.r < n / d)) throw InputError("twisted_count_series: need r < n/d");

    auto band_term = [&](double c, double T) {
        if (c == 0.0) return 0.0;
        return std::pow(c, pair.r) * std::pow(std::abs(std::log(c / std::pow(T, d))), pair.m - 1);
    };

    std::vector<TwistedCountRow> rows;
    for (double T : T_grid) {
        TwistedCountRow row;
        row.T = T;
        row.count = count_twisted(system, g, a, b, T, threads);
        row.prediction = std::pow(T, n - pair.r * d) * (band_term(b, T) - band_term(a, T));
        row.normalized = static_cast<double>(row.count) / row.prediction;
        rows.push_back(row);
    }
    return rows;
}

double relative_spread(const std::vector<double>& values) {
    if (values.empty()) throw InputError("relative_spread: no values");
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    return (*hi - *lo) / mean;
}

}  // namespace formslab
