#pragma once

// Independent reference computations used only by tests. Nothing here calls
// into the library's counting, volume or divisor code paths.

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

namespace oracle {

// Brute-force count of integer points in [lo, hi]^n accepted by `pred`.
inline std::int64_t count_box(int n, std::int64_t lo, std::int64_t hi,
                              const std::function<bool(const std::vector<std::int64_t>&)>& pred) {
    std::vector<std::int64_t> m(static_cast<std::size_t>(n), lo);
    std::int64_t count = 0;
    for (;;) {
        if (pred(m)) ++count;
        int i = 0;
        for (; i < n; ++i) {
            if (m[static_cast<std::size_t>(i)] < hi) {
                ++m[static_cast<std::size_t>(i)];
                break;
            }
            m[static_cast<std::size_t>(i)] = lo;
        }
        if (i == n) return count;
    }
}

// #{x in N^n : prod x_i <= t} by nested loops (n in {1, 2, 3}).
inline std::int64_t divisor_brute(int n, std::int64_t t) {
    std::int64_t c = 0;
    if (n == 1) return t < 0 ? 0 : t;
    if (n == 2) {
        for (std::int64_t a = 1; a <= t; ++a)
            for (std::int64_t b = 1; a * b <= t; ++b) ++c;
        return c;
    }
    for (std::int64_t a = 1; a <= t; ++a)
        for (std::int64_t b = 1; a * b <= t; ++b)
            for (std::int64_t e = 1; a * b * e <= t; ++e) ++c;
    return c;
}

// Composite Simpson rule on [a, b] with `panels` (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int panels) {
    const double h = (b - a) / panels;
    double s = f(a) + f(b);
    for (int i = 1; i < panels; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

// Area of {x in [0,1]^2 : x1 x2 <= c} by integrating min(1, c/x) over x,
// split at the kink x = c.
inline double product_sublevel_area(double c) {
    if (c >= 1.0) return 1.0;
    const double left = c;  // min(1, c/x) = 1 on [0, c]
    const double right = simpson([c](double x) { return c / x; }, c, 1.0, 200000);
    return left + right;
}

}  // namespace oracle
