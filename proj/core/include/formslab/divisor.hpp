#pragma once

#include <cstdint>
#include <vector>

namespace formslab {

// Euler-Mascheroni constant gamma_0 and the first Stieltjes constant
// gamma_1 (standard tabulated values, 17 significant digits).
inline constexpr double kEulerGamma = 0.57721566490153286;
inline constexpr double kStieltjesGamma1 = -0.072815845483676724;

/// Delta_n(t) = #{x in N^n : x_1 ... x_n <= t}, exact.
///
/// Uses Delta_1(t) = floor(t) and Delta_n(t) = sum_k Delta_{n-1}(t/k). Since
/// Delta_{n-1}(t/k) depends on k only through floor(t/k), runs of k sharing
/// that quotient are summed in one step and each level memoises on it. The
/// memo is local to the call. Throws OverflowError past 2^63 - 1.
std::int64_t divisor_summatory(int n, double t);
std::int64_t divisor_summatory_floor(int n, std::int64_t N);

/// Q_n with Delta_n(t) ~ t Q_n(log t); only n = 2 and n = 3 are available.
struct DivisorPolynomial {
    int n = 2;
    std::vector<double> coefficients;  // ascending powers

    double operator()(double x) const;
};

// Q_2(x) = x + (2 gamma - 1); Q_3(x) = x^2/2 + (3 gamma - 1) x + (3 gamma^2 - 3 gamma + 3 gamma_1 + 1).
// Throws InputError for other n. Note the Q_3 constant as written: with gamma_1 < 0 the
// residue calculation gives -3 gamma_1, so t Q_3(log t) undershoots Delta_3(t) by ~0.437 t.
DivisorPolynomial q_polynomial(int n);
double q_poly_eval(int n, double x);

/// 0 <= Delta_n(T^(n-alpha)) + n (T+1)^(n-1) - N(F_n, [0,1]^n, T, alpha)
///   <= n(n+1)/2 (T+1)^(n-2) + n Delta_{n-1}(T^(n-1-alpha)),
/// evaluated in exact integer arithmetic with F_n = x_1 ... x_n.
struct BracketResult {
    std::int64_t delta_n = 0;
    std::int64_t axis_term = 0;
    std::int64_t count = 0;
    std::int64_t bracket = 0;
    std::int64_t upper = 0;
    bool lower_holds = false;
    bool upper_holds = false;
    bool holds = false;
};

BracketResult counterexample_bracket(int n, std::int64_t T, double alpha, unsigned threads = 1);

}  // namespace formslab
