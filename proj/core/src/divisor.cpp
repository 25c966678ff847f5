#include "formslab/divisor.hpp"

#include <cmath>
#include <unordered_map>

#include "formslab/checked.hpp"
#include "formslab/domains.hpp"
#include "formslab/errors.hpp"
#include "formslab/forms.hpp"
#include "formslab/lattice_count.hpp"

namespace formslab {

namespace {

class Summatory {
public:
    explicit Summatory(int levels) : memo_(static_cast<std::size_t>(levels + 1)) {}

    std::int64_t operator()(int n, std::int64_t N) {
        if (N <= 0) return 0;
        if (n == 1) return N;
        auto& table = memo_[static_cast<std::size_t>(n)];
        if (auto it = table.find(N); it != table.end()) return it->second;
        std::int64_t sum = 0;
        for (std::int64_t k = 1; k <= N;) {
            const std::int64_t q = N / k;
            const std::int64_t k_end = N / q;
            const std::int64_t run = k_end - k + 1;
            sum = checked_add(sum, checked_mul(run, (*this)(n - 1, q), "divisor sum"), "divisor sum");
            k = k_end + 1;
        }
        table.emplace(N, sum);
        return sum;
    }

private:
    std::vector<std::unordered_map<std::int64_t, std::int64_t>> memo_;
};

std::int64_t floor_to_int(double t) {
    if (!(t >= 0.0)) throw InputError("divisor_summatory: t must be nonnegative");
    if (!(t < 9.2e18)) throw OverflowError("divisor_summatory: t exceeds 64 bits");
    return static_cast<std::int64_t>(std::floor(t));
}

}  // namespace

std::int64_t divisor_summatory_floor(int n, std::int64_t N) {
    if (n < 1) throw InputError("divisor_summatory: n must be positive");
    if (N < 0) throw InputError("divisor_summatory: t must be nonnegative");
    return Summatory(n)(n, N);
}

std::int64_t divisor_summatory(int n, double t) { return divisor_summatory_floor(n, floor_to_int(t)); }

double DivisorPolynomial::operator()(double x) const {
    double v = 0.0;
    for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) v = v * x + *it;
    return v;
}

DivisorPolynomial q_polynomial(int n) {
    constexpr double g = kEulerGamma;
    constexpr double g1 = kStieltjesGamma1;
    switch (n) {
        case 2:
            return {2, {2.0 * g - 1.0, 1.0}};
        case 3:
            return {3, {3.0 * g * g - 3.0 * g + 3.0 * g1 + 1.0, 3.0 * g - 1.0, 0.5}};
        default:
            throw InputError("q_polynomial: only n = 2 and n = 3 are supported");
    }
}

double q_poly_eval(int n, double x) { return q_polynomial(n)(x); }

BracketResult counterexample_bracket(int n, std::int64_t T, double alpha, unsigned threads) {
    if (n < 2) throw InputError("bracket: n must be at least 2");
    if (T < 1) throw InputError("bracket: T must be a positive integer");
    if (!std::isfinite(alpha)) throw InputError("bracket: alpha must be finite");

    std::vector<Term> product{{Exponents(static_cast<std::size_t>(n), 1U), 1.0}};
    const HomogeneousForm f_n(static_cast<std::size_t>(n), static_cast<unsigned>(n), product);
    const auto Td = static_cast<double>(T);

    BracketResult r;
    r.count = count_inequality({FormSystem(f_n), Domain::cube(static_cast<std::size_t>(n), 0.0, 1.0), Td, alpha, threads});
    r.delta_n = divisor_summatory(n, power_threshold(Td, n - alpha));
    r.axis_term = checked_mul(n, checked_pow(T + 1, n - 1, "bracket"), "bracket");
    r.bracket = checked_sub(checked_add(r.delta_n, r.axis_term, "bracket"), r.count, "bracket");

    const std::int64_t tail = checked_mul(n, divisor_summatory(n - 1, power_threshold(Td, n - 1 - alpha)), "bracket");
    r.upper = checked_add(checked_mul(n * (n + 1) / 2, checked_pow(T + 1, n - 2, "bracket"), "bracket"), tail, "bracket");
    r.lower_holds = r.bracket >= 0;
    r.upper_holds = r.bracket <= r.upper;
    r.holds = r.lower_holds && r.upper_holds;
    return r;
}

}  // namespace formslab
