#include "formslab/rational.hpp"

#include <numeric>
#include <ostream>

#include "formslab/checked.hpp"
#include "formslab/errors.hpp"

namespace formslab {

Rational::Rational(std::int64_t num) : num_(num), den_(1) {}

Rational::Rational(std::int64_t num, std::int64_t den) {
    if (den == 0) throw InputError("rational with zero denominator");
    if (den < 0) {
        num = checked_mul(num, -1, "rational normalisation");
        den = checked_mul(den, -1, "rational normalisation");
    }
    const std::int64_t g = std::gcd(num, den);
    num_ = num / g;
    den_ = den / g;
}

std::string Rational::str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::operator-() const { return {checked_mul(num_, -1, "rational negation"), den_}; }

Rational operator+(const Rational& a, const Rational& b) {
    const std::int64_t g = std::gcd(a.den_, b.den_);
    const std::int64_t left = checked_mul(a.num_, b.den_ / g, "rational sum");
    const std::int64_t right = checked_mul(b.num_, a.den_ / g, "rational sum");
    return {checked_add(left, right, "rational sum"), checked_mul(a.den_ / g, b.den_, "rational sum")};
}

Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

Rational operator*(const Rational& a, const Rational& b) {
    // Cross-reduce first so intermediate products stay small.
    const std::int64_t g1 = std::gcd(a.num_, b.den_);
    const std::int64_t g2 = std::gcd(b.num_, a.den_);
    return {checked_mul(a.num_ / g1, b.num_ / g2, "rational product"),
            checked_mul(a.den_ / g2, b.den_ / g1, "rational product")};
}

Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw InputError("rational division by zero");
    return a * Rational(b.den_, b.num_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    // Denominators are positive, so cross multiplication preserves order.
    __int128 left = static_cast<__int128>(a.num_) * b.den_;
    __int128 right = static_cast<__int128>(b.num_) * a.den_;
    if (left < right) return std::strong_ordering::less;
    if (left > right) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

std::ostream& operator<<(std::ostream& os, const Rational& q) { return os << q.str(); }

}  // namespace formslab
