#pragma once

#include "formslab/rational.hpp"

namespace formslab {

/// Growth exponent r and logarithm order m of a law T^n c(T)^r |log c(T)|^(m-1).
template <class Real>
struct BasicPolePair {
    Real r{};
    int m = 1;

    friend bool operator==(const BasicPolePair&, const BasicPolePair&) = default;
};

using PolePair = BasicPolePair<double>;
using ExactPolePair = BasicPolePair<Rational>;

/// (a, b) <= (c, d)  iff  a < c, or a = c and b >= d: the order of the maps
/// x -> x^-a (log x)^b by growth at infinity.
template <class Real>
bool order_le(const BasicPolePair<Real>& lhs, const BasicPolePair<Real>& rhs) {
    return lhs.r < rhs.r || (lhs.r == rhs.r && lhs.m >= rhs.m);
}

inline PolePair to_real(const ExactPolePair& p) { return {p.r.to_double(), p.m}; }

}  // namespace formslab
