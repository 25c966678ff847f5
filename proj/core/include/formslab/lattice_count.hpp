#pragma once

#include <cstdint>

#include "formslab/domains.hpp"
#include "formslab/forms.hpp"

namespace formslab {

struct CountRequest {
    FormSystem system;
    Domain domain;
    double T = 1.0;
    double alpha = 0.0;
    unsigned threads = 1;
};

// T^exponent, snapped to the nearest integer when within 1e-12 relative of
// it. Integer thresholds such as 10^1 or 4^1.5 then compare exactly against
// integer form values.
double power_threshold(double T, double exponent);

/// Number of m in Z^n with m in T.K and ||F(m)|| <= T^(d - alpha).
///
/// Enumerates the integer points of the bounding box of T.K one slab (fixed
/// last coordinate) at a time; slabs are the unit of parallel work and are
/// reduced in slab order. Throws OverflowError when the box holds more than
/// 2^63 - 1 points.
std::int64_t count_inequality(const CountRequest& req);

/// Number of m in Z^n with ||m|| <= T and a < ||F(g m)|| <= b.
std::int64_t count_twisted(const FormSystem& system, const UnimodularMatrix& g, double a, double b, double T,
                           unsigned threads = 1);

}  // namespace formslab
