#pragma once

#include <cstdint>
#include <string_view>

#include "formslab/errors.hpp"

namespace formslab {

inline std::int64_t checked_add(std::int64_t a, std::int64_t b, std::string_view what = "sum") {
    std::int64_t r = 0;
    if (__builtin_add_overflow(a, b, &r))
        throw OverflowError(std::string(what) + ": 64-bit overflow");
    return r;
}

inline std::int64_t checked_sub(std::int64_t a, std::int64_t b, std::string_view what = "difference") {
    std::int64_t r = 0;
    if (__builtin_sub_overflow(a, b, &r))
        throw OverflowError(std::string(what) + ": 64-bit overflow");
    return r;
}

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b, std::string_view what = "product") {
    std::int64_t r = 0;
    if (__builtin_mul_overflow(a, b, &r))
        throw OverflowError(std::string(what) + ": 64-bit overflow");
    return r;
}

inline std::int64_t checked_pow(std::int64_t base, int exponent, std::string_view what = "power") {
    std::int64_t r = 1;
    for (int i = 0; i < exponent; ++i) r = checked_mul(r, base, what);
    return r;
}

}  // namespace formslab
