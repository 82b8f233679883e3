#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace nsshell {

/// Shell indices are exact integers of unbounded range: dilating a profile by
/// lambda = 2^(2^l) shifts every index by 2^(2^l), which leaves the 64-bit
/// range already at l = 6.
using BigIndex = boost::multiprecision::cpp_int;

/// Largest supported dilation level. 2^(2^l) for l = 24 occupies ~2 MiB per
/// index; levels beyond that exhaust memory long before they are useful.
inline constexpr int kMaxDilationLevel = 24;

/// 2^(2^l) as an exact integer.
inline BigIndex pow2_pow2(int l) {
    if (l < 0 || l > kMaxDilationLevel)
        throw std::invalid_argument("pow2_pow2: level " + std::to_string(l) +
                                    " outside supported range [0, " +
                                    std::to_string(kMaxDilationLevel) + "]");
    return BigIndex(1) << (std::uint64_t(1) << l);
}

/// Number of bits in |j| (0 for j = 0).
inline std::int64_t bit_length(const BigIndex& j) {
    if (j == 0) return 0;
    return static_cast<std::int64_t>(boost::multiprecision::msb(boost::multiprecision::abs(j))) + 1;
}

/// log2(j) for j >= 1, correct to double precision even when j itself is far
/// beyond double range.
inline double log2_big(const BigIndex& j) {
    if (j <= 0) throw std::domain_error("log2_big: argument must be positive");
    const std::int64_t bits = bit_length(j);
    if (bits <= 62) return std::log2(static_cast<double>(j.convert_to<std::int64_t>()));
    const std::int64_t shift = bits - 62;
    const double top = static_cast<double>((j >> shift).convert_to<std::int64_t>());
    return std::log2(top) + static_cast<double>(shift);
}

/// Saturating conversion to double (+/-inf when out of range).
inline double to_double_saturating(const BigIndex& j) {
    if (bit_length(j) > 1023) {
        return j < 0 ? -std::numeric_limits<double>::infinity()
                     : std::numeric_limits<double>::infinity();
    }
    return j.convert_to<double>();
}

}  // namespace nsshell
