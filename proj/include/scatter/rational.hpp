// Exact rational scalars and helpers shared across the library.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace scatter {

using Rat = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline double to_double(const Rat& r) { return r.convert_to<double>(); }

inline std::string num_str(const Rat& r) { return numerator(r).str(); }
inline std::string den_str(const Rat& r) { return denominator(r).str(); }

inline Rat rat_of(long long num, long long den = 1) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    if (den < 0) { num = -num; den = -den; }
    return Rat(BigInt(num), BigInt(den));
}

inline Rat rat_parse(const std::string& num, const std::string& den) {
    BigInt n(num);
    BigInt d(den);
    if (d == 0) throw std::invalid_argument("rational with zero denominator");
    if (d < 0) { n = -n; d = -d; }
    return Rat(n, d);
}

// Simplest p/q within tol of value: the smallest denominator q <= max_den
// whose best numerator lands inside the tolerance. Noisy estimates of 0
// must snap to 0, not to 1/max_den, so small denominators win outright.
// Returns nothing when no candidate is close enough.
inline std::optional<Rat> snap_to_rational(double value, double tol, long max_den) {
    if (!(tol >= 0) || max_den < 1) throw std::invalid_argument("bad snap parameters");
    for (long q = 1; q <= max_den; ++q) {
        double p = std::nearbyint(value * static_cast<double>(q));
        double err = std::abs(value - p / static_cast<double>(q));
        if (err <= tol) return Rat(BigInt(static_cast<long long>(p)), BigInt(q));
    }
    return std::nullopt;
}

}  // namespace scatter
