// Integer lattice vectors and rational dual vectors in the 2D local model.
#pragma once

#include <compare>
#include <cstdlib>
#include <numeric>
#include <stdexcept>
#include <string>

#include "scatter/rational.hpp"

namespace scatter {

struct IVec {
    long long x = 0;
    long long y = 0;

    friend auto operator<=>(const IVec&, const IVec&) = default;
    IVec operator+(const IVec& o) const { return {x + o.x, y + o.y}; }
    IVec operator-(const IVec& o) const { return {x - o.x, y - o.y}; }
    IVec operator-() const { return {-x, -y}; }
    IVec operator*(long long c) const { return {c * x, c * y}; }
    bool is_zero() const { return x == 0 && y == 0; }
};

inline long long dot(const IVec& a, const IVec& b) { return a.x * b.x + a.y * b.y; }
inline long long cross(const IVec& a, const IVec& b) { return a.x * b.y - a.y * b.x; }
inline IVec rot90(const IVec& v) { return {-v.y, v.x}; }

struct PrimitiveDecomposition {
    IVec direction;      // primitive
    long long multiple;  // > 0
};

inline PrimitiveDecomposition primitive_part(const IVec& v) {
    if (v.is_zero()) throw std::invalid_argument("primitive_part of zero vector");
    long long g = std::gcd(std::llabs(v.x), std::llabs(v.y));
    return {{v.x / g, v.y / g}, g};
}

inline bool is_primitive(const IVec& v) {
    return !v.is_zero() && primitive_part(v).multiple == 1;
}

inline std::string to_string(const IVec& v) {
    return "(" + std::to_string(v.x) + "," + std::to_string(v.y) + ")";
}

// Dual vector with rational entries. Used as the n-payload of Lie terms so
// that intermediate sums over trees stay exact.
struct QVec {
    Rat x;
    Rat y;

    bool operator==(const QVec& o) const { return x == o.x && y == o.y; }
    QVec operator+(const QVec& o) const { return {x + o.x, y + o.y}; }
    QVec operator-(const QVec& o) const { return {x - o.x, y - o.y}; }
    QVec operator-() const { return {-x, -y}; }
    QVec operator*(const Rat& c) const { return {c * x, c * y}; }
    bool is_zero() const { return x == 0 && y == 0; }
};

inline QVec to_qvec(const IVec& v) { return {Rat(v.x), Rat(v.y)}; }

inline Rat pairing(const IVec& m, const QVec& n) { return Rat(m.x) * n.x + Rat(m.y) * n.y; }
inline long long pairing(const IVec& m, const IVec& n) { return dot(m, n); }

// Writes q as c * d with d a primitive integer vector and c > 0 rational,
// keeping the direction of q.
struct ScaledDirection {
    Rat scale;
    IVec direction;
};

inline ScaledDirection factor_direction(const QVec& q) {
    if (q.is_zero()) throw std::invalid_argument("factor_direction of zero vector");
    BigInt l = lcm(denominator(q.x), denominator(q.y));
    BigInt ix = numerator(q.x) * (l / denominator(q.x));
    BigInt iy = numerator(q.y) * (l / denominator(q.y));
    BigInt g = gcd(abs(ix), abs(iy));
    BigInt px = ix / g, py = iy / g;
    // directions stay within long long for every in-scope computation
    IVec dir{px.convert_to<long long>(), py.convert_to<long long>()};
    return {Rat(g, l), dir};
}

inline std::string to_string(const QVec& v) {
    return "(" + num_str(v.x) + (denominator(v.x) == 1 ? "" : "/" + den_str(v.x)) + "," +
           num_str(v.y) + (denominator(v.y) == 1 ? "" : "/" + den_str(v.y)) + ")";
}

}  // namespace scatter
