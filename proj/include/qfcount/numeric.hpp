#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "error.hpp"

namespace qfc {

// A double together with a bound on its distance to the true value.
struct BoundedNumeric {
    double value = 0.0;
    double error = 0.0;

    BoundedNumeric() = default;
    BoundedNumeric(double v, double e = 0.0) : value(v), error(std::fabs(e)) {}

    double lo() const { return value - error; }
    double hi() const { return value + error; }
    bool contains(double x) const { return std::fabs(x - value) <= error; }
    double relative_error() const { return value == 0.0 ? INFINITY : error / std::fabs(value); }
};

namespace detail {
inline double rounding(double v) { return 4.0 * std::numeric_limits<double>::epsilon() * std::fabs(v); }
} // namespace detail

inline BoundedNumeric operator+(const BoundedNumeric& a, const BoundedNumeric& b) {
    double v = a.value + b.value;
    return {v, a.error + b.error + detail::rounding(v)};
}

inline BoundedNumeric operator-(const BoundedNumeric& a, const BoundedNumeric& b) {
    double v = a.value - b.value;
    return {v, a.error + b.error + detail::rounding(v)};
}

inline BoundedNumeric operator*(const BoundedNumeric& a, const BoundedNumeric& b) {
    double v = a.value * b.value;
    return {v, std::fabs(a.value) * b.error + std::fabs(b.value) * a.error + a.error * b.error + detail::rounding(v)};
}

inline BoundedNumeric operator/(const BoundedNumeric& a, const BoundedNumeric& b) {
    double den = std::fabs(b.value) - b.error;
    if (den <= 0.0) fail(ErrorKind::Domain, "division by an interval containing zero");
    double v = a.value / b.value;
    return {v, (a.error + std::fabs(v) * b.error) / den + detail::rounding(v)};
}

inline BoundedNumeric& operator*=(BoundedNumeric& a, const BoundedNumeric& b) { return a = a * b; }
inline BoundedNumeric& operator+=(BoundedNumeric& a, const BoundedNumeric& b) { return a = a + b; }

// Relative distance |x - y| / |y| with the bound carried through.
inline BoundedNumeric relative_discrepancy(const BoundedNumeric& x, const BoundedNumeric& y) {
    BoundedNumeric d = (x - y) / y;
    return {std::fabs(d.value), d.error};
}

} // namespace qfc
