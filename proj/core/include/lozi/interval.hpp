#pragma once

// Rigorous double intervals with outward rounding. Used as a cheap filter in
// front of exact predicates: if the interval excludes zero the sign is settled.

#include <cmath>
#include <limits>

namespace lozi {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    static Interval point(double v) { return {v, v}; }
    static Interval entire() {
        return {-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    }

    bool contains_zero() const { return lo <= 0.0 && hi >= 0.0; }
    bool is_point() const { return lo == hi; }
    double mid() const { return 0.5 * lo + 0.5 * hi; }
    double width() const { return hi - lo; }
    bool valid() const { return !(std::isnan(lo) || std::isnan(hi)); }

    // -1, 0, +1 when certain; 2 when the interval straddles zero.
    int certain_sign() const {
        if (!valid()) return 2;
        if (lo > 0.0) return 1;
        if (hi < 0.0) return -1;
        if (lo == 0.0 && hi == 0.0) return 0;
        return 2;
    }
};

inline double down(double v) { return std::nextafter(v, -std::numeric_limits<double>::infinity()); }
inline double up(double v) { return std::nextafter(v, std::numeric_limits<double>::infinity()); }

Interval operator+(const Interval& a, const Interval& b);
Interval operator-(const Interval& a, const Interval& b);
Interval operator-(const Interval& a);
Interval operator*(const Interval& a, const Interval& b);
Interval operator/(const Interval& a, const Interval& b);
Interval abs(const Interval& a);
Interval hull(const Interval& a, const Interval& b);

}  // namespace lozi
