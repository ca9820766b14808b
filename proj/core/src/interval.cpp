#include "lozi/interval.hpp"

#include <algorithm>

namespace lozi {

namespace {
bool is_zero(const Interval& a) { return a.lo == 0.0 && a.hi == 0.0; }
}

Interval operator+(const Interval& a, const Interval& b) {
    if (is_zero(a)) return b;
    if (is_zero(b)) return a;
    return {down(a.lo + b.lo), up(a.hi + b.hi)};
}

Interval operator-(const Interval& a) { return {-a.hi, -a.lo}; }

Interval operator-(const Interval& a, const Interval& b) { return a + (-b); }

Interval operator*(const Interval& a, const Interval& b) {
    if (is_zero(a) || is_zero(b)) return {0.0, 0.0};
    const double p[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
    double lo = p[0], hi = p[0];
    for (double v : p) {
        if (std::isnan(v)) return Interval::entire();
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return {down(lo), up(hi)};
}

Interval operator/(const Interval& a, const Interval& b) {
    if (b.contains_zero()) return Interval::entire();
    if (is_zero(a)) return {0.0, 0.0};
    const double p[4] = {a.lo / b.lo, a.lo / b.hi, a.hi / b.lo, a.hi / b.hi};
    double lo = p[0], hi = p[0];
    for (double v : p) {
        if (std::isnan(v)) return Interval::entire();
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return {down(lo), up(hi)};
}

Interval abs(const Interval& a) {
    if (a.lo >= 0.0) return a;
    if (a.hi <= 0.0) return -a;
    return {0.0, std::max(-a.lo, a.hi)};
}

Interval hull(const Interval& a, const Interval& b) {
    return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
}

}  // namespace lozi
