#include "lozi/geom.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace lozi {

namespace {

Sign cmp_x(const Point& a, const Point& b) {
    return filtered_sign(a.fx - b.fx, [&] { return a.x - b.x; });
}

Sign cmp_y(const Point& a, const Point& b) {
    return filtered_sign(a.fy - b.fy, [&] { return a.y - b.y; });
}

bool disjoint(const Interval& a, const Interval& b) { return a.hi < b.lo || b.hi < a.lo; }

const Scalar& half() {
    static const Scalar h(Rational(1, 2));
    return h;
}

}  // namespace

bool same_point(const Point& a, const Point& b) {
    if (disjoint(a.fx, b.fx) || disjoint(a.fy, b.fy)) return false;
    if (a.x.is_exact() && b.x.is_exact() && a.y.is_exact() && b.y.is_exact()) return a.x == b.x && a.y == b.y;
    return cmp_x(a, b) == Sign::Zero && cmp_y(a, b) == Sign::Zero;
}

Point midpoint(const Point& a, const Point& b) { return Point((a.x + b.x) * half(), (a.y + b.y) * half()); }

Point lerp(const Point& a, const Point& b, const Scalar& t) {
    return Point(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y));
}

Sign sign_x(const Point& p) {
    return filtered_sign(p.fx, [&] { return p.x; });
}

Sign sign_y(const Point& p) {
    return filtered_sign(p.fy, [&] { return p.y; });
}

Sign orientation(const Point& a, const Point& b, const Point& c) {
    const Interval iv = (b.fx - a.fx) * (c.fy - a.fy) - (b.fy - a.fy) * (c.fx - a.fx);
    return filtered_sign(iv, [&] { return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x); });
}

Sign compare_along(const Point& a, const Point& b, const Point& p, const Point& q) {
    const Interval iv = (p.fx - q.fx) * (b.fx - a.fx) + (p.fy - q.fy) * (b.fy - a.fy);
    return filtered_sign(iv, [&] { return (p.x - q.x) * (b.x - a.x) + (p.y - q.y) * (b.y - a.y); });
}

Scalar squared_distance(const Point& a, const Point& b) {
    const Scalar dx = a.x - b.x, dy = a.y - b.y;
    return dx * dx + dy * dy;
}

bool on_segment(const Point& p, const Point& a, const Point& b) {
    if (orientation(a, b, p) != Sign::Zero) return false;
    return compare_along(a, b, p, a) != Sign::Negative && compare_along(a, b, p, b) != Sign::Positive;
}

SegmentIntersection segment_intersection(const Point& a, const Point& b, const Point& c, const Point& d) {
    using K = SegmentIntersection::Kind;
    SegmentIntersection out;
    // cheap bounding-box rejection
    if (std::max(a.fx.hi, b.fx.hi) < std::min(c.fx.lo, d.fx.lo) ||
        std::max(c.fx.hi, d.fx.hi) < std::min(a.fx.lo, b.fx.lo) ||
        std::max(a.fy.hi, b.fy.hi) < std::min(c.fy.lo, d.fy.lo) ||
        std::max(c.fy.hi, d.fy.hi) < std::min(a.fy.lo, b.fy.lo)) {
        return out;
    }
    const Sign o1 = orientation(a, b, c);
    const Sign o2 = orientation(a, b, d);
    if (o1 == Sign::Zero && o2 == Sign::Zero) {
        const Point* lo2 = &c;
        const Point* hi2 = &d;
        if (compare_along(a, b, c, d) == Sign::Positive) std::swap(lo2, hi2);
        const Point& start = compare_along(a, b, *lo2, a) == Sign::Positive ? *lo2 : a;
        const Point& end = compare_along(a, b, *hi2, b) == Sign::Negative ? *hi2 : b;
        const Sign s = compare_along(a, b, start, end);
        if (s == Sign::Positive) return out;
        out.p = start;
        if (s == Sign::Zero) {
            out.kind = K::Point;
        } else {
            out.kind = K::Subsegment;
            out.q = end;
        }
        return out;
    }
    if (to_int(o1) * to_int(o2) > 0) return out;
    const Sign o3 = orientation(c, d, a);
    const Sign o4 = orientation(c, d, b);
    if (to_int(o3) * to_int(o4) > 0) return out;
    out.kind = K::Point;
    if (o1 == Sign::Zero) out.p = c;
    else if (o2 == Sign::Zero) out.p = d;
    else if (o3 == Sign::Zero) out.p = a;
    else if (o4 == Sign::Zero) out.p = b;
    else {
        const Scalar rx = b.x - a.x, ry = b.y - a.y, sx = d.x - c.x, sy = d.y - c.y;
        const Scalar t = ((c.x - a.x) * sy - (c.y - a.y) * sx) / (rx * sy - ry * sx);
        out.p = Point(a.x + t * rx, a.y + t * ry);
    }
    return out;
}

// ---------------------------------------------------------------- polylines

Polyline Polyline::reversed() const {
    Polyline r(vertices);
    std::reverse(r.vertices.begin(), r.vertices.end());
    return r;
}

double Polyline::approx_length() const {
    double len = 0.0;
    for (std::size_t i = 1; i < vertices.size(); ++i) {
        len += std::hypot(vertices[i].approx_x() - vertices[i - 1].approx_x(),
                          vertices[i].approx_y() - vertices[i - 1].approx_y());
    }
    return len;
}

Polyline concat(const Polyline& a, const Polyline& b) {
    if (a.vertices.empty()) return b;
    if (b.vertices.empty()) return a;
    Polyline out(a.vertices);
    auto it = b.vertices.begin();
    if (same_point(a.back(), b.front())) ++it;
    out.vertices.insert(out.vertices.end(), it, b.vertices.end());
    return out;
}

// ---------------------------------------------------------------- polygons

Scalar signed_area2(const std::vector<Point>& ring) {
    Scalar s(0);
    const std::size_t n = ring.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point& p = ring[i];
        const Point& q = ring[(i + 1) % n];
        s += p.x * q.y - q.x * p.y;
    }
    return s;
}

SimplePolygon::SimplePolygon(std::vector<Point> vertices) : v_(std::move(vertices)) {
    if (v_.size() < 3) throw PreconditionError("polygon needs at least 3 vertices");
    const Sign s = sign(signed_area2(v_));
    if (s == Sign::Zero) throw PreconditionError("polygon has zero area");
    if (s == Sign::Negative) std::reverse(v_.begin(), v_.end());
}

Scalar polygon_area(const SimplePolygon& poly) { return signed_area2(poly.vertices()) * half(); }

const char* to_string(Location l) {
    switch (l) {
        case Location::Interior: return "Interior";
        case Location::Boundary: return "Boundary";
        case Location::Exterior: return "Exterior";
    }
    return "?";
}

Location point_in_polygon(const Point& p, const SimplePolygon& poly) {
    const auto& v = poly.vertices();
    const std::size_t n = v.size();
    int winding = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const Point& u = v[i];
        const Point& w = v[(i + 1) % n];
        const int cu = to_int(cmp_y(u, p));
        const int cw = to_int(cmp_y(w, p));
        if ((cu > 0 && cw > 0) || (cu < 0 && cw < 0)) continue;
        const Sign o = orientation(u, w, p);
        if (o == Sign::Zero) {
            const int xu = to_int(cmp_x(u, p));
            const int xw = to_int(cmp_x(w, p));
            if (!(xu > 0 && xw > 0) && !(xu < 0 && xw < 0)) return Location::Boundary;
            continue;
        }
        if (cu <= 0 && cw > 0 && o == Sign::Positive) ++winding;
        else if (cw <= 0 && cu > 0 && o == Sign::Negative) --winding;
    }
    return winding != 0 ? Location::Interior : Location::Exterior;
}

bool is_simple(const std::vector<Point>& v, bool closed) {
    const std::size_t n = v.size();
    if (n < 2) return false;
    const std::size_t nseg = closed ? n : n - 1;
    for (std::size_t i = 0; i < nseg; ++i) {
        if (same_point(v[i], v[(i + 1) % n])) return false;
    }
    const auto boxes = segment_boxes(v, closed);
    SegmentIndex index(boxes);
    for (std::size_t i = 0; i < nseg; ++i) {
        for (std::size_t j : index.query(boxes[i])) {
            if (j <= i) continue;
            const Point& a = v[i];
            const Point& b = v[(i + 1) % n];
            const Point& c = v[j];
            const Point& d = v[(j + 1) % n];
            const auto r = segment_intersection(a, b, c, d);
            if (r.kind == SegmentIntersection::Kind::Empty) continue;
            const bool next = (j == i + 1);
            const bool wrap = closed && i == 0 && j == nseg - 1;
            if (r.kind == SegmentIntersection::Kind::Point) {
                if (next && same_point(r.p, b)) continue;
                if (wrap && same_point(r.p, a)) continue;
            }
            return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------- folds

Sign fold_side(const Point& p, const Fold& fold) {
    switch (fold.kind) {
        case Fold::Kind::YAxis: return sign_x(p);
        case Fold::Kind::XAxis: return sign_y(p);
        case Fold::Kind::PreimageOfYAxis: {
            const Interval fa = fold.a.enclosure();
            const Interval iv = p.fy - fa * abs(p.fx) + Interval::point(1.0);
            return filtered_sign(iv, [&] { return p.y - fold.a * abs(p.x) + Scalar(1); });
        }
    }
    return Sign::Zero;
}

namespace {

Point axis_point(const Point& a, const Point& b, bool y_axis) {
    if (y_axis) {
        const Scalar t = a.x / (a.x - b.x);
        return Point(Scalar(0), a.y + t * (b.y - a.y));
    }
    const Scalar t = a.y / (a.y - b.y);
    return Point(a.x + t * (b.x - a.x), Scalar(0));
}

Scalar preimage_h(const Point& p, const Scalar& a) { return p.y - a * abs(p.x) + Scalar(1); }

}  // namespace

std::vector<Point> fold_points(const Point& a, const Point& b, const Fold& fold) {
    std::vector<Point> out;
    if (fold.kind != Fold::Kind::PreimageOfYAxis) {
        const bool y_axis = fold.kind == Fold::Kind::YAxis;
        const Sign sa = y_axis ? sign_x(a) : sign_y(a);
        const Sign sb = y_axis ? sign_x(b) : sign_y(b);
        if (to_int(sa) * to_int(sb) < 0) out.push_back(axis_point(a, b, y_axis));
        return out;
    }
    // y - a|x| + 1 is linear on each side of x = 0
    std::vector<Point> knots{a};
    if (to_int(sign_x(a)) * to_int(sign_x(b)) < 0) knots.push_back(axis_point(a, b, true));
    knots.push_back(b);
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        const Point& u = knots[i];
        const Point& w = knots[i + 1];
        const Sign su = fold_side(u, fold);
        const Sign sw = fold_side(w, fold);
        if (i > 0 && su == Sign::Zero) out.push_back(u);
        if (to_int(su) * to_int(sw) < 0) {
            const Scalar hu = preimage_h(u, fold.a);
            const Scalar hw = preimage_h(w, fold.a);
            out.push_back(lerp(u, w, hu / (hu - hw)));
        }
    }
    return out;
}

Polyline split_at_fold(const Polyline& line, const Fold& fold) {
    if (line.vertices.size() < 2) return line;
    Polyline out;
    out.vertices.reserve(line.vertices.size() + 4);
    out.vertices.push_back(line.vertices.front());
    for (std::size_t i = 1; i < line.vertices.size(); ++i) {
        for (auto& p : fold_points(line.vertices[i - 1], line.vertices[i], fold)) out.vertices.push_back(std::move(p));
        out.vertices.push_back(line.vertices[i]);
    }
    return out;
}

// ---------------------------------------------------------------- Hausdorff

namespace {

struct FSeg {
    double ax, ay, bx, by;
};

std::vector<FSeg> float_segments(const std::vector<Point>& v, bool closed) {
    std::vector<FSeg> s;
    const std::size_t n = v.size();
    if (n == 1) s.push_back({v[0].approx_x(), v[0].approx_y(), v[0].approx_x(), v[0].approx_y()});
    const std::size_t nseg = n < 2 ? 0 : (closed ? n : n - 1);
    for (std::size_t i = 0; i < nseg; ++i) {
        const Point& p = v[i];
        const Point& q = v[(i + 1) % n];
        s.push_back({p.approx_x(), p.approx_y(), q.approx_x(), q.approx_y()});
    }
    return s;
}

double point_segment_distance(double px, double py, const FSeg& s) {
    const double dx = s.bx - s.ax, dy = s.by - s.ay;
    const double len2 = dx * dx + dy * dy;
    double t = len2 > 0 ? ((px - s.ax) * dx + (py - s.ay) * dy) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return std::hypot(px - (s.ax + t * dx), py - (s.ay + t * dy));
}

double distance_to_set(double px, double py, const std::vector<FSeg>& B) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& s : B) best = std::min(best, point_segment_distance(px, py, s));
    return best;
}

// sup over A of dist(., B). Distance to B is 1-Lipschitz, so on a piece of
// length l with midpoint value f the supremum is at most f + l/2.
HausdorffResult directed(const std::vector<FSeg>& A, const std::vector<FSeg>& B, double tol) {
    double best = 0.0;
    for (const auto& s : A) {
        best = std::max(best, distance_to_set(s.ax, s.ay, B));
        best = std::max(best, distance_to_set(s.bx, s.by, B));
    }
    double residual = 0.0;
    std::size_t evals = 0;
    const std::size_t eval_cap = 4'000'000;
    for (const auto& s : A) {
        const double len = std::hypot(s.bx - s.ax, s.by - s.ay);
        if (len == 0.0) continue;
        struct Piece {
            double t0, t1, ub, f;
        };
        auto make = [&](double t0, double t1) {
            const double tm = 0.5 * (t0 + t1);
            const double f = distance_to_set(s.ax + tm * (s.bx - s.ax), s.ay + tm * (s.by - s.ay), B);
            ++evals;
            return Piece{t0, t1, f + 0.5 * (t1 - t0) * len, f};
        };
        std::vector<Piece> stack{make(0.0, 1.0)};
        while (!stack.empty()) {
            Piece p = stack.back();
            stack.pop_back();
            best = std::max(best, p.f);
            if (p.ub <= best + tol) continue;
            if (evals > eval_cap) {
                residual = std::max(residual, p.ub - best);
                continue;
            }
            const double tm = 0.5 * (p.t0 + p.t1);
            stack.push_back(make(p.t0, tm));
            stack.push_back(make(tm, p.t1));
        }
    }
    return {best, std::max(residual, tol)};
}

}  // namespace

HausdorffResult hausdorff_distance(const std::vector<Point>& A, bool a_closed, const std::vector<Point>& B,
                                   bool b_closed, int precision_bits) {
    if (A.empty() || B.empty()) throw PreconditionError("hausdorff_distance of an empty set");
    const auto fa = float_segments(A, a_closed);
    const auto fb = float_segments(B, b_closed);
    double scale = 0.0;
    for (const auto* set : {&fa, &fb}) {
        for (const auto& s : *set) {
            scale = std::max({scale, std::fabs(s.ax), std::fabs(s.ay), std::fabs(s.bx), std::fabs(s.by)});
        }
    }
    const int bits = std::clamp(precision_bits, 20, 50);
    const double tol = std::max(scale, 1.0) * std::ldexp(1.0, -bits);
    const auto ab = directed(fa, fb, tol);
    const auto ba = directed(fb, fa, tol);
    // coordinates themselves carry double rounding of relative size 2^-52
    const double rounding = std::max(scale, 1.0) * 8.0 * std::ldexp(1.0, -52);
    return {std::max(ab.value, ba.value), std::max(ab.error_bound, ba.error_bound) + rounding};
}

HausdorffResult hausdorff_distance(const Polyline& A, const Polyline& B, int precision_bits) {
    return hausdorff_distance(A.vertices, false, B.vertices, false, precision_bits);
}

HausdorffResult hausdorff_distance(const SimplePolygon& A, const SimplePolygon& B, int precision_bits) {
    return hausdorff_distance(A.vertices(), true, B.vertices(), true, precision_bits);
}

}  // namespace lozi
