#pragma once

// Exact planar primitives. Every predicate first consults the cached double
// enclosures of the coordinates and falls back to exact Scalar arithmetic only
// when the interval answer straddles zero.

#include <cstddef>
#include <optional>
#include <vector>

#include "lozi/numeric.hpp"

namespace lozi {

struct Point {
    Scalar x;
    Scalar y;
    Interval fx;
    Interval fy;

    Point() : fx{0, 0}, fy{0, 0} {}
    Point(Scalar x_, Scalar y_) : x(std::move(x_)), y(std::move(y_)), fx(x.enclosure()), fy(y.enclosure()) {}

    double approx_x() const { return fx.mid(); }
    double approx_y() const { return fy.mid(); }
    std::size_t bits() const { return std::max(x.bits(), y.bits()); }
};

bool same_point(const Point& a, const Point& b);
inline bool operator==(const Point& a, const Point& b) { return same_point(a, b); }
inline bool operator!=(const Point& a, const Point& b) { return !same_point(a, b); }

Point midpoint(const Point& a, const Point& b);
// a + t (b - a)
Point lerp(const Point& a, const Point& b, const Scalar& t);

Sign sign_x(const Point& p);
Sign sign_y(const Point& p);

// Sign of the cross product (b - a) x (c - a): Positive for a left turn.
Sign orientation(const Point& a, const Point& b, const Point& c);

// Exact comparison of p and q along the direction of segment a->b.
Sign compare_along(const Point& a, const Point& b, const Point& p, const Point& q);

Scalar squared_distance(const Point& a, const Point& b);

struct Segment {
    Point a;
    Point b;
};

struct SegmentIntersection {
    enum class Kind { Empty, Point, Subsegment };
    Kind kind = Kind::Empty;
    Point p;  // the point, or the start of the overlap
    Point q;  // end of the overlap for Subsegment
};

// Exact classification; collinear overlap is returned as Subsegment.
SegmentIntersection segment_intersection(const Point& a, const Point& b, const Point& c, const Point& d);
inline SegmentIntersection segment_intersection(const Segment& s1, const Segment& s2) {
    return segment_intersection(s1.a, s1.b, s2.a, s2.b);
}
bool on_segment(const Point& p, const Point& a, const Point& b);

struct Polyline {
    std::vector<Point> vertices;

    Polyline() = default;
    explicit Polyline(std::vector<Point> v) : vertices(std::move(v)) {}
    std::size_t size() const { return vertices.size(); }
    std::size_t segments() const { return vertices.empty() ? 0 : vertices.size() - 1; }
    const Point& front() const { return vertices.front(); }
    const Point& back() const { return vertices.back(); }
    const Point& operator[](std::size_t i) const { return vertices[i]; }
    Polyline reversed() const;
    double approx_length() const;
};

// Concatenate, dropping the duplicated joint vertex.
Polyline concat(const Polyline& a, const Polyline& b);

class SimplePolygon {
public:
    SimplePolygon() = default;
    // Requires >= 3 vertices and nonzero area; reorders to counterclockwise.
    explicit SimplePolygon(std::vector<Point> vertices);

    const std::vector<Point>& vertices() const { return v_; }
    std::size_t size() const { return v_.size(); }
    const Point& operator[](std::size_t i) const { return v_[i]; }
    const Point& next(std::size_t i) const { return v_[(i + 1) % v_.size()]; }

private:
    std::vector<Point> v_;
};

// Twice the signed area of the closed ring.
Scalar signed_area2(const std::vector<Point>& ring);
Scalar polygon_area(const SimplePolygon& poly);

enum class Location { Interior, Boundary, Exterior };
const char* to_string(Location l);
Location point_in_polygon(const Point& p, const SimplePolygon& poly);

// Exact simplicity of an open polyline or closed ring (pairwise segment tests,
// shared endpoints of neighbours allowed).
bool is_simple(const std::vector<Point>& vertices, bool closed);

struct Fold {
    enum class Kind { YAxis, XAxis, PreimageOfYAxis };
    Kind kind = Kind::YAxis;
    Scalar a;  // slope parameter, used by PreimageOfYAxis (y = a|x| - 1)

    static Fold y_axis() { return {Kind::YAxis, Scalar(0)}; }
    static Fold x_axis() { return {Kind::XAxis, Scalar(0)}; }
    static Fold preimage_of_y_axis(Scalar a) { return {Kind::PreimageOfYAxis, std::move(a)}; }
};

// Side of p relative to the fold (sign of x, of y, or of y - a|x| + 1).
Sign fold_side(const Point& p, const Fold& fold);

// Inserts exact fold points so that no segment has an interior point on the fold.
Polyline split_at_fold(const Polyline& line, const Fold& fold);
// Interior points of segment a->b lying on the fold, in order from a.
std::vector<Point> fold_points(const Point& a, const Point& b, const Fold& fold);

struct HausdorffResult {
    double value = 0.0;
    double error_bound = 0.0;
};

// Symmetric Hausdorff distance of the point sets (vertices and edges).
// Closed rings are given with closed = true.
HausdorffResult hausdorff_distance(const std::vector<Point>& A, bool a_closed, const std::vector<Point>& B,
                                   bool b_closed, int precision_bits = 53);
HausdorffResult hausdorff_distance(const Polyline& A, const Polyline& B, int precision_bits = 53);
HausdorffResult hausdorff_distance(const SimplePolygon& A, const SimplePolygon& B, int precision_bits = 53);

struct Box {
    double xmin, ymin, xmax, ymax;
    bool overlaps(const Box& o) const {
        return !(o.xmin > xmax || o.xmax < xmin || o.ymin > ymax || o.ymax < ymin);
    }
};
Box segment_box(const Point& a, const Point& b);

// Uniform grid over segment bounding boxes for candidate-pair queries.
class SegmentIndex {
public:
    SegmentIndex() = default;
    explicit SegmentIndex(const std::vector<Box>& boxes);
    // Indices of segments whose boxes overlap `query`, ascending and unique.
    std::vector<std::size_t> query(const Box& query) const;
    std::size_t size() const { return boxes_.size(); }

private:
    std::vector<Box> boxes_;
    Box extent_{0, 0, 0, 0};
    std::size_t nx_ = 1, ny_ = 1;
    double cw_ = 1, ch_ = 1;
    std::vector<std::vector<std::size_t>> cells_;
    void cell_range(const Box& b, std::size_t& x0, std::size_t& x1, std::size_t& y0, std::size_t& y1) const;
};

std::vector<Box> segment_boxes(const std::vector<Point>& v, bool closed);

// inner is a subset of outer (boundary contact allowed).
bool polygon_contains_closed(const SimplePolygon& outer, const SimplePolygon& inner);
// inner is a subset of Int(outer): every vertex Interior, no boundary contact.
bool polygon_contains_strict(const SimplePolygon& outer, const SimplePolygon& inner);
// Int(A) and Int(B) are disjoint.
bool polygon_interiors_disjoint(const SimplePolygon& A, const SimplePolygon& B);

}  // namespace lozi
