#include <algorithm>
#include <cmath>

#include "lozi/geom.hpp"

namespace lozi {

namespace {
constexpr double kClamp = 1e300;
double clampd(double v) { return std::clamp(v, -kClamp, kClamp); }
}  // namespace

Box segment_box(const Point& a, const Point& b) {
    return {clampd(std::min(a.fx.lo, b.fx.lo)), clampd(std::min(a.fy.lo, b.fy.lo)),
            clampd(std::max(a.fx.hi, b.fx.hi)), clampd(std::max(a.fy.hi, b.fy.hi))};
}

std::vector<Box> segment_boxes(const std::vector<Point>& v, bool closed) {
    std::vector<Box> boxes;
    const std::size_t n = v.size();
    if (n < 2) return boxes;
    const std::size_t nseg = closed ? n : n - 1;
    boxes.reserve(nseg);
    for (std::size_t i = 0; i < nseg; ++i) boxes.push_back(segment_box(v[i], v[(i + 1) % n]));
    return boxes;
}

SegmentIndex::SegmentIndex(const std::vector<Box>& boxes) : boxes_(boxes) {
    if (boxes_.empty()) return;
    extent_ = boxes_.front();
    for (const auto& b : boxes_) {
        extent_.xmin = std::min(extent_.xmin, b.xmin);
        extent_.ymin = std::min(extent_.ymin, b.ymin);
        extent_.xmax = std::max(extent_.xmax, b.xmax);
        extent_.ymax = std::max(extent_.ymax, b.ymax);
    }
    const auto side = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(boxes_.size()))));
    nx_ = ny_ = std::clamp<std::size_t>(side, 1, 256);
    cw_ = (extent_.xmax - extent_.xmin) / static_cast<double>(nx_);
    ch_ = (extent_.ymax - extent_.ymin) / static_cast<double>(ny_);
    if (!(cw_ > 0) || !std::isfinite(cw_)) { nx_ = 1; cw_ = 1; }
    if (!(ch_ > 0) || !std::isfinite(ch_)) { ny_ = 1; ch_ = 1; }
    cells_.assign(nx_ * ny_, {});
    for (std::size_t i = 0; i < boxes_.size(); ++i) {
        std::size_t x0, x1, y0, y1;
        cell_range(boxes_[i], x0, x1, y0, y1);
        for (std::size_t cx = x0; cx <= x1; ++cx)
            for (std::size_t cy = y0; cy <= y1; ++cy) cells_[cy * nx_ + cx].push_back(i);
    }
}

void SegmentIndex::cell_range(const Box& b, std::size_t& x0, std::size_t& x1, std::size_t& y0,
                              std::size_t& y1) const {
    auto cell = [](double v, double lo, double w, std::size_t n) {
        double c = std::floor((v - lo) / w);
        if (!(c >= 0)) return std::size_t{0};
        if (c >= static_cast<double>(n)) return n - 1;
        return static_cast<std::size_t>(c);
    };
    x0 = cell(b.xmin, extent_.xmin, cw_, nx_);
    x1 = cell(b.xmax, extent_.xmin, cw_, nx_);
    y0 = cell(b.ymin, extent_.ymin, ch_, ny_);
    y1 = cell(b.ymax, extent_.ymin, ch_, ny_);
}

std::vector<std::size_t> SegmentIndex::query(const Box& q) const {
    std::vector<std::size_t> out;
    if (boxes_.empty() || !q.overlaps(extent_)) return out;
    std::size_t x0, x1, y0, y1;
    cell_range(q, x0, x1, y0, y1);
    for (std::size_t cx = x0; cx <= x1; ++cx)
        for (std::size_t cy = y0; cy <= y1; ++cy)
            for (std::size_t i : cells_[cy * nx_ + cx])
                if (boxes_[i].overlaps(q)) out.push_back(i);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// ---------------------------------------------------------------- containment

namespace {

// Locations relative to `outer` of each vertex of `inner` and of the midpoint
// of every piece of an inner edge cut by the outer boundary. A piece between
// consecutive cuts cannot change location, so these samples decide the edge.
// Stops early (returning false) as soon as reject(location) holds.
template <class Reject>
bool sample_boundary(const SimplePolygon& inner, const SimplePolygon& outer, const SegmentIndex& index,
                     Reject&& reject, bool& all_boundary) {
    const auto& v = inner.vertices();
    const auto& w = outer.vertices();
    const std::size_t n = v.size(), m = w.size();
    all_boundary = true;
    std::vector<Location> vloc(n);
    for (std::size_t i = 0; i < n; ++i) {
        vloc[i] = point_in_polygon(v[i], outer);
        if (reject(vloc[i])) return false;
        if (vloc[i] != Location::Boundary) all_boundary = false;
    }
    for (std::size_t i = 0; i < n; ++i) {
        const Point& u = v[i];
        const Point& t = v[(i + 1) % n];
        std::vector<Point> cuts{u, t};
        for (std::size_t j : index.query(segment_box(u, t))) {
            const auto r = segment_intersection(u, t, w[j], w[(j + 1) % m]);
            if (r.kind == SegmentIntersection::Kind::Empty) continue;
            cuts.push_back(r.p);
            if (r.kind == SegmentIntersection::Kind::Subsegment) cuts.push_back(r.q);
        }
        if (cuts.size() == 2 && vloc[i] == Location::Interior && vloc[(i + 1) % n] == Location::Interior) continue;
        std::sort(cuts.begin(), cuts.end(),
                  [&](const Point& p, const Point& q) { return compare_along(u, t, p, q) == Sign::Negative; });
        cuts.erase(std::unique(cuts.begin(), cuts.end(), [](const Point& p, const Point& q) { return same_point(p, q); }),
                   cuts.end());
        for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
            const Location l = point_in_polygon(midpoint(cuts[k], cuts[k + 1]), outer);
            if (reject(l)) return false;
            if (l != Location::Boundary) all_boundary = false;
        }
    }
    return true;
}

}  // namespace

bool polygon_contains_closed(const SimplePolygon& outer, const SimplePolygon& inner) {
    SegmentIndex index(segment_boxes(outer.vertices(), true));
    bool all_boundary = false;
    return sample_boundary(inner, outer, index, [](Location l) { return l == Location::Exterior; }, all_boundary);
}

bool polygon_contains_strict(const SimplePolygon& outer, const SimplePolygon& inner) {
    for (const auto& p : inner.vertices()) {
        if (point_in_polygon(p, outer) != Location::Interior) return false;
    }
    const auto& v = inner.vertices();
    const auto& w = outer.vertices();
    SegmentIndex index(segment_boxes(w, true));
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Point& u = v[i];
        const Point& t = v[(i + 1) % v.size()];
        for (std::size_t j : index.query(segment_box(u, t))) {
            if (segment_intersection(u, t, w[j], w[(j + 1) % w.size()]).kind != SegmentIntersection::Kind::Empty)
                return false;
        }
    }
    return true;
}

bool polygon_interiors_disjoint(const SimplePolygon& A, const SimplePolygon& B) {
    auto interior = [](Location l) { return l == Location::Interior; };
    bool a_on_b = false, b_on_a = false;
    SegmentIndex ib(segment_boxes(B.vertices(), true));
    if (!sample_boundary(A, B, ib, interior, a_on_b)) return false;
    SegmentIndex ia(segment_boxes(A.vertices(), true));
    if (!sample_boundary(B, A, ia, interior, b_on_a)) return false;
    // Neither boundary enters the other interior; the interiors can then only
    // meet if the two polygons coincide.
    return !a_on_b;
}

}  // namespace lozi
