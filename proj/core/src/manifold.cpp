#include "lozi/manifold.hpp"

#include <algorithm>
#include <cmath>

namespace lozi {

void check_budget(const Polyline& line, const ManifoldBudget& budget) {
    if (line.size() > budget.max_vertices) {
        throw BudgetExhausted("polyline exceeds " + std::to_string(budget.max_vertices) + " vertices");
    }
    for (const auto& p : line.vertices) {
        if (p.bits() > budget.max_bits) {
            throw BudgetExhausted("coordinate exceeds " + std::to_string(budget.max_bits) + " bits");
        }
    }
}

Polyline image_of_polyline(const Params& params, const Polyline& line, int k, const ManifoldBudget& budget) {
    Polyline cur = line;
    const Fold forward = Fold::y_axis();
    const Fold backward = Fold::x_axis();
    for (int i = 0; i < std::abs(k); ++i) {
        const bool fwd = k > 0;
        Polyline split = split_at_fold(cur, fwd ? forward : backward);
        Polyline next;
        next.vertices.reserve(split.size());
        for (const auto& p : split.vertices) {
            next.vertices.push_back(fwd ? step_forward(params, p) : step_backward(params, p));
        }
        check_budget(next, budget);
        cur = std::move(next);
    }
    return cur;
}

const char* to_string(Branch b) {
    switch (b) {
        case Branch::UPlus: return "UPlus";
        case Branch::UMinus: return "UMinus";
        case Branch::SPlus: return "SPlus";
        case Branch::SMinus: return "SMinus";
    }
    return "?";
}

const char* to_string(Axis a) { return a == Axis::Ox ? "Ox" : "Oy"; }

// ---------------------------------------------------------------- unstable

Polyline UnstableManifold::path(Branch b) const {
    Polyline out = b == Branch::UPlus ? initial_plus : initial_minus;
    for (const auto& arc : arcs(b)) {
        out.vertices.insert(out.vertices.end(), arc.polyline.vertices.begin() + 1, arc.polyline.vertices.end());
    }
    return out;
}

std::size_t UnstableManifold::vertex_count() const {
    std::size_t n = initial_plus.size() + initial_minus.size();
    for (const auto& a : plus) n += a.polyline.size();
    for (const auto& a : minus) n += a.polyline.size();
    return n;
}

UnstableManifold unstable_manifold(const Params& params, int depth, const ManifoldBudget& budget,
                                   bool verify_injective) {
    if (!params.standard()) throw PreconditionError("unstable_manifold requires standard parameters");
    if (depth < 0) throw PreconditionError("depth must be >= 0");
    UnstableManifold m;
    m.depth_requested = depth;
    const Point& X = params.X();
    const Point& Z = params.Z();
    const Point Zm1 = step_backward(params, Z);
    const Point Z1 = step_forward(params, Z);
    m.initial_plus = Polyline({X, Z});
    m.initial_minus = Polyline({X, Zm1});
    m.minus.push_back({Branch::UMinus, 0, Polyline({Zm1, Z1})});
    m.plus.push_back({Branch::UPlus, 0, image_of_polyline(params, m.minus[0].polyline, 1, budget)});
    m.depth_reached = 0;
    for (int n = 1; n <= depth; ++n) {
        try {
            Polyline mn = image_of_polyline(params, m.plus.back().polyline, 1, budget);
            Polyline pn = image_of_polyline(params, mn, 1, budget);
            m.minus.push_back({Branch::UMinus, n, std::move(mn)});
            m.plus.push_back({Branch::UPlus, n, std::move(pn)});
            m.depth_reached = n;
        } catch (const BudgetExhausted& e) {
            if (!budget.allow_truncation) throw;
            m.truncated = true;
            m.truncation_reason = e.what();
            break;
        }
    }
    if (verify_injective) {
        Polyline whole = m.path(Branch::UMinus).reversed();
        const Polyline up = m.path(Branch::UPlus);
        whole.vertices.insert(whole.vertices.end(), up.vertices.begin() + 1, up.vertices.end());
        if (!is_simple(whole.vertices, false)) {
            throw InconsistencyError("computed unstable manifold intersects itself (" + params.describe() + ")");
        }
        m.injectivity_verified = true;
    }
    return m;
}

// ---------------------------------------------------------------- stable

Polyline StableManifold::minus_path() const {
    Polyline out;
    for (const auto& p : pieces) out = concat(out, p);
    return out;
}

Polyline StableManifold::plus_segment(double xmax, double ymax) const {
    const double dx = direction_plus.approx_x(), dy = direction_plus.approx_y();
    double t = 1.0;
    if (dx > 0) t = std::max(t, (xmax - X.approx_x()) / dx);
    if (dy > 0) t = std::max(t, (ymax - X.approx_y()) / dy);
    const Scalar ts(Rational(static_cast<long>(std::ceil(std::min(t, 1e15))) + 1));
    return Polyline({X, Point(X.x + ts * direction_plus.x, X.y + ts * direction_plus.y)});
}

StableManifold stable_manifold(const Params& params, int depth, const ManifoldBudget& budget) {
    if (!params.standard()) throw PreconditionError("stable_manifold requires standard parameters");
    StableManifold s;
    s.depth_requested = depth;
    s.X = params.X();
    const auto& e = params.eigen();
    s.direction_plus = e.v_s;  // lambda_s > 0 and b > 0: points up and right
    s.V = Point(Scalar(0), s.X.y - params.b() * s.X.x / e.lambda_s);
    s.V1 = step_forward(params, s.V);
    s.pieces.push_back(Polyline({s.X, s.V}));
    Polyline cur({s.V1, s.V});
    for (int m = 1; m <= 2 * depth; ++m) {
        try {
            cur = image_of_polyline(params, cur, -1, budget);
        } catch (const BudgetExhausted&) {
            if (!budget.allow_truncation) throw;
            s.truncated = true;
            break;
        }
        s.pieces.push_back(cur);
        s.steps_reached = m;
    }
    return s;
}

// ---------------------------------------------------------------- crossings

namespace {

Sign axis_sign(const Point& p, Axis a) { return a == Axis::Ox ? sign_y(p) : sign_x(p); }

Point axis_cut(const Point& p, const Point& q, Axis a) {
    const auto pts = fold_points(p, q, a == Axis::Ox ? Fold::x_axis() : Fold::y_axis());
    return pts.front();
}

struct Visit {
    Point point;
    bool touch;
    std::size_t index;  // vertex index, or index of the segment end for interior cuts
    double fraction;    // position inside segment (index-1, index); 1 for vertices
};

// Axis meetings along a polyline in traversal order.
std::vector<Visit> axis_visits(const std::vector<Point>& v, Axis axis) {
    std::vector<Visit> out;
    const std::size_t n = v.size();
    std::vector<int> s(n);
    for (std::size_t i = 0; i < n; ++i) s[i] = to_int(axis_sign(v[i], axis));
    for (std::size_t i = 0; i < n; ++i) {
        if (i > 0 && s[i - 1] * s[i] < 0) {
            Point c = axis_cut(v[i - 1], v[i], axis);
            const double a = axis == Axis::Ox ? v[i - 1].approx_y() : v[i - 1].approx_x();
            const double b = axis == Axis::Ox ? v[i].approx_y() : v[i].approx_x();
            out.push_back({std::move(c), false, i, a / (a - b)});
        }
        if (s[i] != 0 || (i > 0 && s[i - 1] == 0)) continue;
        std::size_t e = i;
        while (e + 1 < n && s[e + 1] == 0) ++e;
        const int prev = i > 0 ? s[i - 1] : 0;
        const int next = e + 1 < n ? s[e + 1] : 0;
        // an open end counts as a crossing: the conservative choice for evidence
        const bool touch = prev != 0 && next != 0 && prev == next;
        out.push_back({v[i], touch, i, 1.0});
    }
    return out;
}

}  // namespace

std::size_t CrossingList::crossings() const {
    return static_cast<std::size_t>(std::count_if(items.begin(), items.end(), [](const Crossing& c) { return !c.touch; }));
}

std::size_t CrossingList::touches() const { return items.size() - crossings(); }

std::vector<Crossing> CrossingList::of(Branch b, Axis a, bool include_touches) const {
    std::vector<Crossing> out;
    for (const auto& c : items) {
        if (c.branch == b && c.axis == a && (include_touches || !c.touch)) out.push_back(c);
    }
    return out;
}

CrossingCensus crossing_census(const CrossingList& list, int window) {
    CrossingCensus c;
    c.depth = list.depth;
    c.window = window > 0 ? window : std::max(2, list.depth / 4);
    for (const auto& x : list.items) {
        if (x.touch) continue;
        ++c.count;
        c.last_arc = std::max(c.last_arc, x.arc);
        if (x.arc >= 0) c.only_Z = false;
    }
    c.finite_evidence = c.last_arc <= c.depth - c.window;
    return c;
}

CrossingList axis_crossings(const Params& params, const UnstableManifold& manifold) {
    (void)params;
    CrossingList list;
    list.depth = manifold.depth_reached;
    for (Branch b : {Branch::UPlus, Branch::UMinus}) {
        const Polyline path = manifold.path(b);
        const auto& v = path.vertices;
        // arc index owning each vertex (a shared endpoint belongs to the arc ending there)
        std::vector<int> arc_of(v.size(), -1);
        std::size_t at = 2;
        for (const auto& arc : manifold.arcs(b)) {
            for (std::size_t k = 1; k < arc.polyline.size(); ++k) arc_of[at++] = arc.index;
        }
        std::vector<double> cum(v.size(), 0.0);
        for (std::size_t i = 1; i < v.size(); ++i) {
            cum[i] = cum[i - 1] + std::hypot(v[i].approx_x() - v[i - 1].approx_x(), v[i].approx_y() - v[i - 1].approx_y());
        }
        std::vector<std::pair<double, Crossing>> found;
        for (Axis axis : {Axis::Ox, Axis::Oy}) {
            for (auto& visit : axis_visits(v, axis)) {
                Crossing c;
                c.axis = axis;
                c.branch = b;
                c.touch = visit.touch;
                c.arc = arc_of[visit.index];
                c.arc_length = visit.fraction >= 1.0 ? cum[visit.index]
                                                     : cum[visit.index - 1] + visit.fraction * (cum[visit.index] - cum[visit.index - 1]);
                c.point = std::move(visit.point);
                found.emplace_back(c.arc_length, std::move(c));
            }
        }
        std::stable_sort(found.begin(), found.end(), [](const auto& l, const auto& r) { return l.first < r.first; });
        for (auto& f : found) list.items.push_back(std::move(f.second));
    }
    return list;
}

CrossingList axis_crossings(const Params& params, int depth) {
    return axis_crossings(params, unstable_manifold(params, depth, ManifoldBudget{}, false));
}

std::vector<Point> polyline_axis_points(const Polyline& line, Axis axis, bool include_touches) {
    std::vector<Point> out;
    for (auto& v : axis_visits(line.vertices, axis)) {
        if (include_touches || !v.touch) out.push_back(std::move(v.point));
    }
    return out;
}

bool meets_axis(const Polyline& line, Axis axis) {
    const auto& v = line.vertices;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const int s = to_int(axis_sign(v[i], axis));
        if (s == 0) return true;
        if (i > 0 && s * to_int(axis_sign(v[i - 1], axis)) < 0) return true;
    }
    return false;
}

bool meets_fold_preimage(const Params& params, const Polyline& line) {
    const Fold f = Fold::preimage_of_y_axis(params.a());
    const auto& v = line.vertices;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (fold_side(v[i], f) == Sign::Zero) return true;
        if (i > 0 && !fold_points(v[i - 1], v[i], f).empty()) return true;
    }
    return false;
}

}  // namespace lozi
