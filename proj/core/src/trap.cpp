#include "lozi/trap.hpp"

#include <algorithm>
#include <cmath>

namespace lozi {

namespace {

struct Hit {
    std::size_t seg;  // segment holding the point (v[seg], v[seg + 1])
    Point point;
    bool touch;
};

// Meetings of a polyline with Ox in traversal order.
std::vector<Hit> ox_hits(const std::vector<Point>& v) {
    std::vector<Hit> out;
    const std::size_t n = v.size();
    if (n < 2) return out;
    std::vector<int> s(n);
    for (std::size_t i = 0; i < n; ++i) s[i] = to_int(sign_y(v[i]));
    for (std::size_t i = 0; i < n; ++i) {
        if (s[i] == 0) {
            const int prev = i > 0 ? s[i - 1] : 0;
            const int next = i + 1 < n ? s[i + 1] : 0;
            out.push_back({std::min(i, n - 2), v[i], prev != 0 && prev == next});
        }
        if (i + 1 < n && s[i] * s[i + 1] < 0) {
            const Scalar t = v[i].y / (v[i].y - v[i + 1].y);
            out.push_back({i, Point(v[i].x + t * (v[i + 1].x - v[i].x), Scalar(0)), false});
        }
    }
    return out;
}

// Vertices from v[0] up to p, where p lies on segment seg.
Polyline head_to(const std::vector<Point>& v, std::size_t seg, const Point& p) {
    std::vector<Point> out(v.begin(), v.begin() + static_cast<long>(seg) + 1);
    if (!same_point(out.back(), p)) out.push_back(p);
    return Polyline(std::move(out));
}

// Vertices from p (on segment seg) to the end.
Polyline tail_from(const std::vector<Point>& v, std::size_t seg, const Point& p) {
    std::vector<Point> out{p};
    for (std::size_t i = seg + 1; i < v.size(); ++i) {
        if (!same_point(out.back(), v[i])) out.push_back(v[i]);
    }
    return Polyline(std::move(out));
}

std::optional<std::size_t> locate(const std::vector<Point>& v, const Point& p) {
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
        if (on_segment(p, v[i], v[i + 1])) return i;
    }
    return std::nullopt;
}

// Closest point of segment [p, q] to c, with its squared distance.
std::pair<Point, Scalar> closest_on_segment(const Point& p, const Point& q, const Point& c) {
    const Scalar dx = q.x - p.x, dy = q.y - p.y;
    const Scalar dd = dx * dx + dy * dy;
    Scalar t = ((c.x - p.x) * dx + (c.y - p.y) * dy) / dd;
    if (sign(t) == Sign::Negative) t = Scalar(0);
    if (compare(t, Scalar(1)) == Sign::Positive) t = Scalar(1);
    Point m = lerp(p, q, t);
    Scalar d = squared_distance(m, c);
    return {std::move(m), std::move(d)};
}

SimplePolygon ring_image(const Params& params, const SimplePolygon& poly, int k, const ManifoldBudget& budget) {
    std::vector<Point> ring = poly.vertices();
    ring.push_back(ring.front());
    Polyline img = image_of_polyline(params, Polyline(std::move(ring)), k, budget);
    img.vertices.pop_back();
    return SimplePolygon(std::move(img.vertices));
}

bool located(const Point& p, const SimplePolygon& poly) { return point_in_polygon(p, poly) != Location::Exterior; }

}  // namespace

const char* to_string(TrapConstruction::Case c) {
    return c == TrapConstruction::Case::UPlusCrossesOx ? "UPlusCrossesOx" : "OnlyZ";
}

bool chord_meets_manifold_only_at_ends(const UnstableManifold& manifold, const Point& S, const Point& T) {
    if (same_point(S, T)) return true;
    const Box cb = segment_box(S, T);
    for (Branch b : {Branch::UPlus, Branch::UMinus}) {
        const auto v = manifold.path(b).vertices;
        for (std::size_t i = 0; i + 1 < v.size(); ++i) {
            if (!segment_box(v[i], v[i + 1]).overlaps(cb)) continue;
            const auto r = segment_intersection(v[i], v[i + 1], S, T);
            if (r.kind == SegmentIntersection::Kind::Empty) continue;
            if (r.kind == SegmentIntersection::Kind::Subsegment) return false;
            if (!same_point(r.p, S) && !same_point(r.p, T)) return false;
        }
    }
    return true;
}

TrapConstruction construct_T(const Params& params, const UnstableManifold& manifold) {
    const CrossingCensus census = crossing_census(axis_crossings(params, manifold));
    if (census.finite_evidence) {
        throw PreconditionError("no axis crossings in the last " + std::to_string(census.window) +
                                " arcs at depth " + std::to_string(census.depth) +
                                ": finite-crossings regime, use the certificate instead");
    }
    TrapConstruction tc;
    tc.depth = manifold.depth_reached;
    const auto& plus = manifold.plus;
    const int depth = manifold.depth_reached;

    for (int j = 1; j <= depth; ++j) {
        if (!ox_hits(plus[j].polyline.vertices).empty()) {
            tc.i = j - 1;
            break;
        }
    }
    if (tc.i >= 0) {
        tc.which = TrapConstruction::Case::UPlusCrossesOx;
        for (int kk = 1; tc.i + kk <= depth; ++kk) {
            if (!meets_fold_preimage(params, plus[tc.i + kk].polyline)) {
                tc.k = kk;
                break;
            }
        }
        if (tc.k < 0) {
            throw BudgetExhausted("every arc after index " + std::to_string(tc.i) + " up to depth " +
                                  std::to_string(depth) + " meets y = a|x| - 1");
        }
        const int m = tc.i + tc.k;
        const auto& v = plus[m].polyline.vertices;
        const auto hits = ox_hits(v);
        if (hits.empty()) throw InconsistencyError("the arc chosen for S does not meet Ox");
        const Hit* best = &hits.front();
        for (const auto& h : hits) {
            if (compare(h.point.x, best->point.x) == Sign::Positive) best = &h;
        }
        tc.S = best->point;
        tc.T = best->point;
        tc.t_arc = m;
        Polyline path;
        for (int n = 0; n < m; ++n) path = concat(path, plus[n].polyline);
        tc.z_to_t = concat(path, head_to(v, best->seg, tc.S));
    } else {
        tc.which = TrapConstruction::Case::OnlyZ;
        Polyline mp;
        std::vector<std::size_t> arc_start;  // first segment of each minus arc in mp
        for (const auto& arc : manifold.minus) {
            arc_start.push_back(mp.vertices.empty() ? 0 : mp.size() - 1);
            mp = concat(mp, arc.polyline);
        }
        std::vector<Hit> hits;
        for (auto& h : ox_hits(mp.vertices)) {
            if (!h.touch) hits.push_back(std::move(h));
        }
        if (hits.size() < 3) {
            throw BudgetExhausted("fewer than three crossings of UMinus with Ox at depth " + std::to_string(depth));
        }
        for (int q = 0; q < 3; ++q) tc.B.push_back(hits[q].point);
        tc.S = hits[1].point;
        const Point Zm1 = mp.front();
        // [S, B3]^u as a sequence of segments; ties go to the point furthest along
        const Polyline sub = head_to(tail_from(mp.vertices, hits[1].seg, hits[1].point).vertices,
                                     hits[2].seg - hits[1].seg, hits[2].point);
        std::optional<std::pair<Point, Scalar>> best;
        std::size_t best_seg = 0;
        for (std::size_t s = 0; s + 1 < sub.size(); ++s) {
            auto c = closest_on_segment(sub[s], sub[s + 1], Zm1);
            if (!best || compare(c.second, best->second) != Sign::Positive) {
                best = std::move(c);
                best_seg = s;
            }
        }
        const Point Tm1 = best->first;
        const std::size_t seg = hits[1].seg + best_seg;
        // a point on the shared end of two segments belongs to the later one
        const std::size_t mseg = (same_point(Tm1, mp[seg + 1]) && seg + 2 < mp.size()) ? seg + 1 : seg;
        tc.t_arc = static_cast<int>(std::upper_bound(arc_start.begin(), arc_start.end(), mseg) - arc_start.begin()) - 1;
        tc.T_minus1 = Tm1;
        tc.T = step_forward(params, Tm1);
        tc.z_to_t = image_of_polyline(params, head_to(mp.vertices, mseg, Tm1), 1);
        if (!same_point(tc.z_to_t.back(), tc.T)) throw InconsistencyError("image of [Z^-1, T^-1] does not end at T");
    }
    tc.chord_verified = chord_meets_manifold_only_at_ends(manifold, tc.S, tc.T);
    if (!tc.chord_verified) throw InconsistencyError("chord ST meets the computed manifold away from S and T");
    return tc;
}

TrapConstruction construct_T(const Params& params, int depth, const ManifoldBudget& budget) {
    return construct_T(params, unstable_manifold(params, depth, budget, false));
}

SimplePolygon build_polygon_D(const TrapConstruction& tc) {
    const auto& ring = tc.z_to_t.vertices;
    if (!is_simple(ring, true)) throw InconsistencyError("boundary of D is not simple");
    return SimplePolygon(ring);
}

Polyline t_to_t2(const Params& params, const TrapConstruction& tc, const UnstableManifold& manifold) {
    if (tc.t_arc < 0 || tc.t_arc >= static_cast<int>(manifold.plus.size())) {
        throw PreconditionError("arc holding T was not computed");
    }
    const auto& v = manifold.plus[tc.t_arc].polyline.vertices;
    const auto seg = locate(v, tc.T);
    if (!seg) throw InconsistencyError("T does not lie on its arc");
    const Polyline head = head_to(v, *seg, tc.T);
    const Polyline tail = tail_from(v, *seg, tc.T);
    if (head.size() < 2) return manifold.plus[tc.t_arc].polyline;
    return concat(tail, image_of_polyline(params, head, 2));
}

SimplePolygon build_polygon_K(const Params& params, const TrapConstruction& tc, const UnstableManifold& manifold) {
    const Point& Z = manifold.plus[0].polyline.front();
    std::vector<Point> ring{tc.T};
    for (const auto& p : manifold.plus[0].polyline.vertices) ring.push_back(p);
    const Polyline chord2 = image_of_polyline(params, Polyline({Z, tc.T}), 2);
    ring.insert(ring.end(), chord2.vertices.begin() + 1, chord2.vertices.end());
    const Polyline back = t_to_t2(params, tc, manifold).reversed();
    if (back.size() > 2) ring.insert(ring.end(), back.vertices.begin() + 1, back.vertices.end() - 1);
    if (!is_simple(ring, true)) throw InconsistencyError("boundary of K is not simple");
    return SimplePolygon(std::move(ring));
}

SimplePolygon image2(const Params& params, const SimplePolygon& poly, const ManifoldBudget& budget) {
    return ring_image(params, poly, 2, budget);
}

SimplePolygon image1(const Params& params, const SimplePolygon& poly, const ManifoldBudget& budget) {
    return ring_image(params, poly, 1, budget);
}

std::vector<SimplePolygon> iterate_D(const Params& params, const SimplePolygon& D, int k,
                                     const ManifoldBudget& budget) {
    if (k < 1) throw PreconditionError("k must be >= 1");
    std::vector<SimplePolygon> out;
    const SimplePolygon* prev = &D;
    for (int j = 1; j <= k; ++j) {
        SimplePolygon next = image2(params, *prev, budget);
        if (!polygon_contains_closed(*prev, next)) {
            throw InconsistencyError("L^" + std::to_string(2 * j) + "(D) is not inside its predecessor");
        }
        out.push_back(std::move(next));
        prev = &out.back();
    }
    return out;
}

std::optional<int> trapping_index(const SimplePolygon& D, const std::vector<SimplePolygon>& iterates) {
    for (std::size_t j = 0; j < iterates.size(); ++j) {
        if (polygon_contains_strict(D, iterates[j])) return static_cast<int>(j + 1);
    }
    return std::nullopt;
}

std::optional<int> trapping_index(const Params& params, const SimplePolygon& D, int max_k,
                                  const ManifoldBudget& budget) {
    SimplePolygon cur = D;
    for (int j = 1; j <= max_k; ++j) {
        cur = image2(params, cur, budget);
        if (polygon_contains_strict(D, cur)) return j;
    }
    return std::nullopt;
}

double float_diameter(const SimplePolygon& poly) {
    std::vector<std::pair<double, double>> p;
    p.reserve(poly.size());
    for (const auto& v : poly.vertices()) p.emplace_back(v.approx_x(), v.approx_y());
    std::sort(p.begin(), p.end());
    p.erase(std::unique(p.begin(), p.end()), p.end());
    if (p.size() < 3) {
        return p.size() < 2 ? 0.0 : std::hypot(p[0].first - p[1].first, p[0].second - p[1].second);
    }
    // monotone chain hull, then all pairs on the hull
    auto cross = [](auto o, auto a, auto b) {
        return (a.first - o.first) * (b.second - o.second) - (a.second - o.second) * (b.first - o.first);
    };
    std::vector<std::pair<double, double>> h(2 * p.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        while (k >= 2 && cross(h[k - 2], h[k - 1], p[i]) <= 0) --k;
        h[k++] = p[i];
    }
    for (std::size_t i = p.size() - 1, t = k + 1; i-- > 0;) {
        while (k >= t && cross(h[k - 2], h[k - 1], p[i]) <= 0) --k;
        h[k++] = p[i];
    }
    h.resize(k - 1);
    double d = 0;
    for (std::size_t i = 0; i < h.size(); ++i) {
        for (std::size_t j = i + 1; j < h.size(); ++j) {
            d = std::max(d, std::hypot(h[i].first - h[j].first, h[i].second - h[j].second));
        }
    }
    return d;
}

EllApproximation ell_approximation(const Params& params, const SimplePolygon& D, int k, double stop_diameter,
                                   const ManifoldBudget& budget) {
    if (k < 0) throw PreconditionError("k must be >= 0");
    const Point& P = params.P();
    const Point& P1 = params.P1();
    EllApproximation ell;
    ell.right = D;
    ell.left = image1(params, D, budget);
    auto record = [&](int j, double change) {
        if (!located(P, ell.right) || !located(P1, ell.left)) {
            throw InconsistencyError("period-two orbit left the iterate of D at k = " + std::to_string(j));
        }
        EllStep s;
        s.k = j;
        s.area = polygon_area(ell.right);
        s.diameter = std::max(float_diameter(ell.right), float_diameter(ell.left));
        s.change = change;
        s.vertices = ell.right.size();
        ell.k = j;
        ell.area = s.area;
        ell.diameter = s.diameter;
        ell.steps.push_back(std::move(s));
    };
    record(0, 0.0);
    for (int j = 1; j <= k; ++j) {
        if (stop_diameter > 0 && ell.diameter < stop_diameter) break;
        SimplePolygon next = image2(params, ell.right, budget);
        const double change = hausdorff_distance(ell.right, next).value;
        ell.right = std::move(next);
        ell.left = image1(params, ell.right, budget);
        record(j, change);
    }
    ell.P_inside = true;
    ell.P1_inside = true;
    return ell;
}

TrapReport run_trap(const Params& params, const UnstableManifold& manifold, int max_k, const ManifoldBudget& budget) {
    TrapReport r;
    r.max_k = max_k;
    r.construction = construct_T(params, manifold);
    r.D = build_polygon_D(r.construction);
    r.K = build_polygon_K(params, r.construction, manifold);
    r.area_D = polygon_area(r.D);
    r.area_K = polygon_area(r.K);

    const SimplePolygon* prev = &r.D;
    for (int j = 1; j <= max_k; ++j) {
        SimplePolygon next = image2(params, *prev, budget);
        if (!polygon_contains_closed(*prev, next)) {
            throw InconsistencyError("L^" + std::to_string(2 * j) + "(D) is not inside its predecessor");
        }
        if (j == 1) r.invariant = true;
        const bool strict = polygon_contains_strict(r.D, next);
        r.iterates.push_back(std::move(next));
        prev = &r.iterates.back();
        if (strict) {
            r.trapping_index = j;
            break;
        }
    }

    const int k = static_cast<int>(r.iterates.size());
    const Scalar b2 = params.b() * params.b();
    r.area_law = true;
    Scalar scale(1);
    for (int j = 1; j <= k; ++j) {
        scale = scale * b2;
        if (!(polygon_area(r.iterates[j - 1]) == r.area_D * scale)) r.area_law = false;
    }

    const SimplePolygon K2 = image2(params, r.K, budget);
    r.k_interiors_disjoint = polygon_interiors_disjoint(r.K, K2);
    Scalar sum = r.area_K;
    SimplePolygon Kj = r.K;
    for (int j = 1; j < k; ++j) {
        Kj = j == 1 ? K2 : image2(params, Kj, budget);
        sum = sum + polygon_area(Kj);
    }
    r.area_identity = k >= 1 && r.area_D == polygon_area(r.iterates.back()) + sum;

    r.periodic_inside = params.period_two_range() && located(params.P(), r.D) &&
                        located(params.P1(), image1(params, r.D, budget));
    for (const auto& it : r.iterates) {
        if (!r.periodic_inside) break;
        r.periodic_inside = located(params.P(), it) && located(params.P1(), image1(params, it, budget));
    }
    return r;
}

TrapReport run_trap(const Params& params, int depth, int max_k, const ManifoldBudget& budget) {
    return run_trap(params, unstable_manifold(params, depth, budget, false), max_k, budget);
}

}  // namespace lozi
