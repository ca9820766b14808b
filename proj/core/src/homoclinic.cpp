#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "lozi/manifold.hpp"

namespace lozi {

// ---------------------------------------------------------------- transversality

namespace {

int half_plane(const Point& d) {
    const Sign sy = sign_y(d);
    if (sy == Sign::Positive || (sy == Sign::Zero && sign_x(d) == Sign::Positive)) return 0;
    return 1;
}

// Rays from w along the polyline, or nullopt when w is an open end.
std::optional<std::array<Point, 2>> local_rays(const Polyline& line, std::size_t seg, const Point& w) {
    const auto& v = line.vertices;
    auto dir = [&](const Point& p) { return Point(p.x - w.x, p.y - w.y); };
    std::size_t k;
    if (same_point(w, v[seg])) k = seg;
    else if (same_point(w, v[seg + 1])) k = seg + 1;
    else return std::array<Point, 2>{dir(v[seg]), dir(v[seg + 1])};
    if (k == 0 || k + 1 >= v.size()) return std::nullopt;
    return std::array<Point, 2>{dir(v[k - 1]), dir(v[k + 1])};
}

}  // namespace

bool crossing_is_transversal(const Polyline& u, std::size_t u_seg, const Polyline& s, std::size_t s_seg,
                             const Point& w) {
    const auto ru = local_rays(u, u_seg, w);
    const auto rs = local_rays(s, s_seg, w);
    if (!ru || !rs) return false;
    struct Ray {
        Point d;
        int label;
    };
    std::vector<Ray> rays{{(*ru)[0], 0}, {(*ru)[1], 0}, {(*rs)[0], 1}, {(*rs)[1], 1}};
    auto less = [](const Ray& l, const Ray& r) {
        const int hl = half_plane(l.d), hr = half_plane(r.d);
        if (hl != hr) return hl < hr;
        return orientation(Point(Scalar(0), Scalar(0)), l.d, r.d) == Sign::Positive;
    };
    std::sort(rays.begin(), rays.end(), less);
    const Point O(Scalar(0), Scalar(0));
    for (std::size_t i = 0; i < 4; ++i) {
        const Ray& a = rays[i];
        const Ray& b = rays[(i + 1) % 4];
        // coincident directions mean the curves share a piece: not a crossing
        if (half_plane(a.d) == half_plane(b.d) && orientation(O, a.d, b.d) == Sign::Zero) return false;
        if (a.label == b.label) return false;
    }
    return true;
}

// ---------------------------------------------------------------- pair search

namespace {

// Segments of one piece whose boxes meet `clip`, with a grid index over them.
struct IndexedPiece {
    const Polyline* line;
    int id;
    std::vector<std::size_t> ids;  // segment numbers in `line`
    std::vector<Box> boxes;        // boxes[k] belongs to segment ids[k]
    SegmentIndex index;
    Box bbox{0, 0, 0, 0};

    IndexedPiece(const Polyline* l, int i, const Box& clip) : line(l), id(i) {
        const auto all = segment_boxes(l->vertices, false);
        for (std::size_t k = 0; k < all.size(); ++k) {
            if (!all[k].overlaps(clip)) continue;
            ids.push_back(k);
            boxes.push_back(all[k]);
        }
        index = SegmentIndex(boxes);
        if (!boxes.empty()) bbox = boxes.front();
        for (const auto& b : boxes) {
            bbox.xmin = std::min(bbox.xmin, b.xmin);
            bbox.ymin = std::min(bbox.ymin, b.ymin);
            bbox.xmax = std::max(bbox.xmax, b.xmax);
            bbox.ymax = std::max(bbox.ymax, b.ymax);
        }
    }
};

constexpr double kHuge = std::numeric_limits<double>::max();
const Box kEverywhere{-kHuge, -kHuge, kHuge, kHuge};

class PairSearch {
public:
    explicit PairSearch(std::vector<Point> excluded) : excluded_(std::move(excluded)) {}

    // Returns true once a transversal witness is recorded.
    bool test(const IndexedPiece& u, const IndexedPiece& s) {
        if (!u.bbox.overlaps(s.bbox)) return false;
        const auto& uv = u.line->vertices;
        const auto& sv = s.line->vertices;
        if (u.boxes.empty() || s.boxes.empty()) return false;
        for (std::size_t a = 0; a < u.boxes.size(); ++a) {
            if (!u.boxes[a].overlaps(s.bbox)) continue;
            const std::size_t i = u.ids[a];
            for (std::size_t b : s.index.query(u.boxes[a])) {
                const std::size_t j = s.ids[b];
                ++result.pairs_tested;
                const auto r = segment_intersection(uv[i], uv[i + 1], sv[j], sv[j + 1]);
                if (r.kind == SegmentIntersection::Kind::Empty) continue;
                std::vector<Point> cands{r.p};
                if (r.kind == SegmentIntersection::Kind::Subsegment) cands.push_back(r.q);
                for (const auto& w : cands) {
                    if (is_excluded(w)) continue;
                    const bool tr = r.kind == SegmentIntersection::Kind::Point &&
                                    crossing_is_transversal(*u.line, i, *s.line, j, w);
                    if (!result.found || (tr && !result.transversal)) {
                        result.found = true;
                        result.point = w;
                        result.transversal = tr;
                        result.u_piece = u.id;
                        result.s_piece = s.id;
                    }
                    if (tr) return true;
                }
            }
        }
        return false;
    }

    HomoclinicResult result;

private:
    bool is_excluded(const Point& w) const {
        return std::any_of(excluded_.begin(), excluded_.end(), [&](const Point& e) { return same_point(e, w); });
    }
    std::vector<Point> excluded_;
};

// Interleaved growth order: piece r of U is tested against S[0..r-1], then
// piece r of S against U[0..r], so shallow witnesses are found first.
HomoclinicResult interleaved_search(const std::vector<const Polyline*>& U, const std::vector<const Polyline*>& S,
                                    std::vector<Point> excluded, const Box& clip) {
    PairSearch search(std::move(excluded));
    std::vector<IndexedPiece> iu, is;
    iu.reserve(U.size());
    is.reserve(S.size());
    const std::size_t rounds = std::max(U.size(), S.size());
    for (std::size_t r = 0; r < rounds; ++r) {
        if (r < U.size()) {
            iu.emplace_back(U[r], static_cast<int>(r), clip);
            for (const auto& s : is)
                if (search.test(iu.back(), s)) return search.result;
        }
        if (r < S.size()) {
            is.emplace_back(S[r], static_cast<int>(r), clip);
            for (const auto& u : iu)
                if (search.test(u, is.back())) return search.result;
        }
    }
    return search.result;
}

}  // namespace

HomoclinicResult homoclinic_search(const Params& params, const UnstableManifold& wu, const StableManifold& ws) {
    std::vector<const Polyline*> U{&wu.initial_plus, &wu.initial_minus};
    for (std::size_t n = 0; n < wu.plus.size(); ++n) {
        U.push_back(&wu.plus[n].polyline);
        if (n < wu.minus.size()) U.push_back(&wu.minus[n].polyline);
    }
    // every witness lies on W^u, so stable segments away from it are skipped
    Box clip{kHuge, kHuge, -kHuge, -kHuge};
    for (const auto* p : U) {
        for (const auto& v : p->vertices) {
            clip.xmin = std::min(clip.xmin, v.fx.lo);
            clip.ymin = std::min(clip.ymin, v.fy.lo);
            clip.xmax = std::max(clip.xmax, v.fx.hi);
            clip.ymax = std::max(clip.ymax, v.fy.hi);
        }
    }
    const Polyline splus = ws.plus_segment(clip.xmax + 1.0, clip.ymax + 1.0);
    std::vector<const Polyline*> S{&splus};
    for (const auto& p : ws.pieces) S.push_back(&p);
    HomoclinicResult r = interleaved_search(U, S, {params.X()}, clip);
    r.u_depth = wu.depth_reached;
    r.s_depth = ws.steps_reached / 2;
    r.note = "unstable pieces are arcs (L^2 steps); stable pieces are single L^-1 steps";
    return r;
}

HomoclinicResult homoclinic_search(const Params& params, int u_depth, int s_depth, const ManifoldBudget& budget) {
    const auto wu = unstable_manifold(params, u_depth, budget, false);
    const auto ws = stable_manifold(params, s_depth, budget);
    return homoclinic_search(params, wu, ws);
}

// ---------------------------------------------------------------- periodic saddles

namespace {

bool signs_match(const Point& p, const Point& ref) {
    const Sign s = sign_x(p);
    return s != Sign::Zero && s == sign_x(ref);
}

}  // namespace

SaddleManifolds saddle_manifolds(const Params& params, const OrbitRecord& orbit, int u_steps, int s_steps,
                                 const ManifoldBudget& budget) {
    const auto seeds = orbit_manifold_seed(params, orbit);
    const std::size_t n = orbit.points.size();
    const Point& p0 = orbit.points[0];
    const Point& wu = seeds[0].unstable_dir;
    const Point& ws = seeds[0].stable_dir;
    SaddleManifolds out;
    out.orbit = orbit.points;

    auto seg = [&](const Point& w, const Scalar& t) {
        return std::array<Point, 2>{Point(p0.x - t * w.x, p0.y - t * w.y), Point(p0.x + t * w.x, p0.y + t * w.y)};
    };
    Scalar t(1);
    const Scalar half(Rational(1, 2));
    bool ok = false;
    for (int j = 0; j <= 200 && !ok; ++j, t = t * half) {
        auto eu = seg(wu, t);
        auto es = seg(ws, t);
        ok = true;
        // backward cycle for the unstable segment
        for (std::size_t m = 0; m <= n && ok; ++m) {
            const Point& ref = orbit.points[(n - m % n) % n];
            ok = signs_match(eu[0], ref) && signs_match(eu[1], ref);
            if (ok && m < n) {
                eu[0] = step_backward(params, eu[0]);
                eu[1] = step_backward(params, eu[1]);
            }
        }
        // forward cycle for the stable segment
        for (std::size_t m = 0; m <= n && ok; ++m) {
            const Point& ref = orbit.points[m % n];
            ok = signs_match(es[0], ref) && signs_match(es[1], ref);
            if (ok && m < n) {
                es[0] = step_forward(params, es[0]);
                es[1] = step_forward(params, es[1]);
            }
        }
        if (ok) out.seed_t = t;
    }
    if (!ok) throw BudgetExhausted("no local eigen-segment keeps the itinerary signs");

    const auto eu = seg(wu, out.seed_t);
    const auto es = seg(ws, out.seed_t);
    out.unstable.push_back(Polyline({eu[0], p0, eu[1]}));
    out.stable.push_back(Polyline({es[0], p0, es[1]}));
    try {
        for (int m = 1; m <= u_steps; ++m) out.unstable.push_back(image_of_polyline(params, out.unstable.back(), 1, budget));
        for (int m = 1; m <= s_steps; ++m) out.stable.push_back(image_of_polyline(params, out.stable.back(), -1, budget));
    } catch (const BudgetExhausted&) {
        if (!budget.allow_truncation) throw;
        out.truncated = true;
    }
    return out;
}

HomoclinicResult homoclinic_search_orbit(const Params& params, const OrbitRecord& orbit, int u_steps, int s_steps,
                                         const ManifoldBudget& budget) {
    // Grow lazily so that a shallow witness avoids the expensive deep pieces.
    const auto seeds = orbit_manifold_seed(params, orbit);
    (void)seeds;
    SaddleManifolds sm = saddle_manifolds(params, orbit, 0, 0, budget);
    std::vector<Polyline> U{sm.unstable[0]}, S{sm.stable[0]};
    U.reserve(u_steps + 1);
    S.reserve(s_steps + 1);
    PairSearch search(orbit.points);
    std::vector<IndexedPiece> iu, is;
    iu.reserve(u_steps + 1);
    is.reserve(s_steps + 1);
    bool truncated = false;
    const int rounds = std::max(u_steps, s_steps) + 1;
    int u_done = 0, s_done = 0;
    for (int r = 0; r < rounds; ++r) {
        if (r <= u_steps && !truncated) {
            if (r > 0) {
                try {
                    U.push_back(image_of_polyline(params, U.back(), 1, budget));
                } catch (const BudgetExhausted&) {
                    if (!budget.allow_truncation) throw;
                    truncated = true;
                }
            }
            if (static_cast<int>(U.size()) == r + 1) {
                u_done = r;
                iu.emplace_back(&U.back(), r, kEverywhere);
                bool hit = false;
                for (const auto& s : is)
                    if ((hit = search.test(iu.back(), s))) break;
                if (hit) break;
            }
        }
        if (r <= s_steps && !truncated) {
            if (r > 0) {
                try {
                    S.push_back(image_of_polyline(params, S.back(), -1, budget));
                } catch (const BudgetExhausted&) {
                    if (!budget.allow_truncation) throw;
                    truncated = true;
                }
            }
            if (static_cast<int>(S.size()) == r + 1) {
                s_done = r;
                is.emplace_back(&S.back(), r, kEverywhere);
                bool hit = false;
                for (const auto& u : iu)
                    if ((hit = search.test(u, is.back()))) break;
                if (hit) break;
            }
        }
    }
    HomoclinicResult res = search.result;
    res.u_depth = u_done;
    res.s_depth = s_done;
    res.note = "single map steps from a local eigen-segment; orbit points excluded";
    if (truncated) res.note += "; growth truncated by budget";
    return res;
}

// ---------------------------------------------------------------- local arc

namespace {

struct FP {
    double x, y;
};

double dist(FP a, FP b) { return std::hypot(a.x - b.x, a.y - b.y); }

double point_seg(FP p, FP a, FP b) {
    const double dx = b.x - a.x, dy = b.y - a.y;
    const double l2 = dx * dx + dy * dy;
    double t = l2 > 0 ? ((p.x - a.x) * dx + (p.y - a.y) * dy) / l2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return std::hypot(p.x - a.x - t * dx, p.y - a.y - t * dy);
}

double cross(FP o, FP a, FP b) { return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x); }

double seg_seg(FP a, FP b, FP c, FP d) {
    const double d1 = cross(a, b, c), d2 = cross(a, b, d), d3 = cross(c, d, a), d4 = cross(c, d, b);
    if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) return 0.0;
    return std::min({point_seg(a, c, d), point_seg(b, c, d), point_seg(c, a, b), point_seg(d, a, b)});
}

// First point along `arc` (from arc[0]) at distance eps from arc[0]; returns
// the segment index it lies on and the point, or nullopt.
std::optional<std::pair<std::size_t, FP>> first_at_distance(const std::vector<FP>& arc, double eps) {
    const FP o = arc.front();
    for (std::size_t i = 0; i + 1 < arc.size(); ++i) {
        const FP a = arc[i], b = arc[i + 1];
        if (dist(o, b) < eps) continue;
        // |a + t (b - a) - o| = eps, smallest t in [0, 1]
        const double dx = b.x - a.x, dy = b.y - a.y, fx = a.x - o.x, fy = a.y - o.y;
        const double A = dx * dx + dy * dy, B = 2 * (fx * dx + fy * dy), C = fx * fx + fy * fy - eps * eps;
        const double disc = std::max(0.0, B * B - 4 * A * C);
        double t = (-B - std::sqrt(disc)) / (2 * A);
        if (t < 0) t = (-B + std::sqrt(disc)) / (2 * A);
        t = std::clamp(t, 0.0, 1.0);
        return std::make_pair(i, FP{a.x + t * dx, a.y + t * dy});
    }
    return std::nullopt;
}

std::vector<FP> to_fp(const std::vector<Point>& v) {
    std::vector<FP> out;
    out.reserve(v.size());
    for (const auto& p : v) out.push_back({p.approx_x(), p.approx_y()});
    return out;
}

}  // namespace

LocalArcResult local_arc_epsilon(const UnstableManifold& manifold, Branch branch, std::size_t segment, const Point& Q,
                                 int max_halvings) {
    const Polyline path = manifold.path(branch);
    if (segment + 1 >= path.size()) throw PreconditionError("segment index out of range");
    if (same_point(Q, path[0])) throw PreconditionError("Q must differ from X");
    const auto v = to_fp(path.vertices);
    const FP q{Q.approx_x(), Q.approx_y()};

    std::vector<FP> arc(v.begin(), v.begin() + static_cast<long>(segment) + 1);
    arc.push_back(q);
    std::vector<FP> back(arc.rbegin(), arc.rend());

    // The rest of the computed manifold: the other branch (with X) and the
    // continuation beyond Q.
    std::vector<std::vector<FP>> rest;
    rest.push_back(to_fp(manifold.path(branch == Branch::UPlus ? Branch::UMinus : Branch::UPlus).vertices));
    std::vector<FP> beyond{q};
    const std::size_t next = segment + 1 + (same_point(Q, path[segment + 1]) ? 1 : 0);
    if (next < v.size()) beyond.insert(beyond.end(), v.begin() + static_cast<long>(next), v.end());
    rest.push_back(beyond);

    std::vector<std::pair<FP, FP>> rsegs;
    std::vector<std::pair<std::size_t, std::size_t>> owner;  // (piece, segment within piece)
    std::vector<Box> rboxes;
    for (std::size_t pi = 0; pi < rest.size(); ++pi) {
        const auto& r = rest[pi];
        for (std::size_t i = 0; i + 1 < r.size(); ++i) {
            rsegs.emplace_back(r[i], r[i + 1]);
            owner.emplace_back(pi, i);
            rboxes.push_back({std::min(r[i].x, r[i + 1].x), std::min(r[i].y, r[i + 1].y), std::max(r[i].x, r[i + 1].x),
                              std::max(r[i].y, r[i + 1].y)});
        }
    }
    SegmentIndex index(rboxes);

    // Arcs not adjacent to (X,Q): everything in rest except the first
    // segment of each piece, which touches X or Q.
    double d_far = dist(arc.front(), q);
    {
        std::size_t base = 0;
        std::vector<char> adjacent(rsegs.size(), 0);
        for (const auto& r : rest) {
            if (r.size() >= 2) adjacent[base] = 1;
            base += r.size() >= 2 ? r.size() - 1 : 0;
        }
        for (std::size_t k = 0; k + 1 < arc.size(); ++k) {
            const Box qb{std::min(arc[k].x, arc[k + 1].x) - d_far, std::min(arc[k].y, arc[k + 1].y) - d_far,
                         std::max(arc[k].x, arc[k + 1].x) + d_far, std::max(arc[k].y, arc[k + 1].y) + d_far};
            for (std::size_t j : index.query(qb)) {
                if (adjacent[j]) continue;
                d_far = std::min(d_far, seg_seg(arc[k], arc[k + 1], rsegs[j].first, rsegs[j].second));
            }
        }
    }

    // Dyadic ladder so that a deeper manifold can only lower the answer.
    LocalArcResult res;
    if (!(d_far > 0)) return res;
    double eps = std::exp2(std::floor(std::log2(0.5 * d_far * (1.0 - 1e-9))));
    for (int h = 0; h <= max_halvings; ++h, eps *= 0.5) {
        res.halvings = h;
        const auto xs = first_at_distance(arc, eps);
        const auto qs = first_at_distance(back, eps);
        if (!xs || !qs) continue;
        // sub-arc [X', Q'] in forward order
        const std::size_t i0 = xs->first;                    // X' on arc segment i0
        const std::size_t i1 = back.size() - 2 - qs->first;  // Q' on arc segment i1
        if (i0 > i1) continue;
        std::vector<FP> sub{xs->second};
        for (std::size_t k = i0 + 1; k <= i1; ++k) sub.push_back(arc[k]);
        sub.push_back(qs->second);
        // Each rest piece starts at X or Q. When the manifold bends there at an
        // acute angle, the open balls near the end of the tube always reach the
        // continuation, so the piece is only checked from its first point at
        // distance 2 eps from that endpoint onwards.
        std::vector<std::optional<std::pair<std::size_t, FP>>> heads;
        for (const auto& r : rest) heads.push_back(r.size() >= 2 ? first_at_distance(r, 2 * eps) : std::nullopt);
        bool ok = true;
        const double slack = eps * 1e-9;
        for (std::size_t k = 0; k + 1 < sub.size() && ok; ++k) {
            const Box qb{std::min(sub[k].x, sub[k + 1].x) - eps, std::min(sub[k].y, sub[k + 1].y) - eps,
                         std::max(sub[k].x, sub[k + 1].x) + eps, std::max(sub[k].y, sub[k + 1].y) + eps};
            for (std::size_t j : index.query(qb)) {
                const auto& head = heads[owner[j].first];
                if (!head || owner[j].second < head->first) continue;
                const FP from = owner[j].second == head->first ? head->second : rsegs[j].first;
                if (seg_seg(sub[k], sub[k + 1], from, rsegs[j].second) < eps - slack) {
                    ok = false;
                    break;
                }
            }
        }
        if (ok) {
            res.found = true;
            res.epsilon = eps;
            return res;
        }
    }
    return res;
}

// ---------------------------------------------------------------- escape

const char* to_string(EscapeResult::Kind k) {
    switch (k) {
        case EscapeResult::Kind::Escaped: return "Escaped";
        case EscapeResult::Kind::StillInside: return "StillInside";
        case EscapeResult::Kind::OnStableManifold: return "OnStableManifold";
        case EscapeResult::Kind::LeftElsewhere: return "LeftElsewhere";
    }
    return "?";
}

EscapeResult escape_from_triangle(const Params& params, const Point& A, int max_iter) {
    if (max_iter < 1) throw PreconditionError("max_iter must be >= 1");
    const Point O(Scalar(0), Scalar(0));
    const Point& Z = params.Z();
    const Point Zm1 = step_backward(params, Z);
    const SimplePolygon tri({O, Z, Zm1});
    if (point_in_polygon(A, tri) == Location::Exterior) {
        throw PreconditionError("A must lie in the triangle O Z Z^-1");
    }
    const Point& X = params.X();
    const auto& e = params.eigen();
    EscapeResult res;
    // A - X = alpha v_s + beta v_u
    const Scalar det = e.v_s.x * e.v_u.y - e.v_s.y * e.v_u.x;
    const Scalar beta = (e.v_s.x * (A.y - X.y) - e.v_s.y * (A.x - X.x)) / det;
    const double vu_len = std::hypot(e.v_u.approx_x(), e.v_u.approx_y());
    res.d0 = std::fabs(beta.approx()) * vu_len;
    const double diam = std::max({std::hypot(Z.approx_x(), Z.approx_y()), std::hypot(Zm1.approx_x(), Zm1.approx_y()),
                                  std::hypot(Z.approx_x() - Zm1.approx_x(), Z.approx_y() - Zm1.approx_y())});
    if (sign(beta) == Sign::Zero) {
        res.kind = EscapeResult::Kind::OnStableManifold;
        res.predicted = std::numeric_limits<double>::infinity();
        return res;
    }
    res.predicted = std::log(diam / res.d0) / std::log(std::fabs(e.lambda_u.approx()));
    Point cur = A;
    for (int m = 1; m <= max_iter; ++m) {
        cur = step_forward(params, cur);
        const Sign sx = sign_x(cur), sy = sign_y(cur);
        if (sx == Sign::Negative && sy == Sign::Positive) {
            res.kind = EscapeResult::Kind::Escaped;
            res.m = m;
            return res;
        }
        if (sx == Sign::Negative || sy == Sign::Negative) {
            res.kind = EscapeResult::Kind::LeftElsewhere;
            res.m = m;
            return res;
        }
    }
    res.kind = EscapeResult::Kind::StillInside;
    res.m = max_iter;
    return res;
}

}  // namespace lozi
