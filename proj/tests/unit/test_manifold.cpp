#include <gtest/gtest.h>

#include "lozi/manifold.hpp"
#include "oracle.hpp"

using namespace lozi;
using oracle::Q;

namespace {

Point P(const Q& x, const Q& y) { return Point(Scalar(x), Scalar(y)); }

const Params& half() {
    static const Params p = Params::exact(1, Q(1, 2));
    return p;
}
const Params& ref_params() {
    static const Params p = Params::exact(Q(53, 50), Q(24, 25));
    return p;
}
const Params& chaotic() {
    static const Params p = Params::exact(Q(8, 5), Q(61, 100));
    return p;
}

std::vector<oracle::FPt> fpts(const Polyline& l) {
    std::vector<oracle::FPt> out;
    for (const auto& p : l.vertices) out.push_back(oracle::fpt(p));
    return out;
}

// Every vertex of `a` lies on `b` (exactly).
bool vertices_on(const Polyline& a, const Polyline& b) {
    for (const auto& p : a.vertices) {
        bool hit = false;
        for (std::size_t i = 0; i + 1 < b.size() && !hit; ++i) hit = on_segment(p, b[i], b[i + 1]);
        if (!hit) return false;
    }
    return true;
}

}  // namespace

TEST(ImageOfPolyline, FundamentalArcEndpoints) {
    const auto wu = unstable_manifold(ref_params(), 3);
    ASSERT_GE(wu.plus.size(), 2u);
    EXPECT_EQ(wu.plus[0].polyline.front(), ref_params().Z());
    EXPECT_EQ(wu.plus[0].polyline.back(), apply(ref_params(), ref_params().Z(), 2));
    const Polyline img = image_of_polyline(ref_params(), wu.plus[0].polyline, 2);
    EXPECT_EQ(img.front(), apply(ref_params(), ref_params().Z(), 2));
}

TEST(ImageOfPolyline, ForwardThenBackwardKeepsGeometry) {
    const auto wu = unstable_manifold(ref_params(), 4);
    for (const auto& arc : wu.plus) {
        const Polyline back = image_of_polyline(ref_params(), image_of_polyline(ref_params(), arc.polyline, 1), -1);
        EXPECT_TRUE(vertices_on(back, arc.polyline));
        EXPECT_TRUE(vertices_on(arc.polyline, back));
    }
}

TEST(ImageOfPolyline, ExpansionAlongUnstableDirection) {
    // A short piece of the line through X in the unstable direction, inside
    // the right half plane, is stretched by exactly |lambda_u| per step until
    // it first reaches the fold.
    const auto& prm = ref_params();
    const auto& e = prm.eigen();
    const Point& X = prm.X();
    const Scalar t(Q(1, 1000));
    const Polyline seg({X, Point(X.x + t * e.v_u.x, X.y + t * e.v_u.y)});
    const double lu = std::fabs(oracle::eigenvalues(Q(53, 50), Q(24, 25)).first);
    double expected = seg.approx_length();
    Polyline cur = seg;
    for (int k = 1; k <= 3; ++k) {
        cur = image_of_polyline(prm, cur, 1);
        expected *= lu;
        EXPECT_NEAR(cur.approx_length(), expected, 1e-12) << k;
    }
}

TEST(UnstableManifold, ArcRecurrence) {
    for (const Params* prm : {&half(), &ref_params()}) {
        const auto wu = unstable_manifold(*prm, 8);
        for (Branch b : {Branch::UPlus, Branch::UMinus}) {
            const auto& arcs = wu.arcs(b);
            for (std::size_t n = 0; n + 1 < arcs.size(); ++n) {
                const Polyline next = image_of_polyline(*prm, arcs[n].polyline, 2);
                ASSERT_EQ(next.size(), arcs[n + 1].polyline.size());
                for (std::size_t i = 0; i < next.size(); ++i) EXPECT_EQ(next[i], arcs[n + 1].polyline[i]);
            }
        }
    }
}

TEST(UnstableManifold, NoSelfIntersectionNearOneHalf) {
    for (const auto& [a, b] : {std::pair{Q(1), Q(1, 2)}, std::pair{Q(21, 20), Q(1, 2)}, std::pair{Q(1), Q(11, 20)}}) {
        const auto prm = Params::exact(a, b);
        const auto wu = unstable_manifold(prm, 12, {}, false);
        // Oracle: all segment pairs of the two branch paths joined at X.
        Polyline whole = concat(wu.path(Branch::UMinus).reversed(), wu.path(Branch::UPlus));
        const auto& v = whole.vertices;
        const auto boxes = segment_boxes(v, false);
        std::size_t tested = 0;
        for (std::size_t i = 0; i + 1 < v.size(); ++i) {
            for (std::size_t j = i + 1; j + 1 < v.size(); ++j) {
                if (!boxes[i].overlaps(boxes[j])) continue;
                const auto hit = segment_intersection(v[i], v[i + 1], v[j], v[j + 1]);
                ++tested;
                if (j == i + 1) {
                    ASSERT_EQ(hit.kind, SegmentIntersection::Kind::Point);
                    EXPECT_EQ(hit.p, v[j]);
                } else {
                    EXPECT_EQ(hit.kind, SegmentIntersection::Kind::Empty) << i << " " << j;
                }
            }
        }
        EXPECT_GT(tested, 0u);
        EXPECT_TRUE(unstable_manifold(prm, 12).injectivity_verified);
    }
}

TEST(StableManifold, ShapeAndV) {
    const auto& prm = ref_params();
    const auto ws = stable_manifold(prm, 4);
    EXPECT_EQ(sign(ws.direction_plus.y), Sign::Positive);
    EXPECT_EQ(sign(ws.V.x), Sign::Zero);
    EXPECT_EQ(ws.V1, apply(prm, ws.V, 1));
    EXPECT_EQ(sign(ws.V1.y), Sign::Zero);
    ASSERT_FALSE(ws.pieces.empty());
    EXPECT_EQ(ws.pieces[0].front(), prm.X());
    EXPECT_EQ(ws.pieces[0].back(), ws.V);
}

TEST(StableManifold, PiecesMapBackOntoTheFundamentalSegment) {
    const auto& prm = ref_params();
    const auto ws = stable_manifold(prm, 3);
    for (std::size_t m = 1; m < ws.pieces.size(); ++m) {
        for (const auto& p : ws.pieces[m].vertices) {
            EXPECT_TRUE(on_segment(apply(prm, p, static_cast<int>(m)), ws.V1, ws.V)) << m;
        }
    }
}

TEST(StableManifold, SampledPointsContractTowardsX) {
    const auto& prm = ref_params();
    const auto ws = stable_manifold(prm, 2);
    ASSERT_GE(ws.pieces.size(), 3u);
    const double ls = oracle::eigenvalues(Q(53, 50), Q(24, 25)).second;
    const double a = 1.06, b = 0.96;
    const oracle::FPt X = oracle::fpt(prm.X());
    for (const auto& p : ws.pieces[2].vertices) {
        // Forward iteration in doubles; after the first few steps the orbit
        // sits on the straight segment [X, V] and contracts by lambda_s.
        oracle::FPt q = oracle::fpt(p);
        std::vector<double> d;
        for (int k = 0; k < 30; ++k) {
            q = {1 + q.y - a * std::fabs(q.x), b * q.x};
            d.push_back(std::hypot(q.x - X.x, q.y - X.y));
        }
        EXPECT_LT(d.back(), 1e-3);
        EXPECT_NEAR(d[12] / d[11], ls, 1e-6);
    }
}

TEST(Crossings, ZIsTheFirstUPlusCrossing) {
    for (const Params* prm : {&half(), &ref_params(), &chaotic()}) {
        const auto list = axis_crossings(*prm, 6);
        const auto ox = list.of(Branch::UPlus, Axis::Ox);
        ASSERT_FALSE(ox.empty());
        EXPECT_EQ(ox.front().point, prm->Z());
        for (const auto& c : list.items) {
            const bool zx = sign(c.point.x) == Sign::Zero, zy = sign(c.point.y) == Sign::Zero;
            EXPECT_NE(zx, zy);
            EXPECT_EQ(c.axis == Axis::Ox, zy);
        }
    }
}

TEST(Crossings, OnlyZAndItsPreimageAtOneHalf) {
    const auto list = axis_crossings(half(), 40);
    ASSERT_EQ(list.crossings(), 2u);
    std::vector<Point> pts;
    for (const auto& c : list.items)
        if (!c.touch) pts.push_back(c.point);
    EXPECT_EQ(pts[0], half().Z());
    EXPECT_EQ(pts[1], apply(half(), half().Z(), -1));
    const auto census = crossing_census(list);
    EXPECT_TRUE(census.only_Z);
    EXPECT_TRUE(census.finite_evidence);
}

TEST(Crossings, ArcLengthIncreasesAlongEachBranch) {
    const auto list = axis_crossings(ref_params(), 8);
    for (Branch b : {Branch::UPlus, Branch::UMinus}) {
        double last = -1;
        for (const auto& c : list.items) {
            if (c.branch != b) continue;
            EXPECT_GE(c.arc_length, last);
            last = c.arc_length;
        }
    }
}

TEST(Crossings, CountStableUnderDoublingPrecision) {
    const int depth = 6;
    const auto exact = axis_crossings(ref_params(), depth).crossings();
    for (int bits : {96, 192}) {
        const auto prm = Params::approximate(Q(53, 50), Q(24, 25), bits);
        EXPECT_EQ(axis_crossings(prm, depth).crossings(), exact) << bits;
    }
}

TEST(Crossings, CensusWindow) {
    CrossingList list;
    list.depth = 20;
    Crossing c;
    c.arc = -1;
    list.items.push_back(c);
    auto census = crossing_census(list);
    EXPECT_TRUE(census.only_Z);
    EXPECT_EQ(census.window, 5);
    c.arc = 14;
    list.items.push_back(c);
    census = crossing_census(list);
    EXPECT_FALSE(census.only_Z);
    EXPECT_TRUE(census.finite_evidence);
    EXPECT_EQ(census.last_arc, 14);
    list.items.back().arc = 16;
    EXPECT_FALSE(crossing_census(list).finite_evidence);
}

TEST(Transversality, CrossVersusTouch) {
    const Polyline u({P(-1, 0), P(1, 0)});
    const Polyline s_cross({P(0, -1), P(0, 1)});
    EXPECT_TRUE(crossing_is_transversal(u, 0, s_cross, 0, P(0, 0)));
    const Polyline s_touch({P(-1, 1), P(0, 0), P(1, 1)});
    EXPECT_FALSE(crossing_is_transversal(u, 0, s_touch, 0, P(0, 0)));
    const Polyline s_bent({P(-1, 1), P(0, 0), P(1, -1)});
    EXPECT_TRUE(crossing_is_transversal(u, 0, s_bent, 1, P(0, 0)));
}

TEST(Homoclinic, NoneAtOneHalfToModerateDepth) {
    const auto r = homoclinic_search(half(), 20, 20);
    EXPECT_FALSE(r.found);
    EXPECT_GT(r.pairs_tested, 0u);
}

TEST(Homoclinic, NeverReportsX) {
    for (const auto& [a, b] : {std::pair{Q(8, 5), Q(61, 100)}, std::pair{Q(17, 10), Q(1, 2)},
                               std::pair{Q(53, 50), Q(24, 25)}, std::pair{Q(3, 2), Q(3, 10)}}) {
        const auto prm = Params::exact(a, b);
        const auto r = homoclinic_search(prm, 8, 8, ManifoldBudget{20000, 1u << 20, true});
        if (r.found) EXPECT_NE(r.point, prm.X());
    }
}

TEST(Homoclinic, SaddleWitnessIsNotAnOrbitPoint) {
    const auto orbits = periodic_orbits(chaotic(), 6);
    int saddles = 0;
    for (const auto& o : orbits) {
        if (o.stability != Stability::Saddle) continue;
        ++saddles;
        const auto r = homoclinic_search_orbit(chaotic(), o, 8, 8, ManifoldBudget{20000, 1u << 20, true});
        if (r.found) {
            for (const auto& p : o.points) EXPECT_NE(r.point, p);
        }
    }
    EXPECT_GT(saddles, 0);
}

TEST(LocalArc, PositiveAtZForOneHalf) {
    const auto wu = unstable_manifold(half(), 10);
    const Polyline path = wu.path(Branch::UPlus);
    ASSERT_EQ(path[1], half().Z());
    const auto r = local_arc_epsilon(wu, Branch::UPlus, 0, half().Z());
    ASSERT_TRUE(r.found);
    EXPECT_GT(r.epsilon, 0.0);

    // Oracle: distance from [X, Z] to every arc that does not touch it.
    std::vector<oracle::FPt> xz{oracle::fpt(half().X()), oracle::fpt(half().Z())};
    double d = std::hypot(xz[1].x - xz[0].x, xz[1].y - xz[0].y);
    auto far_from = [&](const Polyline& line, std::size_t skip_first) {
        const auto f = fpts(line);
        for (std::size_t i = skip_first; i + 1 < f.size(); ++i) {
            for (int k = 0; k <= 400; ++k) {
                const double t = k / 400.0;
                const oracle::FPt p{f[i].x + t * (f[i + 1].x - f[i].x), f[i].y + t * (f[i + 1].y - f[i].y)};
                d = std::min(d, oracle::point_polyline(p, xz, false));
            }
        }
    };
    far_from(wu.path(Branch::UMinus), 1);
    Polyline beyond(std::vector<Point>(path.vertices.begin() + 1, path.vertices.end()));
    far_from(beyond, 1);
    EXPECT_LE(r.epsilon, 0.5 * d + 1e-12);
}

TEST(LocalArc, MonotoneInDepth) {
    for (const Params* prm : {&half(), &ref_params()}) {
        const auto shallow = unstable_manifold(*prm, 6);
        const auto deep = unstable_manifold(*prm, 10);
        const Polyline path = shallow.path(Branch::UPlus);
        for (std::size_t seg : {0ul, 2ul, 5ul}) {
            if (seg + 1 >= path.size()) continue;
            const Point q = midpoint(path[seg], path[seg + 1]);
            const auto e6 = local_arc_epsilon(shallow, Branch::UPlus, seg, q);
            const auto e10 = local_arc_epsilon(deep, Branch::UPlus, seg, q);
            ASSERT_TRUE(e6.found);
            ASSERT_TRUE(e10.found);
            EXPECT_LE(e10.epsilon, e6.epsilon);
        }
    }
}

TEST(Escape, FixedPointIsOnTheStableManifold) {
    const auto r = escape_from_triangle(ref_params(), ref_params().X(), 50);
    EXPECT_EQ(r.kind, EscapeResult::Kind::OnStableManifold);
}

TEST(Escape, RandomPointsInTheTriangleEscape) {
    const auto& prm = ref_params();
    const oracle::FPt Z = oracle::fpt(prm.Z());
    const oracle::FPt Zm = oracle::fpt(apply(prm, prm.Z(), -1));
    oracle::Rng rng(404);
    const Q a(53, 50), b(24, 25);
    int done = 0;
    while (done < 100) {
        // Rational barycentric combination of O, Z, Z^-1 with rational stand-ins
        // for the vertices, kept strictly inside.
        const Q u = rng.unit(50), v = rng.unit(50);
        if (u + v >= 1) continue;
        const Q zx(static_cast<long>(Z.x * 1e6), 1000000), zmy(static_cast<long>(Zm.y * 1e6), 1000000);
        oracle::QPt A{u * zx, v * zmy};
        A.x.canonicalize();
        A.y.canonicalize();
        const auto r = escape_from_triangle(prm, oracle::from_qpt(A), 400);
        ASSERT_EQ(r.kind, EscapeResult::Kind::Escaped) << A.x << "," << A.y;
        // Oracle: iterate in exact rationals and find the first second-quadrant point.
        oracle::QPt q = A;
        int m = 0;
        do {
            q = oracle::lozi(a, b, q);
            ++m;
        } while (!(q.x < 0 && q.y > 0) && m < 400);
        EXPECT_EQ(r.m, m);
        ++done;
    }
}

TEST(Escape, NearStableDirectionMatchesPrediction) {
    const auto& prm = ref_params();
    const auto& e = prm.eigen();
    const Point& X = prm.X();
    // Step down the stable line from X, then nudge sideways by 1e-9.
    const Scalar t(Q(-1, 10));
    for (long k : {1L, 1000L, 1000000L}) {
        const Point A(X.x + t * e.v_s.x + Scalar(Q(1, 1000000000L / k)), X.y + t * e.v_s.y);
        const auto r = escape_from_triangle(prm, A, 400);
        ASSERT_EQ(r.kind, EscapeResult::Kind::Escaped);
        EXPECT_NEAR(r.m, r.predicted, 4.0) << k;
    }
}
