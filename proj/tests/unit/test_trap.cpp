#include <gtest/gtest.h>

#include "lozi/trap.hpp"
#include "oracle.hpp"

using namespace lozi;
using oracle::Q;

namespace {

const Params& ref_params() {
    static const Params p = Params::exact(Q(53, 50), Q(24, 25));
    return p;
}

const UnstableManifold& ref_wu() {
    static const UnstableManifold wu = unstable_manifold(ref_params(), 12);
    return wu;
}

const TrapReport& ref_report() {
    static const TrapReport r = run_trap(ref_params(), ref_wu(), 50);
    return r;
}

// Exact area of a polygon with quadratic coordinates, recomputed term by
// term with the textbook product rule.
oracle::Quad area2_oracle(const SimplePolygon& poly, const Q& delta) {
    oracle::Quad s{0, 0};
    const auto& v = poly.vertices();
    for (std::size_t i = 0; i < v.size(); ++i) {
        const auto& p = v[i];
        const auto& q = v[(i + 1) % v.size()];
        const auto t1 = oracle::quad_mul(oracle::to_quad(p.x), oracle::to_quad(q.y), delta);
        const auto t2 = oracle::quad_mul(oracle::to_quad(q.x), oracle::to_quad(p.y), delta);
        s.p += t1.p - t2.p;
        s.q += t1.q - t2.q;
    }
    s.p.canonicalize();
    s.q.canonicalize();
    return s;
}

}  // namespace

TEST(ConstructT, UPlusCrossesOxAtReferenceParameters) {
    const auto& tc = ref_report().construction;
    EXPECT_EQ(tc.which, TrapConstruction::Case::UPlusCrossesOx);
    EXPECT_EQ(tc.S, tc.T);
    EXPECT_EQ(sign(tc.T.y), Sign::Zero);
    EXPECT_EQ(sign(tc.T.x), Sign::Positive);
    EXPECT_TRUE(tc.chord_verified);
    EXPECT_EQ(tc.z_to_t.front(), ref_params().Z());
    EXPECT_EQ(tc.z_to_t.back(), tc.T);
    // i is the least index whose successor arc meets Ox.
    const auto& plus = ref_wu().plus;
    for (int j = 1; j <= tc.i; ++j) EXPECT_FALSE(meets_axis(plus[static_cast<std::size_t>(j)].polyline, Axis::Ox));
    EXPECT_TRUE(meets_axis(plus[static_cast<std::size_t>(tc.i + 1)].polyline, Axis::Ox));
    EXPECT_FALSE(meets_fold_preimage(ref_params(), plus[static_cast<std::size_t>(tc.i + tc.k)].polyline));
}

TEST(ConstructT, RefusesFiniteCrossingParameters) {
    EXPECT_THROW(construct_T(Params::exact(1, Q(1, 2)), 30), PreconditionError);
}

TEST(PolygonD, SimpleWithExactArea) {
    const auto& r = ref_report();
    EXPECT_TRUE(is_simple(r.D.vertices(), true));
    const Q delta = ref_params().field()->delta();
    const auto twice = area2_oracle(r.D, delta);
    EXPECT_EQ(r.area_D.p_part() * 2, twice.p);
    EXPECT_EQ(r.area_D.q_part() * 2, twice.q);
    EXPECT_EQ(sign(r.area_D), Sign::Positive);
    // Z and T are on the boundary.
    EXPECT_EQ(point_in_polygon(ref_params().Z(), r.D), Location::Boundary);
    EXPECT_EQ(point_in_polygon(r.construction.T, r.D), Location::Boundary);
}

TEST(PolygonD, ImageUnderSquareIsInside) {
    const auto& r = ref_report();
    EXPECT_TRUE(r.invariant);
    const SimplePolygon img = image2(ref_params(), r.D);
    EXPECT_TRUE(polygon_contains_closed(r.D, img));
    EXPECT_EQ(polygon_area(img), r.area_D * ref_params().b() * ref_params().b());
}

TEST(PolygonD, TrappingIndexAndPeriodicOrbit) {
    const auto& r = ref_report();
    ASSERT_TRUE(r.trapping_index.has_value());
    EXPECT_GE(*r.trapping_index, 1);
    EXPECT_LE(*r.trapping_index, 50);
    EXPECT_TRUE(polygon_contains_strict(r.D, r.iterates[static_cast<std::size_t>(*r.trapping_index - 1)]));
    EXPECT_EQ(trapping_index(r.D, r.iterates), r.trapping_index);
    EXPECT_TRUE(r.periodic_inside);
    EXPECT_NE(point_in_polygon(ref_params().P(), r.D), Location::Exterior);
}

TEST(PolygonK, BoundaryAndDisjointImage) {
    const auto& r = ref_report();
    EXPECT_TRUE(is_simple(r.K.vertices(), true));
    EXPECT_TRUE(r.k_interiors_disjoint);
    EXPECT_TRUE(polygon_contains_closed(r.D, r.K));
    // K = D minus L^2(D): the areas add up.
    EXPECT_EQ(r.area_K, r.area_D - r.area_D * ref_params().b() * ref_params().b());
    EXPECT_TRUE(r.area_identity);
    EXPECT_TRUE(r.area_law);
}

TEST(ImageOne, AreaScalesByB) {
    oracle::Rng rng(5);
    const auto& prm = ref_params();
    for (int i = 0; i < 25; ++i) {
        const auto ring = oracle::star_polygon(rng, {rng.rational(1, 4), rng.rational(1, 4)}, 6, Q(1, 5), Q(1));
        const SimplePolygon poly(oracle::to_points(ring));
        const SimplePolygon img = image1(prm, poly);
        const Q area = oracle::qabs(oracle::shoelace2(ring)) / 2;
        EXPECT_EQ(polygon_area(img).rational(), area * Q(24, 25));
    }
}

TEST(Ell, ConvergesTowardsTheTwoCycle) {
    const auto& r = ref_report();
    const auto ell = ell_approximation(ref_params(), r.D, 6);
    EXPECT_EQ(ell.k, 6);
    EXPECT_TRUE(ell.P_inside);
    EXPECT_TRUE(ell.P1_inside);
    ASSERT_EQ(ell.steps.size(), 7u);  // k = 0 .. 6
    for (std::size_t j = 1; j < ell.steps.size(); ++j) {
        EXPECT_EQ(ell.steps[j].area, ell.steps[j - 1].area * ref_params().b() * ref_params().b());
        EXPECT_LE(ell.steps[j].diameter, ell.steps[j - 1].diameter + 1e-12);
    }
}

TEST(Diameter, FloatDiameterOfSquare) {
    const SimplePolygon sq({Point(Scalar(0), Scalar(0)), Point(Scalar(3), Scalar(0)), Point(Scalar(3), Scalar(4)),
                            Point(Scalar(0), Scalar(4))});
    EXPECT_DOUBLE_EQ(float_diameter(sq), 5.0);
}
