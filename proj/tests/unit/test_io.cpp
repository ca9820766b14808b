#include <gtest/gtest.h>

#include <sstream>

#include "lozi/io.hpp"
#include "oracle.hpp"

using namespace lozi;
using oracle::Q;

TEST(Json, ScalarForms) {
    const Json r = to_json(Scalar(Q(-3, 4)));
    EXPECT_EQ(r["p"], "-3/4");
    EXPECT_EQ(r["q"], "0");
    EXPECT_EQ(r["delta"], "0");
    const Json s = to_json(Scalar::quadratic(Q(1, 2), Q(-1, 2), make_field(3)));
    EXPECT_EQ(s["p"], "1/2");
    EXPECT_EQ(s["q"], "-1/2");
    EXPECT_EQ(s["delta"], "3");
    const Json f = to_json(Scalar::from_double(0.5));
    EXPECT_TRUE(f.contains("value"));
    EXPECT_TRUE(f.contains("error"));
}

TEST(Json, ConstantsRoundTripThroughTheOracle) {
    const auto prm = Params::exact(Q(53, 50), Q(24, 25));
    const Json j = constants_json(prm);
    EXPECT_EQ(j["a"], "53/50");
    EXPECT_EQ(j["X"]["x"]["p"], "10/11");
    // Z_x rebuilt from its JSON pieces agrees with the 256-bit value.
    const auto& zx = j["Z"]["x"];
    const double v = oracle::quad_value(Q(zx["p"].get<std::string>()), Q(zx["q"].get<std::string>()),
                                        Q(zx["delta"].get<std::string>()))
                         .d();
    EXPECT_NEAR(v, 2.4035, 1e-4);
    EXPECT_TRUE(j["P"].is_object());
}

TEST(Json, ConstantsOutsideThePeriodTwoRange) {
    const Json j = constants_json(Params::exact(Q(17, 10), Q(1, 2)));
    EXPECT_TRUE(j["P"].is_null());
}

TEST(Csv, ManifoldRowsMatchVertices) {
    const auto prm = Params::exact(1, Q(1, 2));
    const auto wu = unstable_manifold(prm, 4);
    const std::string csv = manifold_csv(wu);
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "branch,arc,index,x,y");
    std::size_t rows = 0;
    while (std::getline(in, line)) ++rows;
    std::size_t expect = wu.initial_plus.size() + wu.initial_minus.size();
    for (const auto& a : wu.plus) expect += a.polyline.size();
    for (const auto& a : wu.minus) expect += a.polyline.size();
    EXPECT_EQ(rows, expect);
    EXPECT_NE(csv.find("UPlus,0,0,"), std::string::npos);
}

TEST(Csv, SweepRow) {
    SweepRow r;
    r.a = Q(1);
    r.b = Q(1, 2);
    r.regime = Regime::RCandidate;
    r.crossing_depth = 100;
    r.homoclinic_u = 60;
    r.homoclinic_s = 60;
    EXPECT_EQ(sweep_csv_row(r), "1,0.5,1,1/2,RCandidate,100,60,60,,\n");
    const std::string header = sweep_csv_header();
    EXPECT_EQ(std::count(header.begin(), header.end(), ','), 9);
}

TEST(Svg, CanvasFlipsTheYAxis) {
    SvgCanvas c(0, 0, 10, 5, 100);
    c.polyline({Point(Scalar(0), Scalar(0)), Point(Scalar(10), Scalar(5))}, {"#000"});
    const std::string s = c.str();
    EXPECT_NE(s.find("<svg"), std::string::npos);
    EXPECT_NE(s.find("0.00,50.00"), std::string::npos);
    EXPECT_NE(s.find("100.00,0.00"), std::string::npos);
}

TEST(Svg, ManifoldColours) {
    const auto prm = Params::exact(Q(53, 50), Q(24, 25));
    const auto wu = unstable_manifold(prm, 4);
    const auto ws = stable_manifold(prm, 3);
    const std::string s = manifold_svg(prm, wu, &ws);
    EXPECT_NE(s.find("#1f4fd1"), std::string::npos);
    EXPECT_NE(s.find("#d12a1f"), std::string::npos);
}

TEST(RenderCoord, RoundsTheExactValue) {
    const auto prm = Params::exact(1, Q(1, 2));
    EXPECT_NEAR(render_coord(prm.Z().x), oracle::value(prm.Z().x), 1e-16);
}
