#pragma once

// JSON, CSV and SVG export. Exact scalars serialize as {"p", "q", "delta"}
// meaning p + q sqrt(delta); floats as {"value", "error"}.

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lozi/classify.hpp"

namespace lozi {

using Json = nlohmann::ordered_json;

Json to_json(const Scalar& s);
Json to_json(const Point& p);
Json to_json(const Polyline& line);
Json to_json(const SimplePolygon& poly);
Json constants_json(const Params& params);
Json to_json(const CrossingCensus& c);
Json to_json(const HomoclinicResult& h);
Json to_json(const LapGrowth& g);
Json to_json(const FiniteCrossingCertificate& c);
Json to_json(const RegionVerdict& v);
Json to_json(const TrapReport& t);
Json to_json(const EllApproximation& e);
Json to_json(const OrbitRecord& o);

// Float coordinate for rendering, rounded from the exact value.
double render_coord(const Scalar& s, int precision_bits = 53);

// branch,arc,index,x,y with one row per vertex of every arc.
std::string manifold_csv(const UnstableManifold& m, int precision_bits = 53);

std::string sweep_csv_header();
std::string sweep_csv_row(const SweepRow& row);

// Minimal SVG canvas in model coordinates (y up).
class SvgCanvas {
public:
    SvgCanvas(double xmin, double ymin, double xmax, double ymax, int width_px = 800);

    struct Style {
        std::string stroke = "none";
        double stroke_width = 1.0;  // pixels
        std::string fill = "none";
        double fill_opacity = 1.0;
        std::string pattern;  // name of a hatch pattern, overrides fill
    };

    void polyline(const std::vector<Point>& pts, const Style& style, int precision_bits = 53);
    void polygon(const std::vector<Point>& pts, const Style& style, int precision_bits = 53);
    void dot(const Point& p, double radius_px, const std::string& color, const std::string& label = {},
             int precision_bits = 53);
    void add_hatch(const std::string& name, const std::string& color, double angle_deg);
    std::string str() const;

private:
    std::string xy(double x, double y) const;
    double xmin_, ymin_, xmax_, ymax_, scale_;
    int w_, h_;
    std::string defs_;
    std::string body_;
};

// Bounding box of a set of polylines, padded by 5%.
struct Bounds {
    double xmin = 0, ymin = 0, xmax = 0, ymax = 0;
    void add(const Point& p);
    void pad(double fraction = 0.05);
};

std::string manifold_svg(const Params& params, const UnstableManifold& wu, const StableManifold* ws,
                         int precision_bits = 53);
std::string trap_svg(const Params& params, const UnstableManifold& wu, const TrapReport& t, int precision_bits = 53);
std::string kpolygon_svg(const Params& params, const TrapReport& t, int precision_bits = 53);
std::string ell_svg(const Params& params, const SimplePolygon& D, const EllApproximation& e, int precision_bits = 53);

void write_file(const std::string& path, const std::string& content);

}  // namespace lozi
