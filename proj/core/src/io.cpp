#include "lozi/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>

namespace lozi {

namespace {

std::string fmt(double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

template <class T>
Json opt(const std::optional<T>& v) {
    return v ? Json(*v) : Json(nullptr);
}

}  // namespace

Json to_json(const Scalar& s) {
    if (s.kind() == Scalar::Kind::Float) {
        return Json{{"value", s.checked_float().value.to_string(30)}, {"error", s.checked_float().error}};
    }
    const FieldPtr f = s.field();
    return Json{{"p", to_string(s.p_part())},
                {"q", to_string(s.q_part())},
                {"delta", f ? to_string(f->delta()) : std::string("0")}};
}

Json to_json(const Point& p) { return Json{{"x", to_json(p.x)}, {"y", to_json(p.y)}}; }

Json to_json(const Polyline& line) {
    Json a = Json::array();
    for (const auto& p : line.vertices) a.push_back(to_json(p));
    return a;
}

Json to_json(const SimplePolygon& poly) {
    Json a = Json::array();
    for (const auto& p : poly.vertices()) a.push_back(to_json(p));
    return a;
}

Json constants_json(const Params& params) {
    Json j;
    j["a"] = to_string(params.a_rational());
    j["b"] = to_string(params.b_rational());
    j["mode"] = params.is_exact() ? "exact" : "float";
    if (!params.is_exact()) j["precision_bits"] = params.precision_bits();
    j["standard"] = params.standard();
    j["period_two_range"] = params.period_two_range();
    j["delta"] = to_json(params.delta());
    auto guarded = [&](const char* key, auto&& f) {
        try {
            j[key] = f();
        } catch (const PreconditionError&) {
            j[key] = nullptr;
        }
    };
    guarded("X", [&] { return to_json(params.X()); });
    guarded("Y", [&] { return to_json(params.Y()); });
    guarded("Z", [&] { return to_json(params.Z()); });
    guarded("lambda_u", [&] { return to_json(params.eigen().lambda_u); });
    guarded("lambda_s", [&] { return to_json(params.eigen().lambda_s); });
    guarded("P", [&] { return to_json(params.P()); });
    guarded("P1", [&] { return to_json(params.P1()); });
    return j;
}

Json to_json(const CrossingCensus& c) {
    return Json{{"depth", c.depth},          {"crossings", c.count},       {"last_arc", c.last_arc},
                {"window", c.window},        {"only_Z", c.only_Z},         {"finite_evidence", c.finite_evidence}};
}

Json to_json(const HomoclinicResult& h) {
    Json j{{"found", h.found}, {"u_depth", h.u_depth}, {"s_depth", h.s_depth}, {"pairs_tested", h.pairs_tested}};
    if (h.found) {
        j["point"] = to_json(h.point);
        j["transversal"] = h.transversal;
        j["u_piece"] = h.u_piece;
        j["s_piece"] = h.s_piece;
    }
    j["note"] = h.note;
    return j;
}

Json to_json(const LapGrowth& g) {
    return Json{{"counts", g.counts},
                {"slope", g.slope},
                {"residual_exp", g.residual_exp},
                {"residual_poly", g.residual_poly},
                {"monotone", g.monotone},
                {"truncated", g.truncated},
                {"signal", to_string(g.signal)}};
}

Json to_json(const FiniteCrossingCertificate& c) {
    Json hr = Json::array(), hl = Json::array();
    for (const auto& p : c.hull_R) hr.push_back(to_json(p));
    for (const auto& p : c.hull_L) hl.push_back(to_json(p));
    return Json{{"depth", c.depth},
                {"m", c.m},
                {"A", to_json(c.A)},
                {"hull_R", hr},
                {"hull_L", hl},
                {"image_equal", c.image_equal},
                {"image_contained", c.image_contained},
                {"quadrant_R", c.quadrant_R},
                {"quadrant_L", c.quadrant_L},
                {"convergence_error", c.convergence_error},
                {"verified", c.verified()}};
}

Json to_json(const RegionVerdict& v) {
    Json j;
    j["a"] = v.a;
    j["b"] = v.b;
    j["regime"] = to_string(v.regime);
    // exact facts, independent of any depth
    j["facts"] = Json{{"standard", v.standard},
                      {"period_two_range", v.period_two},
                      {"two_cycle_attracting", v.two_cycle_attracting}};
    // everything below holds only up to the stated depths
    Json ev;
    ev["crossings"] = v.census ? to_json(*v.census) : Json(nullptr);
    ev["crossings_truncated"] = v.census_truncated;
    ev["homoclinic"] = v.homoclinic ? to_json(*v.homoclinic) : Json(nullptr);
    ev["lap_growth"] = v.lap ? to_json(*v.lap) : Json(nullptr);
    ev["certificate"] = v.certificate ? to_json(*v.certificate) : Json(nullptr);
    j["evidence"] = ev;
    j["notes"] = v.notes;
    return j;
}

Json to_json(const TrapReport& t) {
    const auto& c = t.construction;
    Json tc{{"case", to_string(c.which)}, {"S", to_json(c.S)}, {"T", to_json(c.T)}, {"depth", c.depth},
            {"t_arc", c.t_arc},           {"chord_verified", c.chord_verified}};
    if (c.which == TrapConstruction::Case::UPlusCrossesOx) {
        tc["i"] = c.i;
        tc["k"] = c.k;
    } else {
        Json b = Json::array();
        for (const auto& p : c.B) b.push_back(to_json(p));
        tc["B"] = b;
        tc["T_minus1"] = c.T_minus1 ? to_json(*c.T_minus1) : Json(nullptr);
    }
    Json areas = Json::array();
    for (const auto& it : t.iterates) areas.push_back(to_json(polygon_area(it)));
    return Json{{"construction", tc},
                {"D", to_json(t.D)},
                {"K", to_json(t.K)},
                {"area_D", to_json(t.area_D)},
                {"area_K", to_json(t.area_K)},
                {"invariant", t.invariant},
                {"k_interiors_disjoint", t.k_interiors_disjoint},
                {"trapping_index", opt(t.trapping_index)},
                {"max_k", t.max_k},
                {"area_identity", t.area_identity},
                {"area_law", t.area_law},
                {"periodic_orbit_inside", t.periodic_inside},
                {"iterate_areas", areas}};
}

Json to_json(const EllApproximation& e) {
    Json steps = Json::array();
    for (const auto& s : e.steps) {
        steps.push_back(Json{{"k", s.k},
                             {"area", s.area.approx()},
                             {"diameter", s.diameter},
                             {"hausdorff_change", s.change},
                             {"vertices", s.vertices}});
    }
    return Json{{"k", e.k},
                {"area", to_json(e.area)},
                {"diameter", e.diameter},
                {"P_inside", e.P_inside},
                {"P1_inside", e.P1_inside},
                {"steps", steps}};
}

Json to_json(const OrbitRecord& o) {
    Json pts = Json::array();
    for (const auto& p : o.points) pts.push_back(to_json(p));
    const auto& m = o.multipliers;
    Json mj{{"trace", to_json(m.trace)}, {"det", to_json(m.det)}, {"complex", m.complex}};
    if (!m.complex) {
        mj["mu1"] = to_json(m.mu1);
        mj["mu2"] = to_json(m.mu2);
    }
    mj["abs1"] = m.abs1;
    mj["abs2"] = m.abs2;
    return Json{{"period", o.period},
                {"itinerary", o.itinerary},
                {"stability", to_string(o.stability)},
                {"points", pts},
                {"multipliers", mj}};
}

double render_coord(const Scalar& s, int precision_bits) {
    if (precision_bits < 53) precision_bits = 53;
    return scalar_to_float(s, precision_bits).approx();
}

std::string manifold_csv(const UnstableManifold& m, int precision_bits) {
    std::string out = "branch,arc,index,x,y\n";
    auto emit = [&](const char* branch, int arc, const Polyline& line) {
        for (std::size_t i = 0; i < line.size(); ++i) {
            out += branch;
            out += ',' + std::to_string(arc) + ',' + std::to_string(i) + ',' +
                   fmt(render_coord(line[i].x, precision_bits)) + ',' + fmt(render_coord(line[i].y, precision_bits)) +
                   '\n';
        }
    };
    emit("UPlus", -1, m.initial_plus);
    for (const auto& a : m.plus) emit("UPlus", a.index, a.polyline);
    emit("UMinus", -1, m.initial_minus);
    for (const auto& a : m.minus) emit("UMinus", a.index, a.polyline);
    return out;
}

std::string sweep_csv_header() {
    return "a,b,a_exact,b_exact,regime,crossing_depth,homoclinic_u,homoclinic_s,trapping_index,lap_slope\n";
}

std::string sweep_csv_row(const SweepRow& r) {
    std::string s = fmt(r.a.get_d()) + ',' + fmt(r.b.get_d()) + ',' + to_string(r.a) + ',' + to_string(r.b) + ',' +
                    to_string(r.regime) + ',' + std::to_string(r.crossing_depth) + ',' +
                    std::to_string(r.homoclinic_u) + ',' + std::to_string(r.homoclinic_s) + ',';
    if (r.trapping_index) s += std::to_string(*r.trapping_index);
    s += ',';
    if (r.lap_slope) s += fmt(*r.lap_slope);
    s += '\n';
    return s;
}

// ---------------------------------------------------------------- svg

SvgCanvas::SvgCanvas(double xmin, double ymin, double xmax, double ymax, int width_px)
    : xmin_(xmin), ymin_(ymin), xmax_(xmax), ymax_(ymax) {
    if (!(xmax_ > xmin_)) xmax_ = xmin_ + 1;
    if (!(ymax_ > ymin_)) ymax_ = ymin_ + 1;
    w_ = width_px;
    scale_ = w_ / (xmax_ - xmin_);
    h_ = std::max(1, static_cast<int>(std::lround((ymax_ - ymin_) * scale_)));
}

std::string SvgCanvas::xy(double x, double y) const {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f,%.2f", (x - xmin_) * scale_, (ymax_ - y) * scale_);
    return buf;
}

namespace {

std::string style_attr(const SvgCanvas::Style& s) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", s.stroke_width);
    std::string fill = s.pattern.empty() ? s.fill : "url(#" + s.pattern + ")";
    std::string out = " stroke=\"" + s.stroke + "\" stroke-width=\"" + buf + "\" fill=\"" + fill + "\"";
    if (s.fill_opacity < 1.0) {
        std::snprintf(buf, sizeof buf, "%.2f", s.fill_opacity);
        out += std::string(" fill-opacity=\"") + buf + "\"";
    }
    return out + " stroke-linejoin=\"round\"";
}

}  // namespace

void SvgCanvas::polyline(const std::vector<Point>& pts, const Style& style, int bits) {
    body_ += "<polyline points=\"";
    for (const auto& p : pts) body_ += xy(render_coord(p.x, bits), render_coord(p.y, bits)) + ' ';
    body_ += "\"" + style_attr(style) + "/>\n";
}

void SvgCanvas::polygon(const std::vector<Point>& pts, const Style& style, int bits) {
    body_ += "<polygon points=\"";
    for (const auto& p : pts) body_ += xy(render_coord(p.x, bits), render_coord(p.y, bits)) + ' ';
    body_ += "\"" + style_attr(style) + "/>\n";
}

void SvgCanvas::dot(const Point& p, double r, const std::string& color, const std::string& label, int bits) {
    const std::string c = xy(render_coord(p.x, bits), render_coord(p.y, bits));
    const auto comma = c.find(',');
    const std::string cx = c.substr(0, comma), cy = c.substr(comma + 1);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", r);
    body_ += "<circle cx=\"" + cx + "\" cy=\"" + cy + "\" r=\"" + buf + "\" fill=\"" + color + "\"/>\n";
    if (!label.empty()) {
        body_ += "<text x=\"" + cx + "\" y=\"" + cy + "\" dx=\"4\" dy=\"-4\" font-size=\"12\" font-family=\"serif\">" +
                 label + "</text>\n";
    }
}

void SvgCanvas::add_hatch(const std::string& name, const std::string& color, double angle) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.0f", angle);
    defs_ += "<pattern id=\"" + name + "\" width=\"6\" height=\"6\" patternUnits=\"userSpaceOnUse\" "
             "patternTransform=\"rotate(" + buf + ")\"><line x1=\"0\" y1=\"0\" x2=\"0\" y2=\"6\" stroke=\"" + color +
             "\" stroke-width=\"1\"/></pattern>\n";
}

std::string SvgCanvas::str() const {
    std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(w_) + "\" height=\"" +
                      std::to_string(h_) + "\" viewBox=\"0 0 " + std::to_string(w_) + ' ' + std::to_string(h_) +
                      "\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    if (!defs_.empty()) out += "<defs>\n" + defs_ + "</defs>\n";
    // coordinate axes
    const std::string ax0 = xy(xmin_, 0), ax1 = xy(xmax_, 0), ay0 = xy(0, ymin_), ay1 = xy(0, ymax_);
    out += "<polyline points=\"" + ax0 + ' ' + ax1 + "\" stroke=\"#999\" stroke-width=\"0.5\" fill=\"none\"/>\n";
    out += "<polyline points=\"" + ay0 + ' ' + ay1 + "\" stroke=\"#999\" stroke-width=\"0.5\" fill=\"none\"/>\n";
    return out + body_ + "</svg>\n";
}

void Bounds::add(const Point& p) {
    const double x = p.approx_x(), y = p.approx_y();
    if (!std::isfinite(x) || !std::isfinite(y)) return;
    if (xmin == 0 && xmax == 0 && ymin == 0 && ymax == 0) {
        xmin = xmax = x;
        ymin = ymax = y;
        return;
    }
    xmin = std::min(xmin, x);
    xmax = std::max(xmax, x);
    ymin = std::min(ymin, y);
    ymax = std::max(ymax, y);
}

void Bounds::pad(double f) {
    const double dx = std::max(xmax - xmin, 1e-12) * f, dy = std::max(ymax - ymin, 1e-12) * f;
    xmin -= dx;
    xmax += dx;
    ymin -= dy;
    ymax += dy;
}

namespace {

const char* kUnstable = "#1f4fd1";
const char* kStable = "#d12a1f";

void draw_unstable(SvgCanvas& svg, const UnstableManifold& wu, int bits) {
    SvgCanvas::Style s;
    s.stroke = kUnstable;
    s.stroke_width = 1.0;
    for (Branch b : {Branch::UPlus, Branch::UMinus}) svg.polyline(wu.path(b).vertices, s, bits);
}

void mark_points(SvgCanvas& svg, const Params& params, int bits) {
    svg.dot(params.X(), 3, "black", "X", bits);
    svg.dot(params.Z(), 3, "black", "Z", bits);
    if (params.period_two_range()) {
        svg.dot(params.P(), 3, "black", "P", bits);
        svg.dot(params.P1(), 3, "black", "P'", bits);
    }
}

}  // namespace

std::string manifold_svg(const Params& params, const UnstableManifold& wu, const StableManifold* ws, int bits) {
    Bounds bb;
    for (Branch b : {Branch::UPlus, Branch::UMinus}) {
        for (const auto& p : wu.path(b).vertices) bb.add(p);
    }
    bb.pad();
    SvgCanvas svg(bb.xmin, bb.ymin, bb.xmax, bb.ymax);
    if (ws) {
        SvgCanvas::Style s;
        s.stroke = kStable;
        s.stroke_width = 0.8;
        // only the part of the stable manifold inside the frame is informative
        for (const auto& piece : ws->pieces) {
            Bounds pb;
            for (const auto& p : piece.vertices) pb.add(p);
            if (pb.xmax < bb.xmin || pb.xmin > bb.xmax || pb.ymax < bb.ymin || pb.ymin > bb.ymax) continue;
            svg.polyline(piece.vertices, s, bits);
        }
    }
    draw_unstable(svg, wu, bits);
    mark_points(svg, params, bits);
    return svg.str();
}

std::string trap_svg(const Params& params, const UnstableManifold& wu, const TrapReport& t, int bits) {
    Bounds bb;
    for (Branch b : {Branch::UPlus, Branch::UMinus}) {
        for (const auto& p : wu.path(b).vertices) bb.add(p);
    }
    bb.pad();
    SvgCanvas svg(bb.xmin, bb.ymin, bb.xmax, bb.ymax);
    SvgCanvas::Style fill;
    fill.fill = "#aad4f5";
    fill.stroke = "#4a7fb0";
    fill.stroke_width = 0.6;
    svg.polygon(t.D.vertices(), fill, bits);
    draw_unstable(svg, wu, bits);
    mark_points(svg, params, bits);
    svg.dot(t.construction.S, 3, "#333", "S", bits);
    if (!same_point(t.construction.S, t.construction.T)) svg.dot(t.construction.T, 3, "#333", "T", bits);
    return svg.str();
}

std::string kpolygon_svg(const Params& params, const TrapReport& t, int bits) {
    const SimplePolygon K2 = image2(params, t.K);
    Bounds bb;
    for (const auto& p : t.K.vertices()) bb.add(p);
    for (const auto& p : K2.vertices()) bb.add(p);
    bb.pad();
    SvgCanvas svg(bb.xmin, bb.ymin, bb.xmax, bb.ymax);
    svg.add_hatch("hatchK", "#1f4fd1", 45);
    svg.add_hatch("hatchK2", "#d12a1f", -45);
    SvgCanvas::Style s;
    s.stroke = "#1f4fd1";
    s.pattern = "hatchK";
    svg.polygon(t.K.vertices(), s, bits);
    s.stroke = "#d12a1f";
    s.pattern = "hatchK2";
    svg.polygon(K2.vertices(), s, bits);
    svg.dot(params.Z(), 3, "black", "Z", bits);
    svg.dot(t.construction.T, 3, "black", "T", bits);
    return svg.str();
}

std::string ell_svg(const Params& params, const SimplePolygon& D, const EllApproximation& e, int bits) {
    const SimplePolygon DL = image1(params, D);
    Bounds bb;
    for (const auto& p : D.vertices()) bb.add(p);
    for (const auto& p : DL.vertices()) bb.add(p);
    bb.pad();
    SvgCanvas svg(bb.xmin, bb.ymin, bb.xmax, bb.ymax);
    SvgCanvas::Style outline;
    outline.stroke = "#4a7fb0";
    outline.stroke_width = 0.6;
    svg.polygon(D.vertices(), outline, bits);
    svg.polygon(DL.vertices(), outline, bits);
    SvgCanvas::Style fill;
    fill.fill = "#1f4fd1";
    fill.stroke = "#1f4fd1";
    fill.stroke_width = 1.0;
    svg.polygon(e.right.vertices(), fill, bits);
    svg.polygon(e.left.vertices(), fill, bits);
    svg.dot(params.P(), 2, "#d12a1f", "P", bits);
    svg.dot(params.P1(), 2, "#d12a1f", "P'", bits);
    return svg.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open " + path + " for writing");
    f << content;
    if (!f) throw Error("failed writing " + path);
}

}  // namespace lozi
