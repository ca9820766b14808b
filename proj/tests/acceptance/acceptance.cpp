// End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
// exits nonzero if any fails.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "cli.hpp"
#include "lozi/classify.hpp"
#include "oracle.hpp"

namespace fs = std::filesystem;
using namespace lozi;
using oracle::Q;
using oracle::QPt;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
    void require(bool ok, const std::string& what) {
        if (!ok) {
            if (pass) detail = what;
            pass = false;
        }
    }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

oracle::Quad area2(const SimplePolygon& poly, const Q& delta) {
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

// 1. Exact identities on the 20 x 20 grid.
Outcome criterion1() {
    Outcome o;
    int n = 0;
    for (int i = 1; i <= 20; ++i) {
        for (int j = 1; j <= 20; ++j) {
            Q b(i, 21);
            b.canonicalize();
            Q a = 1 - b + 2 * b * Q(j, 21);
            a.canonicalize();
            const auto prm = Params::exact(a, b);
            const std::string at = " at a=" + a.get_str() + " b=" + b.get_str();
            const QPt X = oracle::to_qpt(prm.X()), Y = oracle::to_qpt(prm.Y());
            o.require(oracle::lozi(a, b, X) == X, "L(X) != X" + at);
            o.require(oracle::lozi(a, b, Y) == Y, "L(Y) != Y" + at);
            o.require(apply(prm, prm.X(), 1) == prm.X() && apply(prm, prm.Y(), 1) == prm.Y(), "apply moves X or Y" + at);
            const QPt P = oracle::to_qpt(prm.P()), P1 = oracle::to_qpt(prm.P1());
            o.require(oracle::lozi(a, b, P) == P1 && oracle::lozi(a, b, P1) == P, "P, P' not a 2-cycle" + at);
            const Q delta = a * a + 4 * b;
            const auto lu = oracle::to_quad(prm.eigen().lambda_u), ls = oracle::to_quad(prm.eigen().lambda_s);
            const auto prod = oracle::quad_mul(lu, ls, delta);
            o.require(lu.p + ls.p == -a && lu.q + ls.q == 0, "lambda_u + lambda_s != -a" + at);
            o.require(prod.p == -b && prod.q == 0, "lambda_u lambda_s != -b" + at);
            ++n;
        }
    }
    o.require(n == 400, "grid size");
    if (o.pass) o.detail = "400 parameter pairs";
    return o;
}

// 2. The period-two orbit at (1, 1/2).
Outcome criterion2() {
    Outcome o;
    const auto prm = Params::exact(1, Q(1, 2));
    const QPt P{Q(6, 5), Q(-1, 5)}, P1{Q(-2, 5), Q(3, 5)};
    o.require(oracle::to_qpt(prm.P()) == P, "P != (6/5, -1/5)");
    o.require(oracle::to_qpt(prm.P1()) == P1, "P' != (-2/5, 3/5)");
    const auto orbits = periodic_orbits(prm, 2);
    o.require(orbits.size() == 1, "expected exactly one prime 2-cycle");
    if (orbits.size() == 1) {
        const auto& pts = orbits[0].points;
        const bool match = pts.size() == 2 && ((oracle::to_qpt(pts[0]) == P && oracle::to_qpt(pts[1]) == P1) ||
                                               (oracle::to_qpt(pts[0]) == P1 && oracle::to_qpt(pts[1]) == P));
        o.require(match, "periodic_orbits(2) differs from {P, P'}");
    }
    if (o.pass) o.detail = "P=(6/5,-1/5), P'=(-2/5,3/5)";
    return o;
}

// 3. Area scales by b under one step.
Outcome criterion3() {
    Outcome o;
    oracle::Rng rng(20240601);
    for (int t = 0; t < 500; ++t) {
        const Q b = rng.unit(40);
        const Q a = 1 - b + 2 * b * rng.unit(40);
        const auto prm = Params::exact(a, b);
        const auto ring = oracle::star_polygon(rng, {rng.rational(1, 6), rng.rational(1, 6)},
                                               3 + static_cast<int>(rng.integer(0, 9)), Q(1, 8), Q(3, 2));
        const SimplePolygon img = image1(prm, SimplePolygon(oracle::to_points(ring)));
        std::vector<QPt> img_q;
        for (const auto& p : img.vertices()) img_q.push_back(oracle::to_qpt(p));
        const Q before = oracle::qabs(oracle::shoelace2(ring)), after = oracle::qabs(oracle::shoelace2(img_q));
        o.require(after == b * before, "random polygon " + std::to_string(t));
    }
    // Iterates of D at (1.06, 0.96).
    const Q a(53, 50), b(24, 25);
    const auto prm = Params::exact(a, b);
    const Q delta = a * a + 4 * b;
    const TrapReport r = run_trap(prm, 12, 12);
    const auto base = area2(r.D, delta);
    Q bpow = 1;
    for (std::size_t j = 0; j < r.iterates.size(); ++j) {
        const SimplePolygon odd = image1(prm, j == 0 ? r.D : r.iterates[j - 1]);
        bpow *= b;
        const auto ao = area2(odd, delta);
        o.require(ao.p == bpow * base.p && ao.q == bpow * base.q, "L^" + std::to_string(2 * j + 1) + "(D)");
        bpow *= b;
        const auto ae = area2(r.iterates[j], delta);
        o.require(ae.p == bpow * base.p && ae.q == bpow * base.q, "L^" + std::to_string(2 * j + 2) + "(D)");
    }
    if (o.pass) o.detail = "500 random polygons, " + std::to_string(2 * r.iterates.size()) + " iterates of D";
    return o;
}

// 4. Trap pipeline at (1.06, 0.96).
Outcome criterion4() {
    Outcome o;
    const auto t0 = Clock::now();
    const auto prm = Params::exact(Q(53, 50), Q(24, 25));
    const TrapReport r = run_trap(prm, 12, 50);
    o.require(r.construction.chord_verified, "chord ST meets the manifold");
    o.require(r.invariant, "L^2(D) not inside D");
    o.require(r.k_interiors_disjoint, "Int K meets Int L^2(K)");
    o.require(r.trapping_index.has_value(), "no trapping index up to 50");
    o.require(r.area_identity, "area identity");
    o.require(r.area_law, "area law");
    o.require(r.periodic_inside, "P, P' not inside the iterates");
    const double s = seconds_since(t0);
    o.require(s < 120.0, "took " + std::to_string(s) + " s");
    if (o.pass) {
        std::ostringstream d;
        d << "case " << to_string(r.construction.which) << ", i=" << r.construction.i << ", k=" << r.construction.k
          << ", trapping index " << *r.trapping_index;
        o.detail = d.str();
    }
    return o;
}

// 5. Evidence at (1, 1/2).
Outcome criterion5() {
    Outcome o;
    const auto t0 = Clock::now();
    const auto prm = Params::exact(1, Q(1, 2));
    const ManifoldBudget mb{20000, 1u << 20, true};
    const auto wu = unstable_manifold(prm, 100, mb, false);
    o.require(!wu.truncated && wu.depth_reached == 100, "manifold truncated before depth 100");
    const auto census = crossing_census(axis_crossings(prm, wu));
    o.require(census.only_Z && census.count == 2, "crossings beyond Z, Z^-1");
    const auto h = homoclinic_search(prm, 60, 60, mb);
    o.require(!h.found, "homoclinic point found");
    const auto cert = finite_crossings_certificate(prm, wu);
    o.require(cert.verified(), "certificate failed");
    double diam = INFINITY;
    int k_hit = -1;
    if (cert.hull_R.size() >= 3) {
        const auto ell = ell_approximation(prm, SimplePolygon(cert.hull_R), 60, 1e-6, mb);
        diam = ell.diameter;
        k_hit = ell.k;
        o.require(ell.P_inside && ell.P1_inside, "2-cycle left the iterates");
    }
    o.require(diam < 1e-6, "ell diameter " + std::to_string(diam));
    const double s = seconds_since(t0);
    o.require(s < 60.0, "took " + std::to_string(s) + " s");
    if (o.pass) {
        std::ostringstream d;
        d << "only Z to depth 100, no homoclinic point at 60/60, diameter " << diam << " at k=" << k_hit;
        o.detail = d.str();
    }
    return o;
}

// 6. Positive-entropy signals at (1.6, 0.61).
Outcome criterion6() {
    Outcome o;
    const auto t0 = Clock::now();
    const auto prm = Params::exact(Q(8, 5), Q(61, 100));
    const ManifoldBudget mb{20000, 1u << 20, true};
    bool transversal = false;
    std::string which;
    int saddles = 0;
    for (const auto& orbit : periodic_orbits(prm, 6)) {
        if (orbit.stability != Stability::Saddle) continue;
        ++saddles;
        const auto h = homoclinic_search_orbit(prm, orbit, 20, 20, mb);
        if (h.found && h.transversal) {
            transversal = true;
            which = orbit.itinerary;
            break;
        }
    }
    o.require(saddles > 0, "no period-6 saddle");
    o.require(transversal, "no transversal homoclinic point for a period-6 saddle");
    const auto v = classify_parameters(prm);
    o.require(v.regime == Regime::PositiveEntropySignal, std::string("regime ") + to_string(v.regime));
    o.require(v.lap && v.lap->signal == LapSignal::Positive, "lap signal not Positive");
    const double s = seconds_since(t0);
    o.require(s < 120.0, "took " + std::to_string(s) + " s");
    if (o.pass) {
        std::ostringstream d;
        d << saddles << " period-6 saddles, witness for " << which << ", lap slope " << v.lap->slope;
        o.detail = d.str();
    }
    return o;
}

// 7. Property suites.
Outcome criterion7() {
    Outcome o;
    const auto half = Params::exact(1, Q(1, 2));
    const auto ref_params = Params::exact(Q(53, 50), Q(24, 25));

    // Injectivity and arc recurrence.
    for (const Params* prm : {&half, &ref_params}) {
        const auto wu = unstable_manifold(*prm, 12);
        o.require(wu.injectivity_verified && wu.depth_reached == 12, "injectivity to depth 12");
        for (const auto* arcs : {&wu.plus, &wu.minus}) {
            for (std::size_t n = 0; n + 1 < arcs->size(); ++n) {
                const Polyline next = image_of_polyline(*prm, (*arcs)[n].polyline, 2);
                bool same = next.size() == (*arcs)[n + 1].polyline.size();
                for (std::size_t i = 0; same && i < next.size(); ++i) same = next[i] == (*arcs)[n + 1].polyline[i];
                o.require(same, "arc recurrence at n=" + std::to_string(n));
            }
        }
        // local_arc_epsilon at 10 segment midpoints.
        const Polyline path = wu.path(Branch::UPlus);
        const std::size_t stride = std::max<std::size_t>(1, (path.size() - 1) / 10);
        int sampled = 0;
        for (std::size_t seg = 0; seg + 1 < path.size() && sampled < 10; seg += stride, ++sampled) {
            const auto e = local_arc_epsilon(wu, Branch::UPlus, seg, midpoint(path[seg], path[seg + 1]));
            o.require(e.found && e.epsilon > 0, "local arc epsilon at segment " + std::to_string(seg));
        }
        o.require(sampled == 10, "fewer than 10 sample points");
    }

    // split_at_fold idempotence.
    oracle::Rng rng(77);
    for (int t = 0; t < 200; ++t) {
        std::vector<Point> v;
        for (int k = 0; k < 6; ++k) v.push_back(oracle::from_qpt({rng.rational(2, 9), rng.rational(2, 9)}));
        for (const Fold& f : {Fold::y_axis(), Fold::x_axis(), Fold::preimage_of_y_axis(Scalar(Q(7, 5)))}) {
            const Polyline once = split_at_fold(Polyline(v), f);
            const Polyline twice = split_at_fold(once, f);
            bool same = once.size() == twice.size();
            for (std::size_t i = 0; same && i < once.size(); ++i) same = once[i] == twice[i];
            o.require(same, "split_at_fold not idempotent");
        }
    }

    // point_in_polygon against the convex oracle.
    int cases = 0;
    while (cases < 1000) {
        std::vector<Q> ts;
        while (ts.size() < 7) {
            Q t = rng.rational(3, 20);
            if (std::find(ts.begin(), ts.end(), t) == ts.end()) ts.push_back(t);
        }
        std::sort(ts.begin(), ts.end());
        std::vector<QPt> ring;
        for (const auto& t : ts) ring.push_back(oracle::circle_point(t));
        const SimplePolygon poly(oracle::to_points(ring));
        for (int k = 0; k < 50; ++k, ++cases) {
            QPt p = k % 4 == 0 ? ring[static_cast<std::size_t>(k / 4) % ring.size()]
                               : QPt{rng.rational(1, 25), rng.rational(1, 25)};
            o.require(static_cast<int>(point_in_polygon(oracle::from_qpt(p), poly)) == oracle::convex_location(p, ring),
                      "point_in_polygon case " + std::to_string(cases));
        }
    }

    // The homoclinic search never reports X.
    for (const auto& [a, b] : {std::pair{Q(8, 5), Q(61, 100)}, std::pair{Q(17, 10), Q(1, 2)},
                               std::pair{Q(53, 50), Q(24, 25)}, std::pair{Q(1), Q(1, 2)}}) {
        const auto prm = Params::exact(a, b);
        const auto h = homoclinic_search(prm, 10, 10, ManifoldBudget{20000, 1u << 20, true});
        o.require(!h.found || h.point != prm.X(), "homoclinic search returned X");
    }
    if (o.pass) o.detail = "injectivity, recurrence, fold split, 1000 point-in-polygon cases, X exclusion, 20 epsilons";
    return o;
}

// 8. Repeated analyze runs are bit-identical.
Outcome criterion8() {
    Outcome o;
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream s;
        s << in.rdbuf();
        return s.str();
    };
    const fs::path root = fs::temp_directory_path() / "lozi_acceptance_repro";
    fs::remove_all(root);
    std::string report[2], csv[2];
    for (int r = 0; r < 2; ++r) {
        cli::RunConfig c;
        c.a = "1.06";
        c.b = "0.96";
        c.threads = 2;
        c.out = (root / ("run" + std::to_string(r))).string();
        const int code = cli::cmd_analyze(c);
        o.require(code == cli::kOk, "analyze exit code " + std::to_string(code));
        report[r] = slurp(fs::path(c.out) / "report.json");
        csv[r] = slurp(fs::path(c.out) / "manifold.csv");
    }
    o.require(!report[0].empty() && report[0] == report[1], "report.json differs");
    o.require(!csv[0].empty() && csv[0] == csv[1], "manifold.csv differs");
    if (o.pass) o.detail = std::to_string(report[0].size()) + " + " + std::to_string(csv[0].size()) + " bytes identical";
    return o;
}

}  // namespace

int main() {
    const std::vector<std::function<Outcome()>> criteria{criterion1, criterion2, criterion3, criterion4,
                                                         criterion5, criterion6, criterion7, criterion8};
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = Clock::now();
        Outcome o;
        try {
            o = criteria[i]();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double s = seconds_since(t0);
        if (i == 0 && s >= 10.0) {
            o.pass = false;
            o.detail += " (took over 10 s)";
        }
        char t[32];
        std::snprintf(t, sizeof t, "%.2f s", s);
        std::cout << "criterion " << i + 1 << ": " << (o.pass ? "PASS" : "FAIL") << " [" << t << "] " << o.detail
                  << std::endl;
        if (!o.pass) ++failed;
    }
    return failed == 0 ? 0 : 1;
}
