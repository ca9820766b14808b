#include "lozi/classify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <condition_variable>
#include <limits>
#include <mutex>
#include <thread>

namespace lozi {

const char* to_string(Regime r) {
    switch (r) {
        case Regime::RCandidate: return "RCandidate";
        case Regime::FrakRMinusRCandidate: return "FrakRMinusRCandidate";
        case Regime::FiniteCrossings: return "FiniteCrossings";
        case Regime::PositiveEntropySignal: return "PositiveEntropySignal";
        case Regime::OutOfScope: return "OutOfScope";
        case Regime::Unknown: return "Unknown";
    }
    return "?";
}

const char* to_string(LapSignal s) {
    switch (s) {
        case LapSignal::ZeroLike: return "ZeroLike";
        case LapSignal::Positive: return "Positive";
        case LapSignal::Inconclusive: return "Inconclusive";
    }
    return "?";
}

// ---------------------------------------------------------------- lap growth

namespace {

// Least squares of y on x; returns slope and residual sum of squares.
std::pair<double, double> fit(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double den = n * sxx - sx * sx;
    const double slope = den != 0 ? (n * sxy - sx * sy) / den : 0.0;
    const double icept = (sy - slope * sx) / n;
    double rss = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - slope * x[i] - icept;
        rss += r * r;
    }
    return {slope, rss};
}

}  // namespace

LapGrowth lap_growth_entropy_estimate(const Params& params, int n_max, std::size_t piece_budget, double threshold) {
    if (n_max < 5) throw PreconditionError("n_max must be >= 5");
    LapGrowth g;
    const Point& Z = params.Z();
    Polyline arc({step_backward(params, Z), step_forward(params, Z)});
    ManifoldBudget budget;
    budget.max_vertices = piece_budget + 1;
    budget.allow_truncation = false;
    for (int n = 1; n <= n_max; ++n) {
        try {
            arc = image_of_polyline(params, arc, 1, budget);
        } catch (const BudgetExhausted&) {
            g.truncated = true;
            break;
        }
        const std::size_t c = arc.segments();
        if (!g.counts.empty() && c < g.counts.back()) g.monotone = false;
        g.counts.push_back(c);
        g.rates.push_back(std::log(static_cast<double>(c)) / n);
    }
    if (g.counts.size() < 5) return g;

    const std::size_t h = g.counts.size() / 2;
    std::vector<double> xn, xl, y;
    for (std::size_t i = h; i < g.counts.size(); ++i) {
        const double n = static_cast<double>(i + 1);
        xn.push_back(n);
        xl.push_back(std::log(n));
        y.push_back(std::log(static_cast<double>(g.counts[i])));
    }
    const auto [slope, rss_exp] = fit(xn, y);
    const auto [pw, rss_poly] = fit(xl, y);
    (void)pw;
    g.slope = slope;
    g.residual_exp = rss_exp;
    g.residual_poly = rss_poly;
    if (slope > threshold && g.monotone && rss_exp <= rss_poly) {
        g.signal = LapSignal::Positive;
    } else if (slope <= threshold || rss_poly < rss_exp) {
        g.signal = LapSignal::ZeroLike;
    }
    return g;
}

// ---------------------------------------------------------------- separated sets

std::size_t separated_set_estimate(const Params& params, int n, double epsilon, const SeparatedBox& box) {
    if (n < 1) throw PreconditionError("n must be >= 1");
    if (!(epsilon > 0)) throw PreconditionError("epsilon must be positive");
    const double a = params.a().approx(), b = params.b().approx();
    const int g = std::max(1, box.grid);
    const std::size_t N = static_cast<std::size_t>(g) * static_cast<std::size_t>(g);
    // orbits[i * n + k] = L^k of grid point i
    std::vector<std::pair<double, double>> orbit(N * static_cast<std::size_t>(n));
    for (int ix = 0; ix < g; ++ix) {
        for (int iy = 0; iy < g; ++iy) {
            const std::size_t i = static_cast<std::size_t>(ix) * g + iy;
            double x = g == 1 ? box.xmin : box.xmin + (box.xmax - box.xmin) * ix / (g - 1);
            double y = g == 1 ? box.ymin : box.ymin + (box.ymax - box.ymin) * iy / (g - 1);
            for (int k = 0; k < n; ++k) {
                orbit[i * n + k] = {x, y};
                const double nx = 1 + y - a * std::fabs(x);
                y = b * x;
                x = nx;
            }
        }
    }
    auto dist = [&](std::size_t i, std::size_t j, int m) {
        double d = 0;
        for (int k = 0; k < m; ++k) {
            const auto& p = orbit[i * n + k];
            const auto& q = orbit[j * n + k];
            const double e = std::hypot(p.first - q.first, p.second - q.second);
            if (!std::isfinite(e)) return std::numeric_limits<double>::infinity();
            d = std::max(d, e);
        }
        return d;
    };
    std::size_t best = 1;
    int j0 = static_cast<int>(std::ceil(std::log2(epsilon)));
    if (std::ldexp(1.0, j0) < epsilon) ++j0;
    for (int m = 1; m <= n; ++m) {
        for (int j = j0; j < j0 + 64; ++j) {
            const double r = std::ldexp(1.0, j);
            std::vector<std::size_t> chosen;
            for (std::size_t i = 0; i < N; ++i) {
                bool sep = true;
                for (std::size_t c : chosen) {
                    if (dist(i, c, m) < r) {
                        sep = false;
                        break;
                    }
                }
                if (sep) chosen.push_back(i);
            }
            best = std::max(best, chosen.size());
            if (chosen.size() <= 1) break;
        }
    }
    return best;
}

// ---------------------------------------------------------------- certificate

std::vector<Point> convex_hull(std::vector<Point> pts) {
    auto less = [](const Point& p, const Point& q) {
        const Sign sx = compare(p.x, q.x);
        if (sx != Sign::Zero) return sx == Sign::Negative;
        return compare(p.y, q.y) == Sign::Negative;
    };
    std::sort(pts.begin(), pts.end(), less);
    pts.erase(std::unique(pts.begin(), pts.end(), [](const Point& p, const Point& q) { return same_point(p, q); }),
              pts.end());
    if (pts.size() < 3) return pts;
    std::vector<Point> h(2 * pts.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        while (k >= 2 && orientation(h[k - 2], h[k - 1], pts[i]) != Sign::Positive) --k;
        h[k++] = pts[i];
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
        while (k >= t && orientation(h[k - 2], h[k - 1], pts[i]) != Sign::Positive) --k;
        h[k++] = pts[i];
    }
    h.resize(k - 1);
    return h;
}

namespace {

bool in_convex(const Point& p, const std::vector<Point>& hull) {
    if (hull.size() == 1) return same_point(p, hull[0]);
    if (hull.size() == 2) return on_segment(p, hull[0], hull[1]);
    for (std::size_t i = 0; i < hull.size(); ++i) {
        if (orientation(hull[i], hull[(i + 1) % hull.size()], p) == Sign::Negative) return false;
    }
    return true;
}

bool same_sequence(const std::vector<Point>& a, const std::vector<Point>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!same_point(a[i], b[i])) return false;
    }
    return true;
}

}  // namespace

FiniteCrossingCertificate finite_crossings_certificate(const Params& params, const UnstableManifold& manifold,
                                                       int window) {
    const CrossingCensus census = crossing_census(axis_crossings(params, manifold), window);
    if (!census.finite_evidence) {
        throw PreconditionError("crossings continue into the last " + std::to_string(census.window) + " arcs");
    }
    FiniteCrossingCertificate c;
    c.depth = manifold.depth_reached;
    c.m = census.last_arc + 1;
    if (c.m > c.depth - 1) throw BudgetExhausted("depth too small for the certificate");
    c.A = manifold.plus[c.m].polyline.front();

    std::vector<Point> zr, zl;
    for (int n = c.m; n <= c.depth - 1; ++n) {
        const auto& v = manifold.plus[n].polyline.vertices;
        zr.insert(zr.end(), v.begin(), v.end());
    }
    for (int n = c.m + 1; n <= c.depth; ++n) {
        const auto& v = manifold.minus[n].polyline.vertices;
        zl.insert(zl.end(), v.begin(), v.end());
    }
    c.hull_R = convex_hull(std::move(zr));
    c.hull_L = convex_hull(std::move(zl));

    c.quadrant_R = std::all_of(c.hull_R.begin(), c.hull_R.end(), [](const Point& p) {
        return sign_x(p) != Sign::Negative && sign_y(p) != Sign::Positive;
    });
    c.quadrant_L = std::all_of(c.hull_L.begin(), c.hull_L.end(), [](const Point& p) {
        return sign_x(p) != Sign::Positive && sign_y(p) != Sign::Negative;
    });
    // L is affine on each closed half plane, so hulls map to hulls of images
    std::vector<Point> img;
    for (const auto& p : c.hull_R) img.push_back(step_forward(params, p));
    c.image_equal = c.quadrant_R && same_sequence(convex_hull(img), c.hull_L);
    c.image_contained = c.quadrant_L;
    for (const auto& p : c.hull_L) {
        if (!c.image_contained) break;
        c.image_contained = in_convex(step_forward(params, p), c.hull_R);
    }

    const double a = params.a().approx(), b = params.b().approx();
    const double Px = params.P().approx_x(), Py = params.P().approx_y();
    const double Qx = params.P1().approx_x(), Qy = params.P1().approx_y();
    double err = 0;
    auto run = [&](const std::vector<Point>& hull, double tx, double ty) {
        for (const auto& p : hull) {
            double x = p.approx_x(), y = p.approx_y();
            for (int s = 0; s < 400; ++s) {
                const double nx = 1 + y - a * std::fabs(x);
                y = b * x;
                x = nx;
            }
            const double e = std::hypot(x - tx, y - ty);
            err = std::isfinite(e) ? std::max(err, e) : std::numeric_limits<double>::infinity();
        }
    };
    run(c.hull_R, Px, Py);
    run(c.hull_L, Qx, Qy);
    c.convergence_error = err;
    c.converges = err < 1e-8;
    return c;
}

FiniteCrossingCertificate finite_crossings_certificate(const Params& params, int depth, const ManifoldBudget& budget) {
    return finite_crossings_certificate(params, unstable_manifold(params, depth, budget, false));
}

bool two_cycle_attracting(const Params& params) {
    if (!params.period_two_range()) return false;
    // L^2 at P has trace 2b - a^2 and determinant b^2; both roots lie in the
    // open unit disc iff |det| < 1 and |trace| < 1 + det.
    const Scalar& a = params.a();
    const Scalar& b = params.b();
    const Scalar tr = b * Scalar(2) - a * a;
    const Scalar det = b * b;
    return compare(abs(det), Scalar(1)) == Sign::Negative && compare(abs(tr), Scalar(1) + det) == Sign::Negative;
}

// ---------------------------------------------------------------- classifier

RegionVerdict classify_parameters(const Params& params, const ClassifyBudgets& budgets) {
    RegionVerdict v;
    v.a = to_string(params.a_rational());
    v.b = to_string(params.b_rational());
    v.standard = params.standard();
    if (!v.standard) {
        v.regime = Regime::OutOfScope;
        v.notes.push_back("outside 0 < b < 1, a + b > 1");
        return v;
    }
    v.period_two = params.period_two_range();
    v.two_cycle_attracting = two_cycle_attracting(params);

    const auto wu = unstable_manifold(params, budgets.crossing_depth, budgets.manifold, false);
    v.census_truncated = wu.truncated;
    v.census = crossing_census(axis_crossings(params, wu));

    if (wu.depth_reached <= budgets.homoclinic_u) {
        v.homoclinic = homoclinic_search(params, wu, stable_manifold(params, budgets.homoclinic_s, budgets.manifold));
    } else {
        UnstableManifold trimmed = wu;
        trimmed.plus.resize(static_cast<std::size_t>(budgets.homoclinic_u) + 1);
        trimmed.minus.resize(static_cast<std::size_t>(budgets.homoclinic_u) + 1);
        trimmed.depth_reached = budgets.homoclinic_u;
        v.homoclinic =
            homoclinic_search(params, trimmed, stable_manifold(params, budgets.homoclinic_s, budgets.manifold));
    }
    try {
        v.lap = lap_growth_entropy_estimate(params, budgets.lap_n_max, budgets.lap_budget, budgets.lap_threshold);
    } catch (const Error& e) {
        v.notes.push_back(std::string("lap growth: ") + e.what());
    }

    if (v.homoclinic->found && v.homoclinic->transversal) {
        v.regime = Regime::PositiveEntropySignal;
        v.notes.push_back("transversal homoclinic point of X");
        return v;
    }
    if (v.lap && v.lap->signal == LapSignal::Positive) {
        v.regime = Regime::PositiveEntropySignal;
        v.notes.push_back("exponential lap growth");
        return v;
    }
    if (v.homoclinic->found) {
        v.regime = Regime::Unknown;
        v.notes.push_back("non-transversal homoclinic contact of X");
        return v;
    }
    if (!v.two_cycle_attracting) {
        v.regime = Regime::Unknown;
        v.notes.push_back("no attracting 2-cycle");
        return v;
    }
    if (v.census->finite_evidence) {
        try {
            v.certificate = finite_crossings_certificate(params, wu);
        } catch (const Error& e) {
            v.notes.push_back(std::string("certificate: ") + e.what());
        }
        const bool cert_ok = v.certificate && v.certificate->verified();
        if (v.census->only_Z) {
            v.regime = Regime::RCandidate;
        } else if (cert_ok) {
            v.regime = Regime::FiniteCrossings;
        } else {
            v.regime = Regime::Unknown;
            v.notes.push_back("finite crossings observed but the certificate did not verify");
            return v;
        }
        v.notes.push_back("consistent with zero entropy off the accumulation set of W^u");
        return v;
    }
    v.regime = Regime::FrakRMinusRCandidate;
    v.notes.push_back("crossings continue to the probe depth");
    return v;
}

// ---------------------------------------------------------------- sweep

std::vector<std::pair<Rational, Rational>> SweepGrid::points() const {
    if (sgn(a_step) <= 0 || sgn(b_step) <= 0) throw PreconditionError("grid steps must be positive");
    std::vector<std::pair<Rational, Rational>> out;
    for (Rational a = a_min; a <= a_max; a += a_step) {
        for (Rational b = b_min; b <= b_max; b += b_step) out.emplace_back(a, b);
    }
    return out;
}

SweepRow sweep_point(const Rational& a, const Rational& b, const SweepOptions& options) {
    SweepRow row;
    row.a = a;
    row.b = b;
    const Params params = Params::exact(a, b);
    const RegionVerdict v = classify_parameters(params, options.budgets);
    row.regime = v.regime;
    if (v.census) row.crossing_depth = v.census->depth;
    if (v.homoclinic) {
        row.homoclinic_u = v.homoclinic->u_depth;
        row.homoclinic_s = v.homoclinic->s_depth;
    }
    if (v.lap && v.lap->counts.size() >= 5) row.lap_slope = v.lap->slope;
    if (v.regime == Regime::FrakRMinusRCandidate) {
        try {
            const TrapReport t = run_trap(params, options.trap_depth, options.trap_max_k, options.budgets.manifold);
            row.trapping_index = t.trapping_index;
        } catch (const PreconditionError&) {
        } catch (const BudgetExhausted&) {
        }
    }
    return row;
}

std::vector<SweepRow> sweep(const SweepGrid& grid, const SweepOptions& options,
                            const std::function<bool(const Rational&, const Rational&)>& skip,
                            const std::function<void(const SweepRow&)>& on_row) {
    std::vector<std::pair<Rational, Rational>> todo;
    for (auto& p : grid.points()) {
        if (!skip || !skip(p.first, p.second)) todo.push_back(std::move(p));
    }
    std::vector<std::optional<SweepRow>> results(todo.size());
    std::vector<std::exception_ptr> errors(todo.size());
    std::atomic<std::size_t> next{0};
    std::mutex mu;
    std::condition_variable cv;

    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= todo.size()) return;
            std::optional<SweepRow> row;
            std::exception_ptr err;
            try {
                row = sweep_point(todo[i].first, todo[i].second, options);
            } catch (...) {
                err = std::current_exception();
            }
            {
                std::lock_guard<std::mutex> lock(mu);
                results[i] = std::move(row);
                errors[i] = err;
                if (!results[i]) results[i].emplace();  // placeholder, error recorded
            }
            cv.notify_all();
        }
    };
    const int nthreads = std::max(1, std::min<int>(options.threads, static_cast<int>(todo.size())));
    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);

    std::vector<SweepRow> out;
    std::exception_ptr first_error;
    for (std::size_t i = 0; i < todo.size(); ++i) {
        std::unique_lock<std::mutex> lock(mu);
        cv.wait(lock, [&] { return results[i].has_value(); });
        if (errors[i]) {
            if (!first_error) first_error = errors[i];
            continue;
        }
        SweepRow row = *results[i];
        lock.unlock();
        if (!first_error) {
            if (on_row) on_row(row);
            out.push_back(std::move(row));
        }
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
    return out;
}

}  // namespace lozi
