#pragma once

// Depth-stamped regime classification of a parameter pair, the finite-crossings
// certificate, and two entropy-signal estimators.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lozi/trap.hpp"

namespace lozi {

enum class Regime { RCandidate, FrakRMinusRCandidate, FiniteCrossings, PositiveEntropySignal, OutOfScope, Unknown };
const char* to_string(Regime r);

enum class LapSignal { ZeroLike, Positive, Inconclusive };
const char* to_string(LapSignal s);

struct LapGrowth {
    std::vector<std::size_t> counts;  // pieces of L^n on the fundamental arc, n = 1, 2, ...
    std::vector<double> rates;        // log(count) / n
    double slope = 0.0;               // least squares of log(count) on n over the second half
    double residual_exp = 0.0;
    double residual_poly = 0.0;       // same fit against log n
    bool monotone = true;
    bool truncated = false;           // piece budget hit before n_max
    LapSignal signal = LapSignal::Inconclusive;
};

// Counts linearity pieces of L^n restricted to [Z^-1, Z^1] for n = 1..n_max.
LapGrowth lap_growth_entropy_estimate(const Params& params, int n_max, std::size_t piece_budget = 5000,
                                      double threshold = 0.05);

struct SeparatedBox {
    double xmin = -1.5, ymin = -1.5, xmax = 1.5, ymax = 1.5;
    int grid = 48;  // grid x grid initial points
};

// Greedy lower bound for the largest (n, eps)-separated set among grid points
// of the box. Taken as a maximum over lengths m <= n and dyadic radii >= eps so
// that it is monotone in both arguments.
std::size_t separated_set_estimate(const Params& params, int n, double epsilon, const SeparatedBox& box = {});

struct FiniteCrossingCertificate {
    int depth = 0;
    int m = 0;  // ZR starts at arc m of UPlus, A = Z^(2m)
    Point A;
    std::vector<Point> hull_R;  // Conv(ZR), counterclockwise
    std::vector<Point> hull_L;  // Conv(ZL)
    bool image_equal = false;      // L(Conv ZR) = Conv ZL
    bool image_contained = false;  // L(Conv ZL) within Conv ZR
    bool quadrant_R = false;       // closed fourth quadrant
    bool quadrant_L = false;       // closed second quadrant
    double convergence_error = 0;  // after 200 steps of L^2 from the hull vertices
    bool converges = false;        // error below 1e-8
    bool verified() const { return image_equal && image_contained && quadrant_R && quadrant_L && converges; }
};

// Exact convex hull, counterclockwise from the lexicographically least vertex,
// collinear points dropped.
std::vector<Point> convex_hull(std::vector<Point> points);

FiniteCrossingCertificate finite_crossings_certificate(const Params& params, const UnstableManifold& manifold,
                                                       int window = -1);
FiniteCrossingCertificate finite_crossings_certificate(const Params& params, int depth,
                                                       const ManifoldBudget& budget = {});

// Both multipliers of the 2-cycle inside the unit disc (exact).
bool two_cycle_attracting(const Params& params);

struct ClassifyBudgets {
    int crossing_depth = 100;
    int homoclinic_u = 60;
    int homoclinic_s = 60;
    int lap_n_max = 80;
    std::size_t lap_budget = 5000;
    double lap_threshold = 0.05;
    ManifoldBudget manifold{20000, 1u << 20, true};
};

struct RegionVerdict {
    std::string a, b;  // exact rationals as p/q
    bool standard = false;
    bool period_two = false;
    bool two_cycle_attracting = false;
    std::optional<CrossingCensus> census;
    bool census_truncated = false;
    std::optional<HomoclinicResult> homoclinic;
    std::optional<LapGrowth> lap;
    std::optional<FiniteCrossingCertificate> certificate;
    Regime regime = Regime::Unknown;
    std::vector<std::string> notes;
};

RegionVerdict classify_parameters(const Params& params, const ClassifyBudgets& budgets = {});

struct SweepGrid {
    Rational a_min, a_max, a_step;
    Rational b_min, b_max, b_step;
    std::vector<std::pair<Rational, Rational>> points() const;
};

struct SweepRow {
    Rational a, b;
    Regime regime = Regime::Unknown;
    int crossing_depth = 0;
    int homoclinic_u = 0;
    int homoclinic_s = 0;
    std::optional<int> trapping_index;
    std::optional<double> lap_slope;
};

struct SweepOptions {
    ClassifyBudgets budgets;
    int trap_depth = 12;
    int trap_max_k = 50;
    int threads = 1;
};

SweepRow sweep_point(const Rational& a, const Rational& b, const SweepOptions& options);
// Rows in grid order; `skip` filters points already done, `on_row` is called
// from the calling thread in grid order.
std::vector<SweepRow> sweep(const SweepGrid& grid, const SweepOptions& options,
                            const std::function<bool(const Rational&, const Rational&)>& skip = {},
                            const std::function<void(const SweepRow&)>& on_row = {});

}  // namespace lozi
