#pragma once

// Polygonal stable and unstable manifolds of X, their axis crossings, and
// homoclinic searches (for X and for periodic saddles).

#include <optional>
#include <string>
#include <vector>

#include "lozi/map.hpp"

namespace lozi {

struct ManifoldBudget {
    std::size_t max_vertices = 400000;  // per polyline
    std::size_t max_bits = 1u << 20;     // per coordinate
    bool allow_truncation = true;        // stop early instead of throwing
};

// Throws BudgetExhausted when `line` breaks the budget.
void check_budget(const Polyline& line, const ManifoldBudget& budget);

// L^k(line) with fold splitting before every unit step (x = 0 forward,
// y = 0 backward, the kink of the inverse).
Polyline image_of_polyline(const Params& params, const Polyline& line, int k,
                           const ManifoldBudget& budget = ManifoldBudget{});

enum class Branch { UPlus, UMinus, SPlus, SMinus };
const char* to_string(Branch b);

struct ManifoldArc {
    Branch branch = Branch::UPlus;
    int index = 0;  // arc = L^(2 index) of the fundamental arc
    Polyline polyline;
};

struct UnstableManifold {
    Polyline initial_plus;   // [X, Z]
    Polyline initial_minus;  // [X, Z^-1]
    std::vector<ManifoldArc> plus;   // [Z^(2n), Z^(2n+2)]
    std::vector<ManifoldArc> minus;  // [Z^(2n-1), Z^(2n+1)]
    int depth_requested = 0;
    int depth_reached = 0;
    bool truncated = false;
    std::string truncation_reason;
    bool injectivity_verified = false;

    // Branch traversed from X outward, shared endpoints listed once.
    Polyline path(Branch b) const;
    const std::vector<ManifoldArc>& arcs(Branch b) const { return b == Branch::UPlus ? plus : minus; }
    std::size_t vertex_count() const;
};

// Both unstable branches to `depth` arcs. With verify_injective the whole curve
// is checked for self-intersections; one is a fatal InconsistencyError.
UnstableManifold unstable_manifold(const Params& params, int depth, const ManifoldBudget& budget = {},
                                   bool verify_injective = true);

struct StableManifold {
    Point X;
    Point direction_plus;  // (lambda_s, b), pointing up
    Point V;               // first crossing of the lower branch with Oy
    Point V1;              // L(V), on Ox
    // pieces[0] = [X, V]; pieces[m] = L^-m([V1, V]) for m >= 1
    std::vector<Polyline> pieces;
    int depth_requested = 0;  // in L^-2 steps
    int steps_reached = 0;    // single backward steps actually computed
    bool truncated = false;

    Polyline minus_path() const;
    // The upward ray clipped to the box [xmin, xmax] x [ymin, ymax].
    Polyline plus_segment(double xmax, double ymax) const;
};

StableManifold stable_manifold(const Params& params, int depth, const ManifoldBudget& budget = {});

enum class Axis { Ox, Oy };
const char* to_string(Axis a);

struct Crossing {
    Point point;
    Axis axis = Axis::Ox;
    Branch branch = Branch::UPlus;
    int arc = -1;  // -1 for the initial segment from X
    double arc_length = 0.0;  // along the branch from X
    bool touch = false;       // vertex on the axis without changing side
};

struct CrossingList {
    std::vector<Crossing> items;
    int depth = 0;
    std::size_t crossings() const;
    std::size_t touches() const;
    std::vector<Crossing> of(Branch b, Axis a, bool include_touches = false) const;
};

struct CrossingCensus {
    std::size_t count = 0;  // crossings, touches excluded
    int last_arc = -1;      // largest arc index holding a crossing
    int depth = 0;
    int window = 0;
    bool only_Z = true;           // nothing beyond Z and Z^-1 on the initial segments
    bool finite_evidence = true;  // no crossing in the trailing `window` arcs
};
// Trailing window defaults to max(2, depth / 4).
CrossingCensus crossing_census(const CrossingList& list, int window = -1);

CrossingList axis_crossings(const Params& params, const UnstableManifold& manifold);
CrossingList axis_crossings(const Params& params, int depth);
// Crossings (not touches) of one polyline with an axis, in traversal order.
std::vector<Point> polyline_axis_points(const Polyline& line, Axis axis, bool include_touches = false);
bool meets_axis(const Polyline& line, Axis axis);
// Whether the closed polyline meets the curve y = a|x| - 1.
bool meets_fold_preimage(const Params& params, const Polyline& line);

struct HomoclinicResult {
    bool found = false;
    Point point;
    bool transversal = false;
    int u_depth = 0;  // depth searched (arcs or steps, see producer)
    int s_depth = 0;
    int u_piece = -1;  // piece indices of the witness
    int s_piece = -1;
    std::size_t pairs_tested = 0;
    std::string note;
};

// Intersections of W^u(X) (arcs up to u_depth) with W^s(X) (L^-2 steps up to
// s_depth), excluding X. NoneFound is depth-stamped evidence only.
HomoclinicResult homoclinic_search(const Params& params, int u_depth, int s_depth,
                                   const ManifoldBudget& budget = {});
HomoclinicResult homoclinic_search(const Params& params, const UnstableManifold& wu, const StableManifold& ws);

struct SaddleManifolds {
    std::vector<Point> orbit;
    Scalar seed_t;                 // 2^-j
    std::vector<Polyline> unstable;  // unstable[m] = L^m(E^u)
    std::vector<Polyline> stable;    // stable[m] = L^-m(E^s)
    bool truncated = false;
};

// Local eigen-segments at the first orbit point, halved until one full cycle
// of backward (unstable) or forward (stable) images keeps every sign of x.
SaddleManifolds saddle_manifolds(const Params& params, const OrbitRecord& orbit, int u_steps, int s_steps,
                                 const ManifoldBudget& budget = {});
// Homoclinic search for a periodic saddle; orbit points are excluded.
HomoclinicResult homoclinic_search_orbit(const Params& params, const OrbitRecord& orbit, int u_steps,
                                         int s_steps, const ManifoldBudget& budget = {});

// Transversality at a common point w of two polylines, from the cyclic order of
// the four local rays (u, s, u, s alternate for a crossing).
bool crossing_is_transversal(const Polyline& u, std::size_t u_seg, const Polyline& s, std::size_t s_seg,
                             const Point& w);

struct LocalArcResult {
    bool found = false;
    double epsilon = 0.0;
    int halvings = 0;
};

// Largest power of two epsilon, at most half the distance from (X, Q)^u to
// the non-adjacent arcs, such that the tube around (X, Q)^u meets the
// computed manifold only in (X, Q)^u. The stretches of the other branch and
// of the continuation past Q lying within 2 epsilon of X or Q (measured
// along them) are exempt. Q lies on segment `segment` of the given branch path.
LocalArcResult local_arc_epsilon(const UnstableManifold& manifold, Branch branch, std::size_t segment,
                                 const Point& Q, int max_halvings = 60);

struct EscapeResult {
    enum class Kind { Escaped, StillInside, OnStableManifold, LeftElsewhere };
    Kind kind = Kind::StillInside;
    int m = 0;                  // escape index, or the iterate that left otherwise
    double predicted = 0.0;     // log(diam / d0) / log|lambda_u|
    double d0 = 0.0;            // distance to the stable line along the unstable direction
};
const char* to_string(EscapeResult::Kind k);

// Iterates A from the triangle O, Z, Z^-1 (first quadrant below segment ZZ^-1)
// until it lands in the second quadrant.
EscapeResult escape_from_triangle(const Params& params, const Point& A, int max_iter);

}  // namespace lozi
