#pragma once

// The eventually trapping polygon D bounded by [Z,T]^u and the chord ZT, the
// polygon K between D and L^2(D), and nested iterates approximating the
// accumulation set of the unstable manifold.

#include <optional>
#include <string>
#include <vector>

#include "lozi/manifold.hpp"

namespace lozi {

struct TrapConstruction {
    enum class Case { UPlusCrossesOx, OnlyZ };
    Case which = Case::UPlusCrossesOx;
    Point S;
    Point T;
    // UPlusCrossesOx: indices of the two searches
    int i = -1;
    int k = -1;
    // OnlyZ: the first three crossings of UMinus with Ox and the preimage of T
    std::vector<Point> B;
    std::optional<Point> T_minus1;

    int t_arc = -1;           // UPlus arc holding T
    Polyline z_to_t;          // [Z, T]^u
    int depth = 0;            // manifold depth used
    bool chord_verified = false;  // ST meets the computed manifold only at S and T
};
const char* to_string(TrapConstruction::Case c);

// Builds S and T from a manifold computed to `depth` arcs. Throws
// PreconditionError when the crossing evidence is finite (the finite-crossings
// certificate applies instead) and BudgetExhausted when depth is too small.
TrapConstruction construct_T(const Params& params, const UnstableManifold& manifold);
TrapConstruction construct_T(const Params& params, int depth, const ManifoldBudget& budget = {});

// Whether the open chord ST avoids every computed arc.
bool chord_meets_manifold_only_at_ends(const UnstableManifold& manifold, const Point& S, const Point& T);

SimplePolygon build_polygon_D(const TrapConstruction& tc);
// [T, T^2]^u, from the arc holding T and its L^2 image.
Polyline t_to_t2(const Params& params, const TrapConstruction& tc, const UnstableManifold& manifold);
SimplePolygon build_polygon_K(const Params& params, const TrapConstruction& tc, const UnstableManifold& manifold);

// L^2 image of a polygon (fold-split boundary, re-normalized).
SimplePolygon image2(const Params& params, const SimplePolygon& poly, const ManifoldBudget& budget = {});
SimplePolygon image1(const Params& params, const SimplePolygon& poly, const ManifoldBudget& budget = {});

// L^2(D), ..., L^2k(D), each checked to lie in its predecessor.
std::vector<SimplePolygon> iterate_D(const Params& params, const SimplePolygon& D, int k,
                                     const ManifoldBudget& budget = {});

// Least k <= max_k with L^2k(D) inside Int D, or nullopt.
std::optional<int> trapping_index(const Params& params, const SimplePolygon& D, int max_k,
                                  const ManifoldBudget& budget = {});
std::optional<int> trapping_index(const SimplePolygon& D, const std::vector<SimplePolygon>& iterates);

double float_diameter(const SimplePolygon& poly);

struct EllStep {
    int k = 0;
    Scalar area;           // exact area of L^2k(D)
    double diameter = 0;   // max of both components
    double change = 0;     // Hausdorff distance to the previous right component
    std::size_t vertices = 0;
};

struct EllApproximation {
    int k = 0;
    SimplePolygon right;  // L^2k(D)
    SimplePolygon left;   // L^(2k+1)(D)
    Scalar area;
    double diameter = 0;
    bool P_inside = false;
    bool P1_inside = false;
    std::vector<EllStep> steps;
};

// Iterates D up to k times under L^2 (stopping early once both components
// are smaller than stop_diameter, if positive). P must stay in the right
// component and P' in the left one; a failure is an InconsistencyError.
EllApproximation ell_approximation(const Params& params, const SimplePolygon& D, int k, double stop_diameter = 0.0,
                                   const ManifoldBudget& budget = {});

// Everything the trap pipeline checks, in one record.
struct TrapReport {
    TrapConstruction construction;
    SimplePolygon D;
    SimplePolygon K;
    Scalar area_D;
    Scalar area_K;
    bool invariant = false;             // L^2(D) within D
    bool k_interiors_disjoint = false;  // Int K and Int L^2(K)
    std::optional<int> trapping_index;
    bool area_identity = false;         // area(D) = area(L^2k D) + sum area(L^2j K)
    bool area_law = false;              // area(L^2j D) = b^2j area(D)
    bool periodic_inside = false;       // P in every L^2j(D), P' in every L^(2j+1)(D)
    std::vector<SimplePolygon> iterates;  // L^2(D) .. L^2k(D)
    int max_k = 0;
};

TrapReport run_trap(const Params& params, int depth, int max_k, const ManifoldBudget& budget = {});
TrapReport run_trap(const Params& params, const UnstableManifold& manifold, int max_k,
                    const ManifoldBudget& budget = {});

}  // namespace lozi
