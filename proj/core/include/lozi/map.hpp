#pragma once

// The Lozi map L(x, y) = (1 + y - a|x|, b x), its inverse, derived constants,
// and periodic orbits found by solving one affine system per sign itinerary.

#include <optional>
#include <string>
#include <vector>

#include "lozi/geom.hpp"

namespace lozi {

struct EigenData {
    Scalar lambda_u;  // (-a - sqrt(delta)) / 2, below -1 in standard mode
    Scalar lambda_s;  // (-a + sqrt(delta)) / 2, in (0, 1) in standard mode
    Point v_u;        // direction (lambda_u, b)
    Point v_s;        // direction (lambda_s, b)
};

class Params {
public:
    // Exact rational parameters; constants live in Q(sqrt(a^2 + 4b)).
    static Params exact(const Rational& a, const Rational& b);
    // Checked-float parameters at the given precision; verdicts are approximate.
    static Params approximate(const Rational& a, const Rational& b, int precision_bits);
    static Params from_strings(const std::string& a, const std::string& b, bool exact_mode = true,
                               int precision_bits = 128);

    const Scalar& a() const { return a_; }
    const Scalar& b() const { return b_; }
    const Rational& a_rational() const { return a_q_; }
    const Rational& b_rational() const { return b_q_; }
    bool is_exact() const { return exact_; }
    int precision_bits() const { return bits_; }

    // 0 < b < 1 and a + b > 1
    bool standard() const { return standard_; }
    // 1 - b < a < 1 + b
    bool period_two_range() const { return period_two_; }

    const Scalar& delta() const { return delta_; }
    const Scalar& sqrt_delta() const { return sqrt_delta_; }
    FieldPtr field() const { return sqrt_delta_.field(); }

    const Point& X() const;
    const Point& Y() const;
    const Point& Z() const;
    const EigenData& eigen() const;
    const Point& P() const;
    const Point& P1() const;

    // Lift a rational into the scalar mode of these parameters.
    Scalar lift(const Rational& r) const;
    std::string describe() const;

private:
    Params() = default;
    void derive();

    Scalar a_, b_;
    Rational a_q_, b_q_;
    bool exact_ = true;
    int bits_ = 0;
    bool standard_ = false;
    bool period_two_ = false;
    Scalar delta_, sqrt_delta_;
    std::optional<Point> X_, Y_, Z_, P_, P1_;
    std::optional<EigenData> eigen_;
};

// One forward or backward step.
Point step_forward(const Params& params, const Point& p);
Point step_backward(const Params& params, const Point& p);
// L^k(p), k may be negative.
Point apply(const Params& params, const Point& p, int k);

struct FixedPoints {
    Point X;
    Point Y;
};
FixedPoints fixed_points(const Params& params);
EigenData eigen_data(const Params& params);
struct PeriodTwo {
    Point P;
    Point P1;
};
PeriodTwo period_two_orbit(const Params& params);
Point point_Z(const Params& params);

enum class Stability { AttractingNode, AttractingFocus, Saddle, Repelling, Degenerate };
const char* to_string(Stability s);

// Characteristic data of the period-n Jacobian product.
struct Multipliers {
    Scalar trace;
    Scalar det;
    Scalar disc;  // trace^2 - 4 det
    bool complex = false;
    // Real case: exact roots in Q(sqrt(disc)), mu_1 the larger in modulus.
    Scalar mu1, mu2;
    double abs1 = 0.0, abs2 = 0.0;
};

struct OrbitRecord {
    int period = 0;
    std::string itinerary;  // least rotation over {R < L}
    std::vector<Point> points;
    Multipliers multipliers;
    Stability stability = Stability::Degenerate;
};

// Prime-period-n orbits, one per Lyndon itinerary whose solution matches its
// signs. Exact mode only. Work is split across `threads` workers; output order
// is deterministic.
std::vector<OrbitRecord> periodic_orbits(const Params& params, int n, int threads = 1);

// Jacobian of one step at a point on the given side of the fold (x >= 0 is R).
struct Mat2 {
    Scalar m11, m12, m21, m22;
};
Mat2 jacobian(const Params& params, bool right);
Mat2 operator*(const Mat2& A, const Mat2& B);

struct SaddleSeed {
    Point point;
    Point unstable_dir;
    Point stable_dir;
    Scalar mu_u, mu_s;
};

// Eigen-directions of the cycle product at each orbit point.
std::vector<SaddleSeed> orbit_manifold_seed(const Params& params, const OrbitRecord& orbit);

}  // namespace lozi
