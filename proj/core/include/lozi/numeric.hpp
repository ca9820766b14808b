#pragma once

// Scalar tower: exact rationals, exact elements of Q(sqrt(delta)), and a
// checked MPFR float that carries an absolute error bound.

#include <gmpxx.h>
#include <mpfr.h>

#include <memory>
#include <string>
#include <string_view>
#include <variant>

#include "lozi/errors.hpp"
#include "lozi/interval.hpp"

namespace lozi {

using Rational = mpq_class;

// Exact decimal to rational: "1.06" -> 53/50, "-2.5e-3" -> -1/400, "3/7" -> 3/7.
Rational parse_decimal(std::string_view text);
std::string to_string(const Rational& r);
Interval enclose(const Rational& r);
std::size_t bit_length(const Rational& r);

enum class Sign : int { Negative = -1, Zero = 0, Positive = 1 };

inline int to_int(Sign s) { return static_cast<int>(s); }
inline Sign to_sign(int s) { return s < 0 ? Sign::Negative : (s > 0 ? Sign::Positive : Sign::Zero); }
inline Sign operator*(Sign a, Sign b) { return to_sign(to_int(a) * to_int(b)); }
inline Sign operator-(Sign a) { return to_sign(-to_int(a)); }
const char* to_string(Sign s);

struct SignResult {
    Sign sign;
    bool certain;
};

// Delta is fixed per computation and is never a rational square
// (make_field returns null in that case).
class QuadraticField {
public:
    explicit QuadraticField(Rational delta);
    const Rational& delta() const { return delta_; }
    const Interval& sqrt_enclosure() const { return sqrt_; }

private:
    Rational delta_;
    Interval sqrt_;
};

using FieldPtr = std::shared_ptr<const QuadraticField>;

// Null when delta is the square of a rational; throws on negative delta.
FieldPtr make_field(const Rational& delta);
bool same_field(const FieldPtr& a, const FieldPtr& b);
bool is_rational_square(const Rational& r, Rational* root = nullptr);

// Owning wrapper around mpfr_t.
class BigFloat {
public:
    explicit BigFloat(mpfr_prec_t bits = 53);
    BigFloat(const BigFloat& other);
    BigFloat(BigFloat&& other) noexcept;
    BigFloat& operator=(const BigFloat& other);
    BigFloat& operator=(BigFloat&& other) noexcept;
    ~BigFloat();

    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }
    mpfr_prec_t precision() const { return mpfr_get_prec(v_); }
    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    std::string to_string(int digits = 20) const;

private:
    mpfr_t v_;
};

struct QuadraticValue {
    Rational p;
    Rational q;
    FieldPtr field;
};

// |true value - value| <= error
struct CheckedFloat {
    BigFloat value;
    double error = 0.0;
};

class Scalar {
public:
    enum class Kind { Rational, Quadratic, Float };

    Scalar() : v_(Rational(0)) {}
    Scalar(long v) : v_(Rational(v)) {}  // NOLINT(google-explicit-constructor)
    Scalar(int v) : v_(Rational(v)) {}   // NOLINT(google-explicit-constructor)
    Scalar(Rational r);                   // NOLINT(google-explicit-constructor)
    static Scalar quadratic(Rational p, Rational q, FieldPtr field);
    static Scalar from_float(CheckedFloat f);
    static Scalar from_double(double v, mpfr_prec_t bits = 53);
    // Exact sqrt(delta): a rational when delta is a square, else 0 + 1*sqrt(delta).
    static Scalar sqrt_of(const Rational& delta);

    Kind kind() const { return static_cast<Kind>(v_.index()); }
    bool is_exact() const { return kind() != Kind::Float; }
    bool is_rational() const { return kind() == Kind::Rational; }

    const Rational& rational() const { return std::get<Rational>(v_); }
    const QuadraticValue& quadratic() const { return std::get<QuadraticValue>(v_); }
    const CheckedFloat& checked_float() const { return std::get<CheckedFloat>(v_); }

    // p, q parts in exact mode (q = 0 for rationals).
    Rational p_part() const;
    Rational q_part() const;
    FieldPtr field() const;

    Interval enclosure() const;
    double approx() const;
    std::size_t bits() const;

    friend Scalar operator+(const Scalar& a, const Scalar& b);
    friend Scalar operator-(const Scalar& a, const Scalar& b);
    friend Scalar operator*(const Scalar& a, const Scalar& b);
    friend Scalar operator/(const Scalar& a, const Scalar& b);
    friend Scalar operator-(const Scalar& a);
    Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
    Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
    Scalar& operator*=(const Scalar& o) { return *this = *this * o; }
    Scalar& operator/=(const Scalar& o) { return *this = *this / o; }

    // Structural equality of exact values; Float compares value and error.
    friend bool operator==(const Scalar& a, const Scalar& b);
    friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

    // Human readable, e.g. "-1/2 + 1/2*sqrt(3)".
    std::string str() const;

private:
    using Storage = std::variant<Rational, QuadraticValue, CheckedFloat>;
    explicit Scalar(Storage s) : v_(std::move(s)) {}
    Storage v_;
};

enum class ArithOp { Add, Sub, Mul, Div };

Scalar scalar_arith(const Scalar& x, const Scalar& y, ArithOp op);
SignResult scalar_sign(const Scalar& x);
// Throws UncertainSign when the float filter cannot decide.
Sign sign(const Scalar& x);
// Correctly rounded to precision_bits (>= 53); error <= 1 ulp.
Scalar scalar_to_float(const Scalar& x, int precision_bits);
Interval enclose(const Scalar& x);
Sign compare(const Scalar& a, const Scalar& b);
Scalar abs(const Scalar& x);
// Square root of a Float-mode scalar with propagated error bound.
Scalar float_sqrt(const Scalar& x);
const Scalar& min(const Scalar& a, const Scalar& b);
const Scalar& max(const Scalar& a, const Scalar& b);
std::size_t bit_length(const Scalar& x);

// Sign of a Scalar known only through an interval plus an exact fallback.
// Returns the interval answer when certain, otherwise evaluates exact().
template <class Exact>
Sign filtered_sign(const Interval& iv, Exact&& exact) {
    const int s = iv.certain_sign();
    if (s != 2) return to_sign(s);
    return sign(exact());
}

}  // namespace lozi
