#include "lozi/numeric.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <limits>
#include <cfloat>
#include <cmath>
#include <utility>

namespace lozi {

// ---------------------------------------------------------------- rationals

Rational parse_decimal(std::string_view text) {
    auto fail = [&] { return PreconditionError("not a decimal number: '" + std::string(text) + "'"); };
    std::string s(text);
    s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }), s.end());
    if (s.empty()) throw fail();

    if (auto slash = s.find('/'); slash != std::string::npos) {
        Rational num = parse_decimal(s.substr(0, slash));
        Rational den = parse_decimal(s.substr(slash + 1));
        if (den == 0) throw fail();
        Rational r = num / den;
        r.canonicalize();
        return r;
    }

    std::size_t i = 0;
    bool negative = false;
    if (s[i] == '+' || s[i] == '-') negative = (s[i++] == '-');
    std::string digits;
    long frac_digits = 0;
    bool seen_dot = false;
    bool any_digit = false;
    for (; i < s.size(); ++i) {
        char c = s[i];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            digits.push_back(c);
            any_digit = true;
            if (seen_dot) ++frac_digits;
        } else if (c == '.' && !seen_dot) {
            seen_dot = true;
        } else {
            break;
        }
    }
    if (!any_digit) throw fail();
    long exponent = 0;
    if (i < s.size()) {
        if (s[i] != 'e' && s[i] != 'E') throw fail();
        ++i;
        std::size_t used = 0;
        try {
            exponent = std::stol(s.substr(i), &used);
        } catch (const std::exception&) {
            throw fail();
        }
        if (used == 0 || i + used != s.size()) throw fail();
        if (std::labs(exponent) > 100000) throw fail();
    }
    mpz_class num(digits, 10);
    long shift = exponent - frac_digits;
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(shift)));
    Rational r = shift >= 0 ? Rational(num * scale) : Rational(num, scale);
    r.canonicalize();
    return negative ? Rational(-r) : r;
}

std::string to_string(const Rational& r) { return r.get_str(); }

std::size_t bit_length(const Rational& r) {
    return mpz_sizeinbase(r.get_num_mpz_t(), 2) + mpz_sizeinbase(r.get_den_mpz_t(), 2);
}

Interval enclose(const Rational& r) {
    const int s = sgn(r);
    if (s == 0) return {0.0, 0.0};
    const long num_bits = static_cast<long>(mpz_sizeinbase(r.get_num_mpz_t(), 2));
    const long den_bits = static_cast<long>(mpz_sizeinbase(r.get_den_mpz_t(), 2));
    if (num_bits - den_bits > 1000) {
        const double inf = std::numeric_limits<double>::infinity();
        return s > 0 ? Interval{DBL_MAX, inf} : Interval{-inf, -DBL_MAX};
    }
    if (den_bits - num_bits > 1000) return s > 0 ? Interval{0.0, DBL_MIN} : Interval{-DBL_MIN, 0.0};
    const double d = r.get_d();  // truncates toward zero
    if (num_bits <= 53 && mpz_cmp_ui(r.get_den_mpz_t(), 1) == 0) return {d, d};
    return {down(d), up(d)};
}

const char* to_string(Sign s) {
    switch (s) {
        case Sign::Negative: return "Negative";
        case Sign::Zero: return "Zero";
        case Sign::Positive: return "Positive";
    }
    return "?";
}

bool is_rational_square(const Rational& r_in, Rational* root) {
    if (sgn(r_in) < 0) return false;
    Rational r = r_in;
    r.canonicalize();
    if (!mpz_perfect_square_p(r.get_num_mpz_t()) || !mpz_perfect_square_p(r.get_den_mpz_t())) return false;
    if (root) {
        mpz_class n, d;
        mpz_sqrt(n.get_mpz_t(), r.get_num_mpz_t());
        mpz_sqrt(d.get_mpz_t(), r.get_den_mpz_t());
        *root = Rational(n, d);
        root->canonicalize();
    }
    return true;
}

// ---------------------------------------------------------------- field

QuadraticField::QuadraticField(Rational delta) : delta_(std::move(delta)) {
    delta_.canonicalize();
    mpfr_t lo, hi;
    mpfr_inits2(80, lo, hi, static_cast<mpfr_ptr>(nullptr));
    mpfr_set_q(lo, delta_.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(hi, delta_.get_mpq_t(), MPFR_RNDU);
    mpfr_sqrt(lo, lo, MPFR_RNDD);
    mpfr_sqrt(hi, hi, MPFR_RNDU);
    sqrt_ = {mpfr_get_d(lo, MPFR_RNDD), mpfr_get_d(hi, MPFR_RNDU)};
    mpfr_clears(lo, hi, static_cast<mpfr_ptr>(nullptr));
}

FieldPtr make_field(const Rational& delta) {
    if (sgn(delta) < 0) throw ArithmeticError("negative discriminant " + delta.get_str());
    Rational d = delta;
    d.canonicalize();
    if (is_rational_square(d)) return nullptr;
    return std::make_shared<const QuadraticField>(d);
}

bool same_field(const FieldPtr& a, const FieldPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    return a->delta() == b->delta();
}

// ---------------------------------------------------------------- BigFloat

BigFloat::BigFloat(mpfr_prec_t bits) {
    mpfr_init2(v_, std::max<mpfr_prec_t>(bits, MPFR_PREC_MIN));
    mpfr_set_zero(v_, 1);
}

BigFloat::BigFloat(const BigFloat& other) {
    mpfr_init2(v_, other.precision());
    mpfr_set(v_, other.v_, MPFR_RNDN);
}

BigFloat::BigFloat(BigFloat&& other) noexcept {
    mpfr_init2(v_, other.precision());
    mpfr_swap(v_, other.v_);
}

BigFloat& BigFloat::operator=(const BigFloat& other) {
    if (this != &other) {
        mpfr_set_prec(v_, other.precision());
        mpfr_set(v_, other.v_, MPFR_RNDN);
    }
    return *this;
}

BigFloat& BigFloat::operator=(BigFloat&& other) noexcept {
    if (this != &other) mpfr_swap(v_, other.v_);
    return *this;
}

BigFloat::~BigFloat() { mpfr_clear(v_); }

std::string BigFloat::to_string(int digits) const {
    char* buf = nullptr;
    mpfr_asprintf(&buf, "%.*Rg", digits, v_);
    std::string out(buf ? buf : "");
    mpfr_free_str(buf);
    return out;
}

// ---------------------------------------------------------------- Scalar

namespace {

// |v| * 2^-prec rounded up: bounds half an ulp of v at its own precision.
double half_ulp(const BigFloat& v) {
    if (mpfr_zero_p(v.get())) return 0.0;
    BigFloat a(v.precision());
    mpfr_abs(a.get(), v.get(), MPFR_RNDU);
    mpfr_mul_2si(a.get(), a.get(), -static_cast<long>(v.precision()), MPFR_RNDU);
    return mpfr_get_d(a.get(), MPFR_RNDU);
}

double abs_up(const BigFloat& v) {
    BigFloat a(v.precision());
    mpfr_abs(a.get(), v.get(), MPFR_RNDU);
    return mpfr_get_d(a.get(), MPFR_RNDU);
}

double abs_down(const BigFloat& v) {
    BigFloat a(v.precision());
    mpfr_abs(a.get(), v.get(), MPFR_RNDD);
    return mpfr_get_d(a.get(), MPFR_RNDD);
}

double addu(double a, double b) { return a == 0.0 ? b : (b == 0.0 ? a : up(a + b)); }
double mulu(double a, double b) { return (a == 0.0 || b == 0.0) ? 0.0 : up(a * b); }

CheckedFloat rational_to_float(const Rational& r, mpfr_prec_t bits) {
    CheckedFloat f{BigFloat(bits), 0.0};
    int t = mpfr_set_q(f.value.get(), r.get_mpq_t(), MPFR_RNDN);
    f.error = t == 0 ? 0.0 : half_ulp(f.value);
    return f;
}

CheckedFloat quadratic_to_float(const QuadraticValue& v, mpfr_prec_t bits) {
    // Ziv loop: raise working precision until rounding to `bits` is decided.
    mpfr_prec_t w = bits + 32;
    for (int attempt = 0; attempt < 16; ++attempt, w *= 2) {
        BigFloat s(w), t(w), p(w), r(w);
        mpfr_set_q(s.get(), v.field->delta().get_mpq_t(), MPFR_RNDN);
        mpfr_sqrt(s.get(), s.get(), MPFR_RNDN);
        mpfr_mul_q(t.get(), s.get(), v.q.get_mpq_t(), MPFR_RNDN);
        mpfr_set_q(p.get(), v.p.get_mpq_t(), MPFR_RNDN);
        mpfr_add(r.get(), p.get(), t.get(), MPFR_RNDN);
        if (mpfr_zero_p(r.get())) continue;
        // Absolute error <= 4 ulps at the larger of the two summand exponents.
        long emax = std::max(mpfr_zero_p(p.get()) ? mpfr_get_exp(t.get()) : mpfr_get_exp(p.get()),
                             mpfr_get_exp(t.get()));
        long err = mpfr_get_exp(r.get()) - (emax - static_cast<long>(w) + 3);
        if (err > 0 && mpfr_can_round(r.get(), err, MPFR_RNDN, MPFR_RNDZ, bits + 1)) {
            CheckedFloat f{BigFloat(bits), 0.0};
            mpfr_set(f.value.get(), r.get(), MPFR_RNDN);
            f.error = half_ulp(f.value);
            return f;
        }
    }
    throw ArithmeticError("quadratic to float conversion did not converge");
}

CheckedFloat round_float(const CheckedFloat& f, mpfr_prec_t bits) {
    if (f.value.precision() == bits) return f;
    CheckedFloat g{BigFloat(bits), f.error};
    int t = mpfr_set(g.value.get(), f.value.get(), MPFR_RNDN);
    if (t != 0) g.error = addu(g.error, half_ulp(g.value));
    return g;
}

CheckedFloat to_checked(const Scalar& x, mpfr_prec_t bits) {
    switch (x.kind()) {
        case Scalar::Kind::Rational: return rational_to_float(x.rational(), bits);
        case Scalar::Kind::Quadratic: return quadratic_to_float(x.quadratic(), bits);
        case Scalar::Kind::Float: return x.checked_float();
    }
    throw ArithmeticError("bad scalar kind");
}

CheckedFloat float_op(const CheckedFloat& a, const CheckedFloat& b, ArithOp op) {
    const mpfr_prec_t bits = std::max(a.value.precision(), b.value.precision());
    CheckedFloat r{BigFloat(bits), 0.0};
    int t = 0;
    switch (op) {
        case ArithOp::Add:
            t = mpfr_add(r.value.get(), a.value.get(), b.value.get(), MPFR_RNDN);
            r.error = addu(a.error, b.error);
            break;
        case ArithOp::Sub:
            t = mpfr_sub(r.value.get(), a.value.get(), b.value.get(), MPFR_RNDN);
            r.error = addu(a.error, b.error);
            break;
        case ArithOp::Mul:
            t = mpfr_mul(r.value.get(), a.value.get(), b.value.get(), MPFR_RNDN);
            r.error = addu(addu(mulu(abs_up(a.value), b.error), mulu(abs_up(b.value), a.error)),
                           mulu(a.error, b.error));
            break;
        case ArithOp::Div: {
            const double bl = abs_down(b.value);
            if (mpfr_zero_p(b.value.get()) || !(bl > b.error)) {
                throw ArithmeticError("float division by a value not bounded away from zero");
            }
            t = mpfr_div(r.value.get(), a.value.get(), b.value.get(), MPFR_RNDN);
            const double den = down(bl - b.error);
            const double ratio = mpfr_zero_p(a.value.get()) ? 0.0 : up(abs_up(a.value) / bl);
            const double num = addu(a.error, mulu(ratio, b.error));
            r.error = num == 0.0 ? 0.0 : up(num / den);
            break;
        }
    }
    if (t != 0) r.error = addu(r.error, half_ulp(r.value));
    return r;
}

void require_same_field(const FieldPtr& a, const FieldPtr& b) {
    if (!same_field(a, b)) {
        throw ArithmeticError("mixing quadratic scalars over different discriminants (" +
                              a->delta().get_str() + " vs " + b->delta().get_str() + ")");
    }
}

}  // namespace

Scalar::Scalar(Rational r) : v_(std::move(r)) { std::get<Rational>(v_).canonicalize(); }

Scalar Scalar::quadratic(Rational p, Rational q, FieldPtr field) {
    p.canonicalize();
    q.canonicalize();
    if (sgn(q) == 0) return Scalar(std::move(p));
    if (!field) throw ArithmeticError("quadratic scalar without a field");
    return Scalar(Storage(QuadraticValue{std::move(p), std::move(q), std::move(field)}));
}

Scalar Scalar::from_float(CheckedFloat f) {
    if (!(f.error >= 0.0)) throw ArithmeticError("negative float error bound");
    return Scalar(Storage(std::move(f)));
}

Scalar Scalar::from_double(double v, mpfr_prec_t bits) {
    CheckedFloat f{BigFloat(std::max<mpfr_prec_t>(bits, 53)), 0.0};
    mpfr_set_d(f.value.get(), v, MPFR_RNDN);
    return Scalar(Storage(std::move(f)));
}

Scalar Scalar::sqrt_of(const Rational& delta) {
    Rational root;
    if (is_rational_square(delta, &root)) return Scalar(root);
    return quadratic(Rational(0), Rational(1), make_field(delta));
}

Rational Scalar::p_part() const {
    if (kind() == Kind::Rational) return rational();
    if (kind() == Kind::Quadratic) return quadratic().p;
    throw ArithmeticError("p_part of a float scalar");
}

Rational Scalar::q_part() const {
    if (kind() == Kind::Rational) return Rational(0);
    if (kind() == Kind::Quadratic) return quadratic().q;
    throw ArithmeticError("q_part of a float scalar");
}

FieldPtr Scalar::field() const { return kind() == Kind::Quadratic ? quadratic().field : nullptr; }

Interval Scalar::enclosure() const {
    switch (kind()) {
        case Kind::Rational: return enclose(rational());
        case Kind::Quadratic: {
            const auto& q = quadratic();
            return enclose(q.p) + enclose(q.q) * q.field->sqrt_enclosure();
        }
        case Kind::Float: {
            const auto& f = checked_float();
            const double lo = mpfr_get_d(f.value.get(), MPFR_RNDD);
            const double hi = mpfr_get_d(f.value.get(), MPFR_RNDU);
            if (f.error == 0.0) return {lo, hi};
            return {down(lo - f.error), up(hi + f.error)};
        }
    }
    return Interval::entire();
}

double Scalar::approx() const {
    switch (kind()) {
        case Kind::Rational: return rational().get_d();
        case Kind::Quadratic: return to_checked(*this, 64).value.to_double();
        case Kind::Float: return checked_float().value.to_double();
    }
    return 0.0;
}

std::size_t Scalar::bits() const {
    switch (kind()) {
        case Kind::Rational: return bit_length(rational());
        case Kind::Quadratic: return std::max(bit_length(quadratic().p), bit_length(quadratic().q));
        case Kind::Float: return static_cast<std::size_t>(checked_float().value.precision());
    }
    return 0;
}

std::string Scalar::str() const {
    switch (kind()) {
        case Kind::Rational: return rational().get_str();
        case Kind::Quadratic: {
            const auto& q = quadratic();
            return q.p.get_str() + " + " + q.q.get_str() + "*sqrt(" + q.field->delta().get_str() + ")";
        }
        case Kind::Float: {
            const auto& f = checked_float();
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.3g", f.error);
            return f.value.to_string(20) + " +/- " + buf;
        }
    }
    return "?";
}

Scalar scalar_arith(const Scalar& x, const Scalar& y, ArithOp op) {
    using K = Scalar::Kind;
    if (x.kind() == K::Float || y.kind() == K::Float) {
        mpfr_prec_t bits = 53;
        if (x.kind() == K::Float) bits = std::max(bits, x.checked_float().value.precision());
        if (y.kind() == K::Float) bits = std::max(bits, y.checked_float().value.precision());
        return Scalar::from_float(float_op(to_checked(x, bits), to_checked(y, bits), op));
    }
    if (x.kind() == K::Rational && y.kind() == K::Rational) {
        const Rational& a = x.rational();
        const Rational& b = y.rational();
        switch (op) {
            case ArithOp::Add: return Scalar(Rational(a + b));
            case ArithOp::Sub: return Scalar(Rational(a - b));
            case ArithOp::Mul: return Scalar(Rational(a * b));
            case ArithOp::Div:
                if (sgn(b) == 0) throw ArithmeticError("division by zero");
                return Scalar(Rational(a / b));
        }
    }
    FieldPtr f = x.field();
    if (y.kind() == K::Quadratic) {
        if (f) require_same_field(f, y.field());
        else f = y.field();
    }
    const Rational p1 = x.p_part(), q1 = x.q_part(), p2 = y.p_part(), q2 = y.q_part();
    const Rational& d = f->delta();
    switch (op) {
        case ArithOp::Add: return Scalar::quadratic(p1 + p2, q1 + q2, f);
        case ArithOp::Sub: return Scalar::quadratic(p1 - p2, q1 - q2, f);
        case ArithOp::Mul: return Scalar::quadratic(p1 * p2 + q1 * q2 * d, p1 * q2 + p2 * q1, f);
        case ArithOp::Div: {
            Rational n = p2 * p2 - q2 * q2 * d;  // norm, nonzero unless y = 0
            if (sgn(n) == 0) throw ArithmeticError("division by zero");
            return Scalar::quadratic((p1 * p2 - q1 * q2 * d) / n, (q1 * p2 - p1 * q2) / n, f);
        }
    }
    throw ArithmeticError("bad op");
}

Scalar operator+(const Scalar& a, const Scalar& b) { return scalar_arith(a, b, ArithOp::Add); }
Scalar operator-(const Scalar& a, const Scalar& b) { return scalar_arith(a, b, ArithOp::Sub); }
Scalar operator*(const Scalar& a, const Scalar& b) { return scalar_arith(a, b, ArithOp::Mul); }
Scalar operator/(const Scalar& a, const Scalar& b) { return scalar_arith(a, b, ArithOp::Div); }

Scalar operator-(const Scalar& a) {
    switch (a.kind()) {
        case Scalar::Kind::Rational: return Scalar(Rational(-a.rational()));
        case Scalar::Kind::Quadratic: {
            const auto& q = a.quadratic();
            return Scalar::quadratic(-q.p, -q.q, q.field);
        }
        case Scalar::Kind::Float: {
            CheckedFloat f = a.checked_float();
            mpfr_neg(f.value.get(), f.value.get(), MPFR_RNDN);
            return Scalar::from_float(std::move(f));
        }
    }
    return a;
}

bool operator==(const Scalar& a, const Scalar& b) {
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
        case Scalar::Kind::Rational: return a.rational() == b.rational();
        case Scalar::Kind::Quadratic:
            return a.quadratic().p == b.quadratic().p && a.quadratic().q == b.quadratic().q &&
                   same_field(a.field(), b.field());
        case Scalar::Kind::Float:
            return mpfr_equal_p(a.checked_float().value.get(), b.checked_float().value.get()) &&
                   a.checked_float().error == b.checked_float().error;
    }
    return false;
}

SignResult scalar_sign(const Scalar& x) {
    switch (x.kind()) {
        case Scalar::Kind::Rational: return {to_sign(sgn(x.rational())), true};
        case Scalar::Kind::Quadratic: {
            const auto& v = x.quadratic();
            const int fast = x.enclosure().certain_sign();
            if (fast != 2) return {to_sign(fast), true};
            const int sp = sgn(v.p), sq = sgn(v.q);
            if (sq == 0) return {to_sign(sp), true};
            if (sp == 0 || sp == sq) return {to_sign(sq), true};
            // opposite signs: compare p^2 with q^2 * delta
            const int c = cmp(Rational(v.p * v.p), Rational(v.q * v.q * v.field->delta()));
            if (c > 0) return {to_sign(sp), true};
            if (c < 0) return {to_sign(sq), true};
            return {Sign::Zero, true};
        }
        case Scalar::Kind::Float: {
            const auto& f = x.checked_float();
            if (mpfr_zero_p(f.value.get()) && f.error == 0.0) return {Sign::Zero, true};
            if (mpfr_cmp_d(f.value.get(), f.error) > 0) return {Sign::Positive, true};
            if (mpfr_cmp_d(f.value.get(), -f.error) < 0) return {Sign::Negative, true};
            return {Sign::Zero, false};
        }
    }
    return {Sign::Zero, false};
}

Sign sign(const Scalar& x) {
    SignResult r = scalar_sign(x);
    if (!r.certain) throw UncertainSign("sign of " + x.str() + " is not decidable at this precision");
    return r.sign;
}

Scalar scalar_to_float(const Scalar& x, int precision_bits) {
    if (precision_bits < 53) throw PreconditionError("precision_bits must be >= 53");
    const auto bits = static_cast<mpfr_prec_t>(precision_bits);
    if (x.kind() == Scalar::Kind::Float) return Scalar::from_float(round_float(x.checked_float(), bits));
    return Scalar::from_float(to_checked(x, bits));
}

Interval enclose(const Scalar& x) { return x.enclosure(); }

Sign compare(const Scalar& a, const Scalar& b) {
    if (a.is_rational() && b.is_rational()) return to_sign(cmp(a.rational(), b.rational()));
    const Interval d = a.enclosure() - b.enclosure();
    const int s = d.certain_sign();
    if (s != 2) return to_sign(s);
    return sign(a - b);
}

Scalar abs(const Scalar& x) { return sign(x) == Sign::Negative ? -x : x; }

Scalar float_sqrt(const Scalar& x) {
    if (x.kind() != Scalar::Kind::Float) throw ArithmeticError("float_sqrt expects a float scalar");
    const auto& f = x.checked_float();
    if (mpfr_cmp_d(f.value.get(), -f.error) < 0) throw ArithmeticError("square root of a negative value");
    CheckedFloat r{BigFloat(f.value.precision()), 0.0};
    BigFloat clamped(f.value.precision());
    mpfr_max(clamped.get(), f.value.get(), r.value.get(), MPFR_RNDN);  // r.value is zero here
    int t = mpfr_sqrt(r.value.get(), clamped.get(), MPFR_RNDN);
    // |sqrt(u) - sqrt(v)| <= |u - v| / sqrt(lower end), or sqrt(e) near zero
    const double lo = down(mpfr_get_d(f.value.get(), MPFR_RNDD) - f.error);
    double e = lo > 0.0 ? up(f.error / down(std::sqrt(lo))) : up(std::sqrt(f.error) + up(std::sqrt(f.error)));
    if (f.error == 0.0) e = 0.0;
    if (t != 0) e = addu(e, half_ulp(r.value));
    r.error = e;
    return Scalar::from_float(std::move(r));
}

const Scalar& min(const Scalar& a, const Scalar& b) { return compare(b, a) == Sign::Negative ? b : a; }
const Scalar& max(const Scalar& a, const Scalar& b) { return compare(b, a) == Sign::Positive ? b : a; }

std::size_t bit_length(const Scalar& x) { return x.bits(); }

}  // namespace lozi
