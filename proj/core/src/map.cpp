#include "lozi/map.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <thread>

namespace lozi {

// ---------------------------------------------------------------- Params

Params Params::exact(const Rational& a, const Rational& b) {
    Params p;
    p.exact_ = true;
    p.a_q_ = a;
    p.b_q_ = b;
    p.a_q_.canonicalize();
    p.b_q_.canonicalize();
    p.a_ = Scalar(p.a_q_);
    p.b_ = Scalar(p.b_q_);
    p.derive();
    return p;
}

Params Params::approximate(const Rational& a, const Rational& b, int precision_bits) {
    if (precision_bits < 53) throw PreconditionError("precision_bits must be >= 53");
    Params p;
    p.exact_ = false;
    p.bits_ = precision_bits;
    p.a_q_ = a;
    p.b_q_ = b;
    p.a_ = scalar_to_float(Scalar(a), precision_bits);
    p.b_ = scalar_to_float(Scalar(b), precision_bits);
    p.derive();
    return p;
}

Params Params::from_strings(const std::string& a, const std::string& b, bool exact_mode, int precision_bits) {
    const Rational qa = parse_decimal(a), qb = parse_decimal(b);
    return exact_mode ? exact(qa, qb) : approximate(qa, qb, precision_bits);
}

Scalar Params::lift(const Rational& r) const { return exact_ ? Scalar(r) : scalar_to_float(Scalar(r), bits_); }

void Params::derive() {
    if (sgn(b_q_) == 0) throw PreconditionError("b must be nonzero");
    standard_ = sgn(b_q_) > 0 && b_q_ < 1 && a_q_ + b_q_ > 1;
    period_two_ = 1 - b_q_ < a_q_ && a_q_ < 1 + b_q_;

    const Scalar one = lift(Rational(1));
    delta_ = a_ * a_ + Scalar(4) * b_;
    const Rational delta_q = a_q_ * a_q_ + 4 * b_q_;
    const bool delta_positive = sgn(delta_q) > 0;
    if (delta_positive) sqrt_delta_ = exact_ ? Scalar::sqrt_of(delta_q) : float_sqrt(delta_);

    const Rational dx = 1 + a_q_ - b_q_;
    if (sgn(dx) != 0) {
        const Scalar d = lift(dx);
        X_ = Point(one / d, b_ / d);
    }
    const Rational dy = 1 - a_q_ - b_q_;
    if (sgn(dy) != 0) {
        const Scalar d = lift(dy);
        Y_ = Point(one / d, b_ / d);
    }
    if (delta_positive) {
        const Scalar h = lift(Rational(1, 2));
        EigenData e{(-a_ - sqrt_delta_) * h, (-a_ + sqrt_delta_) * h, Point(), Point()};
        e.v_u = Point(e.lambda_u, b_);
        e.v_s = Point(e.lambda_s, b_);
        eigen_ = std::move(e);
        const Scalar zden = Scalar(2) + a_ - sqrt_delta_;
        if (scalar_sign(zden).sign != Sign::Zero) Z_ = Point(Scalar(2) / zden, Scalar(0));
    }
    // Outside this range the formula solves the equations but the points are
    // not on the branches it assumes, so there is no such orbit.
    const Rational n = a_q_ * a_q_ + (1 - b_q_) * (1 - b_q_);
    if (period_two_ && sgn(n) != 0) {
        const Scalar N = lift(n);
        const Scalar bb = b_;
        P_ = Point(lift(1 + a_q_ - b_q_) / N, bb * lift(1 - a_q_ - b_q_) / N);
        P1_ = Point(lift(1 - a_q_ - b_q_) / N, bb * lift(1 + a_q_ - b_q_) / N);
    }
}

namespace {
template <class T>
const T& require(const std::optional<T>& v, const char* what) {
    if (!v) throw PreconditionError(std::string(what) + " is undefined for these parameters");
    return *v;
}
}  // namespace

const Point& Params::X() const { return require(X_, "fixed point X"); }
const Point& Params::Y() const { return require(Y_, "fixed point Y"); }
const Point& Params::Z() const { return require(Z_, "point Z"); }
const EigenData& Params::eigen() const { return require(eigen_, "eigen data"); }
const Point& Params::P() const { return require(P_, "period-two point P"); }
const Point& Params::P1() const { return require(P1_, "period-two point P'"); }

std::string Params::describe() const {
    std::ostringstream os;
    os << "a=" << a_q_.get_str() << " b=" << b_q_.get_str() << (exact_ ? " exact" : " float");
    if (!exact_) os << "(" << bits_ << " bits)";
    return os.str();
}

// ---------------------------------------------------------------- map

Point step_forward(const Params& params, const Point& p) {
    const Scalar ax = params.a() * (sign_x(p) == Sign::Negative ? -p.x : p.x);
    return Point(Scalar(1) + p.y - ax, params.b() * p.x);
}

Point step_backward(const Params& params, const Point& p) {
    const Scalar x = p.y / params.b();
    const Scalar ax = params.a() * (sign(x) == Sign::Negative ? -x : x);
    return Point(x, p.x - Scalar(1) + ax);
}

Point apply(const Params& params, const Point& p, int k) {
    Point q = p;
    for (int i = 0; i < k; ++i) q = step_forward(params, q);
    for (int i = 0; i > k; --i) q = step_backward(params, q);
    return q;
}

FixedPoints fixed_points(const Params& params) { return {params.X(), params.Y()}; }

EigenData eigen_data(const Params& params) {
    if (!params.standard()) throw PreconditionError("eigen_data requires standard parameters");
    return params.eigen();
}

PeriodTwo period_two_orbit(const Params& params) {
    if (!params.period_two_range()) throw PreconditionError("period-two orbit requires 1 - b < a < 1 + b");
    return {params.P(), params.P1()};
}

Point point_Z(const Params& params) {
    if (!params.standard()) throw PreconditionError("point Z requires standard parameters");
    return params.Z();
}

const char* to_string(Stability s) {
    switch (s) {
        case Stability::AttractingNode: return "AttractingNode";
        case Stability::AttractingFocus: return "AttractingFocus";
        case Stability::Saddle: return "Saddle";
        case Stability::Repelling: return "Repelling";
        case Stability::Degenerate: return "Degenerate";
    }
    return "?";
}

Mat2 jacobian(const Params& params, bool right) {
    return {right ? Scalar(-params.a()) : params.a(), Scalar(1), params.b(), Scalar(0)};
}

Mat2 operator*(const Mat2& A, const Mat2& B) {
    return {A.m11 * B.m11 + A.m12 * B.m21, A.m11 * B.m12 + A.m12 * B.m22, A.m21 * B.m11 + A.m22 * B.m21,
            A.m21 * B.m12 + A.m22 * B.m22};
}

// ---------------------------------------------------------------- orbits

namespace {

// Lyndon words of length exactly n over {0 = R, 1 = L} in lexicographic order.
std::vector<std::string> lyndon_words(int n) {
    std::vector<std::string> out;
    std::vector<int> w(1, -1);
    while (!w.empty()) {
        ++w.back();
        if (static_cast<int>(w.size()) == n) {
            std::string s;
            for (int c : w) s.push_back(c == 0 ? 'R' : 'L');
            out.push_back(s);
        }
        const std::size_t m = w.size();
        while (static_cast<int>(w.size()) < n) w.push_back(w[w.size() - m]);
        while (!w.empty() && w.back() == 1) w.pop_back();
    }
    return out;
}

std::string least_rotation(const std::string& w, std::size_t* offset) {
    std::string best = w;
    std::size_t at = 0;
    for (std::size_t i = 1; i < w.size(); ++i) {
        std::string r = w.substr(i) + w.substr(0, i);
        // R sorts before L
        auto key = [](std::string s) {
            for (auto& c : s) c = (c == 'R') ? '0' : '1';
            return s;
        };
        if (key(r) < key(best)) {
            best = r;
            at = i;
        }
    }
    if (offset) *offset = at;
    return best;
}

bool primitive(const std::string& w) {
    const std::size_t n = w.size();
    for (std::size_t d = 1; d < n; ++d) {
        if (n % d == 0 && w.substr(d) + w.substr(0, d) == w) return false;
    }
    return true;
}

// Gaussian elimination over Q. Returns false when singular.
bool solve(std::vector<std::vector<Rational>> A, std::vector<Rational> rhs, std::vector<Rational>& x) {
    const std::size_t n = rhs.size();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        while (piv < n && sgn(A[piv][c]) == 0) ++piv;
        if (piv == n) return false;
        std::swap(A[piv], A[c]);
        std::swap(rhs[piv], rhs[c]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == c || sgn(A[r][c]) == 0) continue;
            const Rational f = A[r][c] / A[c][c];
            for (std::size_t k = c; k < n; ++k) A[r][k] -= f * A[c][k];
            rhs[r] -= f * rhs[c];
        }
    }
    x.resize(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = rhs[i] / A[i][i];
    return true;
}

Multipliers multipliers_of(const Mat2& M) {
    Multipliers m;
    m.trace = M.m11 + M.m22;
    m.det = M.m11 * M.m22 - M.m12 * M.m21;
    m.disc = m.trace * m.trace - Scalar(4) * m.det;
    const Scalar h(Rational(1, 2));
    if (sign(m.disc) == Sign::Negative) {
        m.complex = true;
        m.abs1 = m.abs2 = std::sqrt(std::fabs(m.det.approx()));
        return m;
    }
    const Scalar sq = Scalar::sqrt_of(m.disc.rational());
    Scalar r1 = (m.trace + sq) * h;
    Scalar r2 = (m.trace - sq) * h;
    if (compare(abs(r1), abs(r2)) == Sign::Negative) std::swap(r1, r2);
    m.mu1 = r1;
    m.mu2 = r2;
    m.abs1 = std::fabs(r1.approx());
    m.abs2 = std::fabs(r2.approx());
    return m;
}

Stability classify_multipliers(const Multipliers& m) {
    if (m.complex) {
        switch (compare(m.det, Scalar(1))) {
            case Sign::Negative: return Stability::AttractingFocus;
            case Sign::Positive: return Stability::Repelling;
            case Sign::Zero: return Stability::Degenerate;
        }
    }
    const Sign c1 = compare(abs(m.mu1), Scalar(1));
    const Sign c2 = compare(abs(m.mu2), Scalar(1));
    if (c1 == Sign::Zero || c2 == Sign::Zero) return Stability::Degenerate;
    if (c1 == Sign::Positive && c2 == Sign::Negative) return Stability::Saddle;
    if (c1 == Sign::Negative) return Stability::AttractingNode;
    return Stability::Repelling;
}

std::optional<OrbitRecord> orbit_for_word(const Params& params, const std::string& word) {
    const std::size_t n = word.size();
    const Rational& a = params.a_rational();
    const Rational& b = params.b_rational();
    // x_{i+1} + a s_i x_i - b x_{i-1} = 1, cyclic; coefficients accumulate when indices coincide
    std::vector<std::vector<Rational>> A(n, std::vector<Rational>(n, Rational(0)));
    for (std::size_t i = 0; i < n; ++i) {
        const int s = word[i] == 'R' ? 1 : -1;
        A[i][(i + 1) % n] += 1;
        A[i][i] += a * s;
        A[i][(i + n - 1) % n] -= b;
    }
    std::vector<Rational> x;
    if (!solve(A, std::vector<Rational>(n, Rational(1)), x)) return std::nullopt;

    bool degenerate = false;
    std::string canonical;
    for (std::size_t i = 0; i < n; ++i) {
        const int s = sgn(x[i]);
        if ((word[i] == 'R' && s < 0) || (word[i] == 'L' && s > 0)) return std::nullopt;
        if (s == 0) degenerate = true;
        canonical.push_back(s >= 0 ? 'R' : 'L');
    }
    if (!primitive(canonical)) return std::nullopt;
    std::size_t off = 0;
    canonical = least_rotation(canonical, &off);

    OrbitRecord rec;
    rec.period = static_cast<int>(n);
    rec.itinerary = canonical;
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t i = (j + off) % n;
        rec.points.emplace_back(Scalar(x[i]), Scalar(Rational(b * x[(i + n - 1) % n])));
    }
    for (std::size_t j = 0; j < n; ++j) {
        if (!same_point(step_forward(params, rec.points[j]), rec.points[(j + 1) % n])) {
            throw InconsistencyError("itinerary solution for " + word + " is not a cycle");
        }
    }
    Mat2 M{Scalar(1), Scalar(0), Scalar(0), Scalar(1)};
    for (std::size_t j = 0; j < n; ++j) M = jacobian(params, rec.itinerary[j] == 'R') * M;
    rec.multipliers = multipliers_of(M);
    rec.stability = degenerate ? Stability::Degenerate : classify_multipliers(rec.multipliers);
    return rec;
}

}  // namespace

std::vector<OrbitRecord> periodic_orbits(const Params& params, int n, int threads) {
    if (n < 1) throw PreconditionError("period must be >= 1");
    if (n > 24) throw PreconditionError("period too large for itinerary enumeration");
    if (!params.is_exact()) throw PreconditionError("periodic_orbits requires exact parameters");
    const auto words = lyndon_words(n);
    std::vector<std::optional<OrbitRecord>> slots(words.size());
    const int workers = std::max(1, std::min<int>(threads, static_cast<int>(words.size())));
    std::vector<std::exception_ptr> errors(workers);
    auto run = [&](int w) {
        try {
            for (std::size_t i = w; i < words.size(); i += workers) slots[i] = orbit_for_word(params, words[i]);
        } catch (...) {
            errors[w] = std::current_exception();
        }
    };
    if (workers == 1) {
        run(0);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(run, w);
        for (auto& t : pool) t.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);

    std::map<std::string, OrbitRecord> unique;
    for (auto& s : slots) {
        if (s) unique.emplace(s->itinerary, std::move(*s));
    }
    std::vector<OrbitRecord> out;
    for (auto& [k, v] : unique) out.push_back(std::move(v));
    std::sort(out.begin(), out.end(), [](const OrbitRecord& l, const OrbitRecord& r) {
        std::string a = l.itinerary, b = r.itinerary;
        for (auto& c : a) c = c == 'R' ? '0' : '1';
        for (auto& c : b) c = c == 'R' ? '0' : '1';
        return a < b;
    });
    return out;
}

std::vector<SaddleSeed> orbit_manifold_seed(const Params& params, const OrbitRecord& orbit) {
    if (orbit.stability != Stability::Saddle) throw PreconditionError("orbit is not a saddle");
    for (const auto& p : orbit.points) {
        if (sign_x(p) == Sign::Zero) throw PreconditionError("orbit point on the fold");
    }
    const std::size_t n = orbit.points.size();
    const Scalar& mu_u = orbit.multipliers.mu1;
    const Scalar& mu_s = orbit.multipliers.mu2;
    auto eigvec = [](const Mat2& M, const Scalar& mu) {
        if (sign(M.m12) != Sign::Zero) return Point(M.m12, mu - M.m11);
        if (sign(M.m21) != Sign::Zero) return Point(mu - M.m22, M.m21);
        return compare(mu, M.m11) == Sign::Zero ? Point(Scalar(1), Scalar(0)) : Point(Scalar(0), Scalar(1));
    };
    std::vector<SaddleSeed> out;
    for (std::size_t k = 0; k < n; ++k) {
        Mat2 M{Scalar(1), Scalar(0), Scalar(0), Scalar(1)};
        for (std::size_t j = 0; j < n; ++j) M = jacobian(params, orbit.itinerary[(k + j) % n] == 'R') * M;
        out.push_back({orbit.points[k], eigvec(M, mu_u), eigvec(M, mu_s), mu_u, mu_s});
    }
    return out;
}

}  // namespace lozi
