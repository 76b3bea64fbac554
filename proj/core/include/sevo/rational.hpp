#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>

namespace sevo::detail {

// Exact rational arithmetic on int64 with overflow detection. Used by the
// theory engine so that condition boundaries and interval endpoints come out
// exact whenever the inputs are exactly representable small rationals
// (1.8 == 9/5, 2.25 == 9/4, ...). Everything falls back to double arithmetic
// with a relative tolerance when reconstruction or an operation fails.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    void normalize() {
        if (den < 0) { num = -num; den = -den; }
        const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) { num /= g; den /= g; }
    }

    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
};

inline bool mul_overflows(std::int64_t a, std::int64_t b) {
    const __int128 r = static_cast<__int128>(a) * b;
    return r > std::numeric_limits<std::int64_t>::max() || r < std::numeric_limits<std::int64_t>::min();
}

inline std::optional<Rational> rat_add(const Rational& a, const Rational& b) {
    if (mul_overflows(a.num, b.den) || mul_overflows(b.num, a.den) || mul_overflows(a.den, b.den))
        return std::nullopt;
    const std::int64_t n1 = a.num * b.den, n2 = b.num * a.den;
    if ((n2 > 0 && n1 > std::numeric_limits<std::int64_t>::max() - n2) ||
        (n2 < 0 && n1 < std::numeric_limits<std::int64_t>::min() - n2))
        return std::nullopt;
    Rational r{n1 + n2, a.den * b.den};
    r.normalize();
    return r;
}

inline std::optional<Rational> rat_sub(const Rational& a, const Rational& b) {
    return rat_add(a, Rational{-b.num, b.den});
}

inline std::optional<Rational> rat_mul(const Rational& a, const Rational& b) {
    Rational x{a.num, b.den}, y{b.num, a.den};
    x.normalize();
    y.normalize();
    if (mul_overflows(x.num, y.num) || mul_overflows(x.den, y.den)) return std::nullopt;
    Rational r{x.num * y.num, x.den * y.den};
    r.normalize();
    return r;
}

inline std::optional<Rational> rat_div(const Rational& a, const Rational& b) {
    if (b.num == 0) return std::nullopt;
    return rat_mul(a, Rational{b.den, b.num});
}

// -1, 0, +1 ordering via cross multiplication in 128-bit.
inline int rat_cmp(const Rational& a, const Rational& b) {
    const __int128 lhs = static_cast<__int128>(a.num) * b.den;
    const __int128 rhs = static_cast<__int128>(b.num) * a.den;
    return lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
}

// Smallest-denominator rational that rounds back to exactly this double.
// Continued-fraction expansion, denominator capped; returns nullopt for
// doubles that did not come from a short decimal/rational literal.
inline std::optional<Rational> reconstruct_rational(double x, std::int64_t max_den = 1'000'000) {
    if (!std::isfinite(x)) return std::nullopt;
    if (std::abs(x) > 1e12) return std::nullopt;
    const bool neg = x < 0;
    double v = neg ? -x : x;
    std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    double frac = v;
    for (int it = 0; it < 64; ++it) {
        const double fa = std::floor(frac);
        if (fa > 9e17) return std::nullopt;
        const auto a = static_cast<std::int64_t>(fa);
        if (mul_overflows(a, p1) || mul_overflows(a, q1)) return std::nullopt;
        const std::int64_t p2 = a * p1 + p0, q2 = a * q1 + q0;
        if (q2 > max_den) break;
        p0 = p1; q0 = q1; p1 = p2; q1 = q2;
        const double approx = static_cast<double>(p1) / static_cast<double>(q1);
        if (approx == v) {
            Rational r{neg ? -p1 : p1, q1};
            r.normalize();
            return r;
        }
        const double rem = frac - fa;
        if (rem < 1e-15) break;
        frac = 1.0 / rem;
    }
    return std::nullopt;
}

// Dual-track scalar: double value plus, when available, the exact rational.
// Arithmetic keeps the exact track alive as long as every operand has one.
class XNum {
  public:
    XNum() = default;
    explicit XNum(double v) : d_(v), r_(reconstruct_rational(v)) {}
    static XNum from_int(std::int64_t v) { XNum x; x.d_ = static_cast<double>(v); x.r_ = Rational{v, 1}; return x; }

    double value() const { return r_ ? r_->to_double() : d_; }
    bool exact() const { return r_.has_value(); }

    friend XNum operator+(const XNum& a, const XNum& b) { return combine(a, b, a.d_ + b.d_, rat_add); }
    friend XNum operator-(const XNum& a, const XNum& b) { return combine(a, b, a.d_ - b.d_, rat_sub); }
    friend XNum operator*(const XNum& a, const XNum& b) { return combine(a, b, a.d_ * b.d_, rat_mul); }
    friend XNum operator/(const XNum& a, const XNum& b) { return combine(a, b, a.d_ / b.d_, rat_div); }

    // Comparisons: exact when both tracks are alive, otherwise relative
    // tolerance 1e-12 so that boundary cases computed in floating point
    // still land on the boundary.
    static constexpr double kRelTol = 1e-12;

    friend bool operator==(const XNum& a, const XNum& b) {
        if (a.r_ && b.r_) return rat_cmp(*a.r_, *b.r_) == 0;
        return approx_eq(a.d_, b.d_);
    }
    friend bool operator<(const XNum& a, const XNum& b) {
        if (a.r_ && b.r_) return rat_cmp(*a.r_, *b.r_) < 0;
        return a.d_ < b.d_ && !approx_eq(a.d_, b.d_);
    }
    friend bool operator<=(const XNum& a, const XNum& b) { return a < b || a == b; }
    friend bool operator>(const XNum& a, const XNum& b) { return b < a; }
    friend bool operator>=(const XNum& a, const XNum& b) { return b <= a; }

  private:
    using BinOp = std::optional<Rational> (*)(const Rational&, const Rational&);

    static bool approx_eq(double a, double b) {
        const double scale = std::max({std::abs(a), std::abs(b), 1.0});
        return std::abs(a - b) <= kRelTol * scale;
    }

    static XNum combine(const XNum& a, const XNum& b, double d, BinOp op) {
        XNum out;
        out.d_ = d;
        if (a.r_ && b.r_) {
            if (auto r = op(*a.r_, *b.r_)) {
                out.r_ = r;
                out.d_ = r->to_double();
            }
        }
        return out;
    }

    double d_ = 0.0;
    std::optional<Rational> r_;
};

}  // namespace sevo::detail
