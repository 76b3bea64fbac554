#include "sevo/theory.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "sevo/rational.hpp"

namespace sevo {

using detail::XNum;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

// n*(q - m2) vs m2*q*sigma cleared-denominator form of the lower threshold
// n vs m2*q*sigma/(q - m2); keeps the exact track alive.
struct Thresholds {
    XNum n, sigma, q, m1, m2;
    XNum lower;             // m2*q*sigma/(q - m2)
    std::optional<XNum> upper;  // m1*m2*sigma/(m1 - m2), only when m2 < m1

    explicit Thresholds(const ModelParams& p)
        : n(p.n), sigma(p.sigma), q(p.q), m1(p.m1), m2(p.m2),
          lower(m2 * q * sigma / (q - m2)) {
        if (m2 < m1) upper = m1 * m2 * sigma / (m1 - m2);
    }
};

}  // namespace

ModelParams::ModelParams(double n_, double sigma_, double q_, double m1_, double m2_,
                         std::optional<double> p_)
    : n(n_), sigma(sigma_), q(q_), m1(m1_), m2(m2_), p(p_) {
    if (!std::isfinite(n) || n < 1.0)
        throw std::invalid_argument("ModelParams: n must satisfy n >= 1, got " + fmt(n));
    if (!std::isfinite(sigma) || sigma < 1.0)
        throw std::invalid_argument("ModelParams: sigma must satisfy sigma >= 1, got " + fmt(sigma));
    if (!std::isfinite(q) || q <= 1.0)
        throw std::invalid_argument("ModelParams: q must lie in (1, inf), got " + fmt(q));
    if (!std::isfinite(m1) || m1 < 1.0 || m1 >= q)
        throw std::invalid_argument("ModelParams: m1 must lie in [1, q), got " + fmt(m1));
    if (!std::isfinite(m2) || m2 < 1.0 || m2 >= q)
        throw std::invalid_argument("ModelParams: m2 must lie in [1, q), got " + fmt(m2));
    if (p && (!std::isfinite(*p) || *p <= 1.0))
        throw std::invalid_argument("ModelParams: p must satisfy p > 1, got " + fmt(*p));
}

bool ModelParams::integer_dimension() const {
    return n == std::floor(n);
}

const char* to_string(Regime r) {
    switch (r) {
        case Regime::Regime1: return "Regime1";
        case Regime::Regime2: return "Regime2";
        case Regime::Both: return "Both";
        default: return "NotCovered";
    }
}

RegimeClassification classify_regime(const ModelParams& params) {
    const Thresholds th(params);
    RegimeClassification out;

    const bool lower_ok = th.n >= th.lower;
    const bool lower_at_boundary = th.n == th.lower;

    if (params.m1 <= params.m2) {
        if (lower_ok) {
            out.regime = Regime::Regime1;
            out.boundary = lower_at_boundary;
            out.reason = lower_at_boundary
                             ? "n = m2*q*sigma/(q-m2) = " + fmt(th.lower.value()) +
                                   " (lower-threshold boundary)"
                             : "m1 <= m2 and n > m2*q*sigma/(q-m2) = " + fmt(th.lower.value());
        } else {
            out.regime = Regime::NotCovered;
            out.reason = "n > m2*q*sigma/(q-m2) fails: n = " + fmt(params.n) +
                         " <= " + fmt(th.lower.value());
        }
        return out;
    }

    // m2 < m1: the upper threshold splits the two regimes.
    const XNum upper = *th.upper;
    const bool at_upper = th.n == upper;

    if (at_upper && lower_ok) {
        out.regime = Regime::Both;
        out.boundary = true;
        out.reason = "n = m1*m2*sigma/(m1-m2) = " + fmt(upper.value()) +
                     " (shared boundary, both rate families apply)";
        return out;
    }
    if (lower_ok && th.n <= upper) {
        out.regime = Regime::Regime1;
        out.boundary = lower_at_boundary;
        out.reason = "m2 < m1 and m2*q*sigma/(q-m2) = " + fmt(th.lower.value()) +
                     " <= n <= m1*m2*sigma/(m1-m2) = " + fmt(upper.value());
        return out;
    }
    if (th.n >= upper) {
        out.regime = Regime::Regime2;
        out.boundary = at_upper;
        out.reason = "m2 < m1 and m1*m2*sigma/(m1-m2) = " + fmt(upper.value()) + " <= n";
        return out;
    }
    out.regime = Regime::NotCovered;
    out.reason = "n > m2*q*sigma/(q-m2) fails: n = " + fmt(params.n) + " <= " +
                 fmt(th.lower.value());
    return out;
}

double critical_p1(double n, double sigma, double m2) {
    const XNum xn(n), xs(sigma), xm2(m2);
    const XNum denom = xn - xm2 * xs;
    if (denom.value() <= 0.0)
        throw std::domain_error("critical_p1: requires n > m2*sigma, got n = " + fmt(n) +
                                ", m2*sigma = " + fmt(m2 * sigma));
    return (XNum::from_int(1) + XNum::from_int(2) * xm2 * xs / denom).value();
}

double critical_p2(double n, double sigma, double m1, double m2) {
    const XNum xn(n), xs(sigma), xm1(m1), xm2(m2);
    return (xm1 / xm2 + xm1 * xs / xn).value();
}

CriticalExponent critical_exponent(const ModelParams& params, Regime regime) {
    CriticalExponent out;
    switch (regime) {
        case Regime::Regime1:
            out.p1 = critical_p1(params.n, params.sigma, params.m2);
            break;
        case Regime::Regime2:
            out.p2 = critical_p2(params.n, params.sigma, params.m1, params.m2);
            break;
        case Regime::Both:
            out.p1 = critical_p1(params.n, params.sigma, params.m2);
            out.p2 = critical_p2(params.n, params.sigma, params.m1, params.m2);
            break;
        default:
            throw std::domain_error("critical_exponent: regime NotCovered");
    }
    return out;
}

double CriticalExponent::value() const {
    if (p1) return *p1;
    if (p2) return *p2;
    throw std::logic_error("CriticalExponent: no value set");
}

AdmissiblePRange gn_p_bounds(const ModelParams& params) {
    const XNum n(params.n), sigma(params.sigma), q(params.q), m2(params.m2);
    AdmissiblePRange out;
    out.lower = {(q / m2).value(), true, true};

    const XNum qs = q * sigma;
    if (n <= qs) {
        out.upper = {kInf, false, false};
        return out;
    }
    const XNum cap = q * q * sigma / (q - m2);
    if (n <= cap) {
        out.upper = {(n / (n - qs)).value(), true, true};
        return out;
    }
    out.empty = true;
    out.upper = {kInf, false, false};
    out.reason = "no admissible p: n = " + fmt(params.n) + " exceeds q^2*sigma/(q-m2) = " +
                 fmt(cap.value());
    return out;
}

AdmissiblePRange admissible_p_range(const ModelParams& params) {
    const auto cls = classify_regime(params);
    if (cls.regime == Regime::NotCovered)
        throw std::domain_error("admissible_p_range: " + cls.reason);

    AdmissiblePRange range = gn_p_bounds(params);
    if (range.empty) return range;

    const double pc = critical_exponent(params, cls.regime).value();
    if (pc > range.lower.value ||
        (pc == range.lower.value && range.lower.inclusive)) {
        range.lower = {pc, false, true};  // strict: the critical case is excluded
    }

    if (range.upper.finite) {
        const bool above = range.lower.value > range.upper.value;
        const bool touching = range.lower.value == range.upper.value &&
                              !(range.lower.inclusive && range.upper.inclusive);
        if (above || touching) {
            range.empty = true;
            range.reason = "no admissible p: lower bound " + fmt(range.lower.value) +
                           (range.lower.inclusive ? " (inclusive)" : " (strict)") +
                           " conflicts with upper bound " + fmt(range.upper.value);
        }
    }
    return range;
}

bool AdmissiblePRange::contains(double p) const {
    if (empty) return false;
    if (lower.inclusive ? p < lower.value : p <= lower.value) return false;
    if (!upper.finite) return true;
    return upper.inclusive ? p <= upper.value : p < upper.value;
}

std::string AdmissiblePRange::str() const {
    if (empty) return "(empty)";
    std::ostringstream os;
    os.precision(10);
    os << (lower.inclusive ? '[' : '(') << lower.value << ", ";
    if (upper.finite)
        os << upper.value << (upper.inclusive ? ']' : ')');
    else
        os << "inf)";
    return os.str();
}

DecayRates rates_regime1(const ModelParams& params) {
    const XNum n(params.n), sigma(params.sigma), q(params.q), m2(params.m2);
    const XNum one = XNum::from_int(1);
    const XNum k = (n / sigma) * (one / m2 - one / q);
    return {(one - k).value(), (XNum::from_int(0) - k).value(), std::nullopt};
}

DecayRates rates_regime2(const ModelParams& params) {
    const XNum n(params.n), sigma(params.sigma), q(params.q), m1(params.m1);
    const XNum one = XNum::from_int(1);
    const XNum k = (n / sigma) * (one / m1 - one / q);
    return {(XNum::from_int(0) - k).value(), (XNum::from_int(0) - k - one).value(), std::nullopt};
}

DecayRates decay_rates(const ModelParams& params, Regime regime) {
    switch (regime) {
        case Regime::Regime1: return rates_regime1(params);
        case Regime::Regime2: return rates_regime2(params);
        case Regime::Both: {
            DecayRates r1 = rates_regime1(params);
            const DecayRates r2 = rates_regime2(params);
            if (std::abs(r1.rate_u - r2.rate_u) > 1e-12 ||
                std::abs(r1.rate_grad - r2.rate_grad) > 1e-12)
                throw std::logic_error("decay_rates: rate families disagree on the shared boundary");
            r1.alternate = {r2.rate_u, r2.rate_grad};
            return r1;
        }
        default:
            throw std::domain_error("decay_rates: regime NotCovered");
    }
}

DecayRates linear_estimate_rates(const ModelParams& params, bool u0_active, bool u1_active) {
    if (!u0_active && !u1_active)
        throw std::invalid_argument("linear_estimate_rates: no active data term");
    const XNum n(params.n), sigma(params.sigma), q(params.q);
    const XNum one = XNum::from_int(1);
    const XNum k1 = (n / sigma) * (one / XNum(params.m1) - one / q);
    const XNum k2 = (n / sigma) * (one / XNum(params.m2) - one / q);

    constexpr double kNeverDominates = -std::numeric_limits<double>::infinity();
    const double u0_u = u0_active ? (XNum::from_int(0) - k1).value() : kNeverDominates;
    const double u1_u = u1_active ? (one - k2).value() : kNeverDominates;
    const double u0_g = u0_active ? (XNum::from_int(0) - k1 - one).value() : kNeverDominates;
    const double u1_g = u1_active ? (XNum::from_int(0) - k2).value() : kNeverDominates;
    return {std::max(u0_u, u1_u), std::max(u0_g, u1_g), std::nullopt};
}

GnParams gn_theta(double s, double sigma, double q1, double q2, double n) {
    if (!(q2 > 1.0) || !std::isfinite(q2))
        throw std::invalid_argument("gn_theta: q2 must lie in (1, inf), got " + fmt(q2));
    if (!(q1 > 0.0) || !std::isfinite(q1))
        throw std::invalid_argument("gn_theta: q1 must be positive, got " + fmt(q1));
    if (!(sigma > 0.0))
        throw std::invalid_argument("gn_theta: sigma must be positive, got " + fmt(sigma));
    if (s < 0.0 || s >= sigma)
        throw std::invalid_argument("gn_theta: s must lie in [0, sigma), got " + fmt(s));

    const XNum xs(s), xsig(sigma), xq1(q1), xq2(q2), xn(n);
    const XNum one = XNum::from_int(1);
    const XNum theta = (xn / xsig) * (one / xq2 - one / xq1 + xs / xn);
    GnParams out{s, sigma, q1, q2, n, theta.value(), false};
    const XNum lo = xs / xsig;
    out.valid = theta >= lo && theta <= one;
    return out;
}

IntegralBound integral_branch(double a, double b) {
    const double mx = std::max(a, b), mn = std::min(a, b);
    if (mx > 1.0) return {IntegralBranch::MinDecay, -mn, false};
    if (mx == 1.0) return {IntegralBranch::MinDecayLog, -mn, true};
    return {IntegralBranch::Growth, 1.0 - a - b, false};
}

NormWeights solution_norm_weights(const ModelParams& params, Regime regime) {
    const DecayRates r = decay_rates(params, regime);
    return {0.0 - r.rate_u, 0.0 - r.rate_grad};
}

std::vector<ExampleRow> example_table() {
    // sigma = 1, q = 2 throughout. Representative points are exact rationals
    // interior to each region (at the shared boundary for none of them).
    auto lower1 = [](double n, double m2) { return critical_p1(n, 1.0, m2); };
    auto lower2 = [](double n, double m1, double m2) { return critical_p2(n, 1.0, m1, m2); };

    std::vector<ExampleRow> rows;
    rows.push_back({2.0, "1 <= m1 <= m2", "m1 <= m2 < 4/3", 1, "1 + 2*m2/(2-m2)",
                    false, kInf, false, kInf, 1.0, 1.0, lower1(2.0, 1.0)});
    rows.push_back({2.0, "1 <= m1 < 2", "1 <= m2 < min{4/3, m1}", 1, "1 + 2*m2/(2-m2)",
                    false, kInf, false, kInf, 1.5, 1.0, lower1(2.0, 1.0)});
    // The published range for this row has an infinite upper end; the
    // interpolation cap at these parameters actually closes it at 3.
    rows.push_back({3.0, "1 <= m1 <= m2", "m1 <= m2 < 6/5", 1, "1 + 2*m2/(3-m2)",
                    false, kInf, true, 3.0, 1.0, 1.0, lower1(3.0, 1.0)});
    rows.push_back({3.0, "1 <= m1 <= 3/2", "1 <= m2 < min{m1, 6/5}", 1, "1 + 2*m2/(3-m2)",
                    true, 3.0, true, 3.0, 1.25, 1.0, lower1(3.0, 1.0)});
    rows.push_back({3.0, "3/2 <= m1 < 2", "3*m1/(3+m1) <= m2 < min{m1, 6/5}", 1,
                    "1 + 2*m2/(3-m2)",
                    true, 3.0, true, 3.0, 1.8, 1.15, lower1(3.0, 1.15)});
    rows.push_back({3.0, "3/2 <= m1 < 2", "1 <= m2 <= 3*m1/(3+m1)", 2, "m1/m2 + m1/3",
                    true, 3.0, true, 3.0, 1.8, 1.0, lower2(3.0, 1.8, 1.0)});
    return rows;
}

}  // namespace sevo
