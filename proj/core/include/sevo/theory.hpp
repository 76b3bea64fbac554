#pragma once

#include <optional>
#include <string>
#include <vector>

namespace sevo {

// Parameter tuple for the damped sigma-evolution model. The validity box is
// checked at construction; every formula in this module reads from here.
struct ModelParams {
    double n;      // spatial dimension, real > 0 (non-integer allowed, flagged)
    double sigma;  // fractional order, >= 1
    double q;      // base Lebesgue exponent, in (1, inf)
    double m1;     // extra integrability of the position data, in [1, q)
    double m2;     // extra integrability of the velocity data, in [1, q)
    std::optional<double> p;  // nonlinearity exponent, > 1 when present

    ModelParams(double n, double sigma, double q, double m1, double m2,
                std::optional<double> p = std::nullopt);

    bool integer_dimension() const;
};

enum class Regime {
    Regime1,     // rates driven by the velocity-data exponent m2
    Regime2,     // rates driven by the position-data exponent m1
    Both,        // shared boundary, both rate families coincide
    NotCovered,  // outside the covered parameter region
};

const char* to_string(Regime r);

struct RegimeClassification {
    Regime regime = Regime::NotCovered;
    std::string reason;    // satisfied or violated inequality, with numbers
    bool boundary = false; // n sits exactly on a regime boundary
};

struct IntervalEnd {
    double value = 0.0;
    bool inclusive = false;
    bool finite = true;  // upper end only; value is +inf when false
};

struct AdmissiblePRange {
    IntervalEnd lower;
    IntervalEnd upper;
    bool empty = false;
    std::string reason;  // for empty ranges: the two conflicting bounds

    bool contains(double p) const;
    std::string str() const;  // e.g. "(2.4, 3]" or "[2, inf)"
};

// Critical exponent(s) for a covered regime. Both values are set only on the
// shared boundary, where they coincide.
struct CriticalExponent {
    std::optional<double> p1;  // 1 + 2*m2*sigma/(n - m2*sigma)
    std::optional<double> p2;  // m1/m2 + m1*sigma/n
    double value() const;
};

struct DecayRates {
    double rate_u;     // exponent of (1+t) for ||u||_Lq
    double rate_grad;  // exponent of (1+t) for the gradient pair norm
    // Second candidate pair, present only on the shared boundary.
    std::optional<std::pair<double, double>> alternate;
};

struct GnParams {
    double s, sigma, q1, q2, n;
    double theta;
    bool valid;  // theta in [s/sigma, 1]
};

enum class IntegralBranch { MinDecay, MinDecayLog, Growth };

struct IntegralBound {
    IntegralBranch branch;
    double exponent;  // power of (1+t)
    bool log_factor;
};

struct NormWeights {
    double w_u;
    double w_grad;
};

// One row of the canonical sigma=1, q=2 admissible-range table (n = 2, 3).
// Region bounds and endpoints are exact rationals. `upper_printed` carries
// the range as published; `upper_computed` is what admissible_p_range gives
// at the representative point (they differ for one historical row).
struct ExampleRow {
    double n;
    std::string m1_region;
    std::string m2_region;
    int theorem;              // 1 or 2
    std::string lower_formula;
    bool upper_printed_finite;
    double upper_printed;
    bool upper_computed_finite;
    double upper_computed;
    double rep_m1, rep_m2;    // representative point inside the region
    double rep_lower;         // lower endpoint evaluated there, exact
};

RegimeClassification classify_regime(const ModelParams& params);

// Raw rate/exponent formulas, exposed for property tests and sweeps that
// evaluate them outside a covered classification.
double critical_p1(double n, double sigma, double m2);
double critical_p2(double n, double sigma, double m1, double m2);
DecayRates rates_regime1(const ModelParams& params);
DecayRates rates_regime2(const ModelParams& params);

CriticalExponent critical_exponent(const ModelParams& params, Regime regime);
AdmissiblePRange gn_p_bounds(const ModelParams& params);
AdmissiblePRange admissible_p_range(const ModelParams& params);
DecayRates decay_rates(const ModelParams& params, Regime regime);

// Linear-flow rates for the given active data terms, each contributing its
// own estimate; the slower (larger) exponent dominates. Valid for any
// parameters in the box, and reduces to the covered-regime rates whenever the
// coverage conditions hold.
DecayRates linear_estimate_rates(const ModelParams& params, bool u0_active, bool u1_active);
GnParams gn_theta(double s, double sigma, double q1, double q2, double n);
IntegralBound integral_branch(double a, double b);
NormWeights solution_norm_weights(const ModelParams& params, Regime regime);

std::vector<ExampleRow> example_table();

}  // namespace sevo
