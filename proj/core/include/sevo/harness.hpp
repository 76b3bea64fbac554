#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sevo/field.hpp"
#include "sevo/fit.hpp"
#include "sevo/solver.hpp"
#include "sevo/theory.hpp"

namespace sevo {

struct GridSpec {
    std::vector<int> sizes;
    double half_length = 1.0;
};

struct DataProfile {
    enum class Kind { Zero, Gaussian, Bump };
    Kind kind = Kind::Zero;
    double scale = 1.0;      // Gaussian width or bump radius
    double amplitude = 0.0;  // peak value

    double support_radius() const;  // effective radius for the wrap-around guard
};

struct ExperimentSpec {
    std::string name = "experiment";
    ModelParams params;
    GridSpec grid;
    DataProfile u0, u1;
    bool subtract_mean = true;
    bool random_center = false;  // seeded random profile placement
    SolverConfig solver;         // sigma/q/m2/p are filled from params
    std::pair<double, double> fit_window{0.0, 0.0};
    std::uint64_t seed = 0;

    explicit ExperimentSpec(ModelParams p) : params(p) {}

    SolverConfig solver_config() const;  // solver with params folded in
    void validate() const;
};

// Torus size needed so whole-space decay is meaningful over the horizon:
// L >= 8 * (1 + T)^(1/sigma) * support radius. Returns the attained margin
// L / required (>= 1 means satisfied).
double wrap_guard_margin(const ExperimentSpec& spec);

Field make_profile(const GridPtr& grid, const DataProfile& profile,
                   const std::vector<double>& center);
StatePair build_initial_state(const ExperimentSpec& spec, double* mean_u0 = nullptr,
                              double* mean_u1 = nullptr);

struct DecayReport {
    std::string name;
    RegimeClassification classification;
    DecayRates theory;
    AdmissiblePRange p_range;
    std::optional<DecayFit> fit_u;
    std::optional<DecayFit> fit_grad;
    Trajectory trajectory;
    double subtracted_mean_u0 = 0.0;
    double subtracted_mean_u1 = 0.0;
    std::vector<std::string> warnings;
};

// Runs the experiment and fits the measured rates against the theoretical
// ones. Refuses configurations the rate theory does not cover and nonlinear
// runs whose p is outside the admissible range.
DecayReport run_decay_experiment(const ExperimentSpec& spec);

enum class SweepClass { Decaying, Growing, Flat, BlowUp, Error };

const char* to_string(SweepClass c);

struct SweepPoint {
    double p = 0.0;
    SweepClass cls = SweepClass::Error;
    double slope = 0.0;
    bool completed = false;
    double blowup_time = 0.0;
    std::string error;
};

struct SweepReport {
    std::vector<double> p_grid;
    double epsilon = 0.0;
    std::vector<SweepPoint> points;
    // bracketing interval around the last transition into sustained decay
    std::optional<std::pair<double, double>> bracket;
    std::optional<double> theory_p1;
    std::optional<double> theory_p2;
    bool monotonicity_violation = false;
    std::vector<std::string> warnings;
};

// Classifies each p on the grid by the fitted slope of ||u||_Lq: Decaying
// below -0.05, Growing above +0.05, Flat between, BlowUp on numerical
// blow-up. Points run concurrently up to `workers`; output is ordered by p
// and independent of the worker count.
SweepReport critical_sweep(const ExperimentSpec& spec, const std::vector<double>& p_grid,
                           double epsilon, int workers = 1);

struct LemmaVerification {
    double a = 0.0, b = 0.0;
    IntegralBound predicted{IntegralBranch::MinDecay, 0.0, false};
    double fitted_exponent = 0.0;
    bool log_divided = false;  // samples divided by log(2+t) before fitting
    bool agree = false;
    double tolerance = 0.05;
    std::vector<std::pair<double, double>> samples;  // (t, I(t))
};

// Evaluates I(t) = int_0^t (1+t-s)^-a (1+s)^-b ds by adaptive quadrature on
// a geometric t-grid and checks the fitted power against integral_branch.
LemmaVerification verify_integral_lemma(double a, double b,
                                        std::vector<double> t_grid = {});

// Halves epsilon until the first Picard distance ratio drops below `target`.
// Returns the calibrated amplitude applied to both data profiles.
double calibrate_epsilon(const ExperimentSpec& spec, double target_ratio, int max_halvings = 12);

}  // namespace sevo
