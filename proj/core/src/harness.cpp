#include "sevo/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <thread>

#include "sevo/quadrature.hpp"

namespace sevo {

double DataProfile::support_radius() const {
    switch (kind) {
        case Kind::Gaussian: return scale;
        case Kind::Bump: return scale;
        default: return 0.0;
    }
}

SolverConfig ExperimentSpec::solver_config() const {
    SolverConfig cfg = solver;
    cfg.sigma = params.sigma;
    cfg.q = params.q;
    cfg.m2 = params.m2;
    if (cfg.nonlinear) {
        if (!params.p)
            throw std::invalid_argument("ExperimentSpec: nonlinear run requires the exponent p");
        cfg.p = *params.p;
    }
    return cfg;
}

void ExperimentSpec::validate() const {
    if (grid.sizes.empty() || grid.sizes.size() > 3)
        throw std::invalid_argument("ExperimentSpec: grid dimension must be 1, 2 or 3");
    if (static_cast<double>(grid.sizes.size()) != params.n && params.integer_dimension())
        throw std::invalid_argument("ExperimentSpec: grid dimension does not match params.n");
    if (fit_window.first != 0.0 || fit_window.second != 0.0) {
        if (!(fit_window.first > 0.0) || !(fit_window.second > fit_window.first) ||
            fit_window.second > solver.horizon + 1e-9)
            throw std::invalid_argument("ExperimentSpec: fit_window must lie inside (0, horizon]");
    }
    solver_config().validate();
}

double wrap_guard_margin(const ExperimentSpec& spec) {
    const double radius = std::max(spec.u0.support_radius(), spec.u1.support_radius());
    if (radius <= 0.0) return std::numeric_limits<double>::infinity();
    const double required =
        8.0 * std::pow(1.0 + spec.solver.horizon, 1.0 / spec.params.sigma) * radius;
    return spec.grid.half_length / required;
}

Field make_profile(const GridPtr& grid, const DataProfile& profile,
                   const std::vector<double>& center) {
    std::vector<double> values(grid->point_count(), 0.0);
    if (profile.kind == DataProfile::Kind::Zero || profile.amplitude == 0.0)
        return Field::from_real(grid, std::move(values));

    const int d = grid->dim();
    std::vector<int> idx(d, 0);
    const double r = profile.scale;
    for (std::size_t flat = 0; flat < values.size(); ++flat) {
        double r2 = 0.0;
        for (int a = 0; a < d; ++a) {
            // nearest periodic image of the offset
            double dx = grid->coordinate(a, idx[a]) - (a < static_cast<int>(center.size()) ? center[a] : 0.0);
            const double span = 2.0 * grid->half_length();
            dx -= span * std::round(dx / span);
            r2 += dx * dx;
        }
        if (profile.kind == DataProfile::Kind::Gaussian) {
            values[flat] = profile.amplitude * std::exp(-r2 / (2.0 * r * r));
        } else {
            if (r2 < r * r)
                values[flat] = profile.amplitude * std::exp(1.0 - r * r / (r * r - r2));
        }
        for (int a = d - 1; a >= 0; --a) {
            if (++idx[a] < grid->sizes()[a]) break;
            idx[a] = 0;
        }
    }
    return Field::from_real(grid, std::move(values));
}

StatePair build_initial_state(const ExperimentSpec& spec, double* mean_u0, double* mean_u1) {
    auto grid = make_grid(spec.grid.sizes, spec.grid.half_length);

    std::vector<double> c0(grid->dim(), 0.0), c1(grid->dim(), 0.0);
    if (spec.random_center) {
        std::mt19937_64 rng(spec.seed);
        std::uniform_real_distribution<double> dist(-0.25 * spec.grid.half_length,
                                                    0.25 * spec.grid.half_length);
        for (auto& c : c0) c = dist(rng);
        for (auto& c : c1) c = dist(rng);
    }

    Field u0 = make_profile(grid, spec.u0, c0);
    Field u1 = make_profile(grid, spec.u1, c1);

    double m0 = 0.0, m1 = 0.0;
    if (spec.subtract_mean) {
        m0 = u0.mean();
        m1 = u1.mean();
        u0.subtract_mean();
        u1.subtract_mean();
    }
    if (mean_u0) *mean_u0 = m0;
    if (mean_u1) *mean_u1 = m1;
    return StatePair(std::move(u0), std::move(u1), 0.0);
}

namespace {

std::pair<double, double> effective_window(const ExperimentSpec& spec) {
    if (spec.fit_window.first != 0.0 || spec.fit_window.second != 0.0) return spec.fit_window;
    return {spec.solver.horizon / 10.0, spec.solver.horizon};
}

}  // namespace

DecayReport run_decay_experiment(const ExperimentSpec& spec) {
    spec.validate();

    const SolverConfig cfg = spec.solver_config();
    DecayReport report;
    report.name = spec.name;
    report.classification = classify_regime(spec.params);

    if (cfg.nonlinear) {
        // theorem-backed run: refuse anything the rate theory does not cover
        if (report.classification.regime == Regime::NotCovered)
            throw std::domain_error("run_decay_experiment: " + report.classification.reason);
        report.theory = decay_rates(spec.params, report.classification.regime);
        report.p_range = admissible_p_range(spec.params);
        if (report.p_range.empty)
            throw std::domain_error("run_decay_experiment: " + report.p_range.reason);
        if (!report.p_range.contains(cfg.p))
            throw std::domain_error("run_decay_experiment: p = " + std::to_string(cfg.p) +
                                    " lies outside the admissible range " + report.p_range.str());
    } else {
        // linear run: the per-data-term estimates apply for any parameters
        const bool u0_active = spec.u0.kind != DataProfile::Kind::Zero && spec.u0.amplitude != 0.0;
        const bool u1_active = spec.u1.kind != DataProfile::Kind::Zero && spec.u1.amplitude != 0.0;
        report.theory = linear_estimate_rates(spec.params, u0_active, u1_active);
        report.p_range = gn_p_bounds(spec.params);
    }

    const double margin = wrap_guard_margin(spec);
    if (margin < 1.0)
        report.warnings.push_back(
            "wrap-around guard violated: L covers " + std::to_string(margin) +
            " of the recommended torus size; late-time decay is steeper than whole-space theory");

    StatePair state = build_initial_state(spec, &report.subtracted_mean_u0,
                                          &report.subtracted_mean_u1);
    report.trajectory = evolve(state, cfg);

    if (report.trajectory.outcome == Outcome::Completed) {
        const auto window = effective_window(spec);
        report.fit_u = fit_decay_rate(report.trajectory.series_lq(), window);
        report.fit_grad = fit_decay_rate(report.trajectory.series_grad(), window);
    }
    return report;
}

const char* to_string(SweepClass c) {
    switch (c) {
        case SweepClass::Decaying: return "decaying";
        case SweepClass::Growing: return "growing";
        case SweepClass::Flat: return "flat";
        case SweepClass::BlowUp: return "blowup";
        default: return "error";
    }
}

SweepReport critical_sweep(const ExperimentSpec& spec, const std::vector<double>& p_grid,
                           double epsilon, int workers) {
    for (std::size_t i = 1; i < p_grid.size(); ++i)
        if (!(p_grid[i] > p_grid[i - 1]))
            throw std::invalid_argument("critical_sweep: p_grid must be strictly increasing");
    for (double p : p_grid)
        if (!(p > 1.0)) throw std::invalid_argument("critical_sweep: p values must exceed 1");

    SweepReport report;
    report.p_grid = p_grid;
    report.epsilon = epsilon;

    const auto cls = classify_regime(spec.params);
    if (cls.regime == Regime::Regime1 || cls.regime == Regime::Both)
        report.theory_p1 = critical_p1(spec.params.n, spec.params.sigma, spec.params.m2);
    if (cls.regime == Regime::Regime2 || cls.regime == Regime::Both)
        report.theory_p2 = critical_p2(spec.params.n, spec.params.sigma, spec.params.m1,
                                       spec.params.m2);
    if (cls.regime == Regime::NotCovered)
        report.warnings.push_back("theory annotation unavailable: " + cls.reason);
    if (wrap_guard_margin(spec) < 1.0)
        report.warnings.push_back("wrap-around guard violated for the sweep grid");

    report.points.resize(p_grid.size());
    if (p_grid.empty()) return report;

    auto run_point = [&](std::size_t i) {
        SweepPoint& pt = report.points[i];
        pt.p = p_grid[i];
        try {
            ExperimentSpec probe = spec;
            probe.params = ModelParams(spec.params.n, spec.params.sigma, spec.params.q,
                                       spec.params.m1, spec.params.m2, p_grid[i]);
            probe.u0.amplitude = probe.u0.kind == DataProfile::Kind::Zero ? 0.0 : epsilon;
            probe.u1.amplitude = probe.u1.kind == DataProfile::Kind::Zero ? 0.0 : epsilon;
            probe.solver.nonlinear = true;

            StatePair state = build_initial_state(probe);
            const Trajectory traj = evolve(state, probe.solver_config());
            pt.completed = traj.outcome == Outcome::Completed;
            if (!pt.completed) {
                pt.cls = SweepClass::BlowUp;
                pt.blowup_time = traj.blowup_time;
                return;
            }
            const DecayFit fit = fit_decay_rate(traj.series_lq(), effective_window(probe));
            pt.slope = fit.slope;
            pt.cls = fit.slope < -0.05 ? SweepClass::Decaying
                                       : (fit.slope > 0.05 ? SweepClass::Growing : SweepClass::Flat);
        } catch (const std::exception& e) {
            pt.cls = SweepClass::Error;
            pt.error = e.what();
        }
    };

    const int nworkers = std::max(1, std::min<int>(workers, static_cast<int>(p_grid.size())));
    if (nworkers == 1) {
        for (std::size_t i = 0; i < p_grid.size(); ++i) run_point(i);
    } else {
        std::vector<std::thread> pool;
        std::atomic<std::size_t> next{0};
        for (int w = 0; w < nworkers; ++w)
            pool.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < p_grid.size(); i = next.fetch_add(1))
                    run_point(i);
            });
        for (auto& t : pool) t.join();
    }

    // bracket: last point that is not decaying, followed only by decaying ones
    std::optional<std::size_t> last_bad;
    bool any_decaying = false;
    for (std::size_t i = 0; i < report.points.size(); ++i) {
        if (report.points[i].cls == SweepClass::Decaying)
            any_decaying = true;
        else
            last_bad = i;
    }
    if (any_decaying && last_bad && *last_bad + 1 < report.points.size())
        report.bracket = {p_grid[*last_bad], p_grid[*last_bad + 1]};

    for (std::size_t i = 0; i + 1 < report.points.size(); ++i) {
        if (report.points[i].cls == SweepClass::Decaying) {
            for (std::size_t j = i + 1; j < report.points.size(); ++j) {
                if (report.points[j].cls == SweepClass::BlowUp ||
                    report.points[j].cls == SweepClass::Growing) {
                    report.monotonicity_violation = true;
                }
            }
        }
    }
    return report;
}

LemmaVerification verify_integral_lemma(double a, double b, std::vector<double> t_grid) {
    if (!std::isfinite(a) || !std::isfinite(b))
        throw std::invalid_argument("verify_integral_lemma: a and b must be finite");
    if (t_grid.empty()) {
        const double lo = 1e2, hi = 1e4;
        const int points = 12;
        for (int i = 0; i < points; ++i)
            t_grid.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (points - 1)));
    }
    if (t_grid.size() < 6)
        throw std::invalid_argument("verify_integral_lemma: need at least 6 grid points");
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        if (t_grid[i] < 10.0 || t_grid[i] > 1e5)
            throw std::invalid_argument("verify_integral_lemma: t_grid must lie in [10, 1e5]");
        if (i >= 2) {
            const double r1 = t_grid[i] / t_grid[i - 1];
            const double r2 = t_grid[i - 1] / t_grid[i - 2];
            if (std::abs(r1 / r2 - 1.0) > 0.01)
                throw std::invalid_argument("verify_integral_lemma: t_grid must be geometric");
        }
    }

    LemmaVerification out;
    out.a = a;
    out.b = b;
    out.predicted = integral_branch(a, b);
    out.log_divided = out.predicted.log_factor;

    for (double t : t_grid) {
        auto f = [a, b, t](double s) {
            return std::pow(1.0 + t - s, -a) * std::pow(1.0 + s, -b);
        };
        const auto left = integrate_adaptive(f, 0.0, 0.5 * t, 1e-10);
        const auto right = integrate_adaptive(f, 0.5 * t, t, 1e-10);
        if (!left.converged || !right.converged)
            throw std::runtime_error("verify_integral_lemma: quadrature failed to converge at t = " +
                                     std::to_string(t));
        out.samples.emplace_back(t, left.value + right.value);
    }

    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const int m = static_cast<int>(out.samples.size());
    for (const auto& [t, I] : out.samples) {
        const double x = std::log1p(t);
        const double y = std::log(out.log_divided ? I / std::log(2.0 + t) : I);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    out.fitted_exponent = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    out.agree = std::abs(out.fitted_exponent - out.predicted.exponent) <= out.tolerance;
    return out;
}

double calibrate_epsilon(const ExperimentSpec& spec, double target_ratio, int max_halvings) {
    double eps = std::max(spec.u0.amplitude, spec.u1.amplitude);
    if (!(eps > 0.0)) throw std::invalid_argument("calibrate_epsilon: profiles carry no amplitude");

    for (int it = 0; it <= max_halvings; ++it) {
        ExperimentSpec probe = spec;
        if (probe.u0.kind != DataProfile::Kind::Zero) probe.u0.amplitude = eps;
        if (probe.u1.kind != DataProfile::Kind::Zero) probe.u1.amplitude = eps;
        probe.solver.horizon = std::min(probe.solver.horizon, 10.0);

        const NormWeights w =
            solution_norm_weights(probe.params, classify_regime(probe.params).regime);
        const StatePair state = build_initial_state(probe);
        const PicardResult pr = picard_solve(state, probe.solver_config(), 2, w);
        if (pr.distances.size() >= 2 && pr.distances[0] > 0.0 &&
            pr.distances[1] / pr.distances[0] < target_ratio)
            return eps;
        eps *= 0.5;
    }
    throw std::runtime_error("calibrate_epsilon: no contracting amplitude found");
}

}  // namespace sevo
