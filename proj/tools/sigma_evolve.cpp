#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sevo/harness.hpp"
#include "sevo/report.hpp"
#include "sevo/theory.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitBlowUp = 3;
constexpr int kExitVerification = 4;

std::filesystem::path resolve_out_dir(const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    if (const char* env = std::getenv("SIGMA_EVOLVE_OUT"); env && *env) return env;
    return "out";
}

sevo::Json load_config(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open config file " + path.string());
    try {
        return sevo::Json::parse(is);
    } catch (const sevo::Json::parse_error& e) {
        throw std::runtime_error("malformed JSON in " + path.string() + " at byte " +
                                 std::to_string(e.byte) + ": " + e.what());
    }
}

std::string range_str(const sevo::AdmissiblePRange& r) { return r.str(); }

void print_theory_human(const sevo::ModelParams& params) {
    const auto cls = sevo::classify_regime(params);
    std::cout << "regime: " << sevo::to_string(cls.regime) << "\n";
    std::cout << "  " << cls.reason << "\n";
    if (cls.boundary) std::cout << "  (boundary case)\n";
    if (!params.integer_dimension())
        std::cout << "  note: non-integer dimension n = " << params.n << "\n";

    const auto gn = sevo::gn_p_bounds(params);
    std::cout << "interpolation p-bounds: " << range_str(gn) << "\n";
    if (cls.regime == sevo::Regime::NotCovered) return;

    const auto ce = sevo::critical_exponent(params, cls.regime);
    if (ce.p1) std::cout << "critical exponent p1: " << *ce.p1 << "\n";
    if (ce.p2) std::cout << "critical exponent p2: " << *ce.p2 << "\n";

    const auto range = sevo::admissible_p_range(params);
    std::cout << "admissible p: " << range_str(range) << "\n";
    if (range.empty) std::cout << "  " << range.reason << "\n";

    const auto rates = sevo::decay_rates(params, cls.regime);
    std::cout << "decay rates: ||u||_Lq ~ (1+t)^" << rates.rate_u << ", gradient pair ~ (1+t)^"
              << rates.rate_grad << "\n";
    const auto w = sevo::solution_norm_weights(params, cls.regime);
    std::cout << "solution norm weights: w_u = " << w.w_u << ", w_grad = " << w.w_grad << "\n";

    if (params.p) {
        for (double r : {params.m2, params.q}) {
            const auto th = sevo::gn_theta(0.0, params.sigma, r * *params.p, params.q, params.n);
            std::cout << "GN theta for L^{" << (r == params.q ? "q*p" : "m2*p")
                      << "}: " << th.theta << (th.valid ? " (valid)" : " (outside [s/sigma, 1])")
                      << "\n";
        }
    }
}

sevo::Json theory_json(const sevo::ModelParams& params) {
    sevo::Json j;
    j["schema"] = 1;
    j["kind"] = "theory";
    j["params"] = {{"n", params.n},   {"sigma", params.sigma}, {"q", params.q},
                   {"m1", params.m1}, {"m2", params.m2}};
    if (params.p) j["params"]["p"] = *params.p;
    const auto cls = sevo::classify_regime(params);
    j["classification"] = {{"regime", sevo::to_string(cls.regime)},
                           {"reason", cls.reason},
                           {"boundary", cls.boundary}};
    const auto gn = sevo::gn_p_bounds(params);
    j["gn_p_bounds"] = {{"display", gn.str()}, {"empty", gn.empty}};
    if (cls.regime == sevo::Regime::NotCovered) return j;

    const auto ce = sevo::critical_exponent(params, cls.regime);
    if (ce.p1) j["p1"] = *ce.p1;
    if (ce.p2) j["p2"] = *ce.p2;
    const auto range = sevo::admissible_p_range(params);
    j["admissible_p"] = {{"display", range.str()}, {"empty", range.empty}};
    if (!range.empty) {
        j["admissible_p"]["lower"] = {{"value", range.lower.value},
                                      {"inclusive", range.lower.inclusive}};
        j["admissible_p"]["upper_finite"] = range.upper.finite;
        if (range.upper.finite)
            j["admissible_p"]["upper"] = {{"value", range.upper.value},
                                          {"inclusive", range.upper.inclusive}};
    } else {
        j["admissible_p"]["reason"] = range.reason;
    }
    const auto rates = sevo::decay_rates(params, cls.regime);
    j["decay_rates"] = {{"rate_u", rates.rate_u}, {"rate_grad", rates.rate_grad}};
    const auto w = sevo::solution_norm_weights(params, cls.regime);
    j["norm_weights"] = {{"w_u", w.w_u}, {"w_grad", w.w_grad}};
    if (params.p) {
        const auto th_m = sevo::gn_theta(0.0, params.sigma, params.m2 * *params.p, params.q, params.n);
        const auto th_q = sevo::gn_theta(0.0, params.sigma, params.q * *params.p, params.q, params.n);
        j["gn_theta"] = {{"m2p", {{"theta", th_m.theta}, {"valid", th_m.valid}}},
                         {"qp", {{"theta", th_q.theta}, {"valid", th_q.valid}}}};
    }
    return j;
}

sevo::Json example_table_json() {
    sevo::Json rows = sevo::Json::array();
    for (const auto& row : sevo::example_table()) {
        sevo::Json r;
        r["n"] = row.n;
        r["m1_region"] = row.m1_region;
        r["m2_region"] = row.m2_region;
        r["theorem"] = row.theorem;
        r["lower_formula"] = row.lower_formula;
        if (row.upper_printed_finite)
            r["upper"] = row.upper_printed;
        else
            r["upper"] = nullptr;
        if (row.upper_computed_finite)
            r["upper_computed"] = row.upper_computed;
        else
            r["upper_computed"] = nullptr;
        r["representative"] = {{"m1", row.rep_m1}, {"m2", row.rep_m2}, {"lower", row.rep_lower}};
        rows.push_back(r);
    }
    sevo::Json j;
    j["schema"] = 1;
    j["kind"] = "example_table";
    j["sigma"] = 1.0;
    j["q"] = 2.0;
    j["rows"] = rows;
    return j;
}

void print_example_table() {
    std::cout << "admissible ranges for sigma = 1, q = 2\n";
    std::cout << " n   m1 region         m2 region                        thm  p range\n";
    for (const auto& row : sevo::example_table()) {
        char line[160];
        std::string upper = row.upper_printed_finite
                                ? (", " + std::to_string(static_cast<int>(row.upper_printed)) + "]")
                                : ", inf)";
        std::snprintf(line, sizeof(line), " %-3g %-17s %-32s %d    p in (%s%s", row.n,
                      row.m1_region.c_str(), row.m2_region.c_str(), row.theorem,
                      row.lower_formula.c_str(), upper.c_str());
        std::cout << line << "\n";
        std::snprintf(line, sizeof(line),
                      "      at m1 = %g, m2 = %g: lower endpoint = %.10g", row.rep_m1, row.rep_m2,
                      row.rep_lower);
        std::cout << line << "\n";
    }
}

int cmd_theory(const std::vector<double>& vals, std::optional<double> p, bool example, bool json) {
    if (example) {
        if (json)
            std::cout << example_table_json().dump(2) << "\n";
        else
            print_example_table();
        return kExitOk;
    }
    try {
        sevo::ModelParams params(vals[0], vals[1], vals[2], vals[3], vals[4], p);
        if (json)
            std::cout << theory_json(params).dump(2) << "\n";
        else
            print_theory_human(params);
        return kExitOk;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
}

int cmd_simulate(const std::string& config_path, const std::string& out_flag, bool strict) {
    try {
        const auto spec = sevo::experiment_spec_from_json(load_config(config_path));
        const double margin = sevo::wrap_guard_margin(spec);
        if (strict && margin < 1.0) {
            std::cerr << "error: wrap-around guard violated (margin " << margin
                      << ") and --strict is set\n";
            return kExitConfig;
        }
        const auto report = sevo::run_decay_experiment(spec);
        const auto files = sevo::emit_decay_report(resolve_out_dir(out_flag), report, spec);
        for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
        std::cout << "report: " << files.report_json.string() << "\n";
        if (report.trajectory.outcome == sevo::Outcome::BlowUp) {
            std::cout << "outcome: blow-up at t = " << report.trajectory.blowup_time << "\n";
            return kExitBlowUp;
        }
        std::cout << "outcome: completed\n";
        if (report.fit_u)
            std::cout << "||u|| slope: measured " << report.fit_u->slope << ", theory "
                      << report.theory.rate_u << "\n";
        if (report.fit_grad)
            std::cout << "gradient pair slope: measured " << report.fit_grad->slope << ", theory "
                      << report.theory.rate_grad << "\n";
        return kExitOk;
    } catch (const sevo::Json::parse_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
}

int cmd_sweep(const std::string& config_path, const std::string& out_flag, int workers,
              bool strict) {
    try {
        sevo::Json j = load_config(config_path);
        if (!j.contains("sweep"))
            throw std::runtime_error("sweep config requires a \"sweep\" section");
        const sevo::Json sj = j.at("sweep");
        j.erase("sweep");
        const auto spec = sevo::experiment_spec_from_json(j);

        std::vector<double> p_grid;
        if (sj.contains("p_grid")) {
            p_grid = sj.at("p_grid").get<std::vector<double>>();
        } else {
            const double lo = sj.at("p_min").get<double>();
            const double hi = sj.at("p_max").get<double>();
            const double step = sj.at("p_step").get<double>();
            if (!(step > 0.0)) throw std::runtime_error("sweep.p_step must be positive");
            for (double p = lo; p <= hi + 1e-12; p += step) p_grid.push_back(p);
        }
        const double epsilon = sj.at("epsilon").get<double>();

        if (strict && sevo::wrap_guard_margin(spec) < 1.0) {
            std::cerr << "error: wrap-around guard violated and --strict is set\n";
            return kExitConfig;
        }
        const auto report = sevo::critical_sweep(spec, p_grid, epsilon, workers);
        const auto files =
            sevo::emit_sweep_report(resolve_out_dir(out_flag), spec.name, report, spec);
        for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
        std::cout << "report: " << files.report_json.string() << "\n";
        for (const auto& pt : report.points) {
            std::cout << "  p = " << pt.p << ": " << sevo::to_string(pt.cls);
            if (pt.completed) std::cout << " (slope " << pt.slope << ")";
            std::cout << "\n";
        }
        if (report.bracket)
            std::cout << "empirical threshold bracket: [" << report.bracket->first << ", "
                      << report.bracket->second << "]\n";
        else
            std::cout << "empirical threshold bracket: none found\n";
        if (report.theory_p1) std::cout << "theory p1: " << *report.theory_p1 << "\n";
        if (report.theory_p2) std::cout << "theory p2: " << *report.theory_p2 << "\n";
        return kExitOk;
    } catch (const sevo::Json::parse_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
}

int cmd_lemma(double a, double b, double tmin, double tmax, int points, bool json,
              const std::string& out_flag, bool emit) {
    try {
        std::vector<double> grid;
        for (int i = 0; i < points; ++i)
            grid.push_back(tmin * std::pow(tmax / tmin, static_cast<double>(i) / (points - 1)));
        const auto v = sevo::verify_integral_lemma(a, b, grid);
        if (emit) {
            const auto files = sevo::emit_lemma_report(resolve_out_dir(out_flag),
                                                       "lemma", v);
            std::cout << "report: " << files.report_json.string() << "\n";
        }
        if (json) {
            std::cout << sevo::to_json(v).dump(2) << "\n";
        } else {
            const char* branch =
                v.predicted.branch == sevo::IntegralBranch::MinDecay
                    ? "MinDecay"
                    : (v.predicted.branch == sevo::IntegralBranch::MinDecayLog ? "MinDecayLog"
                                                                               : "Growth");
            std::cout << branch << ", predicted " << v.predicted.exponent
                      << (v.predicted.log_factor ? " (log factor)" : "") << ", fitted "
                      << v.fitted_exponent << ", " << (v.agree ? "agree" : "DISAGREE") << "\n";
        }
        return v.agree ? kExitOk : kExitVerification;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
}

int cmd_report(const std::string& path) {
    try {
        const sevo::Json j = load_config(path);
        if (!j.contains("schema") || j.at("schema").get<int>() != 1)
            throw std::runtime_error("unsupported or missing schema version");
        const std::string kind = j.at("kind").get<std::string>();
        std::cout << "kind: " << kind << "\n";
        if (j.contains("name")) std::cout << "name: " << j.at("name").get<std::string>() << "\n";
        if (j.contains("spec")) {
            const auto spec = sevo::experiment_spec_from_json(j.at("spec"));
            std::cout << "spec: valid (grid";
            for (int s : spec.grid.sizes) std::cout << " " << s;
            std::cout << ", L = " << spec.grid.half_length << ", horizon = " << spec.solver.horizon
                      << ")\n";
        }
        if (kind == "decay") {
            std::cout << "outcome: " << j.at("outcome").get<std::string>() << "\n";
            if (j.contains("measured") && j.at("measured").contains("u")) {
                const auto& u = j.at("measured").at("u");
                std::cout << "||u|| slope: " << u.at("slope").get<double>() << " vs theory "
                          << u.at("theory_rate").get<double>() << "\n";
            }
        } else if (kind == "sweep") {
            if (!j.at("empirical_threshold").is_null())
                std::cout << "bracket: [" << j.at("empirical_threshold").at("lower").get<double>()
                          << ", " << j.at("empirical_threshold").at("upper").get<double>() << "]\n";
        } else if (kind == "lemma") {
            std::cout << "agree: " << (j.at("agree").get<bool>() ? "yes" : "no") << "\n";
        } else if (kind != "theory" && kind != "example_table") {
            throw std::runtime_error("unknown report kind \"" + kind + "\"");
        }
        const auto& warnings = j.contains("warnings") ? j.at("warnings") : sevo::Json::array();
        for (const auto& w : warnings) std::cout << "warning: " << w.get<std::string>() << "\n";
        std::cout << "valid report\n";
        return kExitOk;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for semi-linear structurally damped sigma-evolution models"};
    app.require_subcommand(1);

    // theory
    auto* theory = app.add_subcommand("theory", "evaluate regimes, exponents and rates");
    double n = NAN, sigma = NAN, q = NAN, m1 = NAN, m2 = NAN, p = NAN;
    bool example = false, theory_json_flag = false;
    theory->add_option("--n", n, "spatial dimension");
    theory->add_option("--sigma", sigma, "fractional order");
    theory->add_option("--q", q, "base Lebesgue exponent");
    theory->add_option("--m1", m1, "position-data integrability");
    theory->add_option("--m2", m2, "velocity-data integrability");
    theory->add_option("--p", p, "nonlinearity exponent");
    theory->add_flag("--example", example, "print the canonical sigma=1, q=2 range table");
    theory->add_flag("--json", theory_json_flag, "machine-readable output");

    // simulate
    auto* simulate = app.add_subcommand("simulate", "run a decay experiment from a JSON config");
    std::string sim_config, sim_out;
    bool sim_strict = false;
    simulate->add_option("config", sim_config, "experiment config file")->required();
    simulate->add_option("--out", sim_out, "output directory");
    simulate->add_flag("--strict", sim_strict, "treat guard warnings as errors");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "sweep the nonlinearity exponent");
    std::string sweep_config, sweep_out;
    int workers = 1;
    bool sweep_strict = false;
    sweep->add_option("config", sweep_config, "sweep config file")->required();
    sweep->add_option("--out", sweep_out, "output directory");
    sweep->add_option("--workers", workers, "concurrent sweep points")->check(CLI::PositiveNumber);
    sweep->add_flag("--strict", sweep_strict, "treat guard warnings as errors");

    // lemma
    auto* lemma = app.add_subcommand("lemma", "verify the convolution integral bound");
    double la = 0.0, lb = 0.0, tmin = 1e2, tmax = 1e4;
    int lpoints = 12;
    bool lemma_json = false, lemma_emit = false;
    std::string lemma_out;
    lemma->add_option("a", la, "first exponent")->required();
    lemma->add_option("b", lb, "second exponent")->required();
    lemma->add_option("--tmin", tmin, "grid start");
    lemma->add_option("--tmax", tmax, "grid end");
    lemma->add_option("--points", lpoints, "grid points")->check(CLI::Range(6, 1000));
    lemma->add_flag("--json", lemma_json, "machine-readable output");
    lemma->add_flag("--emit", lemma_emit, "also write report files");
    lemma->add_option("--out", lemma_out, "output directory");

    // report
    auto* report = app.add_subcommand("report", "validate and summarize a report.json");
    std::string report_path;
    report->add_option("path", report_path, "report file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    if (theory->parsed()) {
        if (!example) {
            for (double v : {n, sigma, q, m1, m2}) {
                if (std::isnan(v)) {
                    std::cerr << "error: --n, --sigma, --q, --m1, --m2 are required without "
                                 "--example\n";
                    return kExitConfig;
                }
            }
        }
        std::optional<double> popt;
        if (!std::isnan(p)) popt = p;
        return cmd_theory({n, sigma, q, m1, m2}, popt, example, theory_json_flag);
    }
    if (simulate->parsed()) return cmd_simulate(sim_config, sim_out, sim_strict);
    if (sweep->parsed()) return cmd_sweep(sweep_config, sweep_out, workers, sweep_strict);
    if (lemma->parsed())
        return cmd_lemma(la, lb, tmin, tmax, lpoints, lemma_json, lemma_out, lemma_emit);
    if (report->parsed()) return cmd_report(report_path);
    return kExitConfig;
}
