#include "sevo/report.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <stdexcept>

namespace sevo {

namespace {

constexpr int kSchemaVersion = 1;

std::string timestamp_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void check_keys(const Json& j, const std::set<std::string>& allowed, const std::string& ctx) {
    if (!j.is_object()) throw std::invalid_argument(ctx + ": expected an object");
    for (const auto& [key, _] : j.items()) {
        if (!allowed.count(key))
            throw std::invalid_argument(ctx + ": unknown key \"" + key + "\"");
    }
}

Json profile_to_json(const DataProfile& p) {
    Json j;
    switch (p.kind) {
        case DataProfile::Kind::Zero:
            j["type"] = "zero";
            break;
        case DataProfile::Kind::Gaussian:
            j["type"] = "gaussian";
            j["width"] = p.scale;
            j["amplitude"] = p.amplitude;
            break;
        case DataProfile::Kind::Bump:
            j["type"] = "bump";
            j["radius"] = p.scale;
            j["amplitude"] = p.amplitude;
            break;
    }
    return j;
}

DataProfile profile_from_json(const Json& j, const std::string& ctx) {
    DataProfile p;
    const std::string type = j.at("type").get<std::string>();
    if (type == "zero") {
        check_keys(j, {"type"}, ctx);
        p.kind = DataProfile::Kind::Zero;
    } else if (type == "gaussian") {
        check_keys(j, {"type", "width", "amplitude"}, ctx);
        p.kind = DataProfile::Kind::Gaussian;
        p.scale = j.at("width").get<double>();
        p.amplitude = j.at("amplitude").get<double>();
    } else if (type == "bump") {
        check_keys(j, {"type", "radius", "amplitude"}, ctx);
        p.kind = DataProfile::Kind::Bump;
        p.scale = j.at("radius").get<double>();
        p.amplitude = j.at("amplitude").get<double>();
    } else {
        throw std::invalid_argument(ctx + ": unknown profile type \"" + type + "\"");
    }
    return p;
}

Json fit_to_json(const DecayFit& f) {
    Json j;
    j["slope"] = f.slope;
    j["intercept"] = f.intercept;
    j["r2"] = f.r2;
    j["window"] = {{"t_min", f.window.first}, {"t_max", f.window.second}};
    j["points"] = f.points;
    return j;
}

Json range_to_json(const AdmissiblePRange& r) {
    Json j;
    j["empty"] = r.empty;
    j["display"] = r.str();
    if (!r.empty) {
        j["lower"] = {{"value", r.lower.value}, {"inclusive", r.lower.inclusive}};
        Json upper;
        upper["finite"] = r.upper.finite;
        if (r.upper.finite) {
            upper["value"] = r.upper.value;
            upper["inclusive"] = r.upper.inclusive;
        }
        j["upper"] = upper;
    } else {
        j["reason"] = r.reason;
    }
    return j;
}

void write_csv(const std::filesystem::path& path,
               const std::string& header,
               const std::vector<std::vector<double>>& rows) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
    os << header << '\n';
    char buf[32];
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            std::snprintf(buf, sizeof(buf), "%.17g", row[i]);
            os << (i ? "," : "") << buf;
        }
        os << '\n';
    }
    if (!os) throw std::runtime_error("short write to " + path.string());
}

std::filesystem::path prepare_dir(const std::filesystem::path& out_dir, const std::string& name) {
    const auto dir = out_dir / name;
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());
    return dir;
}

void write_json_file(const Json& j, const std::filesystem::path& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
    os << j.dump(2) << '\n';
    if (!os) throw std::runtime_error("short write to " + path.string());
}

}  // namespace

Json to_json(const ExperimentSpec& spec) {
    Json j;
    j["name"] = spec.name;
    j["params"] = {{"n", spec.params.n}, {"sigma", spec.params.sigma}, {"q", spec.params.q},
                   {"m1", spec.params.m1}, {"m2", spec.params.m2}};
    if (spec.params.p)
        j["params"]["p"] = *spec.params.p;
    j["grid"] = {{"sizes", spec.grid.sizes}, {"half_length", spec.grid.half_length}};
    j["data"] = {{"u0", profile_to_json(spec.u0)},
                 {"u1", profile_to_json(spec.u1)},
                 {"subtract_mean", spec.subtract_mean},
                 {"random_center", spec.random_center}};
    Json solver;
    solver["nonlinear"] = spec.solver.nonlinear;
    solver["dt"] = spec.solver.dt;
    solver["horizon"] = spec.solver.horizon;
    solver["integrator"] = spec.solver.integrator == Integrator::Etd2Rk ? "etd2rk" : "etd1";
    solver["oversample"] = spec.solver.oversample;
    solver["blowup_threshold"] = spec.solver.blowup_threshold;
    solver["record_dt"] = spec.solver.record_dt;
    j["solver"] = solver;
    j["fit_window"] = {{"t_min", spec.fit_window.first}, {"t_max", spec.fit_window.second}};
    j["seed"] = spec.seed;
    return j;
}

ExperimentSpec experiment_spec_from_json(const Json& j) {
    check_keys(j, {"name", "params", "grid", "data", "solver", "fit_window", "seed"}, "spec");

    const Json& pj = j.at("params");
    check_keys(pj, {"n", "sigma", "q", "m1", "m2", "p"}, "params");
    std::optional<double> p;
    if (pj.contains("p")) p = pj.at("p").get<double>();
    ModelParams params(pj.at("n").get<double>(), pj.at("sigma").get<double>(),
                       pj.at("q").get<double>(), pj.at("m1").get<double>(),
                       pj.at("m2").get<double>(), p);

    ExperimentSpec spec(params);
    if (j.contains("name")) spec.name = j.at("name").get<std::string>();

    const Json& gj = j.at("grid");
    check_keys(gj, {"sizes", "half_length"}, "grid");
    spec.grid.sizes = gj.at("sizes").get<std::vector<int>>();
    spec.grid.half_length = gj.at("half_length").get<double>();

    const Json& dj = j.at("data");
    check_keys(dj, {"u0", "u1", "subtract_mean", "random_center"}, "data");
    spec.u0 = profile_from_json(dj.at("u0"), "data.u0");
    spec.u1 = profile_from_json(dj.at("u1"), "data.u1");
    if (dj.contains("subtract_mean")) spec.subtract_mean = dj.at("subtract_mean").get<bool>();
    if (dj.contains("random_center")) spec.random_center = dj.at("random_center").get<bool>();

    const Json& sj = j.at("solver");
    check_keys(sj, {"nonlinear", "dt", "horizon", "integrator", "oversample", "blowup_threshold",
                    "record_dt"},
               "solver");
    if (sj.contains("nonlinear")) spec.solver.nonlinear = sj.at("nonlinear").get<bool>();
    spec.solver.dt = sj.at("dt").get<double>();
    spec.solver.horizon = sj.at("horizon").get<double>();
    if (sj.contains("integrator")) {
        const std::string name = sj.at("integrator").get<std::string>();
        if (name == "etd2rk")
            spec.solver.integrator = Integrator::Etd2Rk;
        else if (name == "etd1")
            spec.solver.integrator = Integrator::Etd1;
        else
            throw std::invalid_argument("solver.integrator: unknown integrator \"" + name + "\"");
    }
    if (sj.contains("oversample")) spec.solver.oversample = sj.at("oversample").get<double>();
    if (sj.contains("blowup_threshold"))
        spec.solver.blowup_threshold = sj.at("blowup_threshold").get<double>();
    if (sj.contains("record_dt")) spec.solver.record_dt = sj.at("record_dt").get<double>();

    if (j.contains("fit_window")) {
        const Json& fw = j.at("fit_window");
        check_keys(fw, {"t_min", "t_max"}, "fit_window");
        spec.fit_window = {fw.at("t_min").get<double>(), fw.at("t_max").get<double>()};
    }
    if (j.contains("seed")) spec.seed = j.at("seed").get<std::uint64_t>();
    return spec;
}

Json to_json(const DecayReport& report, const ExperimentSpec& spec) {
    Json j;
    j["schema"] = kSchemaVersion;
    j["kind"] = "decay";
    j["name"] = report.name;
    j["generated_at"] = timestamp_now();
    j["spec"] = to_json(spec);
    j["warnings"] = report.warnings;
    j["classification"] = {{"regime", to_string(report.classification.regime)},
                           {"reason", report.classification.reason},
                           {"boundary", report.classification.boundary}};
    j["theory"] = {{"rate_u", report.theory.rate_u},
                   {"rate_grad", report.theory.rate_grad},
                   {"p_range", range_to_json(report.p_range)}};
    j["initial_data"] = {{"subtracted_mean_u0", report.subtracted_mean_u0},
                         {"subtracted_mean_u1", report.subtracted_mean_u1}};
    j["outcome"] = report.trajectory.outcome == Outcome::Completed ? "completed" : "blowup";
    if (report.trajectory.outcome == Outcome::BlowUp)
        j["blowup_time"] = report.trajectory.blowup_time;

    Json measured;
    if (report.fit_u) {
        measured["u"] = fit_to_json(*report.fit_u);
        measured["u"]["theory_rate"] = report.theory.rate_u;
        measured["u"]["difference"] = report.fit_u->slope - report.theory.rate_u;
    }
    if (report.fit_grad) {
        measured["grad_pair"] = fit_to_json(*report.fit_grad);
        measured["grad_pair"]["theory_rate"] = report.theory.rate_grad;
        measured["grad_pair"]["difference"] = report.fit_grad->slope - report.theory.rate_grad;
    }
    j["measured"] = measured;
    j["records"] = report.trajectory.times.size();
    return j;
}

Json to_json(const SweepReport& report, const ExperimentSpec& spec) {
    Json j;
    j["schema"] = kSchemaVersion;
    j["kind"] = "sweep";
    j["name"] = spec.name;
    j["generated_at"] = timestamp_now();
    j["spec"] = to_json(spec);
    j["warnings"] = report.warnings;
    j["epsilon"] = report.epsilon;
    j["p_grid"] = report.p_grid;
    Json points = Json::array();
    for (const auto& pt : report.points) {
        Json pj;
        pj["p"] = pt.p;
        pj["classification"] = to_string(pt.cls);
        pj["slope"] = pt.slope;
        pj["completed"] = pt.completed;
        if (pt.cls == SweepClass::BlowUp) pj["blowup_time"] = pt.blowup_time;
        if (!pt.error.empty()) pj["error"] = pt.error;
        points.push_back(pj);
    }
    j["points"] = points;
    if (report.bracket)
        j["empirical_threshold"] = {{"lower", report.bracket->first},
                                    {"upper", report.bracket->second}};
    else
        j["empirical_threshold"] = nullptr;
    if (report.theory_p1) j["theory_p1"] = *report.theory_p1;
    if (report.theory_p2) j["theory_p2"] = *report.theory_p2;
    j["monotonicity_violation"] = report.monotonicity_violation;
    return j;
}

Json to_json(const LemmaVerification& v) {
    Json j;
    j["schema"] = kSchemaVersion;
    j["kind"] = "lemma";
    j["generated_at"] = timestamp_now();
    j["a"] = v.a;
    j["b"] = v.b;
    const char* branch = v.predicted.branch == IntegralBranch::MinDecay
                             ? "min_decay"
                             : (v.predicted.branch == IntegralBranch::MinDecayLog ? "min_decay_log"
                                                                                  : "growth");
    j["branch"] = branch;
    j["predicted_exponent"] = v.predicted.exponent;
    j["log_factor"] = v.predicted.log_factor;
    j["fitted_exponent"] = v.fitted_exponent;
    j["log_divided"] = v.log_divided;
    j["tolerance"] = v.tolerance;
    j["agree"] = v.agree;
    j["samples"] = v.samples.size();
    return j;
}

void write_trajectory_csv(const Trajectory& traj, const std::filesystem::path& path) {
    std::vector<std::vector<double>> rows;
    rows.reserve(traj.times.size());
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const auto& r = traj.records[i];
        rows.push_back({traj.times[i], r.lq, r.lm2p, r.lqp, r.seminorm, r.dtnorm});
    }
    write_csv(path, "t,norm_lq,norm_lm2p,norm_lqp,seminorm,dtnorm", rows);
}

EmittedFiles emit_decay_report(const std::filesystem::path& out_dir, const DecayReport& report,
                               const ExperimentSpec& spec) {
    const auto dir = prepare_dir(out_dir, report.name);
    EmittedFiles files;
    files.report_json = dir / "report.json";
    write_json_file(to_json(report, spec), files.report_json);

    const auto traj_csv = dir / "trajectory.csv";
    write_trajectory_csv(report.trajectory, traj_csv);
    files.csv_files.push_back(traj_csv);

    // measured series with the fitted-rate envelope anchored at the first
    // window sample
    auto envelope_rows = [&](const std::vector<std::pair<double, double>>& series, double rate,
                             const std::optional<DecayFit>& fit) {
        double anchor_t = series.empty() ? 0.0 : series.front().first;
        double anchor_v = series.empty() ? 0.0 : series.front().second;
        if (fit) {
            for (const auto& [t, v] : series) {
                if (t >= fit->window.first) { anchor_t = t; anchor_v = v; break; }
            }
        }
        const double c = anchor_v / std::pow(1.0 + anchor_t, rate);
        std::vector<std::vector<double>> rows;
        rows.reserve(series.size());
        for (const auto& [t, v] : series)
            rows.push_back({t, v, c * std::pow(1.0 + t, rate)});
        return rows;
    };
    const auto u_csv = dir / "series_u.csv";
    write_csv(u_csv, "t,measured,theory_envelope",
              envelope_rows(report.trajectory.series_lq(), report.theory.rate_u, report.fit_u));
    files.csv_files.push_back(u_csv);

    const auto g_csv = dir / "series_grad.csv";
    write_csv(g_csv, "t,measured,theory_envelope",
              envelope_rows(report.trajectory.series_grad(), report.theory.rate_grad,
                            report.fit_grad));
    files.csv_files.push_back(g_csv);
    return files;
}

EmittedFiles emit_sweep_report(const std::filesystem::path& out_dir, const std::string& name,
                               const SweepReport& report, const ExperimentSpec& spec) {
    const auto dir = prepare_dir(out_dir, name);
    EmittedFiles files;
    files.report_json = dir / "report.json";
    write_json_file(to_json(report, spec), files.report_json);

    const auto sweep_csv = dir / "sweep.csv";
    std::ofstream os(sweep_csv);
    if (!os) throw std::runtime_error("cannot open " + sweep_csv.string() + " for writing");
    os << "p,classification,slope,completed,blowup_time\n";
    char buf[32];
    for (const auto& pt : report.points) {
        std::snprintf(buf, sizeof(buf), "%.17g", pt.p);
        os << buf << ',' << to_string(pt.cls) << ',';
        std::snprintf(buf, sizeof(buf), "%.17g", pt.slope);
        os << buf << ',' << (pt.completed ? 1 : 0) << ',';
        std::snprintf(buf, sizeof(buf), "%.17g", pt.blowup_time);
        os << buf << '\n';
    }
    files.csv_files.push_back(sweep_csv);
    return files;
}

EmittedFiles emit_lemma_report(const std::filesystem::path& out_dir, const std::string& name,
                               const LemmaVerification& v) {
    const auto dir = prepare_dir(out_dir, name);
    EmittedFiles files;
    files.report_json = dir / "report.json";
    write_json_file(to_json(v), files.report_json);

    const auto csv = dir / "series_integral.csv";
    std::vector<std::vector<double>> rows;
    for (const auto& [t, val] : v.samples) rows.push_back({t, val});
    write_csv(csv, "t,integral", rows);
    files.csv_files.push_back(csv);
    return files;
}

}  // namespace sevo
