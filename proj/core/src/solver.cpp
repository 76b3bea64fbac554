#include "sevo/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace sevo {

void SolverConfig::validate() const {
    if (!(dt > 0.0)) throw std::invalid_argument("SolverConfig: dt must be positive");
    if (!(horizon >= dt)) throw std::invalid_argument("SolverConfig: horizon must be >= dt");
    if (nonlinear && !(p > 1.0)) throw std::invalid_argument("SolverConfig: p must exceed 1");
    if (!(oversample >= 1.0)) throw std::invalid_argument("SolverConfig: oversample must be >= 1");
    if (!(sigma >= 1.0)) throw std::invalid_argument("SolverConfig: sigma must be >= 1");
    if (!(q >= 1.0)) throw std::invalid_argument("SolverConfig: q must be >= 1");
    if (!(m2 >= 1.0)) throw std::invalid_argument("SolverConfig: m2 must be >= 1");
    if (!(blowup_threshold > 1.0))
        throw std::invalid_argument("SolverConfig: blowup_threshold must exceed 1");
}

std::vector<std::pair<double, double>> Trajectory::series_lq() const {
    std::vector<std::pair<double, double>> out;
    out.reserve(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) out.emplace_back(times[i], records[i].lq);
    return out;
}

std::vector<std::pair<double, double>> Trajectory::series_grad() const {
    std::vector<std::pair<double, double>> out;
    out.reserve(times.size());
    for (std::size_t i = 0; i < times.size(); ++i)
        out.emplace_back(times[i], records[i].seminorm + records[i].dtnorm);
    return out;
}

namespace {

struct SourceSpectrum {
    ComplexVec coeffs;
    double sup = 0.0;
    bool finite = true;
};

// Dealiased spectrum of |u|^p from the spectrum of u.
SourceSpectrum source_spectrum(const std::vector<int>& sizes, const ComplexVec& coeffs, double p,
                               double oversample) {
    const std::vector<int> fine = refined_sizes(sizes, oversample);
    const bool refined = fine != sizes;
    ComplexVec buf = refined ? pad_spectrum(sizes, coeffs, fine) : coeffs;
    fft_backward(fine, buf);

    SourceSpectrum out;
    auto transform = [&](auto&& power) {
        double sup = 0.0;
        bool finite = true;
        for (auto& c : buf) {
            const double v = c.real();
            if (!std::isfinite(v)) finite = false;
            const double av = std::abs(v);
            sup = std::max(sup, av);
            c = {power(av), 0.0};
        }
        out.sup = sup;
        out.finite = finite;
    };
    if (p == 2.0)
        transform([](double av) { return av * av; });
    else if (p == 3.0)
        transform([](double av) { return av * av * av; });
    else if (p == 4.0)
        transform([](double av) { const double s = av * av; return s * s; });
    else
        transform([p](double av) { return std::pow(av, p); });

    if (!out.finite) {
        out.coeffs.assign(coeffs.size(), {0.0, 0.0});
        return out;
    }
    fft_forward(fine, buf);
    out.coeffs = refined ? truncate_spectrum(fine, buf, sizes) : std::move(buf);
    return out;
}

struct StepStatus {
    double sup = 0.0;
    bool finite = true;
};

StepStatus step_inplace(ComplexVec& u, ComplexVec& v, const PropagatorTable& table,
                        const SolverConfig& cfg) {
    if (!cfg.nonlinear) {
        table.apply(u, v);
        return {};
    }
    const auto& sizes = table.grid()->sizes();
    const std::size_t n = u.size();
    const double dt = table.dt();

    SourceSpectrum nt = source_spectrum(sizes, u, cfg.p, cfg.oversample);
    if (!nt.finite) return {nt.sup, false};

    ComplexVec up(n), vp(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto uu = u[i], vv = v[i], f = nt.coeffs[i];
        up[i] = table.g1()[i] * uu + table.g2()[i] * vv + table.w1()[i] * f;
        vp[i] = table.dg1()[i] * uu + table.dg2()[i] * vv + table.g2()[i] * f;
    }
    if (cfg.integrator == Integrator::Etd1) {
        u = std::move(up);
        v = std::move(vp);
        return {nt.sup, true};
    }

    SourceSpectrum np = source_spectrum(sizes, up, cfg.p, cfg.oversample);
    if (!np.finite) {
        u = std::move(up);
        v = std::move(vp);
        return {std::max(nt.sup, np.sup), false};
    }
    for (std::size_t i = 0; i < n; ++i) {
        const auto uu = u[i], vv = v[i];
        const auto f0 = nt.coeffs[i], f1 = np.coeffs[i];
        const double m1dt = table.m1()[i] / dt;
        const double m2dt = table.g2()[i] - table.w1()[i] / dt;  // int s*dg2(t-s) endpoint part
        u[i] = table.g1()[i] * uu + table.g2()[i] * vv + m1dt * f0 +
               (table.w1()[i] - m1dt) * f1;
        v[i] = table.dg1()[i] * uu + table.dg2()[i] * vv + m2dt * f0 +
               (table.g2()[i] - m2dt) * f1;
    }
    return {std::max(nt.sup, np.sup), true};
}

NormRecord make_record(const GridPtr& grid, const ComplexVec& u, const ComplexVec& v,
                       const SolverConfig& cfg) {
    Field uf = Field::from_spectrum(grid, u);
    Field vf = Field::from_spectrum(grid, v);
    NormRecord rec;
    rec.lq = lq_norm(uf, cfg.q);
    rec.lm2p = lq_norm(uf, cfg.record_exponent_m2p());
    rec.lqp = lq_norm(uf, cfg.record_exponent_qp());
    rec.seminorm = sobolev_seminorm(uf, cfg.sigma, cfg.q);
    rec.dtnorm = lq_norm(vf, cfg.q);
    return rec;
}

long step_count(const SolverConfig& cfg) {
    const double ratio = cfg.horizon / cfg.dt;
    const long steps = std::lround(ratio);
    if (steps < 1 || std::abs(ratio - static_cast<double>(steps)) > 1e-6)
        throw std::invalid_argument("solver: horizon must be an integer multiple of dt");
    return steps;
}

}  // namespace

Field nonlinearity(const Field& field, double p, double oversample) {
    if (!(p > 0.0)) throw std::invalid_argument("nonlinearity: p must be positive");
    if (!(oversample >= 1.0)) throw std::invalid_argument("nonlinearity: oversample must be >= 1");
    SourceSpectrum s = source_spectrum(field.grid()->sizes(), field.spectrum(), p, oversample);
    if (!s.finite) throw std::domain_error("nonlinearity: non-finite samples in input field");
    return Field::from_spectrum(field.grid(), std::move(s.coeffs));
}

StatePair step(const StatePair& state, const PropagatorTable& table, const SolverConfig& cfg) {
    cfg.validate();
    if (!state.u.grid()->same_layout(*table.grid()))
        throw std::invalid_argument("step: state and table grids differ");
    if (std::abs(cfg.dt - table.dt()) > 1e-12 * cfg.dt)
        throw std::invalid_argument("step: cfg.dt does not match the propagator table");
    ComplexVec u = state.u.spectrum();
    ComplexVec v = state.v.spectrum();
    step_inplace(u, v, table, cfg);
    const auto& grid = state.u.grid();
    return StatePair(Field::from_spectrum(grid, std::move(u)),
                     Field::from_spectrum(grid, std::move(v)), state.time + table.dt());
}

Trajectory evolve(const StatePair& initial, const SolverConfig& cfg) {
    cfg.validate();
    const auto grid = initial.u.grid();
    const PropagatorTable table(grid, cfg.sigma, cfg.dt);
    const long steps = step_count(cfg);
    const double record_dt = cfg.record_dt > 0.0 ? cfg.record_dt : cfg.horizon / 100.0;
    const long record_every = std::max<long>(1, std::lround(record_dt / cfg.dt));

    ComplexVec u = initial.u.spectrum();
    ComplexVec v = initial.v.spectrum();
    const double sup0 = sup_norm(initial.u);

    Trajectory traj;
    traj.times.push_back(initial.time);
    traj.records.push_back(make_record(grid, u, v, cfg));

    for (long s = 1; s <= steps; ++s) {
        const StepStatus st = step_inplace(u, v, table, cfg);
        const double t = initial.time + static_cast<double>(s) * cfg.dt;
        if (cfg.nonlinear &&
            (!st.finite || (sup0 > 0.0 && st.sup > cfg.blowup_threshold * sup0))) {
            traj.outcome = Outcome::BlowUp;
            traj.blowup_time = t;
            break;
        }
        if (s % record_every == 0 || s == steps) {
            traj.times.push_back(t);
            traj.records.push_back(make_record(grid, u, v, cfg));
        }
    }
    return traj;
}

PicardResult picard_solve(const StatePair& initial, const SolverConfig& cfg, int iterations,
                          NormWeights weights) {
    cfg.validate();
    if (iterations < 2) throw std::invalid_argument("picard_solve: need at least 2 iterations");
    const auto grid = initial.u.grid();
    const PropagatorTable table(grid, cfg.sigma, cfg.dt);
    const long J = step_count(cfg);
    const std::size_t n = grid->point_count();
    const double dt = cfg.dt;

    const ComplexVec u0 = initial.u.spectrum();
    const ComplexVec v0 = initial.v.spectrum();

    // Source history of the previous iterate; all-zero history makes the
    // first sweep reproduce the pure linear flow.
    std::vector<ComplexVec> sources(static_cast<std::size_t>(J) + 1,
                                    ComplexVec(n, {0.0, 0.0}));

    PicardResult result;
    ComplexVec A(n), B(n), C(n), D(n), dA(n), dB(n), dC(n), dD(n), Lu(n), Lv(n), uj(n), vj(n),
        delta(n);
    const std::complex<double> zero(0.0, 0.0);

    for (int sweep = 0; sweep <= iterations; ++sweep) {
        const bool final_sweep = sweep == iterations;
        std::fill(A.begin(), A.end(), zero);
        std::fill(B.begin(), B.end(), zero);
        std::fill(C.begin(), C.end(), zero);
        std::fill(D.begin(), D.end(), zero);
        std::fill(dA.begin(), dA.end(), zero);
        std::fill(dB.begin(), dB.end(), zero);
        std::fill(dC.begin(), dC.end(), zero);
        std::fill(dD.begin(), dD.end(), zero);
        Lu = u0;
        Lv = v0;
        double distance = 0.0;
        Trajectory traj;

        for (long j = 0; j <= J; ++j) {
            const double t = initial.time + static_cast<double>(j) * dt;
            if (j > 0) {
                table.apply(A, B);
                table.apply(C, D);
                table.apply(Lu, Lv);
                if (!final_sweep) {
                    table.apply(dA, dB);
                    table.apply(dC, dD);
                }
            }
            ComplexVec oldF = std::move(sources[static_cast<std::size_t>(j)]);
            for (std::size_t i = 0; i < n; ++i) B[i] += oldF[i];
            if (j == 0) D = oldF;

            // trapezoid-in-source, exact-kernel integral
            for (std::size_t i = 0; i < n; ++i) {
                uj[i] = Lu[i] + dt * (A[i] - 0.5 * C[i]);
                vj[i] = Lv[i] + dt * (B[i] - 0.5 * D[i] - 0.5 * oldF[i]);
            }

            if (final_sweep) {
                traj.times.push_back(t);
                traj.records.push_back(make_record(grid, uj, vj, cfg));
                sources[static_cast<std::size_t>(j)] = std::move(oldF);
                continue;
            }

            SourceSpectrum nf = source_spectrum(grid->sizes(), uj, cfg.p, cfg.oversample);
            if (!nf.finite)
                throw std::domain_error("picard_solve: iterate produced non-finite samples at t = " +
                                        std::to_string(t));

            for (std::size_t i = 0; i < n; ++i) delta[i] = nf.coeffs[i] - oldF[i];
            for (std::size_t i = 0; i < n; ++i) dB[i] += delta[i];
            if (j == 0) dD = delta;  // nonzero only on the first sweep
            Field du = Field::from_spectrum(grid, [&] {
                ComplexVec tmp(n);
                for (std::size_t i = 0; i < n; ++i) tmp[i] = dt * (dA[i] - 0.5 * dC[i]);
                return tmp;
            }());
            Field dv = Field::from_spectrum(grid, [&] {
                ComplexVec tmp(n);
                for (std::size_t i = 0; i < n; ++i)
                    tmp[i] = dt * (dB[i] - 0.5 * dD[i] - 0.5 * delta[i]);
                return tmp;
            }());
            const double wu = std::pow(1.0 + t, weights.w_u) * lq_norm(du, cfg.q);
            const double wg = std::pow(1.0 + t, weights.w_grad) *
                              (sobolev_seminorm(du, cfg.sigma, cfg.q) + lq_norm(dv, cfg.q));
            distance = std::max(distance, wu + wg);

            sources[static_cast<std::size_t>(j)] = std::move(nf.coeffs);
        }

        if (final_sweep) {
            result.trajectory = std::move(traj);
        } else {
            result.distances.push_back(distance);
        }
    }

    int growth_streak = 0;
    for (std::size_t i = 1; i < result.distances.size(); ++i) {
        growth_streak = result.distances[i] > result.distances[i - 1] ? growth_streak + 1 : 0;
        if (growth_streak >= 3) {
            result.not_contractive = true;
            break;
        }
    }
    return result;
}

double weighted_solution_norm(const Trajectory& traj, NormWeights weights) {
    if (traj.outcome != Outcome::Completed)
        throw std::domain_error("weighted_solution_norm: trajectory did not complete");
    double sup = 0.0;
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const double t = traj.times[i];
        const auto& r = traj.records[i];
        sup = std::max(sup, std::pow(1.0 + t, weights.w_u) * r.lq +
                                std::pow(1.0 + t, weights.w_grad) * (r.seminorm + r.dtnorm));
    }
    return sup;
}

}  // namespace sevo
