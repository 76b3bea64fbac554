#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "sevo/field.hpp"
#include "sevo/propagator.hpp"
#include "sevo/theory.hpp"

namespace sevo {

enum class Integrator { Etd1, Etd2Rk };

struct SolverConfig {
    double sigma = 1.0;
    double q = 2.0;
    double m2 = 1.0;
    double p = 2.0;          // nonlinearity exponent, used when nonlinear
    bool nonlinear = true;
    double dt = 0.1;
    double horizon = 10.0;
    Integrator integrator = Integrator::Etd2Rk;
    double oversample = 1.5;       // dealias refinement factor
    double blowup_threshold = 1e8; // multiple of the initial sup-norm
    double record_dt = 0.0;        // <= 0 picks horizon/100

    void validate() const;
    double record_exponent_m2p() const { return m2 * (nonlinear ? p : 1.0); }
    double record_exponent_qp() const { return q * (nonlinear ? p : 1.0); }
};

struct NormRecord {
    double lq;        // ||u||_Lq
    double lm2p;      // ||u||_L^(m2*p)
    double lqp;       // ||u||_L^(q*p)
    double seminorm;  // ||(-Lap)^(sigma/2) u||_Lq
    double dtnorm;    // ||du/dt||_Lq
};

enum class Outcome { Completed, BlowUp };

struct Trajectory {
    std::vector<double> times;
    std::vector<NormRecord> records;
    Outcome outcome = Outcome::Completed;
    double blowup_time = 0.0;  // meaningful for BlowUp only

    std::vector<std::pair<double, double>> series_lq() const;
    // seminorm + dtnorm, the gradient-pair norm
    std::vector<std::pair<double, double>> series_grad() const;
};

// Pointwise |u|^p evaluated on a lattice refined by `oversample`, then
// spectrally truncated back. Throws on non-finite samples.
Field nonlinearity(const Field& field, double p, double oversample = 1.5);

// One integrator step of size table.dt(); exact on the linear part. With the
// source disabled this coincides with linear_propagate.
StatePair step(const StatePair& state, const PropagatorTable& table, const SolverConfig& cfg);

// Steps from state.time to cfg.horizon recording norms on a fixed cadence.
// Declares BlowUp at the first non-finite sample or once the sup-norm exceeds
// blowup_threshold times its initial value.
Trajectory evolve(const StatePair& initial, const SolverConfig& cfg);

struct PicardResult {
    Trajectory trajectory;          // the final iterate
    std::vector<double> distances;  // successive gaps in the weighted norm
    bool not_contractive = false;   // distances grew three times in a row
};

// Fixed-point iteration for the source-integral form: iterate k+1 equals the
// linear flow plus the kernel integral of |iterate k|^p, discretized by the
// trapezoid rule in the source with the kernel kept exact. `iterations` full
// updates are applied after the linear seed.
PicardResult picard_solve(const StatePair& initial, const SolverConfig& cfg, int iterations,
                          NormWeights weights);

// sup over records of (1+t)^w_u * ||u||_q + (1+t)^w_grad * (gradient pair).
double weighted_solution_norm(const Trajectory& traj, NormWeights weights);

}  // namespace sevo
