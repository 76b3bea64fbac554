#include "sevo/propagator.hpp"

#include <cmath>
#include <stdexcept>

namespace sevo {

namespace {

constexpr double kSqrt3 = 1.7320508075688772935;
constexpr double kEntryTaylorCut = 1e-6;
constexpr double kMomentTaylorCut = 1e-3;

}  // namespace

std::pair<std::complex<double>, std::complex<double>> char_roots(double mu) {
    if (mu < 0.0) throw std::invalid_argument("char_roots: mu must be >= 0");
    const double re = -0.5 * mu;
    const double im = 0.5 * kSqrt3 * mu;
    return {{re, im}, {re, -im}};
}

PropagatorEntries propagator_entries(double mu, double t) {
    if (mu < 0.0) throw std::invalid_argument("propagator_entries: mu must be >= 0");
    if (t < 0.0) throw std::invalid_argument("propagator_entries: t must be >= 0");

    PropagatorEntries e{};
    const double a = mu * t;

    if (a < kEntryTaylorCut) {
        e.g1 = 1.0 - a * a / 2.0 + a * a * a / 6.0;
        e.g2 = t * (1.0 - a / 2.0 + a * a * a / 24.0 - a * a * a * a / 120.0);
        e.dg2 = 1.0 - a + a * a * a / 6.0 - a * a * a * a / 24.0;
    } else {
        const double env = std::exp(-0.5 * a);
        const double omega = 0.5 * kSqrt3 * mu;
        const double c = std::cos(omega * t);
        const double s = std::sin(omega * t);
        e.g1 = env * (c + s / kSqrt3);
        e.g2 = env * s / omega;
        e.dg2 = env * (c - s / kSqrt3);
    }
    e.dg1 = -mu * mu * e.g2;

    if (a < kMomentTaylorCut) {
        e.w1 = t * t * (0.5 - a / 6.0 + a * a * a / 120.0 - a * a * a * a / 720.0);
        e.m1 = t * t * t * (1.0 / 3.0 - a / 8.0 + a * a * a / 144.0 - a * a * a * a / 840.0);
    } else {
        const double mu2 = mu * mu;
        e.w1 = (1.0 - e.g1) / mu2;
        const double v1 = e.g2 + mu * e.w1;  // int_0^t g1
        e.m1 = (v1 - t * e.g1) / mu2;
    }
    return e;
}

PropagatorTable::PropagatorTable(GridPtr grid, double sigma, double dt)
    : grid_(std::move(grid)), sigma_(sigma), dt_(dt) {
    if (!grid_) throw std::invalid_argument("PropagatorTable: null grid");
    if (!(dt_ > 0.0)) throw std::invalid_argument("PropagatorTable: dt must be positive");
    if (!(sigma_ >= 1.0)) throw std::invalid_argument("PropagatorTable: sigma must be >= 1");

    const auto& fsq = grid_->freq_sq();
    const std::size_t n = fsq.size();
    mu_.resize(n);
    g1_.resize(n);
    g2_.resize(n);
    dg1_.resize(n);
    dg2_.resize(n);
    w1_.resize(n);
    m1_.resize(n);
    const double half = 0.5 * sigma_;
    for (std::size_t i = 0; i < n; ++i) {
        mu_[i] = fsq[i] == 0.0 ? 0.0 : std::pow(fsq[i], half);
        const PropagatorEntries e = propagator_entries(mu_[i], dt_);
        g1_[i] = e.g1;
        g2_[i] = e.g2;
        dg1_[i] = e.dg1;
        dg2_[i] = e.dg2;
        w1_[i] = e.w1;
        m1_[i] = e.m1;
    }
}

void PropagatorTable::apply(ComplexVec& u, ComplexVec& v) const {
    if (u.size() != mu_.size() || v.size() != mu_.size())
        throw std::invalid_argument("PropagatorTable::apply: size mismatch");
    for (std::size_t i = 0; i < mu_.size(); ++i) {
        const auto uu = u[i], vv = v[i];
        u[i] = g1_[i] * uu + g2_[i] * vv;
        v[i] = dg1_[i] * uu + dg2_[i] * vv;
    }
}

StatePair linear_propagate(const StatePair& state, const PropagatorTable& table) {
    if (!state.u.grid()->same_layout(*table.grid()))
        throw std::invalid_argument("linear_propagate: state and table grids differ");
    ComplexVec u = state.u.spectrum();
    ComplexVec v = state.v.spectrum();
    table.apply(u, v);
    const auto& grid = state.u.grid();
    return StatePair(Field::from_spectrum(grid, std::move(u)),
                     Field::from_spectrum(grid, std::move(v)), state.time + table.dt());
}

}  // namespace sevo
