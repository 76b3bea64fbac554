#pragma once

#include <complex>
#include <utility>
#include <vector>

#include "sevo/field.hpp"
#include "sevo/grid.hpp"

namespace sevo {

// Characteristic roots of z^2 + mu*z + mu^2 = 0 for mu = |xi|^sigma:
// z = mu*(-1 +- i*sqrt(3))/2, a conjugate pair with Re z = -mu/2, |z| = mu.
std::pair<std::complex<double>, std::complex<double>> char_roots(double mu);

// Exact single-mode flow of u'' + mu*u' + mu^2*u = 0 over time t, plus the
// first- and second-moment kernel integrals used by the exponential
// integrator:
//   w1 = int_0^t g2(s) ds,   m1 = int_0^t s*g2(s) ds.
// Entries switch to Taylor expansions when mu*t is small: the g-entries below
// mu*t < 1e-6 (root collision), the integral moments below mu*t < 1e-3 where
// the closed forms lose digits to cancellation.
struct PropagatorEntries {
    double g1, g2, dg1, dg2;
    double w1, m1;
};

PropagatorEntries propagator_entries(double mu, double t);

// Per-mode propagator of the linear flow at a fixed step. Entries are real:
// the complex roots come in conjugate pairs.
class PropagatorTable {
  public:
    PropagatorTable(GridPtr grid, double sigma, double dt);

    const GridPtr& grid() const { return grid_; }
    double sigma() const { return sigma_; }
    double dt() const { return dt_; }
    std::size_t modes() const { return mu_.size(); }

    const std::vector<double>& mu() const { return mu_; }
    const std::vector<double>& g1() const { return g1_; }
    const std::vector<double>& g2() const { return g2_; }
    const std::vector<double>& dg1() const { return dg1_; }
    const std::vector<double>& dg2() const { return dg2_; }
    const std::vector<double>& w1() const { return w1_; }
    const std::vector<double>& m1() const { return m1_; }

    std::complex<double> lambda_plus(std::size_t mode) const { return char_roots(mu_[mode]).first; }
    std::complex<double> lambda_minus(std::size_t mode) const { return char_roots(mu_[mode]).second; }

    // In-place application of the 2x2 mode flow to a coefficient pair.
    void apply(ComplexVec& u, ComplexVec& v) const;

  private:
    GridPtr grid_;
    double sigma_;
    double dt_;
    std::vector<double> mu_, g1_, g2_, dg1_, dg2_, w1_, m1_;
};

// One exact linear step; advances state.time by table.dt().
StatePair linear_propagate(const StatePair& state, const PropagatorTable& table);

}  // namespace sevo
