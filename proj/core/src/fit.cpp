#include "sevo/fit.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace sevo {

DecayFit fit_decay_rate(const std::vector<std::pair<double, double>>& series,
                        std::pair<double, double> window) {
    std::vector<double> xs, ys;
    xs.reserve(series.size());
    ys.reserve(series.size());
    for (const auto& [t, v] : series) {
        if (t < window.first || t > window.second) continue;
        if (!(v > 0.0))
            throw std::domain_error("fit_decay_rate: nonpositive value " + std::to_string(v) +
                                    " at t = " + std::to_string(t));
        xs.push_back(std::log1p(t));
        ys.push_back(std::log(v));
    }
    const int m = static_cast<int>(xs.size());
    if (m < 8)
        throw std::domain_error("fit_decay_rate: need >= 8 samples inside the window, got " +
                                std::to_string(m));

    double sx = 0.0, sy = 0.0;
    for (int i = 0; i < m; ++i) { sx += xs[i]; sy += ys[i]; }
    const double mx = sx / m, my = sy / m;

    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (int i = 0; i < m; ++i) {
        const double dx = xs[i] - mx, dy = ys[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0.0)
        throw std::domain_error("fit_decay_rate: degenerate window (all samples at one time)");

    DecayFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.window = window;
    fit.points = m;

    if (syy <= 1e-20 * m * (my * my + 1.0)) {
        fit.r2 = 1.0;  // constant series up to roundoff: described by slope 0
    } else {
        double ssres = 0.0;
        for (int i = 0; i < m; ++i) {
            const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
            ssres += r * r;
        }
        fit.r2 = std::min(1.0, std::max(0.0, 1.0 - ssres / syy));
    }
    return fit;
}

}  // namespace sevo
