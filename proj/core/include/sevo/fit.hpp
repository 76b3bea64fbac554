#pragma once

#include <utility>
#include <vector>

namespace sevo {

// Least-squares power-law fit: log(value) against log(1+t).
struct DecayFit {
    double slope = 0.0;
    double intercept = 0.0;  // log-space intercept
    double r2 = 0.0;
    std::pair<double, double> window{0.0, 0.0};
    int points = 0;
};

// Fits the samples whose t lies in [window.first, window.second]. Requires at
// least 8 samples inside the window and strictly positive values (nonpositive
// values signal blow-up or zero data and are rejected).
DecayFit fit_decay_rate(const std::vector<std::pair<double, double>>& series,
                        std::pair<double, double> window);

}  // namespace sevo
