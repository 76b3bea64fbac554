#include "sevo/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace sevo {

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

Grid::Grid(std::vector<int> sizes, double half_length)
    : sizes_(std::move(sizes)), half_length_(half_length) {
    if (sizes_.empty() || sizes_.size() > 3)
        throw std::invalid_argument("Grid: dimension must be 1, 2 or 3");
    for (int n : sizes_) {
        if (!is_power_of_two(n) || n < 4)
            throw std::invalid_argument("Grid: sizes must be powers of two >= 4, got " +
                                        std::to_string(n));
    }
    if (!(half_length_ > 0.0) || !std::isfinite(half_length_))
        throw std::invalid_argument("Grid: half_length must be positive");
    points_ = 1;
    cell_volume_ = 1.0;
    for (std::size_t a = 0; a < sizes_.size(); ++a) {
        points_ *= static_cast<std::size_t>(sizes_[a]);
        cell_volume_ *= spacing(static_cast<int>(a));
    }
}

double Grid::frequency(int axis, int index) const {
    return std::numbers::pi / half_length_ * signed_index(axis, index);
}

const std::vector<double>& Grid::freq_sq() const {
    if (!freq_sq_.empty()) return freq_sq_;
    freq_sq_.resize(points_);
    const int d = dim();
    std::vector<int> idx(d, 0);
    for (std::size_t flat = 0; flat < points_; ++flat) {
        double s = 0.0;
        for (int a = 0; a < d; ++a) {
            const double xi = frequency(a, idx[a]);
            s += xi * xi;
        }
        freq_sq_[flat] = s;
        for (int a = d - 1; a >= 0; --a) {
            if (++idx[a] < sizes_[a]) break;
            idx[a] = 0;
        }
    }
    return freq_sq_;
}

GridPtr make_grid(std::vector<int> sizes, double half_length) {
    return std::make_shared<const Grid>(std::move(sizes), half_length);
}

}  // namespace sevo
