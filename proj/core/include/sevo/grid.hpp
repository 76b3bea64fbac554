#pragma once

#include <cstddef>
#include <memory>
#include <vector>

namespace sevo {

// Uniform periodic lattice on [-L, L)^dim. Frequencies are xi_k = (pi/L)*k
// with k in {-N/2, ..., N/2-1} per axis, so continuum Fourier symbols apply
// verbatim to the discrete modes.
class Grid {
  public:
    Grid(std::vector<int> sizes, double half_length);

    int dim() const { return static_cast<int>(sizes_.size()); }
    const std::vector<int>& sizes() const { return sizes_; }
    double half_length() const { return half_length_; }
    double spacing(int axis) const { return 2.0 * half_length_ / sizes_[axis]; }
    std::size_t point_count() const { return points_; }
    double cell_volume() const { return cell_volume_; }

    double coordinate(int axis, int index) const {
        return -half_length_ + index * spacing(axis);
    }
    int signed_index(int axis, int index) const {
        const int n = sizes_[axis];
        return index < n / 2 ? index : index - n;
    }
    double frequency(int axis, int index) const;

    // |xi|^2 per flattened (row-major) mode; built on first use.
    const std::vector<double>& freq_sq() const;

    bool same_layout(const Grid& other) const {
        return sizes_ == other.sizes_ && half_length_ == other.half_length_;
    }

  private:
    std::vector<int> sizes_;
    double half_length_;
    std::size_t points_;
    double cell_volume_;
    mutable std::vector<double> freq_sq_;
};

using GridPtr = std::shared_ptr<const Grid>;

GridPtr make_grid(std::vector<int> sizes, double half_length);

}  // namespace sevo
