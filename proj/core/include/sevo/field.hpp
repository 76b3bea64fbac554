#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "sevo/fft.hpp"
#include "sevo/grid.hpp"

namespace sevo {

enum class FieldSync { Real, Spectral, Both };

// Real scalar field on a periodic grid with lazily synchronized Fourier
// coefficients. Value type; cheap to move. A single instance must not be
// mutated from several threads at once, but distinct instances are
// independent.
class Field {
  public:
    explicit Field(GridPtr grid);  // zero field
    static Field from_real(GridPtr grid, std::vector<double> values);
    static Field from_spectrum(GridPtr grid, ComplexVec coeffs);

    const GridPtr& grid() const { return grid_; }
    FieldSync sync_state() const;

    // Accessors synchronize on demand.
    const std::vector<double>& real_values() const;
    const ComplexVec& spectrum() const;

    // Mutating access invalidates the other representation.
    std::vector<double>& mutable_real();
    ComplexVec& mutable_spectrum();

    double mean() const;  // zero-mode coefficient
    void subtract_mean();

  private:
    GridPtr grid_;
    mutable std::vector<double> values_;
    mutable ComplexVec coeffs_;
    mutable bool real_current_ = true;
    mutable bool spec_current_ = false;

    void sync_real() const;
    void sync_spectral() const;
};

struct StatePair {
    Field u;
    Field v;  // time derivative of u
    double time = 0.0;

    StatePair(Field u_, Field v_, double time_ = 0.0);
};

// Fourier multiplier |xi|^s; annihilates the zero mode for s > 0.
Field fractional_laplacian(const Field& field, double s);

// Riemann-sum L^q norm on the native grid, q in [1, inf).
double lq_norm(const Field& field, double q);

// lq_norm of the order-sigma fractional laplacian.
double sobolev_seminorm(const Field& field, double sigma, double q);

double sup_norm(const Field& field);

// Flat binary snapshot: 32-byte header (magic "SEVF", dim, per-axis sizes,
// half-length) followed by row-major float64 little-endian samples.
void write_binary(const Field& field, const std::filesystem::path& path);
Field read_binary(const std::filesystem::path& path);

// CSV of a 1D slice along axis 0 through the middle of the other axes.
void write_csv_slice(const Field& field, const std::filesystem::path& path);

}  // namespace sevo
