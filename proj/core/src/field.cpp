#include "sevo/field.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace sevo {

Field::Field(GridPtr grid) : grid_(std::move(grid)) {
    if (!grid_) throw std::invalid_argument("Field: null grid");
    values_.assign(grid_->point_count(), 0.0);
    coeffs_.assign(grid_->point_count(), {0.0, 0.0});
    real_current_ = spec_current_ = true;
}

Field Field::from_real(GridPtr grid, std::vector<double> values) {
    Field f(std::move(grid));
    if (values.size() != f.grid_->point_count())
        throw std::invalid_argument("Field::from_real: sample count mismatch");
    f.values_ = std::move(values);
    f.real_current_ = true;
    f.spec_current_ = false;
    return f;
}

Field Field::from_spectrum(GridPtr grid, ComplexVec coeffs) {
    Field f(std::move(grid));
    if (coeffs.size() != f.grid_->point_count())
        throw std::invalid_argument("Field::from_spectrum: coefficient count mismatch");
    f.coeffs_ = std::move(coeffs);
    f.real_current_ = false;
    f.spec_current_ = true;
    return f;
}

FieldSync Field::sync_state() const {
    if (real_current_ && spec_current_) return FieldSync::Both;
    return real_current_ ? FieldSync::Real : FieldSync::Spectral;
}

void Field::sync_spectral() const {
    if (spec_current_) return;
    coeffs_.resize(values_.size());
    for (std::size_t i = 0; i < values_.size(); ++i) coeffs_[i] = {values_[i], 0.0};
    fft_forward(grid_->sizes(), coeffs_);
    spec_current_ = true;
}

void Field::sync_real() const {
    if (real_current_) return;
    ComplexVec work = coeffs_;
    fft_backward(grid_->sizes(), work);
    values_.resize(work.size());
    for (std::size_t i = 0; i < work.size(); ++i) values_[i] = work[i].real();
    real_current_ = true;
}

const std::vector<double>& Field::real_values() const {
    sync_real();
    return values_;
}

const ComplexVec& Field::spectrum() const {
    sync_spectral();
    return coeffs_;
}

std::vector<double>& Field::mutable_real() {
    sync_real();
    spec_current_ = false;
    return values_;
}

ComplexVec& Field::mutable_spectrum() {
    sync_spectral();
    real_current_ = false;
    return coeffs_;
}

double Field::mean() const {
    if (spec_current_) return coeffs_[0].real();
    double s = 0.0;
    for (double v : values_) s += v;
    return s / static_cast<double>(values_.size());
}

void Field::subtract_mean() {
    const double m = mean();
    if (real_current_) {
        for (double& v : values_) v -= m;
    }
    if (spec_current_) {
        coeffs_[0] = {0.0, 0.0};
    }
}

StatePair::StatePair(Field u_, Field v_, double time_)
    : u(std::move(u_)), v(std::move(v_)), time(time_) {
    if (!u.grid()->same_layout(*v.grid()))
        throw std::invalid_argument("StatePair: fields live on different grids");
}

Field fractional_laplacian(const Field& field, double s) {
    if (s < 0.0) throw std::invalid_argument("fractional_laplacian: order must be >= 0");
    if (s == 0.0) return field;
    const auto& grid = field.grid();
    const auto& fsq = grid->freq_sq();
    ComplexVec out = field.spectrum();
    const double half = 0.5 * s;
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] *= fsq[i] == 0.0 ? 0.0 : std::pow(fsq[i], half);
    }
    return Field::from_spectrum(grid, std::move(out));
}

double lq_norm(const Field& field, double q) {
    if (!(q >= 1.0) || !std::isfinite(q))
        throw std::invalid_argument("lq_norm: q must lie in [1, inf)");
    const auto& vals = field.real_values();
    double acc = 0.0;
    if (q == 2.0) {
        for (double v : vals) acc += v * v;
    } else if (q == 1.0) {
        for (double v : vals) acc += std::abs(v);
    } else {
        for (double v : vals) acc += std::pow(std::abs(v), q);
    }
    return std::pow(acc * field.grid()->cell_volume(), 1.0 / q);
}

double sobolev_seminorm(const Field& field, double sigma, double q) {
    return lq_norm(fractional_laplacian(field, sigma), q);
}

double sup_norm(const Field& field) {
    const auto& vals = field.real_values();
    double m = 0.0;
    for (double v : vals) m = std::max(m, std::abs(v));
    return m;
}

namespace {

constexpr char kMagic[4] = {'S', 'E', 'V', 'F'};

}  // namespace

void write_binary(const Field& field, const std::filesystem::path& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("write_binary: cannot open " + path.string());

    const auto& grid = *field.grid();
    unsigned char header[32] = {};
    std::memcpy(header, kMagic, 4);
    header[4] = static_cast<unsigned char>(grid.dim());
    std::uint32_t sizes[3] = {1, 1, 1};
    for (int a = 0; a < grid.dim(); ++a) sizes[a] = static_cast<std::uint32_t>(grid.sizes()[a]);
    std::memcpy(header + 8, sizes, 12);
    const double L = grid.half_length();
    std::memcpy(header + 24, &L, 8);
    os.write(reinterpret_cast<const char*>(header), 32);

    const auto& vals = field.real_values();
    os.write(reinterpret_cast<const char*>(vals.data()),
             static_cast<std::streamsize>(vals.size() * sizeof(double)));
    if (!os) throw std::runtime_error("write_binary: short write to " + path.string());
}

Field read_binary(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("read_binary: cannot open " + path.string());

    unsigned char header[32];
    is.read(reinterpret_cast<char*>(header), 32);
    if (!is || std::memcmp(header, kMagic, 4) != 0)
        throw std::runtime_error("read_binary: bad header in " + path.string());
    const int dim = header[4];
    if (dim < 1 || dim > 3) throw std::runtime_error("read_binary: bad dimension");
    std::uint32_t sizes[3];
    std::memcpy(sizes, header + 8, 12);
    double L;
    std::memcpy(&L, header + 24, 8);

    std::vector<int> sz(static_cast<std::size_t>(dim));
    for (int a = 0; a < dim; ++a) sz[a] = static_cast<int>(sizes[a]);
    auto grid = make_grid(sz, L);

    std::vector<double> vals(grid->point_count());
    is.read(reinterpret_cast<char*>(vals.data()),
            static_cast<std::streamsize>(vals.size() * sizeof(double)));
    if (!is) throw std::runtime_error("read_binary: truncated file " + path.string());
    return Field::from_real(std::move(grid), std::move(vals));
}

void write_csv_slice(const Field& field, const std::filesystem::path& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("write_csv_slice: cannot open " + path.string());
    os << "x,value\n";
    os.precision(17);

    const auto& grid = *field.grid();
    const auto& vals = field.real_values();
    std::size_t stride = 1, offset = 0;
    for (int a = 1; a < grid.dim(); ++a) stride *= static_cast<std::size_t>(grid.sizes()[a]);
    // pass through the middle of the trailing axes
    std::size_t inner = 0;
    for (int a = 1; a < grid.dim(); ++a) {
        std::size_t s = 1;
        for (int b = a + 1; b < grid.dim(); ++b) s *= static_cast<std::size_t>(grid.sizes()[b]);
        inner += s * static_cast<std::size_t>(grid.sizes()[a] / 2);
    }
    offset = inner;
    for (int i = 0; i < grid.sizes()[0]; ++i) {
        os << grid.coordinate(0, i) << ',' << vals[static_cast<std::size_t>(i) * stride + offset]
           << '\n';
    }
}

}  // namespace sevo
