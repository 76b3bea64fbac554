#include "sevo/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace sevo {

template <class T>
T* FftwAllocator<T>::allocate(std::size_t n) {
    void* p = fftw_malloc(n * sizeof(T));
    if (!p) throw std::bad_alloc();
    return static_cast<T*>(p);
}

template <class T>
void FftwAllocator<T>::deallocate(T* p, std::size_t) noexcept {
    fftw_free(p);
}

template struct FftwAllocator<std::complex<double>>;
template struct FftwAllocator<double>;

namespace {

std::size_t product(const std::vector<int>& sizes) {
    std::size_t n = 1;
    for (int s : sizes) n *= static_cast<std::size_t>(s);
    return n;
}

struct PlanPair {
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;
};

// The FFTW planner is not thread-safe; executing distinct plans is.
std::mutex g_plan_mutex;
std::map<std::vector<int>, PlanPair>& plan_cache() {
    static auto* cache = new std::map<std::vector<int>, PlanPair>();
    return *cache;
}

const PlanPair& plans_for(const std::vector<int>& sizes) {
    std::lock_guard<std::mutex> lock(g_plan_mutex);
    auto& cache = plan_cache();
    auto it = cache.find(sizes);
    if (it != cache.end()) return it->second;

    const std::size_t n = product(sizes);
    auto* scratch = static_cast<fftw_complex*>(fftw_malloc(n * sizeof(fftw_complex)));
    if (!scratch) throw std::bad_alloc();
    PlanPair pair;
    pair.forward = fftw_plan_dft(static_cast<int>(sizes.size()), sizes.data(), scratch, scratch,
                                 FFTW_FORWARD, FFTW_ESTIMATE);
    pair.backward = fftw_plan_dft(static_cast<int>(sizes.size()), sizes.data(), scratch, scratch,
                                  FFTW_BACKWARD, FFTW_ESTIMATE);
    fftw_free(scratch);
    if (!pair.forward || !pair.backward) throw std::runtime_error("fft: planning failed");
    return cache.emplace(sizes, pair).first->second;
}

void execute(const fftw_plan plan, ComplexVec& data) {
    auto* raw = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(plan, raw, raw);
}

// Per-axis map from a coarse index to one or two fine indices. The Nyquist
// coefficient (k = -N/2) is its own conjugate partner on the coarse lattice;
// on the fine lattice it splits evenly between +/- N/2.
struct AxisMap {
    std::vector<int> primary;
    std::vector<int> secondary;  // -1 when absent
};

AxisMap build_axis_map(int coarse_n, int fine_n) {
    AxisMap map;
    map.primary.resize(coarse_n);
    map.secondary.assign(coarse_n, -1);
    for (int a = 0; a < coarse_n; ++a) {
        const int k = a < coarse_n / 2 ? a : a - coarse_n;
        if (k == -coarse_n / 2 && fine_n > coarse_n) {
            map.primary[a] = fine_n + k;  // -N/2 band
            map.secondary[a] = -k;        // +N/2 band
        } else {
            map.primary[a] = k >= 0 ? k : fine_n + k;
        }
    }
    return map;
}

}  // namespace

void fft_forward(const std::vector<int>& sizes, ComplexVec& data) {
    const std::size_t n = product(sizes);
    if (data.size() != n) throw std::invalid_argument("fft_forward: size mismatch");
    execute(plans_for(sizes).forward, data);
    const double scale = 1.0 / static_cast<double>(n);
    for (auto& c : data) c *= scale;
}

void fft_backward(const std::vector<int>& sizes, ComplexVec& data) {
    if (data.size() != product(sizes)) throw std::invalid_argument("fft_backward: size mismatch");
    execute(plans_for(sizes).backward, data);
}

std::vector<int> refined_sizes(const std::vector<int>& sizes, double factor) {
    if (factor < 1.0) throw std::invalid_argument("refined_sizes: factor must be >= 1");
    std::vector<int> fine(sizes.size());
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        int m = static_cast<int>(std::ceil(sizes[i] * factor));
        if (m % 2 != 0) ++m;
        fine[i] = m;
    }
    return fine;
}

ComplexVec pad_spectrum(const std::vector<int>& coarse, const ComplexVec& data,
                        const std::vector<int>& fine) {
    const int dim = static_cast<int>(coarse.size());
    if (data.size() != product(coarse)) throw std::invalid_argument("pad_spectrum: size mismatch");
    std::vector<AxisMap> maps(dim);
    for (int d = 0; d < dim; ++d) {
        if (fine[d] < coarse[d]) throw std::invalid_argument("pad_spectrum: fine lattice smaller");
        maps[d] = build_axis_map(coarse[d], fine[d]);
    }

    ComplexVec out(product(fine), std::complex<double>(0.0, 0.0));
    std::vector<int> idx(dim, 0);
    const std::size_t n = data.size();
    for (std::size_t flat = 0; flat < n; ++flat) {
        // scatter into up to 2^dim fine slots, weight 1/2 per split axis
        int targets[3][2];
        double weights[3][2];
        int counts[3];
        for (int d = 0; d < dim; ++d) {
            const int a = idx[d];
            targets[d][0] = maps[d].primary[a];
            weights[d][0] = maps[d].secondary[a] >= 0 ? 0.5 : 1.0;
            counts[d] = 1;
            if (maps[d].secondary[a] >= 0) {
                targets[d][1] = maps[d].secondary[a];
                weights[d][1] = 0.5;
                counts[d] = 2;
            }
        }
        for (int c0 = 0; c0 < counts[0]; ++c0)
            for (int c1 = 0; c1 < (dim > 1 ? counts[1] : 1); ++c1)
                for (int c2 = 0; c2 < (dim > 2 ? counts[2] : 1); ++c2) {
                    std::size_t t = targets[0][c0];
                    double w = weights[0][c0];
                    if (dim > 1) { t = t * fine[1] + targets[1][c1]; w *= weights[1][c1]; }
                    if (dim > 2) { t = t * fine[2] + targets[2][c2]; w *= weights[2][c2]; }
                    out[t] += w * data[flat];
                }
        for (int d = dim - 1; d >= 0; --d) {
            if (++idx[d] < coarse[d]) break;
            idx[d] = 0;
        }
    }
    return out;
}

ComplexVec truncate_spectrum(const std::vector<int>& fine, const ComplexVec& data,
                             const std::vector<int>& coarse) {
    const int dim = static_cast<int>(coarse.size());
    if (data.size() != product(fine)) throw std::invalid_argument("truncate_spectrum: size mismatch");
    std::vector<AxisMap> maps(dim);
    for (int d = 0; d < dim; ++d) maps[d] = build_axis_map(coarse[d], fine[d]);

    ComplexVec out(product(coarse));
    std::vector<int> idx(dim, 0);
    const std::size_t n = out.size();
    for (std::size_t flat = 0; flat < n; ++flat) {
        int srcs[3][2];
        int counts[3];
        for (int d = 0; d < dim; ++d) {
            const int a = idx[d];
            srcs[d][0] = maps[d].primary[a];
            counts[d] = 1;
            if (maps[d].secondary[a] >= 0) {
                srcs[d][1] = maps[d].secondary[a];
                counts[d] = 2;
            }
        }
        std::complex<double> acc(0.0, 0.0);
        for (int c0 = 0; c0 < counts[0]; ++c0)
            for (int c1 = 0; c1 < (dim > 1 ? counts[1] : 1); ++c1)
                for (int c2 = 0; c2 < (dim > 2 ? counts[2] : 1); ++c2) {
                    std::size_t s = srcs[0][c0];
                    if (dim > 1) s = s * fine[1] + srcs[1][c1];
                    if (dim > 2) s = s * fine[2] + srcs[2][c2];
                    acc += data[s];
                }
        out[flat] = acc;
        for (int d = dim - 1; d >= 0; --d) {
            if (++idx[d] < coarse[d]) break;
            idx[d] = 0;
        }
    }
    return out;
}

}  // namespace sevo
