#pragma once

#include <complex>
#include <cstdlib>
#include <new>
#include <vector>

namespace sevo {

// Allocator backed by fftw_malloc so buffers carry the alignment the cached
// FFTW plans were created with.
template <class T>
struct FftwAllocator {
    using value_type = T;
    FftwAllocator() = default;
    template <class U>
    FftwAllocator(const FftwAllocator<U>&) {}
    T* allocate(std::size_t n);
    void deallocate(T* p, std::size_t) noexcept;
    bool operator==(const FftwAllocator&) const { return true; }
    bool operator!=(const FftwAllocator&) const { return false; }
};

using ComplexVec = std::vector<std::complex<double>, FftwAllocator<std::complex<double>>>;

// In-place complex transforms over a row-major lattice of the given sizes.
// Forward normalizes by 1/prod(sizes) so coefficients are absolute amplitudes;
// backward is unnormalized (exact inverse of forward). Plans are cached per
// size tuple and created with FFTW_ESTIMATE so results are reproducible.
void fft_forward(const std::vector<int>& sizes, ComplexVec& data);
void fft_backward(const std::vector<int>& sizes, ComplexVec& data);

// Spectrum embedding between lattices (used for dealiased products). The
// Nyquist band is split/recombined symmetrically, so
// truncate(pad(c)) == c exactly and real fields stay real.
std::vector<int> refined_sizes(const std::vector<int>& sizes, double factor);
ComplexVec pad_spectrum(const std::vector<int>& coarse, const ComplexVec& data,
                        const std::vector<int>& fine);
ComplexVec truncate_spectrum(const std::vector<int>& fine, const ComplexVec& data,
                             const std::vector<int>& coarse);

}  // namespace sevo
