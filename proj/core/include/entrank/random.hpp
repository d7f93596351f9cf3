#pragma once

#include <cstdint>
#include <limits>

#include "entrank/matrix.hpp"

namespace entrank {

// SplitMix64. All seeded randomness goes through this.
class SplitMix64 {
public:
    using result_type = std::uint64_t;

    explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        return mix(z);
    }

    static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t state_;
};

// Sub-seed for stream `index` of a master seed; used for per-trial and
// per-restart generators.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
    return SplitMix64::mix(master ^ SplitMix64::mix(index + 0x632BE59BD9B4E019ULL));
}

// Portable variates on top of SplitMix64 (no std distributions).
class Random {
public:
    explicit Random(std::uint64_t seed) noexcept : gen_(seed) {}

    // Uniform on (0, 1].
    double uniform() noexcept { return static_cast<double>((gen_() >> 11) + 1) * 0x1.0p-53; }
    // Box-Muller; both outputs of each pair are used.
    double normal() noexcept;
    // Standard complex Gaussian (independent real and imaginary N(0,1) parts).
    cplx complex_normal() noexcept;
    // Exp(1) variate.
    double exponential() noexcept;

    CVector gaussian_vector(std::size_t n);
    CVector unit_vector(std::size_t n);
    // rows x cols matrix with orthonormal columns (Gaussian + Gram-Schmidt).
    ComplexMatrix isometry(std::size_t rows, std::size_t cols);
    ComplexMatrix unitary(std::size_t n) { return isometry(n, n); }

private:
    SplitMix64 gen_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// Modified Gram-Schmidt with one re-orthogonalization pass. Columns that
// collapse below 1e-14 are left as zero.
void orthonormalize_columns(ComplexMatrix& m);

}  // namespace entrank
