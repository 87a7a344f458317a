#pragma once

// Seeded substreams and the low-discrepancy sequence used by the samplers.
//
// Every random quantity in the library is drawn from a substream identified
// by (seed, stream, chunk). Work is split into chunks whose boundaries depend
// only on the sample count, never on the number of workers, so results are
// bit-identical for any thread count.

#include <hwl/errors.hpp>

#include <array>
#include <cstdint>
#include <random>
#include <string>

namespace hwl {

/// Fixed stream identifiers so that independent quantities computed from the
/// same user seed never share random numbers.
namespace streams {
inline constexpr std::uint64_t shell_points = 1;
inline constexpr std::uint64_t riesz_pairs = 2;
inline constexpr std::uint64_t window_energy = 3;
inline constexpr std::uint64_t boundary_mean = 4;
inline constexpr std::uint64_t crofton_diff = 5;
inline constexpr std::uint64_t finite_difference = 6;
inline constexpr std::uint64_t boundary_points = 7;
inline constexpr std::uint64_t field = 8;
inline constexpr std::uint64_t qmc_shift = 9;
inline constexpr std::uint64_t scaling_grid = 10;
}  // namespace streams

/// Pseudo-random draw source: a 64-bit Mersenne twister seeded from the
/// (seed, stream, chunk) triple through std::seed_seq.
class RandomDraw {
public:
    RandomDraw(std::uint64_t seed, std::uint64_t stream, std::uint64_t chunk) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(chunk),
                          static_cast<std::uint32_t>(chunk >> 32)};
        engine_.seed(seq);
    }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform on (0, 1], safe as a logarithm argument.
    double uniform_open_low() { return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53; }

    void next_point() {}

private:
    std::mt19937_64 engine_;
};

/// Radical inverse of `index` in the given prime base.
inline double radical_inverse(std::uint64_t index, std::uint32_t base) {
    double inv = 1.0 / base, f = inv, r = 0.0;
    while (index > 0) {
        r += f * static_cast<double>(index % base);
        index /= base;
        f *= inv;
    }
    return r;
}

inline constexpr std::array<std::uint32_t, 16> kHaltonPrimes = {2,  3,  5,  7,  11, 13, 17, 19,
                                                                  23, 29, 31, 37, 41, 43, 47, 53};

/// Randomly shifted Halton draw source (Cranley-Patterson rotation). Each
/// call to next_point() advances to the next Halton point; uniform() hands
/// out its coordinates in order. Samplers that need an unbounded number of
/// uniforms (rejection) cannot run on this source.
class HaltonDraw {
public:
    HaltonDraw(std::uint64_t seed, std::uint64_t block, std::uint64_t first_index) : index_(first_index) {
        RandomDraw shifts(seed, streams::qmc_shift, block);
        for (auto& s : shift_) s = shifts.uniform();
    }

    double uniform() {
        if (dim_ >= kHaltonPrimes.size()) throw UnsupportedError("quasi-random source supports at most " + std::to_string(kHaltonPrimes.size()) + " uniforms per sample");
        double v = radical_inverse(index_, kHaltonPrimes[dim_]) + shift_[dim_];
        ++dim_;
        return v >= 1.0 ? v - 1.0 : v;
    }

    double uniform_open_low() {
        double v = uniform();
        return v > 0.0 ? v : 0x1.0p-53;
    }

    void next_point() {
        ++index_;
        dim_ = 0;
    }

private:
    std::uint64_t index_;
    std::size_t dim_ = 0;
    std::array<double, kHaltonPrimes.size()> shift_{};
};

}  // namespace hwl
