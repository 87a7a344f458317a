#pragma once

// Block/chunk Monte Carlo engine and the Estimate value type.
//
// The sample index space [0, N) is cut into kBlocks contiguous blocks, each
// cut into the same number of chunks. Chunk c draws from substream
// (seed, stream, c). Per-chunk compensated sums are merged in chunk order.

#include <hwl/errors.hpp>
#include <hwl/parallel.hpp>
#include <hwl/rng.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

namespace hwl {

enum class Method { monte_carlo, quasi_random, closed_form, quadrature };

inline std::string_view to_string(Method m) {
    switch (m) {
        case Method::monte_carlo: return "monte-carlo";
        case Method::quasi_random: return "quasi-random";
        case Method::closed_form: return "closed-form";
        case Method::quadrature: return "quadrature";
    }
    return "unknown";
}

/// A Monte Carlo / quadrature result. For monte-carlo, std_error is the
/// sample standard deviation over sqrt(samples) (or the block-based figure
/// for median-of-means); closed forms carry zero error.
struct Estimate {
    double value = 0.0;
    double std_error = 0.0;
    std::uint64_t samples = 0;
    Method method = Method::closed_form;
    std::uint64_t seed = 0;

    static Estimate exact(double v, Method m = Method::closed_form) { return {v, 0.0, 0, m, 0}; }
};

/// Product/quotient helpers propagating relative errors in quadrature.
inline Estimate scaled(const Estimate& e, double factor) {
    Estimate r = e;
    r.value *= factor;
    r.std_error *= std::abs(factor);
    return r;
}

inline Estimate ratio(const Estimate& num, const Estimate& den) {
    Estimate r = num;
    r.value = num.value / den.value;
    double rn = num.value != 0.0 ? num.std_error / num.value : 0.0;
    double rd = den.value != 0.0 ? den.std_error / den.value : 0.0;
    r.std_error = std::abs(r.value) * std::hypot(rn, rd);
    return r;
}

inline Estimate difference(const Estimate& a, const Estimate& b) {
    Estimate r = a;
    r.value = a.value - b.value;
    r.std_error = std::hypot(a.std_error, b.std_error);
    return r;
}

struct SamplingOptions {
    std::uint64_t samples = 1'000'000;
    std::uint64_t seed = 1;
    unsigned threads = 1;
    bool quasi_random = false;
};

/// Plain averaging, or median of the kBlocks block means for kernels whose
/// second moment may be infinite.
enum class Aggregation { mean, median_of_means };

inline constexpr std::size_t kBlocks = 32;
inline constexpr std::uint64_t kChunkTarget = 1u << 16;

struct MomentSums {
    CompensatedSum sum;
    CompensatedSum sumsq;
    std::uint64_t count = 0;

    void add(double x) {
        sum.add(x);
        sumsq.add(x * x);
        ++count;
    }
    void add(const MomentSums& o) {
        sum.add(o.sum);
        sumsq.add(o.sumsq);
        count += o.count;
    }
    double mean() const { return count ? sum.value() / static_cast<double>(count) : 0.0; }
    double variance() const {
        if (count < 2) return 0.0;
        double n = static_cast<double>(count);
        double m = sum.value() / n;
        return std::max(0.0, (sumsq.value() - n * m * m) / (n - 1.0));
    }
};

/// Per-block moment sums for K simultaneous outputs of one kernel.
template <std::size_t K>
struct BlockMoments {
    std::array<std::array<MomentSums, kBlocks>, K> blocks;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
    bool quasi_random = false;

    MomentSums total(std::size_t k) const {
        MomentSums t;
        for (const auto& b : blocks[k]) t.add(b);
        return t;
    }

    Estimate estimate(std::size_t k, Aggregation agg) const {
        Estimate e;
        e.samples = samples;
        e.seed = seed;
        e.method = quasi_random ? Method::quasi_random : Method::monte_carlo;
        std::array<double, kBlocks> means{};
        for (std::size_t b = 0; b < kBlocks; ++b) means[b] = blocks[k][b].mean();
        double bm = 0.0;
        for (double m : means) bm += m;
        bm /= kBlocks;
        double bvar = 0.0;
        for (double m : means) bvar += (m - bm) * (m - bm);
        bvar /= (kBlocks - 1);
        double block_se = std::sqrt(bvar / kBlocks);

        if (agg == Aggregation::median_of_means) {
            auto sorted = means;
            std::sort(sorted.begin(), sorted.end());
            e.value = 0.5 * (sorted[kBlocks / 2 - 1] + sorted[kBlocks / 2]);
            // asymptotic efficiency loss of the median relative to the mean
            e.std_error = std::sqrt(std::numbers::pi / 2.0) * block_se;
        } else if (quasi_random) {
            // randomized QMC: the blocks are independent random shifts
            e.value = bm;
            e.std_error = block_se;
        } else {
            MomentSums t = total(k);
            e.value = t.mean();
            e.std_error = std::sqrt(t.variance() / static_cast<double>(t.count));
        }
        return e;
    }
};

/// Runs kernel(draw) -> std::array<double, K> once per sample. The kernel is
/// given a RandomDraw or a HaltonDraw positioned at a fresh point.
template <std::size_t K, class Kernel>
BlockMoments<K> run_blocks(const SamplingOptions& opt, std::uint64_t stream, Kernel&& kernel) {
    if (opt.samples < 2 * kBlocks) throw DomainError("sample count must be at least " + std::to_string(2 * kBlocks));
    const std::uint64_t n = opt.samples;
    const std::uint64_t per_block = (n + kBlocks - 1) / kBlocks;
    const std::uint64_t chunks_per_block = std::max<std::uint64_t>(1, (per_block + kChunkTarget - 1) / kChunkTarget);
    const std::uint64_t num_chunks = chunks_per_block * kBlocks;

    std::vector<std::array<MomentSums, K>> chunk_sums(num_chunks);
    parallel_for(num_chunks, opt.threads, [&](std::size_t c) {
        const std::uint64_t block = c / chunks_per_block;
        const std::uint64_t block_begin = block * n / kBlocks;
        const std::uint64_t block_end = (block + 1) * n / kBlocks;
        const std::uint64_t local = c % chunks_per_block;
        const std::uint64_t len = block_end - block_begin;
        const std::uint64_t begin = block_begin + local * len / chunks_per_block;
        const std::uint64_t end = block_begin + (local + 1) * len / chunks_per_block;
        auto& sums = chunk_sums[c];
        if (opt.quasi_random) {
            // every block replays the same Halton indices under its own shift
            HaltonDraw draw(opt.seed, (stream << 8) | block, 1 + (begin - block_begin));
            for (std::uint64_t i = begin; i < end; ++i) {
                auto v = kernel(draw);
                for (std::size_t k = 0; k < K; ++k) sums[k].add(v[k]);
                draw.next_point();
            }
        } else {
            RandomDraw draw(opt.seed, stream, c);
            for (std::uint64_t i = begin; i < end; ++i) {
                auto v = kernel(draw);
                for (std::size_t k = 0; k < K; ++k) sums[k].add(v[k]);
            }
        }
    });

    BlockMoments<K> out;
    out.samples = n;
    out.seed = opt.seed;
    out.quasi_random = opt.quasi_random;
    for (std::uint64_t c = 0; c < num_chunks; ++c)
        for (std::size_t k = 0; k < K; ++k) out.blocks[k][c / chunks_per_block].add(chunk_sums[c][k]);
    return out;
}

/// Scalar convenience wrapper.
template <class Kernel>
Estimate monte_carlo_mean(const SamplingOptions& opt, std::uint64_t stream, Aggregation agg, Kernel&& kernel) {
    auto moments = run_blocks<1>(opt, stream, [&](auto& draw) { return std::array<double, 1>{kernel(draw)}; });
    return moments.estimate(0, agg);
}

}  // namespace hwl
