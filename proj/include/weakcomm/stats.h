// Copyright 2026 The weakcomm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef WEAKCOMM_STATS_H
#define WEAKCOMM_STATS_H

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>

namespace weakcomm {

/// Reproducible random source.
///
/// A stream is keyed by `(seed, stream_id)`; the i-th 64-bit output is a pure
/// function of the key and i (SplitMix64 finalizer applied to
/// `key + (i + 1) * 0x9E3779B97F4A7C15`). Streams never share state, so
/// parallel trials that each own a derived stream are reproducible no matter
/// how they are scheduled.
///
/// Key derivation: `key = mix64(seed ^ mix64(stream_id ^ 0xD1B54A32D192ED03))`,
/// where `mix64` is the SplitMix64 finalizer. For a fixed seed the map
/// stream_id -> key is a bijection (and vice versa). This function is part of
/// the transcript format; changing it changes every regenerated transcript.
///
/// Normal deviates use the Box-Muller transform on two uniforms, caching the
/// second deviate for the next call.
///
/// Single consumer: not safe to share across threads.
class RandomStream {
   public:
    RandomStream(uint64_t seed, uint64_t stream_id);

    uint64_t seed() const { return seed_; }
    uint64_t stream_id() const { return stream_id_; }
    uint64_t draws() const { return counter_; }

    uint64_t next_u64();
    /// Uniform on [0, 1) with 53 bits of resolution.
    double uniform();
    /// True with probability `p`.
    bool bernoulli(double p);
    /// Standard normal deviate.
    double standard_normal();

   private:
    uint64_t seed_;
    uint64_t stream_id_;
    uint64_t key_;
    uint64_t counter_ = 0;
    std::optional<double> cached_normal_;
};

/// SplitMix64 finalizer; a bijection on 64-bit words.
uint64_t mix64(uint64_t x);

RandomStream derive_stream(uint64_t base_seed, uint64_t index);

/// Folds a path of indices into a seed: `derive_seed(s, {a, b})` is the seed
/// of stream `b` under the seed of stream `a` under `s`.
uint64_t derive_seed(uint64_t base_seed, std::initializer_list<uint64_t> path);

/// `mean + sd * z` with z standard normal. Throws std::invalid_argument for
/// negative (or NaN) sd; sd == 0 returns `mean` without consuming draws.
double gaussian(RandomStream &rng, double mean, double sd);

struct SampleStats {
    std::size_t n = 0;
    double mean = 0.0;
    double stderr_mean = 0.0;
};

/// Mean and standard error of `values`. With `fixed_sd` the standard error is
/// `fixed_sd / sqrt(n)` (the pointer-width convention); otherwise the sample
/// standard deviation (n - 1 denominator, 0 for n == 1) is used.
SampleStats sample_stats(std::span<const double> values, std::optional<double> fixed_sd = std::nullopt);

/// Standard normal CDF.
double normal_cdf(double x);
/// Inverse of normal_cdf on (0, 1).
double normal_quantile(double p);

/// Smallest N >= 1 with `normal_cdf(separation * sqrt(N) / (2 * sd_per_sample)) >= target_accuracy`:
/// the sample size at which a midpoint threshold between two Gaussian
/// hypotheses `separation` apart is right with the target probability.
std::size_t required_n(double separation, double sd_per_sample, double target_accuracy);

/// Sample Pearson correlation of two equally long sequences.
double pearson_correlation(std::span<const double> a, std::span<const double> b);

}  // namespace weakcomm

#endif
