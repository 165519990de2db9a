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

#include "weakcomm/stats.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "gtest/gtest.h"
#include "weakcomm/spin.h"
#include "weakcomm/weak_measurement.h"

using namespace weakcomm;

TEST(derive_stream, identical_inputs_give_identical_streams) {
    RandomStream a = derive_stream(42, 7);
    RandomStream b = derive_stream(42, 7);
    for (int k = 0; k < 1000; ++k) {
        ASSERT_EQ(a.next_u64(), b.next_u64());
    }
    RandomStream c = derive_stream(42, 7);
    RandomStream d = derive_stream(42, 7);
    for (int k = 0; k < 1000; ++k) {
        ASSERT_EQ(c.standard_normal(), d.standard_normal());
    }
}

TEST(derive_stream, frozen_first_outputs) {
    // Pins the mixing function: transcripts depend on it.
    EXPECT_EQ(mix64(0), 0ULL);
    EXPECT_EQ(mix64(1), 0x5692161D100B05E5ULL);
    RandomStream s = derive_stream(0, 0);
    uint64_t key = mix64(0 ^ mix64(0xD1B54A32D192ED03ULL));
    EXPECT_EQ(s.next_u64(), mix64(key + 0x9E3779B97F4A7C15ULL));
}

TEST(derive_stream, neighbouring_streams_are_uncorrelated) {
    for (uint64_t seed : {1ULL, 2ULL, 12345ULL, 0xFFFFFFFFFFFFFFFFULL}) {
        RandomStream a = derive_stream(seed, 0);
        RandomStream b = derive_stream(seed, 1);
        std::vector<double> ua;
        std::vector<double> ub;
        for (int k = 0; k < 10000; ++k) {
            ua.push_back(a.uniform());
            ub.push_back(b.uniform());
        }
        EXPECT_LT(std::abs(pearson_correlation(ua, ub)), 0.05) << "seed " << seed;
    }
}

TEST(derive_stream, different_seeds_differ) {
    RandomStream pick(99, 0);
    for (int k = 0; k < 1000; ++k) {
        uint64_t s = pick.next_u64();
        uint64_t t = pick.next_u64();
        if (s == t) {
            continue;
        }
        uint64_t i = pick.next_u64() % 1000;
        EXPECT_NE(derive_stream(s, i).next_u64(), derive_stream(t, i).next_u64());
    }
}

TEST(derive_stream, injective_on_a_million_pairs) {
    RandomStream pick(5, 5);
    std::vector<uint64_t> firsts;
    firsts.reserve(1000000);
    for (int k = 0; k < 1000000; ++k) {
        // Mix of structured and random pairs.
        uint64_t seed = k % 2 == 0 ? static_cast<uint64_t>(k / 1000) : pick.next_u64();
        uint64_t index = k % 2 == 0 ? static_cast<uint64_t>(k % 1000) : pick.next_u64();
        firsts.push_back(derive_stream(seed, index).next_u64());
    }
    std::sort(firsts.begin(), firsts.end());
    EXPECT_EQ(std::adjacent_find(firsts.begin(), firsts.end()), firsts.end());
}

TEST(derive_seed, path_dependent) {
    EXPECT_EQ(derive_seed(3, {1, 2}), derive_seed(3, {1, 2}));
    EXPECT_NE(derive_seed(3, {1, 2}), derive_seed(3, {2, 1}));
    EXPECT_NE(derive_seed(3, {1}), derive_seed(3, {1, 0}));
    EXPECT_EQ(derive_seed(3, {}), 3u);
}

TEST(random_stream, uniform_range) {
    RandomStream r(1, 1);
    double lo = 1.0;
    double hi = 0.0;
    for (int k = 0; k < 100000; ++k) {
        double u = r.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        lo = std::min(lo, u);
        hi = std::max(hi, u);
    }
    EXPECT_LT(lo, 1e-3);
    EXPECT_GT(hi, 1 - 1e-3);
}

TEST(gaussian, zero_sd_returns_mean_exactly) {
    RandomStream r(1, 2);
    EXPECT_EQ(gaussian(r, 0.7071, 0.0), 0.7071);
    EXPECT_EQ(r.draws(), 0u);
}

TEST(gaussian, negative_sd_is_rejected) {
    RandomStream r(1, 2);
    EXPECT_THROW(gaussian(r, 0.0, -1.0), std::invalid_argument);
    EXPECT_THROW(gaussian(r, 0.0, std::nan("")), std::invalid_argument);
}

TEST(gaussian, moments_and_tail_over_a_million_draws) {
    RandomStream r(2024, 0);
    const int n = 1000000;
    double sum = 0.0;
    double sum2 = 0.0;
    int tail = 0;
    for (int k = 0; k < n; ++k) {
        double z = gaussian(r, 0.0, 1.0);
        sum += z;
        sum2 += z * z;
        tail += std::abs(z) > 1.96 ? 1 : 0;
    }
    double mean = sum / n;
    double var = sum2 / n - mean * mean;
    EXPECT_LT(std::abs(mean), 4.0 / 1000.0);
    EXPECT_NEAR(var, 1.0, 0.01);
    // 2 (1 - Phi(1.96)) = 0.04999579.
    EXPECT_NEAR(static_cast<double>(tail) / n, 0.05, 0.002);

    RandomStream s(2024, 1);
    const double sd = 5.0;
    sum = 0.0;
    sum2 = 0.0;
    for (int k = 0; k < n; ++k) {
        double z = gaussian(s, 3.0, sd);
        sum += z;
        sum2 += z * z;
    }
    mean = sum / n;
    var = sum2 / n - mean * mean;
    EXPECT_NEAR(mean, 3.0, 4.0 * sd / 1000.0);
    EXPECT_NEAR(var, sd * sd, 0.01 * sd * sd);
}

TEST(gaussian, matches_pointer_marginal_components) {
    // The reading marginal for |x+> and (sigma_x + sigma_y)/sqrt2 is
    // 0.8536 N(1, 25) + 0.1464 N(-1, 25): mean 1/sqrt2, variance 25 + 1/2.
    // A single gaussian(1/sqrt2, 5) has the same mean and variance 25.
    const int n = 200000;
    RandomStream g(8, 0);
    RandomStream w(8, 1);
    PointerConfig cfg(5.0);
    QubitState xp = bloch_state({1, 0, 0});
    double gs = 0, gs2 = 0, ws = 0, ws2 = 0;
    for (int k = 0; k < n; ++k) {
        double a = gaussian(g, std::numbers::sqrt2 / 2, 5.0);
        double b = sample_weak_reading(xp, diagonal_xy_plus(), cfg, w).p;
        gs += a;
        gs2 += a * a;
        ws += b;
        ws2 += b * b;
    }
    double gm = gs / n, wm = ws / n;
    EXPECT_NEAR(gm, std::numbers::sqrt2 / 2, 4 * 5.0 / std::sqrt(n));
    EXPECT_NEAR(wm, std::numbers::sqrt2 / 2, 4 * 5.0 / std::sqrt(n));
    EXPECT_NEAR(gs2 / n - gm * gm, 25.0, 0.02 * 25.0);
    EXPECT_NEAR(ws2 / n - wm * wm, 25.5, 0.02 * 25.5);
}

TEST(sample_stats, examples) {
    std::vector<double> ones{1, 1, 1};
    SampleStats a = sample_stats(ones);
    EXPECT_EQ(a.n, 3u);
    EXPECT_EQ(a.mean, 1.0);
    EXPECT_EQ(a.stderr_mean, 0.0);

    std::vector<double> two{0, 2};
    SampleStats b = sample_stats(two, 5.0);
    EXPECT_EQ(b.mean, 1.0);
    EXPECT_NEAR(b.stderr_mean, 3.5355339059327378, 1e-15);

    SampleStats c = sample_stats(two);
    EXPECT_NEAR(c.stderr_mean, 1.0, 1e-15);  // sd sqrt(2), over sqrt(2)

    EXPECT_THROW(sample_stats(std::vector<double>{}), std::invalid_argument);
}

TEST(sample_stats, gaussian_sample_mean) {
    RandomStream r(77, 0);
    std::vector<double> v;
    for (int k = 0; k < 100000; ++k) {
        v.push_back(gaussian(r, 0.7071, 5.0));
    }
    SampleStats s = sample_stats(v, 5.0);
    EXPECT_NEAR(s.mean, 0.7071, 4 * 0.0158);
    EXPECT_NEAR(s.stderr_mean, 5.0 / std::sqrt(100000.0), 1e-15);
    EXPECT_NEAR(sample_stats(v).stderr_mean, s.stderr_mean, 0.02 * s.stderr_mean);
}

TEST(normal_cdf, reference_values) {
    EXPECT_NEAR(normal_cdf(0.0), 0.5, 1e-15);
    EXPECT_NEAR(normal_cdf(1.96), 0.9750021048517795, 1e-7);
    EXPECT_NEAR(normal_cdf(-1.0), 0.15865525393145707, 1e-7);
    EXPECT_NEAR(normal_quantile(0.95), 1.6448536269514722, 1e-9);
    EXPECT_THROW(normal_quantile(1.0), std::invalid_argument);
}

TEST(required_n, alice_bin_size) {
    // (2 * 1.6449 * 5 / sqrt2)^2 = 135.28 -> 136 per bin.
    EXPECT_EQ(required_n(std::numbers::sqrt2, 5.0, 0.95), 136u);
}

TEST(required_n, eve_key_length) {
    // (1.6449 / D)^2 = 108221.7 at D = 0.005, i.e. about 2.7 / D^2.
    EXPECT_EQ(required_n(0.005, 0.5, 0.95), 108222u);
    for (double d : {0.02, 0.01, 0.0025}) {
        double n = static_cast<double>(required_n(d, 0.5, 0.95));
        EXPECT_NEAR(n * d * d, 2.7055, 0.01) << d;
    }
}

TEST(required_n, target_near_half_needs_one_sample) {
    EXPECT_EQ(required_n(1.0, 1.0, 0.5 + 1e-12), 1u);
    EXPECT_EQ(required_n(0.01, 1.0, 0.5 + 1e-9), 1u);
}

TEST(required_n, minimality) {
    for (double sep : {0.1, 0.5, 1.0}) {
        for (double target : {0.6, 0.9, 0.99}) {
            std::size_t n = required_n(sep, 1.0, target);
            EXPECT_GE(normal_cdf(sep * std::sqrt(double(n)) / 2.0), target);
            if (n > 1) {
                EXPECT_LT(normal_cdf(sep * std::sqrt(double(n - 1)) / 2.0), target);
            }
        }
    }
}

TEST(required_n, monotone) {
    RandomStream r(3, 3);
    for (int k = 0; k < 200; ++k) {
        double sep = 0.01 + r.uniform();
        double sd = 0.1 + r.uniform() * 5;
        double target = 0.51 + 0.48 * r.uniform();
        std::size_t base = required_n(sep, sd, target);
        EXPECT_LE(required_n(sep * 1.5, sd, target), base);
        EXPECT_GE(required_n(sep, sd * 1.5, target), base);
        EXPECT_GE(required_n(sep, sd, std::min(0.999, target + 0.01)), base);
    }
}

TEST(required_n, invalid_arguments) {
    EXPECT_THROW(required_n(1.0, 1.0, 0.5), std::invalid_argument);
    EXPECT_THROW(required_n(1.0, 1.0, 1.0), std::invalid_argument);
    EXPECT_THROW(required_n(0.0, 1.0, 0.9), std::invalid_argument);
    EXPECT_THROW(required_n(1.0, -1.0, 0.9), std::invalid_argument);
}
