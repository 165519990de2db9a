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

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <boost/math/distributions/normal.hpp>

namespace weakcomm {

namespace {

constexpr uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
constexpr uint64_t kStreamSalt = 0xD1B54A32D192ED03ULL;

}  // namespace

uint64_t mix64(uint64_t x) {
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

RandomStream::RandomStream(uint64_t seed, uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id), key_(mix64(seed ^ mix64(stream_id ^ kStreamSalt))) {
}

uint64_t RandomStream::next_u64() {
    ++counter_;
    return mix64(key_ + counter_ * kGolden);
}

double RandomStream::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

bool RandomStream::bernoulli(double p) {
    return uniform() < p;
}

double RandomStream::standard_normal() {
    if (cached_normal_) {
        double z = *cached_normal_;
        cached_normal_.reset();
        return z;
    }
    // u1 in (0, 1] keeps the log finite.
    double u1 = 1.0 - uniform();
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double theta = 2.0 * std::numbers::pi * u2;
    cached_normal_ = r * std::sin(theta);
    return r * std::cos(theta);
}

RandomStream derive_stream(uint64_t base_seed, uint64_t index) {
    return RandomStream(base_seed, index);
}

uint64_t derive_seed(uint64_t base_seed, std::initializer_list<uint64_t> path) {
    uint64_t s = base_seed;
    for (uint64_t index : path) {
        s = RandomStream(s, index).next_u64();
    }
    return s;
}

double gaussian(RandomStream &rng, double mean, double sd) {
    if (!(sd >= 0.0)) {
        throw std::invalid_argument("gaussian: standard deviation must be non-negative");
    }
    if (sd == 0.0) {
        return mean;
    }
    return mean + sd * rng.standard_normal();
}

SampleStats sample_stats(std::span<const double> values, std::optional<double> fixed_sd) {
    if (values.empty()) {
        throw std::invalid_argument("sample_stats: empty sample");
    }
    SampleStats out;
    out.n = values.size();
    double sum = 0.0;
    for (double v : values) {
        sum += v;
    }
    out.mean = sum / static_cast<double>(out.n);
    double root_n = std::sqrt(static_cast<double>(out.n));
    if (fixed_sd) {
        out.stderr_mean = *fixed_sd / root_n;
        return out;
    }
    if (out.n < 2) {
        out.stderr_mean = 0.0;
        return out;
    }
    double ss = 0.0;
    for (double v : values) {
        ss += (v - out.mean) * (v - out.mean);
    }
    out.stderr_mean = std::sqrt(ss / static_cast<double>(out.n - 1)) / root_n;
    return out;
}

double normal_cdf(double x) {
    return boost::math::cdf(boost::math::normal_distribution<double>(), x);
}

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::invalid_argument("normal_quantile: probability must be in (0, 1)");
    }
    return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

std::size_t required_n(double separation, double sd_per_sample, double target_accuracy) {
    if (!(separation > 0.0) || !(sd_per_sample > 0.0)) {
        throw std::invalid_argument("required_n: separation and sd must be positive");
    }
    if (!(target_accuracy > 0.5 && target_accuracy < 1.0)) {
        throw std::invalid_argument("required_n: target accuracy must be in (0.5, 1)");
    }
    auto accuracy = [&](double n) { return normal_cdf(separation * std::sqrt(n) / (2.0 * sd_per_sample)); };
    double z = normal_quantile(target_accuracy);
    double estimate = std::ceil(std::pow(2.0 * sd_per_sample * z / separation, 2));
    if (!(estimate < 9.0e18)) {
        throw std::invalid_argument("required_n: sample size overflows");
    }
    auto n = static_cast<std::size_t>(std::max(1.0, estimate));
    // The closed form can land one off either way after rounding.
    while (accuracy(static_cast<double>(n)) < target_accuracy) {
        ++n;
    }
    while (n > 1 && accuracy(static_cast<double>(n - 1)) >= target_accuracy) {
        --n;
    }
    return n;
}

double pearson_correlation(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size() || a.size() < 2) {
        throw std::invalid_argument("pearson_correlation: need two equally long samples of size >= 2");
    }
    double n = static_cast<double>(a.size());
    double ma = 0.0;
    double mb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= n;
    mb /= n;
    double sab = 0.0;
    double saa = 0.0;
    double sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    return sab / std::sqrt(saa * sbb);
}

}  // namespace weakcomm
