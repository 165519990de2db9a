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

#ifndef WEAKCOMM_ADVERSARY_H
#define WEAKCOMM_ADVERSARY_H

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "weakcomm/protocols.h"

namespace weakcomm {

// Threat model. Implemented: key-frequency analysis of the public Protocol 1
// key, intercept-resend with a strong measurement, and per-spin weak taps
// decoded from the readings' mean, from a public key, or by correlating with
// Alice's released code. Not implemented: a collective projection on the
// N-spin state. Choosing that projector needs the code before the spins pass,
// which the session ordering in protocols.h rules out.

enum class Guess { kYes, kNo, kNone };

std::string_view to_string(Guess g);

struct EveDatum {
    std::string name;
    double value = 0.0;
};

struct AttackOutcome {
    Guess guess = Guess::kNone;
    /// Protocol 2 alarm raised by Bob.
    bool detected = false;
    std::vector<EveDatum> eve_data;
};

bool guessed_right(Guess g, Message m);

/// Eve reads the fraction of ones f in the public key and answers Yes when
/// f > 1/2 + d/2, the midpoint between the No (1/2) and Yes (1/2 + d) rates.
/// An empty key gives Guess::kNone.
AttackOutcome eve_frequency_attack(const Key &key, double d);

struct InterceptRecord {
    Axis axis = Axis::kY;
    std::vector<Outcome> outcomes;
};

/// Strongly measures every spin in transit along `axis` and forwards the
/// collapsed states.
InterceptRecord eve_intercept_resend(SpinRegister &spins, Axis axis, RandomStream &rng);

/// Protocol 1: Bob's key copies Eve's outcomes when he measured along her
/// axis. Yes if the agreement rate exceeds 3/4.
Guess intercept_guess_p1(const InterceptRecord &record, const Key &public_key);

/// Protocol 2: bins Alice's released code by Eve's outcomes and applies Bob's
/// decision rule.
Guess intercept_guess_p2(const InterceptRecord &record, const Code &alice_code, const PointerConfig &alice_cfg);

/// Eve's weak tap: her own weak measurement of (sigma_x + sigma_y)/sqrt(2) on
/// every spin in transit. The spins continue in their post-reading states.
struct WeakTap {
    PointerConfig pointer;
    Code readings;
};

WeakTap eve_weak_tap(SpinRegister &spins, const PointerConfig &eve_cfg, RandomStream &rng);

enum class WeakDecodeMode {
    /// Unbinned mean of Eve's own readings (no key, no code).
    kReadingsMean,
    /// Bin Eve's readings by a public key with Alice's Protocol 1 rule.
    kKeyBinning,
    /// Bin Alice's released code by the side of <A> each of Eve's readings
    /// falls on.
    kCodeCorrelation,
};

std::string_view to_string(WeakDecodeMode m);

/// Mean of `probe` after a weak coupling to `coupled` on `pre`, averaged over
/// readings: the component along the coupled axis survives, the transverse
/// part shrinks by <phi+|phi->.
double mean_after_weak_coupling(const SpinObservable &coupled, const SpinObservable &probe, const QubitState &pre,
                                const PointerConfig &cfg);

/// Protocol 2, no key: compares the mean of Eve's readings with its value
/// under each message (Alice's coupling dephases the No state), midpoint rule.
Guess weak_guess_readings_mean(const WeakTap &tap, const PointerConfig &alice_cfg);
Guess weak_guess_key_binning(const WeakTap &tap, const Key &public_key);
Guess weak_guess_code_correlation(const WeakTap &tap, const Code &alice_code, const PointerConfig &alice_cfg);

/// Assembles the outcome of a weak tap once the run has finished.
/// `public_key` is required for kKeyBinning, `alice_code` for
/// kCodeCorrelation; `bob_security` (Protocol 2) sets `detected`.
AttackOutcome eve_weak_attack(const WeakTap &tap, WeakDecodeMode mode, const PointerConfig &alice_cfg,
                              const Key *public_key, const Code *alice_code, const SecurityReport *bob_security);

/// Accuracy estimates over `trials` Protocol 1 runs, alternating Yes and No.
/// Trial t draws its streams from derive_seed(seed, {t}). Inconclusive counts
/// as wrong.
double p1_alice_accuracy(const PointerConfig &cfg, std::size_t n, std::size_t trials, uint64_t seed,
                         unsigned workers = 0);
double p1_eve_frequency_accuracy(const PointerConfig &cfg, std::size_t n, std::size_t trials, uint64_t seed,
                                 unsigned workers = 0);

struct ScalingOptions {
    double accuracy_target = 0.95;
    std::size_t trials = 200;
    uint64_t base_seed = 1;
    /// Largest N probed; a search that reaches it is reported as saturated.
    std::size_t n_budget = std::size_t{1} << 23;
    /// Bisection stops once hi - lo <= max(1, resolution * lo).
    double resolution = 0.05;
    unsigned workers = 0;
};

struct ScalingReport {
    std::vector<double> d_values;
    std::vector<std::size_t> n_alice;
    std::vector<std::size_t> n_eve;
    std::vector<double> ratios;
    std::vector<bool> alice_saturated;
    std::vector<bool> eve_saturated;

    /// Least-squares slope of log(n_eve / n_alice) against log(1 / D).
    double slope() const;
};

struct SearchResult {
    std::size_t n = 0;
    bool saturated = false;
    std::size_t probes = 0;
};

/// For each D: Alice's and Eve's (key frequency) minimal Protocol 1 sample
/// sizes at the target accuracy. Throws std::invalid_argument for D outside
/// (0, 0.05] or fewer than 200 trials.
ScalingReport scaling_experiment(std::span<const double> d_grid, const ScalingOptions &opt);

double loglog_slope(std::span<const double> x, std::span<const double> y);

/// Smallest N whose estimated accuracy reaches the target, found by doubling
/// (or halving) from `start` and then bisecting. Every probe uses a fresh seed
/// derived from `seed` and the probe number. `accuracy_at(n, probe_seed)`.
template <class AccuracyAt>
SearchResult search_min_n(AccuracyAt &&accuracy_at, std::size_t start, const ScalingOptions &opt, uint64_t seed) {
    SearchResult r;
    auto passes = [&](std::size_t n) {
        return accuracy_at(n, derive_seed(seed, {r.probes++})) >= opt.accuracy_target;
    };
    std::size_t n = std::clamp<std::size_t>(start, 1, opt.n_budget);
    std::size_t lo = 0;  // largest N seen failing (0: none)
    std::size_t hi = 0;  // smallest N seen passing
    if (passes(n)) {
        hi = n;
        while (hi > 1) {
            std::size_t half = hi / 2;
            if (!passes(half)) {
                lo = half;
                break;
            }
            hi = half;
        }
        if (lo == 0) {
            r.n = hi;
            return r;
        }
    } else {
        lo = n;
        while (true) {
            if (lo >= opt.n_budget) {
                r.n = opt.n_budget;
                r.saturated = true;
                return r;
            }
            std::size_t next = std::min(lo * 2, opt.n_budget);
            if (passes(next)) {
                hi = next;
                break;
            }
            lo = next;
        }
    }
    while (hi - lo > std::max<std::size_t>(1, static_cast<std::size_t>(opt.resolution * static_cast<double>(lo)))) {
        std::size_t mid = lo + (hi - lo) / 2;
        if (passes(mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    r.n = hi;
    return r;
}

}  // namespace weakcomm

#endif
