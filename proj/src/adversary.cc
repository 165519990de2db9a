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

#include "weakcomm/adversary.h"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "weakcomm/parallel.h"

namespace weakcomm {

std::string_view to_string(Guess g) {
    switch (g) {
        case Guess::kYes:
            return "yes";
        case Guess::kNo:
            return "no";
        case Guess::kNone:
            return "none";
    }
    return "none";
}

std::string_view to_string(WeakDecodeMode m) {
    switch (m) {
        case WeakDecodeMode::kReadingsMean:
            return "readings_mean";
        case WeakDecodeMode::kKeyBinning:
            return "key_binning";
        case WeakDecodeMode::kCodeCorrelation:
            return "code_correlation";
    }
    return "readings_mean";
}

bool guessed_right(Guess g, Message m) {
    return (g == Guess::kYes && m == Message::kYes) || (g == Guess::kNo && m == Message::kNo);
}

namespace {

// Eve has no Inconclusive option: she takes the closer hypothesis, and No when
// a bin is too thin to score.
Guess pick(const DecodeReport &r) {
    if (std::isfinite(r.score_yes) && std::isfinite(r.score_no)) {
        return r.score_yes < r.score_no ? Guess::kYes : Guess::kNo;
    }
    return Guess::kNo;
}

double mean_of(const std::vector<double> &v) {
    double s = 0.0;
    for (double x : v) {
        s += x;
    }
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

const QubitState &x_plus() {
    static const QubitState s = sigma_x().eigenstate(Outcome::kPlus);
    return s;
}

}  // namespace

AttackOutcome eve_frequency_attack(const Key &key, double d) {
    AttackOutcome out;
    if (key.bits.empty()) {
        return out;
    }
    std::size_t ones = 0;
    for (uint8_t b : key.bits) {
        ones += b;
    }
    double f = static_cast<double>(ones) / static_cast<double>(key.size());
    double threshold = 0.5 + d / 2.0;
    out.guess = f > threshold ? Guess::kYes : Guess::kNo;
    out.eve_data = {{"ones_fraction", f}, {"threshold", threshold}, {"key_length", static_cast<double>(key.size())}};
    return out;
}

InterceptRecord eve_intercept_resend(SpinRegister &spins, Axis axis, RandomStream &rng) {
    InterceptRecord record;
    record.axis = axis;
    record.outcomes.reserve(spins.size());
    const SpinObservable obs = axis_observable(axis);
    for (std::size_t i = 0; i < spins.size(); ++i) {
        StrongResult r = measure_strong(spins.state(i), obs, rng);
        spins.replace(i, r.collapsed);
        record.outcomes.push_back(r.outcome);
    }
    return record;
}

Guess intercept_guess_p1(const InterceptRecord &record, const Key &public_key) {
    if (record.outcomes.size() != public_key.size()) {
        throw std::invalid_argument("intercept_guess_p1: record and key lengths differ");
    }
    if (public_key.bits.empty()) {
        return Guess::kNone;
    }
    std::size_t agree = 0;
    for (std::size_t i = 0; i < public_key.size(); ++i) {
        agree += (record.outcomes[i] == Outcome::kPlus) == (public_key.bits[i] == 1) ? 1 : 0;
    }
    double rate = static_cast<double>(agree) / static_cast<double>(public_key.size());
    // Bob measures sigma_y for Yes and sigma_z for No.
    Axis bob_yes_axis = Axis::kY;
    Axis bob_no_axis = Axis::kZ;
    if (record.axis == bob_yes_axis) {
        return rate > 0.75 ? Guess::kYes : Guess::kNo;
    }
    if (record.axis == bob_no_axis) {
        return rate > 0.75 ? Guess::kNo : Guess::kYes;
    }
    // Along x neither basis reproduces Eve's outcomes.
    return Guess::kNo;
}

Guess intercept_guess_p2(const InterceptRecord &record, const Code &alice_code, const PointerConfig &alice_cfg) {
    if (record.outcomes.size() != alice_code.size()) {
        throw std::invalid_argument("intercept_guess_p2: record and code lengths differ");
    }
    std::vector<uint8_t> labels;
    labels.reserve(record.outcomes.size());
    for (Outcome o : record.outcomes) {
        labels.push_back(o == Outcome::kPlus ? 1 : 0);
    }
    return pick(decode_bins(alice_code.readings, labels, alice_cfg.delta_p(), p2_hypothesis(Message::kYes, alice_cfg),
                            p2_hypothesis(Message::kNo, alice_cfg)));
}

WeakTap eve_weak_tap(SpinRegister &spins, const PointerConfig &eve_cfg, RandomStream &rng) {
    WeakTap tap{eve_cfg, {}};
    tap.readings.readings.reserve(spins.size());
    const WeakMeter meter(diagonal_xy_plus(), eve_cfg);
    for (std::size_t i = 0; i < spins.size(); ++i) {
        WeakReading r = meter.sample(spins.state(i), rng);
        spins.replace(i, r.post_state);
        tap.readings.readings.push_back(r.p);
    }
    return tap;
}

double mean_after_weak_coupling(const SpinObservable &coupled, const SpinObservable &probe, const QubitState &pre,
                                const PointerConfig &cfg) {
    const Vec3 &a = coupled.direction();
    const Vec3 &b = probe.direction();
    Vec3 r = pre.bloch();
    double parallel = b.dot(a) * r.dot(a);
    return parallel + cfg.overlap_factor() * (b.dot(r) - parallel);
}

Guess weak_guess_readings_mean(const WeakTap &tap, const PointerConfig &alice_cfg) {
    if (tap.readings.readings.empty()) {
        return Guess::kNone;
    }
    double if_yes = mean_after_weak_coupling(diagonal_xy_plus(), diagonal_xy_plus(), x_plus(), alice_cfg);
    double if_no = mean_after_weak_coupling(diagonal_xy_minus(), diagonal_xy_plus(), x_plus(), alice_cfg);
    double threshold = (if_yes + if_no) / 2.0;
    return mean_of(tap.readings.readings) > threshold ? Guess::kYes : Guess::kNo;
}

Guess weak_guess_key_binning(const WeakTap &tap, const Key &public_key) {
    return pick(decode_bins(tap.readings.readings, public_key.bits, tap.pointer.delta_p(),
                            p1_hypothesis(Message::kYes, tap.pointer), p1_hypothesis(Message::kNo, tap.pointer)));
}

Guess weak_guess_code_correlation(const WeakTap &tap, const Code &alice_code, const PointerConfig &alice_cfg) {
    if (alice_code.size() != tap.readings.size()) {
        throw std::invalid_argument("weak_guess_code_correlation: code and tap lengths differ");
    }
    const double center = std::numbers::sqrt2 / 2.0;
    std::vector<uint8_t> labels;
    labels.reserve(alice_code.size());
    for (double q : tap.readings.readings) {
        labels.push_back(q > center ? 1 : 0);
    }
    // Under Yes both pointers coupled to the same observable, so Alice's
    // readings run higher where Eve's do; under No the bins agree on average.
    DecodeReport r = decode_bins(alice_code.readings, labels, alice_cfg.delta_p(), {}, {});
    if (r.n_bin1 == 0 || r.n_bin0 == 0) {
        return Guess::kNo;
    }
    return r.mean_bin1 > r.mean_bin0 ? Guess::kYes : Guess::kNo;
}

AttackOutcome eve_weak_attack(const WeakTap &tap, WeakDecodeMode mode, const PointerConfig &alice_cfg,
                              const Key *public_key, const Code *alice_code, const SecurityReport *bob_security) {
    AttackOutcome out;
    switch (mode) {
        case WeakDecodeMode::kReadingsMean:
            out.guess = weak_guess_readings_mean(tap, alice_cfg);
            break;
        case WeakDecodeMode::kKeyBinning:
            if (public_key == nullptr) {
                throw std::invalid_argument("eve_weak_attack: key binning needs the public key");
            }
            out.guess = weak_guess_key_binning(tap, *public_key);
            break;
        case WeakDecodeMode::kCodeCorrelation:
            if (alice_code == nullptr) {
                throw std::invalid_argument("eve_weak_attack: code correlation needs Alice's code");
            }
            out.guess = weak_guess_code_correlation(tap, *alice_code, alice_cfg);
            break;
    }
    out.detected = bob_security != nullptr && bob_security->alarm;
    out.eve_data = {{"eve_delta_p", tap.pointer.delta_p()},
                    {"eve_disturbance", tap.pointer.nominal_disturbance()},
                    {"eve_readings_mean", mean_of(tap.readings.readings)}};
    return out;
}

namespace {

template <class TrialBody>
double accuracy_over(std::size_t trials, uint64_t seed, unsigned workers, TrialBody &&body) {
    if (trials == 0) {
        throw std::invalid_argument("accuracy: trials must be positive");
    }
    std::vector<uint8_t> right(trials, 0);
    parallel_for(
        trials,
        [&](std::size_t t) {
            Message m = t % 2 == 0 ? Message::kYes : Message::kNo;
            right[t] = body(m, derive_seed(seed, {t})) ? 1 : 0;
        },
        workers);
    std::size_t total = 0;
    for (uint8_t r : right) {
        total += r;
    }
    return static_cast<double>(total) / static_cast<double>(trials);
}

}  // namespace

double p1_alice_accuracy(const PointerConfig &cfg, std::size_t n, std::size_t trials, uint64_t seed,
                         unsigned workers) {
    return accuracy_over(trials, seed, workers, [&](Message m, uint64_t trial_seed) {
        PartyStreams s = party_streams(trial_seed);
        EncodeResult enc = p1_alice_encode(n, cfg, s.alice);
        Key key = p1_bob_respond(enc.spins, m, s.bob);
        Decision d = p1_alice_decode(enc.code, key, cfg).decision;
        return (d == Decision::kYes && m == Message::kYes) || (d == Decision::kNo && m == Message::kNo);
    });
}

double p1_eve_frequency_accuracy(const PointerConfig &cfg, std::size_t n, std::size_t trials, uint64_t seed,
                                 unsigned workers) {
    double d = cfg.nominal_disturbance();
    return accuracy_over(trials, seed, workers, [&](Message m, uint64_t trial_seed) {
        PartyStreams s = party_streams(trial_seed);
        EncodeResult enc = p1_alice_encode(n, cfg, s.alice);
        Key key = p1_bob_respond(enc.spins, m, s.bob);
        return guessed_right(eve_frequency_attack(key, d).guess, m);
    });
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw std::invalid_argument("loglog_slope: need at least two aligned points");
    }
    double n = static_cast<double>(x.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += std::log(x[i]);
        my += std::log(y[i]);
    }
    mx /= n;
    my /= n;
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double dx = std::log(x[i]) - mx;
        sxy += dx * (std::log(y[i]) - my);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

double ScalingReport::slope() const {
    std::vector<double> inv_d;
    for (double d : d_values) {
        inv_d.push_back(1.0 / d);
    }
    return loglog_slope(inv_d, ratios);
}

ScalingReport scaling_experiment(std::span<const double> d_grid, const ScalingOptions &opt) {
    if (opt.trials < 200) {
        throw std::invalid_argument("scaling_experiment: at least 200 trials per probe");
    }
    if (!(opt.accuracy_target > 0.5 && opt.accuracy_target < 1.0)) {
        throw std::invalid_argument("scaling_experiment: accuracy target must be in (0.5, 1)");
    }
    for (double d : d_grid) {
        if (!(d > 0.0 && d <= 0.05)) {
            throw std::invalid_argument("scaling_experiment: D must lie in (0, 0.05]");
        }
    }
    ScalingReport report;
    for (std::size_t i = 0; i < d_grid.size(); ++i) {
        double d = d_grid[i];
        PointerConfig cfg(delta_p_for_disturbance(d));

        // Analytic starting points: Alice separates bin means sqrt(2) apart
        // with half the sample per bin; Eve separates key rates D apart.
        std::size_t alice_start = 2 * required_n(std::numbers::sqrt2, cfg.delta_p(), opt.accuracy_target);
        std::size_t eve_start = required_n(d, 0.5, opt.accuracy_target);

        SearchResult alice = search_min_n(
            [&](std::size_t n, uint64_t s) { return p1_alice_accuracy(cfg, n, opt.trials, s, opt.workers); },
            alice_start, opt, derive_seed(opt.base_seed, {i, 0}));
        SearchResult eve = search_min_n(
            [&](std::size_t n, uint64_t s) { return p1_eve_frequency_accuracy(cfg, n, opt.trials, s, opt.workers); },
            eve_start, opt, derive_seed(opt.base_seed, {i, 1}));

        report.d_values.push_back(d);
        report.n_alice.push_back(alice.n);
        report.n_eve.push_back(eve.n);
        report.ratios.push_back(static_cast<double>(eve.n) / static_cast<double>(alice.n));
        report.alice_saturated.push_back(alice.saturated);
        report.eve_saturated.push_back(eve.saturated);
    }
    return report;
}

}  // namespace weakcomm
