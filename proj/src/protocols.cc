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

#include "weakcomm/protocols.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace weakcomm {

std::string_view to_string(Message m) {
    return m == Message::kYes ? "yes" : "no";
}

std::string_view to_string(Decision d) {
    switch (d) {
        case Decision::kYes:
            return "yes";
        case Decision::kNo:
            return "no";
        case Decision::kInconclusive:
            return "inconclusive";
    }
    return "inconclusive";
}

std::string_view to_string(Axis a) {
    switch (a) {
        case Axis::kX:
            return "x";
        case Axis::kY:
            return "y";
        case Axis::kZ:
            return "z";
    }
    return "x";
}

SpinObservable axis_observable(Axis a) {
    switch (a) {
        case Axis::kX:
            return sigma_x();
        case Axis::kY:
            return sigma_y();
        case Axis::kZ:
            return sigma_z();
    }
    return sigma_z();
}

SpinRegister::SpinRegister(std::vector<QubitState> spins) : spins_(std::move(spins)), consumed_(spins_.size(), 0) {
}

bool SpinRegister::any_consumed() const {
    return std::any_of(consumed_.begin(), consumed_.end(), [](uint8_t c) { return c != 0; });
}

Outcome SpinRegister::measure(std::size_t i, const SpinObservable &obs, RandomStream &rng) {
    if (consumed_.at(i)) {
        throw ProtocolViolation("spin " + std::to_string(i) + " was already measured");
    }
    StrongResult r = measure_strong(spins_[i], obs, rng);
    spins_[i] = r.collapsed;
    consumed_[i] = 1;
    return r.outcome;
}

void SpinRegister::replace(std::size_t i, const QubitState &state) {
    if (consumed_.at(i)) {
        throw ProtocolViolation("spin " + std::to_string(i) + " is no longer in transit");
    }
    spins_[i] = state;
}

SpinRegister SpinRegister::permuted(std::span<const std::size_t> perm) const {
    if (perm.size() != spins_.size()) {
        throw std::invalid_argument("permuted: permutation size mismatch");
    }
    SpinRegister out;
    out.spins_.reserve(perm.size());
    out.consumed_.reserve(perm.size());
    for (std::size_t k : perm) {
        out.spins_.push_back(spins_.at(k));
        out.consumed_.push_back(consumed_.at(k));
    }
    return out;
}

DecodeReport decode_bins(std::span<const double> readings, std::span<const uint8_t> labels, double delta_p,
                         const BinMeans &yes, const BinMeans &no) {
    if (readings.size() != labels.size()) {
        throw std::invalid_argument("decode: code and key lengths differ");
    }
    double sum1 = 0.0;
    double sum0 = 0.0;
    DecodeReport r;
    for (std::size_t i = 0; i < readings.size(); ++i) {
        if (labels[i] == 1) {
            sum1 += readings[i];
            ++r.n_bin1;
        } else if (labels[i] == 0) {
            sum0 += readings[i];
            ++r.n_bin0;
        }
    }
    constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
    r.mean_bin1 = r.n_bin1 ? sum1 / static_cast<double>(r.n_bin1) : kNaN;
    r.mean_bin0 = r.n_bin0 ? sum0 / static_cast<double>(r.n_bin0) : kNaN;
    r.stderr_bin1 = r.n_bin1 ? delta_p / std::sqrt(static_cast<double>(r.n_bin1)) : kNaN;
    r.stderr_bin0 = r.n_bin0 ? delta_p / std::sqrt(static_cast<double>(r.n_bin0)) : kNaN;
    if (r.n_bin1 < kMinBinSize || r.n_bin0 < kMinBinSize) {
        r.score_yes = kNaN;
        r.score_no = kNaN;
        r.decision = Decision::kInconclusive;
        return r;
    }
    auto score = [&](const BinMeans &h) {
        double z1 = (r.mean_bin1 - h.bin1) / r.stderr_bin1;
        double z0 = (r.mean_bin0 - h.bin0) / r.stderr_bin0;
        return z1 * z1 + z0 * z0;
    };
    r.score_yes = score(yes);
    r.score_no = score(no);
    if (std::abs(r.score_yes - r.score_no) < kInconclusiveBand) {
        r.decision = Decision::kInconclusive;
    } else {
        r.decision = r.score_yes < r.score_no ? Decision::kYes : Decision::kNo;
    }
    return r;
}

double eccentric_bin_mean(const PointerConfig &cfg) {
    return std::numbers::sqrt2 / (1.0 + 2.0 * cfg.nominal_disturbance());
}

BinMeans p1_hypothesis(Message m, const PointerConfig &cfg) {
    if (m == Message::kYes) {
        return {eccentric_bin_mean(cfg), 0.0};
    }
    return {std::numbers::sqrt2 / 2.0, std::numbers::sqrt2 / 2.0};
}

BinMeans p2_hypothesis(Message m, const PointerConfig &cfg) {
    double high = eccentric_bin_mean(cfg);
    return m == Message::kYes ? BinMeans{high, 0.0} : BinMeans{0.0, high};
}

namespace {

EncodeResult weak_encode(std::size_t n, const PointerConfig &cfg, const SpinObservable &obs, RandomStream &rng) {
    const QubitState x_plus = sigma_x().eigenstate(Outcome::kPlus);
    std::vector<QubitState> spins;
    spins.reserve(n);
    Code code;
    code.readings.reserve(n);
    const WeakMeter meter(obs, cfg);
    for (std::size_t i = 0; i < n; ++i) {
        WeakReading r = meter.sample(x_plus, rng);
        code.readings.push_back(r.p);
        spins.push_back(r.post_state);
    }
    return {SpinRegister(std::move(spins)), std::move(code)};
}

uint8_t bit_of(Outcome o) {
    return o == Outcome::kPlus ? 1 : 0;
}

}  // namespace

EncodeResult p1_alice_encode(std::size_t n, const PointerConfig &cfg, RandomStream &rng) {
    return weak_encode(n, cfg, diagonal_xy_plus(), rng);
}

Key p1_bob_respond(SpinRegister &spins, Message message, RandomStream &rng) {
    if (spins.any_consumed()) {
        throw ProtocolViolation("p1_bob_respond: register contains measured spins");
    }
    SpinObservable obs = message == Message::kYes ? sigma_y() : sigma_z();
    Key key;
    key.bits.reserve(spins.size());
    for (std::size_t i = 0; i < spins.size(); ++i) {
        key.bits.push_back(bit_of(spins.measure(i, obs, rng)));
    }
    return key;
}

DecodeReport p1_alice_decode(const Code &code, const Key &key, const PointerConfig &cfg) {
    return decode_bins(code.readings, key.bits, cfg.delta_p(), p1_hypothesis(Message::kYes, cfg),
                       p1_hypothesis(Message::kNo, cfg));
}

EncodeResult p2_alice_encode(std::size_t n, const PointerConfig &cfg, Message message, RandomStream &rng) {
    return weak_encode(n, cfg, message == Message::kYes ? diagonal_xy_plus() : diagonal_xy_minus(), rng);
}

Key p2_bob_measure(SpinRegister &spins, RandomStream &rng) {
    if (spins.any_consumed()) {
        throw ProtocolViolation("p2_bob_measure: register contains measured spins");
    }
    const SpinObservable sx = sigma_x();
    const SpinObservable sy = sigma_y();
    Key record;
    record.bits.reserve(spins.size());
    record.axes.reserve(spins.size());
    for (std::size_t i = 0; i < spins.size(); ++i) {
        Axis axis = rng.uniform() < 0.5 ? Axis::kX : Axis::kY;
        record.axes.push_back(axis);
        record.bits.push_back(bit_of(spins.measure(i, axis == Axis::kX ? sx : sy, rng)));
    }
    return record;
}

std::size_t p2_alarm_threshold(double d, std::size_t n_x) {
    double expected = d * static_cast<double>(n_x);
    return static_cast<std::size_t>(std::ceil(expected + 5.0 * std::max(std::sqrt(expected), 1.0)));
}

std::pair<DecodeReport, SecurityReport> p2_bob_analyze(const Key &record, const Code &code, const PointerConfig &cfg) {
    if (record.bits.size() != code.size() || record.axes.size() != code.size()) {
        throw std::invalid_argument("p2_bob_decode: code and measurement record lengths differ");
    }
    SecurityReport sec;
    std::vector<uint8_t> labels(code.size(), 2);
    for (std::size_t i = 0; i < code.size(); ++i) {
        if (record.axes[i] == Axis::kX) {
            ++sec.n_x_checked;
            sec.n_x_flipped += record.bits[i] == 0 ? 1 : 0;
        } else if (record.axes[i] == Axis::kY) {
            labels[i] = record.bits[i];
        }
    }
    sec.expected_flip_rate = cfg.nominal_disturbance();
    sec.alarm_threshold = p2_alarm_threshold(sec.expected_flip_rate, sec.n_x_checked);
    sec.alarm = sec.n_x_flipped > sec.alarm_threshold;
    DecodeReport dec = decode_bins(code.readings, labels, cfg.delta_p(), p2_hypothesis(Message::kYes, cfg),
                                   p2_hypothesis(Message::kNo, cfg));
    return {dec, sec};
}

std::pair<DecodeReport, SecurityReport> p2_bob_decode(SpinRegister &spins, const Code &code, const PointerConfig &cfg,
                                                      RandomStream &rng) {
    if (spins.size() != code.size()) {
        throw std::invalid_argument("p2_bob_decode: code and register lengths differ");
    }
    Key record = p2_bob_measure(spins, rng);
    return p2_bob_analyze(record, code, cfg);
}

PartyStreams party_streams(uint64_t seed) {
    return {derive_stream(seed, 0), derive_stream(seed, 1), derive_stream(seed, 2)};
}

Protocol1Session::Protocol1Session(std::size_t n, const PointerConfig &cfg, RandomStream &alice_rng) : cfg_(cfg) {
    EncodeResult enc = p1_alice_encode(n, cfg, alice_rng);
    spins_ = std::move(enc.spins);
    code_ = std::move(enc.code);
    timeline_.record("alice_encode");
    timeline_.record("spins_to_bob");
}

void Protocol1Session::require(Phase p, std::string_view step) const {
    if (phase_ != p) {
        throw ProtocolViolation("protocol 1: " + std::string(step) + " called out of order");
    }
}

SpinRegister &Protocol1Session::transit() {
    require(Phase::kInTransit, "transit access");
    return spins_;
}

const Key &Protocol1Session::bob_respond(Message message, RandomStream &bob_rng) {
    require(Phase::kInTransit, "bob_respond");
    key_ = p1_bob_respond(spins_, message, bob_rng);
    phase_ = Phase::kKeyBroadcast;
    timeline_.record("bob_measure");
    timeline_.record("key_broadcast");
    return key_;
}

const Key &Protocol1Session::broadcast_key() const {
    if (phase_ == Phase::kInTransit) {
        throw ProtocolViolation("protocol 1: key read before Bob responded");
    }
    return key_;
}

const DecodeReport &Protocol1Session::alice_decode() {
    require(Phase::kKeyBroadcast, "alice_decode");
    report_ = p1_alice_decode(code_, key_, cfg_);
    phase_ = Phase::kDecoded;
    timeline_.record("alice_decode");
    return report_;
}

Protocol2Session::Protocol2Session(std::size_t n, const PointerConfig &cfg, Message message, RandomStream &alice_rng)
    : cfg_(cfg) {
    EncodeResult enc = p2_alice_encode(n, cfg, message, alice_rng);
    spins_ = std::move(enc.spins);
    code_ = std::move(enc.code);
    timeline_.record("alice_encode");
    timeline_.record("spins_to_bob");
}

void Protocol2Session::require(Phase p, std::string_view step) const {
    if (phase_ != p) {
        throw ProtocolViolation("protocol 2: " + std::string(step) + " called out of order");
    }
}

SpinRegister &Protocol2Session::transit() {
    require(Phase::kInTransit, "transit access");
    return spins_;
}

void Protocol2Session::bob_measure(RandomStream &bob_rng) {
    require(Phase::kInTransit, "bob_measure");
    record_ = p2_bob_measure(spins_, bob_rng);
    phase_ = Phase::kMeasured;
    timeline_.record("bob_measure");
}

const Code &Protocol2Session::release_code() {
    require(Phase::kMeasured, "release_code");
    phase_ = Phase::kCodeReleased;
    timeline_.record("code_release");
    return code_;
}

const std::pair<DecodeReport, SecurityReport> &Protocol2Session::bob_decode() {
    require(Phase::kCodeReleased, "bob_decode");
    result_ = p2_bob_analyze(record_, code_, cfg_);
    phase_ = Phase::kDecoded;
    timeline_.record("bob_decode");
    return result_;
}

const Key &Protocol2Session::bob_record() const {
    if (phase_ == Phase::kInTransit) {
        throw ProtocolViolation("protocol 2: measurement record read before Bob measured");
    }
    return record_;
}

}  // namespace weakcomm
