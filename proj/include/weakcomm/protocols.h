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

#ifndef WEAKCOMM_PROTOCOLS_H
#define WEAKCOMM_PROTOCOLS_H

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "weakcomm/spin.h"
#include "weakcomm/stats.h"
#include "weakcomm/weak_measurement.h"

namespace weakcomm {

/// An honest party broke the protocol: re-measured a spin, or touched data
/// out of turn.
class ProtocolViolation : public std::logic_error {
   public:
    using std::logic_error::logic_error;
};

enum class Message { kYes, kNo };
enum class Decision { kYes, kNo, kInconclusive };
enum class Axis { kX, kY, kZ };

std::string_view to_string(Message m);
std::string_view to_string(Decision d);
std::string_view to_string(Axis a);
SpinObservable axis_observable(Axis a);

/// Alice's pointer readings in spin-label order.
struct Code {
    std::vector<double> readings;

    std::size_t size() const { return readings.size(); }
};

/// Strong-measurement outcomes in spin-label order: 1 for +1 ("up"), 0 for -1.
/// `axes` is empty for Protocol 1 and holds Bob's per-spin basis in Protocol 2.
struct Key {
    std::vector<uint8_t> bits;
    std::vector<Axis> axes;

    std::size_t size() const { return bits.size(); }
};

/// Spins in label order. Honest parties measure through `measure`, which
/// refuses to touch a spin twice.
class SpinRegister {
   public:
    SpinRegister() = default;
    explicit SpinRegister(std::vector<QubitState> spins);

    std::size_t size() const { return spins_.size(); }
    const QubitState &state(std::size_t i) const { return spins_.at(i); }
    bool consumed(std::size_t i) const { return consumed_.at(i) != 0; }
    bool any_consumed() const;

    /// Strong measurement by an honest party. Throws ProtocolViolation if the
    /// spin was already measured.
    Outcome measure(std::size_t i, const SpinObservable &obs, RandomStream &rng);

    /// Overwrites a spin in transit (eavesdropper access). Throws
    /// ProtocolViolation on a consumed spin.
    void replace(std::size_t i, const QubitState &state);

    /// Reorders spins: new position k holds old spin perm[k].
    SpinRegister permuted(std::span<const std::size_t> perm) const;

   private:
    std::vector<QubitState> spins_;
    std::vector<uint8_t> consumed_;
};

struct EncodeResult {
    SpinRegister spins;
    Code code;
};

/// Bin-mean pair (bin 1, bin 0) predicted under a hypothesis.
struct BinMeans {
    double bin1 = 0.0;
    double bin0 = 0.0;
};

struct DecodeReport {
    double mean_bin1 = 0.0;
    double mean_bin0 = 0.0;
    double stderr_bin1 = 0.0;
    double stderr_bin0 = 0.0;
    std::size_t n_bin1 = 0;
    std::size_t n_bin0 = 0;
    Decision decision = Decision::kInconclusive;
    /// Sum of squared standardized distances to each hypothesis.
    double score_yes = 0.0;
    double score_no = 0.0;
};

struct SecurityReport {
    std::size_t n_x_checked = 0;
    std::size_t n_x_flipped = 0;
    double expected_flip_rate = 0.0;
    bool alarm = false;
    std::size_t alarm_threshold = 0;
};

/// Bins with fewer entries make the decision Inconclusive.
inline constexpr std::size_t kMinBinSize = 10;
/// |score_yes - score_no| below this is Inconclusive.
inline constexpr double kInconclusiveBand = 1.0;

/// Splits `readings` by `labels` (1 -> bin 1, 0 -> bin 0, anything else is
/// skipped), reports the bin means with pointer-convention errors
/// delta_p / sqrt(n), and picks the hypothesis with the smaller score.
DecodeReport decode_bins(std::span<const double> readings, std::span<const uint8_t> labels, double delta_p,
                         const BinMeans &yes, const BinMeans &no);

/// Pointer mean after post-selecting an "eccentric" outcome: sqrt(2) / (1 + 2D).
double eccentric_bin_mean(const PointerConfig &cfg);
BinMeans p1_hypothesis(Message m, const PointerConfig &cfg);
/// Bin 1 is sigma_y = +1, bin 0 is sigma_y = -1.
BinMeans p2_hypothesis(Message m, const PointerConfig &cfg);

/// Prepares n copies of |x+> and weakly measures (sigma_x + sigma_y)/sqrt(2)
/// on each. Uses one RandomStream in label order.
EncodeResult p1_alice_encode(std::size_t n, const PointerConfig &cfg, RandomStream &rng);

/// Yes: sigma_y on every spin; No: sigma_z. Throws ProtocolViolation if any
/// spin was already measured.
Key p1_bob_respond(SpinRegister &spins, Message message, RandomStream &rng);

/// Throws std::invalid_argument if the code and key lengths differ.
DecodeReport p1_alice_decode(const Code &code, const Key &key, const PointerConfig &cfg);

/// As p1_alice_encode, weakly measuring (sigma_x + sigma_y)/sqrt(2) for Yes and
/// (sigma_x - sigma_y)/sqrt(2) for No.
EncodeResult p2_alice_encode(std::size_t n, const PointerConfig &cfg, Message message, RandomStream &rng);

/// Bob's measurement pass: per spin a fair choice of sigma_x or sigma_y
/// (one uniform), then the strong measurement. Returns bits and axes.
Key p2_bob_measure(SpinRegister &spins, RandomStream &rng);

/// ceil(D n_x + 5 max(sqrt(D n_x), 1)).
std::size_t p2_alarm_threshold(double d, std::size_t n_x);

/// Decodes a completed measurement record against the released code.
std::pair<DecodeReport, SecurityReport> p2_bob_analyze(const Key &record, const Code &code, const PointerConfig &cfg);

/// Measures every spin, then reads the code.
std::pair<DecodeReport, SecurityReport> p2_bob_decode(SpinRegister &spins, const Code &code, const PointerConfig &cfg,
                                                      RandomStream &rng);

/// Independent streams for one protocol run: Alice, Bob and Eve use streams
/// 0, 1 and 2 under `seed`.
struct PartyStreams {
    RandomStream alice;
    RandomStream bob;
    RandomStream eve;
};

PartyStreams party_streams(uint64_t seed);

/// Order of protocol steps as recorded in transcripts.
struct Timeline {
    std::vector<std::string> events;

    void record(std::string_view e) { events.emplace_back(e); }
};

/// Protocol 1 cycle: Alice encodes, hands the spins over (transit), Bob
/// responds, the key is broadcast, Alice decodes. Each step throws
/// ProtocolViolation if called out of order.
class Protocol1Session {
   public:
    Protocol1Session(std::size_t n, const PointerConfig &cfg, RandomStream &alice_rng);

    /// Spins between Alice and Bob. Only available before Bob responds.
    SpinRegister &transit();
    const Key &bob_respond(Message message, RandomStream &bob_rng);
    /// The public key; available once Bob has responded.
    const Key &broadcast_key() const;
    const DecodeReport &alice_decode();

    const Code &alice_code() const { return code_; }
    const Timeline &timeline() const { return timeline_; }
    /// Records an outside event (an eavesdropper step) in the timeline.
    void annotate(std::string_view event) { timeline_.record(event); }

   private:
    enum class Phase { kInTransit, kKeyBroadcast, kDecoded };
    void require(Phase p, std::string_view step) const;

    PointerConfig cfg_;
    SpinRegister spins_;
    Code code_;
    Key key_;
    DecodeReport report_;
    Phase phase_ = Phase::kInTransit;
    Timeline timeline_;
};

/// Protocol 2 cycle: Alice encodes and sends the spins (transit), Bob measures
/// all spins, and only then is the code released and decoded. Out-of-order
/// access throws ProtocolViolation.
class Protocol2Session {
   public:
    Protocol2Session(std::size_t n, const PointerConfig &cfg, Message message, RandomStream &alice_rng);

    SpinRegister &transit();
    void bob_measure(RandomStream &bob_rng);
    /// The public code; available once Bob holds his measurement record.
    const Code &release_code();
    const std::pair<DecodeReport, SecurityReport> &bob_decode();

    /// Bob's private measurement record.
    const Key &bob_record() const;
    const Timeline &timeline() const { return timeline_; }
    void annotate(std::string_view event) { timeline_.record(event); }

   private:
    enum class Phase { kInTransit, kMeasured, kCodeReleased, kDecoded };
    void require(Phase p, std::string_view step) const;

    PointerConfig cfg_;
    SpinRegister spins_;
    Code code_;
    Key record_;
    std::pair<DecodeReport, SecurityReport> result_;
    Phase phase_ = Phase::kInTransit;
    Timeline timeline_;
};

}  // namespace weakcomm

#endif
