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

#ifndef WEAKCOMM_HARNESS_H
#define WEAKCOMM_HARNESS_H

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "weakcomm/adversary.h"
#include "weakcomm/json_io.h"
#include "weakcomm/protocols.h"

namespace weakcomm {

/// Invalid run configuration (CLI exit code 2).
class ConfigError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

enum class EveKind { kNone, kFrequency, kIntercept, kWeak };

std::string_view to_string(EveKind e);

struct RunConfig {
    int protocol = 1;
    std::size_t n = 2000;
    /// Pointer width; ignored when `d` is set.
    std::optional<double> delta_p;
    /// Target disturbance, converted to a pointer width at observable variance 1/2.
    std::optional<double> d;
    Message message = Message::kYes;
    uint64_t seed = 1;
    EveKind eve = EveKind::kNone;
    Axis eve_axis = Axis::kY;
    std::optional<double> eve_delta_p;
    /// Weak-tap decoding; defaults to key binning on Protocol 1 and the
    /// readings mean on Protocol 2.
    std::optional<WeakDecodeMode> eve_decode;
    std::size_t trials = 1;
    /// Allows transit attacks (intercept, weak) on Protocol 1.
    bool timerev = false;

    /// Throws ConfigError describing the first violated constraint.
    void validate() const;
    double effective_delta_p() const;
    WeakDecodeMode effective_eve_decode() const;
};

inline constexpr double kDefaultDeltaP = 5.0;
inline constexpr double kDefaultEveDeltaP = 5.0;

Message parse_message(std::string_view s);
EveKind parse_eve(std::string_view s);
Axis parse_axis(std::string_view s);
WeakDecodeMode parse_weak_decode(std::string_view s);

Json config_to_json(const RunConfig &cfg);
/// Applies the fields present in `j` on top of `base`. Unknown keys, bad
/// types, or both `delta_p` and `d` in one document raise ConfigError.
RunConfig apply_config_json(const Json &j, RunConfig base = {});
RunConfig load_config_file(const std::string &path, RunConfig base = {});

struct Transcript {
    RunConfig config;
    double delta_p = 0.0;
    double disturbance = 0.0;
    Code code;
    /// Protocol 1: Bob's public key. Protocol 2: Bob's private record (bits and axes).
    Key key;
    DecodeReport decode;
    std::optional<SecurityReport> security;
    std::optional<AttackOutcome> attack;
    Timeline timeline;
};

/// Runs one protocol cycle. Throws ConfigError for an invalid configuration
/// and ProtocolViolation if a party breaks the step order.
Transcript run(const RunConfig &cfg);

Json transcript_to_json(const Transcript &t);
std::string serialize_transcript(const Transcript &t);

/// Decoded message for Protocol 2 equals the message sent; for Protocol 1
/// the decision is Alice's.
bool decoded_correctly(const Transcript &t);

struct SweepRow {
    double d = 0.0;
    double delta_p = 0.0;
    std::size_t n = 0;
    double alice_accuracy = 0.0;
    double eve_accuracy = 0.0;
    double alarm_rate = 0.0;
};

/// Honest Protocol 2 runs alternating Yes and No; fraction raising the alarm.
double p2_alarm_rate(const PointerConfig &cfg, std::size_t n, std::size_t trials, uint64_t seed,
                     unsigned workers = 0);

/// One row per (D, N), D-major in grid order. Cell (i, j) uses seeds
/// derive_seed(base_seed, {i, j, k}) with k = 0 (Alice), 1 (Eve), 2 (alarm).
std::vector<SweepRow> sweep(std::span<const double> d_grid, std::span<const std::size_t> n_grid, std::size_t trials,
                            uint64_t base_seed, unsigned workers = 0);

std::string sweep_csv(std::span<const SweepRow> rows);
std::string scaling_csv(const ScalingReport &report);

/// Closed-form desk check for one (pre, post, observable, pointer) choice.
Json oracle_report(const Vec3 &pre, const Vec3 &post, const Vec3 &observable, double delta_p);

/// Named direction: x, y, z, a = (x+y)/sqrt2, abar = (x-y)/sqrt2, optionally
/// prefixed by '-', or three comma-separated components of a unit vector.
Vec3 parse_direction(std::string_view s);

}  // namespace weakcomm

#endif
