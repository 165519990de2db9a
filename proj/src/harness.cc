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

#include "weakcomm/harness.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "weakcomm/parallel.h"

namespace weakcomm {

std::string_view to_string(EveKind e) {
    switch (e) {
        case EveKind::kNone:
            return "none";
        case EveKind::kFrequency:
            return "frequency";
        case EveKind::kIntercept:
            return "intercept";
        case EveKind::kWeak:
            return "weak";
    }
    return "none";
}

Message parse_message(std::string_view s) {
    if (s == "yes") {
        return Message::kYes;
    }
    if (s == "no") {
        return Message::kNo;
    }
    throw ConfigError("message must be yes or no, got '" + std::string(s) + "'");
}

EveKind parse_eve(std::string_view s) {
    for (EveKind e : {EveKind::kNone, EveKind::kFrequency, EveKind::kIntercept, EveKind::kWeak}) {
        if (s == to_string(e)) {
            return e;
        }
    }
    throw ConfigError("eve must be none, frequency, intercept or weak, got '" + std::string(s) + "'");
}

Axis parse_axis(std::string_view s) {
    for (Axis a : {Axis::kX, Axis::kY, Axis::kZ}) {
        if (s == to_string(a)) {
            return a;
        }
    }
    throw ConfigError("axis must be x, y or z, got '" + std::string(s) + "'");
}

WeakDecodeMode parse_weak_decode(std::string_view s) {
    for (WeakDecodeMode m :
         {WeakDecodeMode::kReadingsMean, WeakDecodeMode::kKeyBinning, WeakDecodeMode::kCodeCorrelation}) {
        if (s == to_string(m)) {
            return m;
        }
    }
    throw ConfigError("eve_decode must be readings_mean, key_binning or code_correlation, got '" + std::string(s) +
                      "'");
}

void RunConfig::validate() const {
    if (protocol != 1 && protocol != 2) {
        throw ConfigError("protocol must be 1 or 2");
    }
    if (n < 2) {
        throw ConfigError("n must be at least 2");
    }
    if (trials < 1) {
        throw ConfigError("trials must be at least 1");
    }
    if (delta_p && d) {
        throw ConfigError("give either delta_p or d, not both");
    }
    if (delta_p && !(*delta_p > 0.0 && std::isfinite(*delta_p))) {
        throw ConfigError("delta_p must be positive");
    }
    if (d && !(*d > 0.0 && *d < 0.25)) {
        throw ConfigError("d must lie in (0, 0.25)");
    }
    if (eve_delta_p && !(*eve_delta_p > 0.0 && std::isfinite(*eve_delta_p))) {
        throw ConfigError("eve_delta_p must be positive");
    }
    if (eve == EveKind::kFrequency && protocol != 1) {
        throw ConfigError("the frequency attack needs Protocol 1's public key");
    }
    if ((eve == EveKind::kIntercept || eve == EveKind::kWeak) && protocol == 1 && !timerev) {
        throw ConfigError("transit attacks on Protocol 1 need the timerev flag");
    }
    if (eve_decode && eve == EveKind::kWeak) {
        bool key_mode = *eve_decode == WeakDecodeMode::kKeyBinning;
        if (key_mode != (protocol == 1)) {
            throw ConfigError("key_binning applies to Protocol 1 only; Protocol 2 uses readings_mean or code_correlation");
        }
    }
}

double RunConfig::effective_delta_p() const {
    if (d) {
        return delta_p_for_disturbance(*d);
    }
    return delta_p.value_or(kDefaultDeltaP);
}

WeakDecodeMode RunConfig::effective_eve_decode() const {
    if (eve_decode) {
        return *eve_decode;
    }
    return protocol == 1 ? WeakDecodeMode::kKeyBinning : WeakDecodeMode::kReadingsMean;
}

namespace {

template <class T>
Json optional_json(const std::optional<T> &v) {
    return v ? Json(*v) : Json(nullptr);
}

}  // namespace

Json config_to_json(const RunConfig &cfg) {
    Json j;
    j["protocol"] = cfg.protocol;
    j["n"] = cfg.n;
    j["delta_p"] = optional_json(cfg.delta_p);
    j["d"] = optional_json(cfg.d);
    j["message"] = std::string(to_string(cfg.message));
    j["seed"] = cfg.seed;
    j["eve"] = std::string(to_string(cfg.eve));
    j["eve_axis"] = std::string(to_string(cfg.eve_axis));
    j["eve_delta_p"] = optional_json(cfg.eve_delta_p);
    j["eve_decode"] = cfg.eve_decode ? Json(std::string(to_string(*cfg.eve_decode))) : Json(nullptr);
    j["trials"] = cfg.trials;
    j["timerev"] = cfg.timerev;
    return j;
}

namespace {

double number_field(const Json &v, std::string_view name) {
    if (!v.is_number()) {
        throw ConfigError(std::string(name) + " must be a number");
    }
    return v.get<double>();
}

uint64_t count_field(const Json &v, std::string_view name) {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<int64_t>() >= 0)) {
        throw ConfigError(std::string(name) + " must be a non-negative integer");
    }
    return v.get<uint64_t>();
}

std::string string_field(const Json &v, std::string_view name) {
    if (!v.is_string()) {
        throw ConfigError(std::string(name) + " must be a string");
    }
    return v.get<std::string>();
}

}  // namespace

RunConfig apply_config_json(const Json &j, RunConfig base) {
    if (!j.is_object()) {
        throw ConfigError("config must be a JSON object");
    }
    if (j.contains("delta_p") && !j["delta_p"].is_null() && j.contains("d") && !j["d"].is_null()) {
        throw ConfigError("give either delta_p or d, not both");
    }
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string &key = it.key();
        const Json &v = it.value();
        if (key == "protocol") {
            base.protocol = static_cast<int>(count_field(v, key));
        } else if (key == "n") {
            base.n = count_field(v, key);
        } else if (key == "delta_p") {
            if (!v.is_null()) {
                base.delta_p = number_field(v, key);
                base.d.reset();
            }
        } else if (key == "d") {
            if (!v.is_null()) {
                base.d = number_field(v, key);
                base.delta_p.reset();
            }
        } else if (key == "message") {
            base.message = parse_message(string_field(v, key));
        } else if (key == "seed") {
            base.seed = count_field(v, key);
        } else if (key == "eve") {
            base.eve = parse_eve(string_field(v, key));
        } else if (key == "eve_axis") {
            base.eve_axis = parse_axis(string_field(v, key));
        } else if (key == "eve_delta_p") {
            if (!v.is_null()) {
                base.eve_delta_p = number_field(v, key);
            }
        } else if (key == "eve_decode") {
            if (!v.is_null()) {
                base.eve_decode = parse_weak_decode(string_field(v, key));
            }
        } else if (key == "trials") {
            base.trials = count_field(v, key);
        } else if (key == "timerev") {
            if (!v.is_boolean()) {
                throw ConfigError("timerev must be a boolean");
            }
            base.timerev = v.get<bool>();
        } else {
            throw ConfigError("unknown config key '" + key + "'");
        }
    }
    return base;
}

RunConfig load_config_file(const std::string &path, RunConfig base) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file '" + path + "'");
    }
    std::stringstream buf;
    buf << in.rdbuf();
    Json j;
    try {
        j = parse_json(buf.str());
    } catch (const nlohmann::json::exception &e) {
        throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
    }
    return apply_config_json(j, base);
}

Transcript run(const RunConfig &cfg) {
    cfg.validate();
    Transcript t;
    t.config = cfg;
    t.delta_p = cfg.effective_delta_p();
    const PointerConfig pointer(t.delta_p);
    t.disturbance = pointer.nominal_disturbance();
    const PointerConfig eve_pointer(cfg.eve_delta_p.value_or(kDefaultEveDeltaP));
    PartyStreams streams = party_streams(cfg.seed);

    if (cfg.protocol == 1) {
        Protocol1Session session(cfg.n, pointer, streams.alice);
        std::optional<WeakTap> tap;
        std::optional<InterceptRecord> intercepted;
        if (cfg.eve == EveKind::kWeak) {
            tap = eve_weak_tap(session.transit(), eve_pointer, streams.eve);
            session.annotate("eve_weak_tap");
        } else if (cfg.eve == EveKind::kIntercept) {
            intercepted = eve_intercept_resend(session.transit(), cfg.eve_axis, streams.eve);
            session.annotate("eve_intercept_resend");
        }
        const Key &key = session.bob_respond(cfg.message, streams.bob);
        if (cfg.eve == EveKind::kFrequency) {
            t.attack = eve_frequency_attack(key, t.disturbance);
        } else if (tap) {
            t.attack = eve_weak_attack(*tap, cfg.effective_eve_decode(), pointer, &key, nullptr, nullptr);
        } else if (intercepted) {
            AttackOutcome out;
            out.guess = intercept_guess_p1(*intercepted, key);
            out.eve_data = {{"intercepted", static_cast<double>(intercepted->outcomes.size())}};
            t.attack = out;
        }
        if (t.attack) {
            session.annotate("eve_decode");
        }
        t.decode = session.alice_decode();
        t.code = session.alice_code();
        t.key = key;
        t.timeline = session.timeline();
        return t;
    }

    Protocol2Session session(cfg.n, pointer, cfg.message, streams.alice);
    std::optional<WeakTap> tap;
    std::optional<InterceptRecord> intercepted;
    if (cfg.eve == EveKind::kWeak) {
        tap = eve_weak_tap(session.transit(), eve_pointer, streams.eve);
        session.annotate("eve_weak_tap");
    } else if (cfg.eve == EveKind::kIntercept) {
        intercepted = eve_intercept_resend(session.transit(), cfg.eve_axis, streams.eve);
        session.annotate("eve_intercept_resend");
    }
    session.bob_measure(streams.bob);
    const Code &code = session.release_code();
    const auto &[decode, security] = session.bob_decode();
    if (tap) {
        t.attack = eve_weak_attack(*tap, cfg.effective_eve_decode(), pointer, nullptr, &code, &security);
    } else if (intercepted) {
        AttackOutcome out;
        out.guess = intercept_guess_p2(*intercepted, code, pointer);
        out.detected = security.alarm;
        out.eve_data = {{"intercepted", static_cast<double>(intercepted->outcomes.size())}};
        t.attack = out;
    }
    if (t.attack) {
        session.annotate("eve_decode");
    }
    t.decode = decode;
    t.security = security;
    t.code = code;
    t.key = session.bob_record();
    t.timeline = session.timeline();
    return t;
}

bool decoded_correctly(const Transcript &t) {
    Message m = t.config.message;
    return (t.decode.decision == Decision::kYes && m == Message::kYes) ||
           (t.decode.decision == Decision::kNo && m == Message::kNo);
}

Json transcript_to_json(const Transcript &t) {
    Json j;
    j["config"] = config_to_json(t.config);
    Json derived;
    derived["delta_p"] = t.delta_p;
    derived["disturbance"] = t.disturbance;
    j["derived"] = derived;
    j["timeline"] = t.timeline.events;
    j["code"] = t.code.readings;
    Json key;
    key["bits"] = t.key.bits;
    if (!t.key.axes.empty()) {
        std::string axes;
        for (Axis a : t.key.axes) {
            axes += to_string(a);
        }
        key["axes"] = axes;
    }
    j["key"] = key;
    Json dec;
    dec["mean_bin1"] = t.decode.mean_bin1;
    dec["mean_bin0"] = t.decode.mean_bin0;
    dec["stderr_bin1"] = t.decode.stderr_bin1;
    dec["stderr_bin0"] = t.decode.stderr_bin0;
    dec["n_bin1"] = t.decode.n_bin1;
    dec["n_bin0"] = t.decode.n_bin0;
    dec["score_yes"] = t.decode.score_yes;
    dec["score_no"] = t.decode.score_no;
    dec["decision"] = std::string(to_string(t.decode.decision));
    j["decode"] = dec;
    if (t.security) {
        Json sec;
        sec["n_x_checked"] = t.security->n_x_checked;
        sec["n_x_flipped"] = t.security->n_x_flipped;
        sec["expected_flip_rate"] = t.security->expected_flip_rate;
        sec["alarm_threshold"] = t.security->alarm_threshold;
        sec["alarm"] = t.security->alarm;
        j["security"] = sec;
    } else {
        j["security"] = nullptr;
    }
    if (t.attack) {
        Json att;
        att["guess"] = std::string(to_string(t.attack->guess));
        att["detected"] = t.attack->detected;
        Json data = Json::object();
        for (const EveDatum &d : t.attack->eve_data) {
            data[d.name] = d.value;
        }
        att["eve_data"] = data;
        j["attack"] = att;
    } else {
        j["attack"] = nullptr;
    }
    return j;
}

std::string serialize_transcript(const Transcript &t) {
    return dump_json(transcript_to_json(t));
}

double p2_alarm_rate(const PointerConfig &cfg, std::size_t n, std::size_t trials, uint64_t seed, unsigned workers) {
    if (trials == 0) {
        throw std::invalid_argument("p2_alarm_rate: trials must be positive");
    }
    std::vector<uint8_t> alarms(trials, 0);
    parallel_for(
        trials,
        [&](std::size_t t) {
            PartyStreams s = party_streams(derive_seed(seed, {t}));
            Message m = t % 2 == 0 ? Message::kYes : Message::kNo;
            EncodeResult enc = p2_alice_encode(n, cfg, m, s.alice);
            alarms[t] = p2_bob_decode(enc.spins, enc.code, cfg, s.bob).second.alarm ? 1 : 0;
        },
        workers);
    std::size_t total = 0;
    for (uint8_t a : alarms) {
        total += a;
    }
    return static_cast<double>(total) / static_cast<double>(trials);
}

std::vector<SweepRow> sweep(std::span<const double> d_grid, std::span<const std::size_t> n_grid, std::size_t trials,
                            uint64_t base_seed, unsigned workers) {
    if (d_grid.empty() || n_grid.empty()) {
        throw ConfigError("sweep: grid must not be empty");
    }
    if (trials == 0) {
        throw ConfigError("sweep: trials must be at least 1");
    }
    std::vector<SweepRow> rows;
    for (std::size_t i = 0; i < d_grid.size(); ++i) {
        if (!(d_grid[i] > 0.0 && d_grid[i] < 0.25)) {
            throw ConfigError("sweep: D must lie in (0, 0.25)");
        }
        const PointerConfig cfg(delta_p_for_disturbance(d_grid[i]));
        for (std::size_t j = 0; j < n_grid.size(); ++j) {
            if (n_grid[j] < 2) {
                throw ConfigError("sweep: N must be at least 2");
            }
            SweepRow row;
            row.d = d_grid[i];
            row.delta_p = cfg.delta_p();
            row.n = n_grid[j];
            row.alice_accuracy = p1_alice_accuracy(cfg, row.n, trials, derive_seed(base_seed, {i, j, 0}), workers);
            row.eve_accuracy =
                p1_eve_frequency_accuracy(cfg, row.n, trials, derive_seed(base_seed, {i, j, 1}), workers);
            row.alarm_rate = p2_alarm_rate(cfg, row.n, trials, derive_seed(base_seed, {i, j, 2}), workers);
            rows.push_back(row);
        }
    }
    return rows;
}

namespace {

std::string fmt17(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

}  // namespace

std::string sweep_csv(std::span<const SweepRow> rows) {
    std::string out = "D,delta_p,N,alice_accuracy,eve_accuracy,alarm_rate\n";
    for (const SweepRow &r : rows) {
        out += fmt17(r.d) + "," + fmt17(r.delta_p) + "," + std::to_string(r.n) + "," + fmt17(r.alice_accuracy) + "," +
               fmt17(r.eve_accuracy) + "," + fmt17(r.alarm_rate) + "\n";
    }
    return out;
}

std::string scaling_csv(const ScalingReport &report) {
    std::string out = "D,delta_p,n_alice,n_eve,ratio,alice_saturated,eve_saturated\n";
    for (std::size_t i = 0; i < report.d_values.size(); ++i) {
        out += fmt17(report.d_values[i]) + "," + fmt17(delta_p_for_disturbance(report.d_values[i])) + "," +
               std::to_string(report.n_alice[i]) + "," + std::to_string(report.n_eve[i]) + "," +
               fmt17(report.ratios[i]) + "," + (report.alice_saturated[i] ? "1" : "0") + "," +
               (report.eve_saturated[i] ? "1" : "0") + "\n";
    }
    return out;
}

Json oracle_report(const Vec3 &pre_dir, const Vec3 &post_dir, const Vec3 &obs_dir, double delta_p) {
    const QubitState pre = bloch_state(pre_dir);
    const QubitState post = bloch_state(post_dir);
    const SpinObservable obs = SpinObservable::along(obs_dir);
    const SpinObservable post_axis = SpinObservable::along(post_dir);
    const PointerConfig cfg(delta_p);
    double var_a = variance(obs, pre);

    Json j;
    j["delta_p"] = delta_p;
    j["expectation"] = expectation(obs, pre);
    j["variance"] = var_a;
    j["disturbance"] = disturbance(delta_p, var_a);
    j["disturbance_approx"] = 1.0 / (8.0 * delta_p * delta_p);
    j["fidelity"] = fidelity(pre, obs, cfg);
    j["prob_unperturbed"] = std::norm(overlap(post, pre));
    try {
        WeakValueReport r = conditional_mean(obs, pre, post, cfg);
        j["weak_value_re"] = r.a_w.real();
        j["weak_value_im"] = r.a_w.imag();
        j["rel_shift"] = r.rel_shift;
        j["prob_perturbed"] = r.prob_perturbed;
        j["cond_mean"] = r.cond_mean;
    } catch (const UndefinedWeakValue &) {
        for (const char *k : {"weak_value_re", "weak_value_im", "rel_shift", "prob_perturbed", "cond_mean"}) {
            j[k] = nullptr;
        }
    }
    try {
        j["sum_rule_residual"] = sum_rule_residual(obs, pre, post_axis);
    } catch (const UndefinedWeakValue &) {
        j["sum_rule_residual"] = nullptr;
    }
    return j;
}

Vec3 parse_direction(std::string_view s) {
    bool negate = false;
    std::string_view body = s;
    if (!body.empty() && body.front() == '-' && body.find(',') == std::string_view::npos) {
        negate = true;
        body.remove_prefix(1);
    }
    const double h = std::numbers::sqrt2 / 2.0;
    Vec3 v;
    if (body == "x") {
        v = {1, 0, 0};
    } else if (body == "y") {
        v = {0, 1, 0};
    } else if (body == "z") {
        v = {0, 0, 1};
    } else if (body == "a") {
        v = {h, h, 0};
    } else if (body == "abar") {
        v = {h, -h, 0};
    } else {
        double c[3];
        std::size_t pos = 0;
        for (int k = 0; k < 3; ++k) {
            std::size_t end = body.find(',', pos);
            if ((k < 2) != (end != std::string_view::npos)) {
                throw ConfigError("direction must be x, y, z, a, abar or 'nx,ny,nz', got '" + std::string(s) + "'");
            }
            std::string_view part = body.substr(pos, end == std::string_view::npos ? body.size() - pos : end - pos);
            auto res = std::from_chars(part.data(), part.data() + part.size(), c[k]);
            if (res.ec != std::errc() || res.ptr != part.data() + part.size()) {
                throw ConfigError("bad direction component '" + std::string(part) + "'");
            }
            pos = end + 1;
        }
        v = {c[0], c[1], c[2]};
        if (!(std::abs(v.norm() - 1.0) <= 1e-9)) {
            throw ConfigError("direction must be a unit vector");
        }
    }
    return negate ? -v : v;
}

}  // namespace weakcomm
