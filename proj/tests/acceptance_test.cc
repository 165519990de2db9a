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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit status if
// any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "weakcomm/adversary.h"
#include "weakcomm/harness.h"
#include "weakcomm/parallel.h"
#include "weakcomm/protocols.h"
#include "weakcomm/weak_measurement.h"

using namespace weakcomm;

namespace {

struct Verdict {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string &what) {
        if (!ok) pass = false;
        if (!detail.empty()) detail += "; ";
        detail += what;
        if (!ok) detail += " [x]";
    }
};

std::string fmt(const char *f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

const double kRoot2 = std::numbers::sqrt2;
const PointerConfig kCfg(5.0);
const SpinObservable kA = diagonal_xy_plus();

QubitState x_plus() { return bloch_state({1, 0, 0}); }

Vec3 random_direction(RandomStream &r) {
    double z = 2 * r.uniform() - 1;
    double phi = 2 * std::numbers::pi * r.uniform();
    double s = std::sqrt(1 - z * z);
    return {s * std::cos(phi), s * std::sin(phi), z};
}

double binomial_se(double p, double n) { return std::sqrt(p * (1 - p) / n); }

// Runs `body(t)` for t in [0, trials) and returns how many returned true.
std::size_t count_true(std::size_t trials, const std::function<bool(std::size_t)> &body) {
    std::vector<uint8_t> hit(trials, 0);
    parallel_for(trials, [&](std::size_t t) { hit[t] = body(t) ? 1 : 0; });
    std::size_t total = 0;
    for (uint8_t h : hit) total += h;
    return total;
}

Verdict weak_value_table() {
    Verdict v;
    Complex yp = weak_value(kA, x_plus(), bloch_state({0, 1, 0}));
    Complex ym = weak_value(kA, x_plus(), bloch_state({0, -1, 0}));
    Complex zp = weak_value(kA, x_plus(), bloch_state({0, 0, 1}));
    Complex zm = weak_value(kA, x_plus(), bloch_state({0, 0, -1}));
    v.require(std::abs(yp - kRoot2) < 1e-12, "A_w(y+) = " + fmt("%.15f", yp.real()));
    v.require(std::abs(ym) < 1e-12, "A_w(y-) = " + fmt("%.1e", std::abs(ym)));
    v.require(std::abs(zp.real() - 1 / kRoot2) < 1e-12 && std::abs(zm.real() - 1 / kRoot2) < 1e-12,
              "Re A_w(z+-) = " + fmt("%.15f", zp.real()));
    return v;
}

Verdict disturbance_consistency() {
    Verdict v;
    RandomStream r(1001, 0);
    double worst = 0.0;
    for (int k = 0; k < 200; ++k) {
        QubitState pre = bloch_state(random_direction(r));
        SpinObservable obs = SpinObservable::along(random_direction(r));
        double dp = 0.2 + 20 * r.uniform();
        worst = std::max(worst,
                         std::abs(1 - fidelity(pre, obs, PointerConfig(dp)) - disturbance(dp, variance(obs, pre))));
    }
    v.require(worst <= 1e-12, "max |1-F-D| = " + fmt("%.1e", worst));
    // Approximate form against the exact one, Delta_p from 3 upward.
    double worst_rel = 0.0, worst_dp = 0.0;
    for (double dp = 3.0; dp <= 100.0; dp += 0.25) {
        double exact = disturbance(dp, 0.5);
        double approx = 1.0 / (8 * dp * dp);
        double rel = std::abs(approx - exact) / exact;
        if (rel > worst_rel) {
            worst_rel = rel;
            worst_dp = dp;
        }
    }
    v.require(worst_rel <= 0.02,
              "max rel gap of 1/(8dp^2) = " + fmt("%.4f", worst_rel) + " at dp = " + fmt("%.2f", worst_dp));
    return v;
}

Verdict conditional_mean_oracle() {
    Verdict v;
    auto start = std::chrono::steady_clock::now();
    const SpinObservable posts[] = {sigma_y(), sigma_z(), kA};
    const int n = 100000;
    double worst_z = 0.0;
    bool ok = true;
    for (double dp : {2.0, 5.0, 10.0}) {
        PointerConfig cfg(dp);
        for (int j = 0; j < 3; ++j) {
            WeakMeter meter(kA, cfg);
            RandomStream r(1002, static_cast<uint64_t>(10 * dp + j));
            double sum[2] = {0, 0};
            int count[2] = {0, 0};
            for (int k = 0; k < n; ++k) {
                WeakReading w = meter.sample(x_plus(), r);
                int o = measure_strong(w.post_state, posts[j], r).outcome == Outcome::kPlus ? 0 : 1;
                sum[o] += w.p;
                ++count[o];
            }
            for (int o = 0; o < 2; ++o) {
                QubitState post = posts[j].eigenstate(o == 0 ? Outcome::kPlus : Outcome::kMinus);
                double expected = conditional_mean(kA, x_plus(), post, cfg).cond_mean;
                double tol = 4 * dp / std::sqrt(double(count[o]));
                double dev = std::abs(sum[o] / count[o] - expected);
                ok = ok && count[o] > 0 && dev <= tol;
                worst_z = std::max(worst_z, dev / (dp / std::sqrt(double(count[o]))));
            }
        }
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    v.require(ok, "18 bins, max deviation " + fmt("%.2f", worst_z) + " SE (limit 4)");
    v.require(secs <= 60.0, "runtime " + fmt("%.1f", secs) + " s");
    return v;
}

Verdict sum_rule() {
    Verdict v;
    RandomStream r(1003, 0);
    double worst = 0.0;
    int done = 0;
    while (done < 100) {
        Vec3 axis = random_direction(r);
        if (std::abs(std::abs(axis.x) - 1) < 1e-9) continue;
        worst = std::max(worst, std::abs(sum_rule_residual(kA, x_plus(), SpinObservable::along(axis))));
        ++done;
    }
    v.require(worst <= 1e-12, "max residual " + fmt("%.1e", worst) + " over 100 axes");
    return v;
}

Verdict probability_shift() {
    Verdict v;
    const double n = 1e5;
    const double d = kCfg.nominal_disturbance();
    for (Message m : {Message::kYes, Message::kNo}) {
        PartyStreams s = party_streams(m == Message::kYes ? 1004 : 1005);
        EncodeResult enc = p1_alice_encode(static_cast<std::size_t>(n), kCfg, s.alice);
        Key key = p1_bob_respond(enc.spins, m, s.bob);
        double ones = 0;
        for (uint8_t b : key.bits) ones += b;
        double f = ones / n;
        double expected = m == Message::kYes ? 0.5 + d : 0.5;
        double z = (f - expected) / binomial_se(expected, n);
        v.require(std::abs(z) <= 4, std::string(to_string(m)) + ": f = " + fmt("%.5f", f) + " vs " +
                                        fmt("%.5f", expected) + " (" + fmt("%+.2f", z) + " SE)");
    }
    return v;
}

Verdict protocol1_end_to_end() {
    Verdict v;
    const std::size_t runs = 500;
    for (Message m : {Message::kYes, Message::kNo}) {
        std::vector<uint8_t> outcome(runs, 0);
        parallel_for(runs, [&](std::size_t t) {
            PartyStreams s = party_streams(derive_seed(1006, {static_cast<uint64_t>(m), t}));
            EncodeResult enc = p1_alice_encode(2000, kCfg, s.alice);
            Decision d = p1_alice_decode(enc.code, p1_bob_respond(enc.spins, m, s.bob), kCfg).decision;
            outcome[t] = d == Decision::kInconclusive ? 2 : ((d == Decision::kYes) == (m == Message::kYes) ? 1 : 0);
        });
        double right = 0, inconclusive = 0;
        for (uint8_t o : outcome) {
            right += o == 1;
            inconclusive += o == 2;
        }
        v.require(right / runs >= 0.95, std::string(to_string(m)) + " accuracy " + fmt("%.3f", right / runs));
        v.require(inconclusive / runs <= 0.05, "inconclusive " + fmt("%.3f", inconclusive / runs));
    }
    return v;
}

Verdict eve_window() {
    Verdict v;
    double small = p1_eve_frequency_accuracy(kCfg, 2000, 1000, 1007);
    double large = p1_eve_frequency_accuracy(kCfg, 120000, 1000, 1008);
    v.require(small <= 0.65, "N=2000: " + fmt("%.3f", small));
    v.require(large >= 0.95, "N=120000: " + fmt("%.3f", large));
    return v;
}

Verdict scaling_law() {
    Verdict v;
    auto start = std::chrono::steady_clock::now();
    std::vector<double> grid = {0.02, 0.01, 0.005, 0.0025};
    ScalingOptions opt;
    opt.base_seed = 1009;
    ScalingReport rep = scaling_experiment(grid, opt);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::string table;
    bool saturated = false;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        table += (i ? " " : "") + fmt("D=%g:", grid[i]) + std::to_string(rep.n_alice[i]) + "/" +
                 std::to_string(rep.n_eve[i]);
        saturated = saturated || rep.alice_saturated[i] || rep.eve_saturated[i];
    }
    double slope = rep.slope();
    v.require(std::abs(slope - 1.0) <= 0.2, "slope " + fmt("%.3f", slope) + " (N_A/N_E " + table + ")");
    v.require(!saturated, "no saturated search");
    // Calibration at D = 0.005 against 1/D and 3/D^2, reported for reference.
    v.detail += "; at D=0.005 N_A*D = " + fmt("%.2f", rep.n_alice[2] * 0.005) +
                ", N_E*D^2/3 = " + fmt("%.2f", rep.n_eve[2] * 0.005 * 0.005 / 3);
    v.require(secs <= 600.0, "runtime " + fmt("%.0f", secs) + " s");
    return v;
}

Verdict protocol2_end_to_end() {
    Verdict v;
    const std::size_t runs = 500;
    std::size_t alarms = 0;
    for (Message m : {Message::kYes, Message::kNo}) {
        std::vector<uint8_t> right(runs, 0), alarm(runs, 0);
        parallel_for(runs, [&](std::size_t t) {
            PartyStreams s = party_streams(derive_seed(1010, {static_cast<uint64_t>(m), t}));
            EncodeResult enc = p2_alice_encode(4000, kCfg, m, s.alice);
            auto [dec, sec] = p2_bob_decode(enc.spins, enc.code, kCfg, s.bob);
            right[t] = dec.decision != Decision::kInconclusive && (dec.decision == Decision::kYes) == (m == Message::kYes);
            alarm[t] = sec.alarm;
        });
        double acc = 0;
        for (std::size_t t = 0; t < runs; ++t) {
            acc += right[t];
            alarms += alarm[t];
        }
        v.require(acc / runs >= 0.95, std::string(to_string(m)) + " accuracy " + fmt("%.3f", acc / runs));
    }
    double rate = double(alarms) / (2 * runs);
    v.require(rate < 0.01, "false-alarm rate " + fmt("%.4f", rate));
    return v;
}

Verdict intercept_detection() {
    Verdict v;
    const std::size_t runs = 500;
    std::size_t y_alarms = count_true(runs, [](std::size_t t) {
        PartyStreams s = party_streams(derive_seed(1011, {t}));
        EncodeResult enc = p2_alice_encode(4000, kCfg, t % 2 ? Message::kNo : Message::kYes, s.alice);
        eve_intercept_resend(enc.spins, Axis::kY, s.eve);
        return p2_bob_decode(enc.spins, enc.code, kCfg, s.bob).second.alarm;
    });
    std::vector<uint8_t> alarm(runs, 0), right(runs, 0);
    parallel_for(runs, [&](std::size_t t) {
        PartyStreams s = party_streams(derive_seed(1012, {t}));
        Message m = t % 2 ? Message::kNo : Message::kYes;
        EncodeResult enc = p2_alice_encode(4000, kCfg, m, s.alice);
        InterceptRecord rec = eve_intercept_resend(enc.spins, Axis::kX, s.eve);
        alarm[t] = p2_bob_decode(enc.spins, enc.code, kCfg, s.bob).second.alarm;
        right[t] = guessed_right(intercept_guess_p2(rec, enc.code, kCfg), m);
    });
    double x_alarms = 0, x_right = 0;
    for (std::size_t t = 0; t < runs; ++t) {
        x_alarms += alarm[t];
        x_right += right[t];
    }
    v.require(double(y_alarms) / runs >= 0.99, "sigma_y alarm rate " + fmt("%.3f", double(y_alarms) / runs));
    v.require(x_alarms / runs < 0.01, "sigma_x alarm rate " + fmt("%.3f", x_alarms / runs));
    v.require(x_right / runs <= 0.55, "sigma_x decode accuracy " + fmt("%.3f", x_right / runs));
    return v;
}

Verdict weak_attack_tradeoff() {
    Verdict v;
    const std::size_t runs = 500;
    const double d = kCfg.nominal_disturbance();
    double prev_alarm = -1.0;
    std::string alarms_text, acc_text;
    bool monotone = true, blind = true;
    for (double factor : {0.25, 1.0, 4.0, 16.0}) {
        PointerConfig eve_cfg(delta_p_for_disturbance(factor * d));
        std::vector<uint8_t> alarm(runs, 0), right(runs, 0);
        parallel_for(runs, [&](std::size_t t) {
            PartyStreams s = party_streams(derive_seed(1013, {static_cast<uint64_t>(factor * 4), t}));
            Message m = t % 2 ? Message::kNo : Message::kYes;
            EncodeResult enc = p2_alice_encode(4000, kCfg, m, s.alice);
            WeakTap tap = eve_weak_tap(enc.spins, eve_cfg, s.eve);
            // Eve commits to her guess before Bob releases anything.
            AttackOutcome out = eve_weak_attack(tap, WeakDecodeMode::kReadingsMean, kCfg, nullptr, nullptr, nullptr);
            alarm[t] = p2_bob_decode(enc.spins, enc.code, kCfg, s.bob).second.alarm;
            right[t] = guessed_right(out.guess, m);
        });
        double a = 0, r = 0;
        for (std::size_t t = 0; t < runs; ++t) {
            a += alarm[t];
            r += right[t];
        }
        a /= runs;
        r /= runs;
        // Nondecreasing up to two binomial standard errors.
        monotone = monotone && a >= prev_alarm - 2 * binomial_se(std::max(prev_alarm, 0.01), runs);
        prev_alarm = std::max(prev_alarm, a);
        blind = blind && r <= 0.55;
        alarms_text += (alarms_text.empty() ? "" : "/") + fmt("%.3f", a);
        acc_text += (acc_text.empty() ? "" : "/") + fmt("%.3f", r);
    }
    v.require(monotone, "alarm rate at D/4, D, 4D, 16D = " + alarms_text);
    v.require(blind, "no-key accuracy = " + acc_text);
    return v;
}

Verdict reproducibility() {
    Verdict v;
    std::vector<RunConfig> configs;
    RunConfig c1;
    c1.seed = 77;
    configs.push_back(c1);
    RunConfig c2;
    c2.protocol = 2;
    c2.n = 4000;
    c2.message = Message::kNo;
    c2.eve = EveKind::kWeak;
    c2.seed = 78;
    configs.push_back(c2);
    RunConfig c3 = c1;
    c3.eve = EveKind::kFrequency;
    c3.d = 0.01;
    configs.push_back(c3);
    RunConfig c4 = c2;
    c4.eve = EveKind::kIntercept;
    c4.eve_axis = Axis::kX;
    configs.push_back(c4);
    std::size_t identical = 0;
    for (const RunConfig &c : configs) {
        std::string a = serialize_transcript(run(c));
        std::string b = serialize_transcript(run(c));
        identical += a == b && dump_json(parse_json(a)) == a;
    }
    v.require(identical == configs.size(),
              std::to_string(identical) + "/" + std::to_string(configs.size()) + " configs byte-identical");
    return v;
}

}  // namespace

int main() {
    struct Criterion {
        const char *name;
        Verdict (*check)();
    };
    const Criterion criteria[] = {
        {"weak-value table", weak_value_table},
        {"disturbance consistency", disturbance_consistency},
        {"conditional mean vs Monte Carlo", conditional_mean_oracle},
        {"sum rule", sum_rule},
        {"probability shift", probability_shift},
        {"protocol 1 end-to-end", protocol1_end_to_end},
        {"eve frequency window", eve_window},
        {"scaling law", scaling_law},
        {"protocol 2 end-to-end", protocol2_end_to_end},
        {"intercept-resend detection", intercept_detection},
        {"eve weak-attack tradeoff", weak_attack_tradeoff},
        {"reproducibility", reproducibility},
    };
    int failures = 0;
    int index = 1;
    for (const Criterion &c : criteria) {
        auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = c.check();
        } catch (const std::exception &e) {
            v.pass = false;
            v.detail = std::string("exception: ") + e.what();
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("%s %2d %s: %s (%.1f s)\n", v.pass ? "PASS" : "FAIL", index, c.name, v.detail.c_str(), secs);
        std::fflush(stdout);
        failures += v.pass ? 0 : 1;
        ++index;
    }
    std::printf("%d of %d criteria passed\n", index - 1 - failures, index - 1);
    return failures == 0 ? 0 : 1;
}
