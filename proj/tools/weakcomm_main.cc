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

// weakcomm: run protocol cycles, sweeps, the scaling search, and closed-form
// desk checks from the command line.
//
// Exit codes: 0 success, 2 configuration error, 3 protocol violation.

#include <cstdio>
#include <sstream>
#include <type_traits>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "weakcomm/adversary.h"
#include "weakcomm/harness.h"

namespace {

using namespace weakcomm;

constexpr int kExitConfig = 2;
constexpr int kExitViolation = 3;

void emit(const std::string &text, const std::string &path) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ConfigError("cannot write '" + path + "'");
    }
    out << text;
}

template <class T>
std::vector<T> parse_list(const std::string &csv, const char *what) {
    std::vector<T> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            if constexpr (std::is_floating_point_v<T>) {
                out.push_back(std::stod(item, &used));
            } else {
                out.push_back(static_cast<T>(std::stoull(item, &used)));
            }
            if (used != item.size()) {
                throw std::invalid_argument(item);
            }
        } catch (const std::logic_error &) {
            throw ConfigError(std::string("bad ") + what + " entry '" + item + "'");
        }
    }
    if (out.empty()) {
        throw ConfigError(std::string(what) + " must not be empty");
    }
    return out;
}

struct RunFlags {
    std::optional<int> protocol;
    std::optional<std::size_t> n;
    std::optional<double> delta_p;
    std::optional<double> d;
    std::optional<std::string> message;
    std::optional<uint64_t> seed;
    std::optional<std::string> eve;
    std::optional<std::string> eve_axis;
    std::optional<double> eve_delta_p;
    std::optional<std::string> eve_decode;
    std::optional<std::size_t> trials;
    bool timerev = false;
    std::string config_path;
    std::string out_path;
};

RunConfig effective_config(const RunFlags &f) {
    RunConfig cfg;
    if (!f.config_path.empty()) {
        cfg = load_config_file(f.config_path, cfg);
    }
    if (f.protocol) cfg.protocol = *f.protocol;
    if (f.n) cfg.n = *f.n;
    if (f.delta_p) {
        cfg.delta_p = *f.delta_p;
        cfg.d.reset();
    }
    if (f.d) {
        cfg.d = *f.d;
        cfg.delta_p.reset();
    }
    if (f.message) cfg.message = parse_message(*f.message);
    if (f.seed) cfg.seed = *f.seed;
    if (f.eve) cfg.eve = parse_eve(*f.eve);
    if (f.eve_axis) cfg.eve_axis = parse_axis(*f.eve_axis);
    if (f.eve_delta_p) cfg.eve_delta_p = *f.eve_delta_p;
    if (f.eve_decode) cfg.eve_decode = parse_weak_decode(*f.eve_decode);
    if (f.trials) cfg.trials = *f.trials;
    if (f.timerev) cfg.timerev = true;
    cfg.validate();
    return cfg;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Weak-measurement communication protocols: simulation and analysis"};
    app.require_subcommand(1);

    RunFlags rf;
    CLI::App *run_cmd = app.add_subcommand("run", "Run one protocol cycle and print its JSON transcript");
    run_cmd->add_option("--protocol", rf.protocol, "1 (Bob signals Alice) or 2 (Alice signals Bob)");
    run_cmd->add_option("--n", rf.n, "Number of spins");
    auto *dp_opt = run_cmd->add_option("--delta-p", rf.delta_p, "Pointer width");
    run_cmd->add_option("--d", rf.d, "Target disturbance (sets the pointer width)")->excludes(dp_opt);
    run_cmd->add_option("--message", rf.message, "yes or no");
    run_cmd->add_option("--seed", rf.seed, "Base seed");
    run_cmd->add_option("--eve", rf.eve, "none, frequency, intercept or weak");
    run_cmd->add_option("--eve-axis", rf.eve_axis, "Intercept axis: x, y or z");
    run_cmd->add_option("--eve-delta-p", rf.eve_delta_p, "Eve's pointer width for the weak tap");
    run_cmd->add_option("--eve-decode", rf.eve_decode, "readings_mean, key_binning or code_correlation");
    run_cmd->add_option("--trials", rf.trials, "Echoed in the transcript");
    run_cmd->add_flag("--timerev", rf.timerev, "Allow transit attacks on Protocol 1");
    run_cmd->add_option("--config", rf.config_path, "JSON config; flags override its values");
    run_cmd->add_option("--out", rf.out_path, "Output path (stdout if omitted)");

    std::string sweep_d = "0.005";
    std::string sweep_n = "2000";
    std::size_t sweep_trials = 200;
    uint64_t sweep_seed = 1;
    std::string sweep_out;
    unsigned workers = 0;
    CLI::App *sweep_cmd = app.add_subcommand("sweep", "Accuracy and alarm rates over a (D, N) grid as CSV");
    sweep_cmd->add_option("--d-grid", sweep_d, "Comma-separated disturbances");
    sweep_cmd->add_option("--n-grid", sweep_n, "Comma-separated sample sizes");
    sweep_cmd->add_option("--trials", sweep_trials, "Runs per cell and quantity");
    sweep_cmd->add_option("--seed", sweep_seed, "Base seed");
    sweep_cmd->add_option("--workers", workers, "Threads (0: hardware concurrency)");
    sweep_cmd->add_option("--out", sweep_out, "Output path (stdout if omitted)");

    std::string scaling_d = "0.02,0.01,0.005,0.0025";
    ScalingOptions scaling_opt;
    std::string scaling_out;
    CLI::App *scaling_cmd = app.add_subcommand("scaling", "Minimal N for Alice and for Eve's frequency attack");
    scaling_cmd->add_option("--d-grid", scaling_d, "Comma-separated disturbances in (0, 0.05]");
    scaling_cmd->add_option("--target", scaling_opt.accuracy_target, "Accuracy target");
    scaling_cmd->add_option("--trials", scaling_opt.trials, "Runs per probe (>= 200)");
    scaling_cmd->add_option("--seed", scaling_opt.base_seed, "Base seed");
    scaling_cmd->add_option("--budget", scaling_opt.n_budget, "Largest N probed");
    scaling_cmd->add_option("--workers", scaling_opt.workers, "Threads (0: hardware concurrency)");
    scaling_cmd->add_option("--out", scaling_out, "Output path (stdout if omitted)");

    std::string oracle_pre = "x";
    std::string oracle_post = "y";
    std::string oracle_obs = "a";
    std::optional<double> oracle_dp;
    std::optional<double> oracle_d;
    CLI::App *oracle_cmd = app.add_subcommand("oracle", "Closed-form weak-measurement quantities as JSON");
    oracle_cmd->add_option("--pre", oracle_pre, "Pre-selected direction (x, y, z, a, abar, -y, or nx,ny,nz)");
    oracle_cmd->add_option("--post", oracle_post, "Post-selected direction");
    oracle_cmd->add_option("--obs", oracle_obs, "Measured observable direction");
    auto *odp = oracle_cmd->add_option("--delta-p", oracle_dp, "Pointer width (default 5)");
    oracle_cmd->add_option("--d", oracle_d, "Target disturbance at variance 1/2")->excludes(odp);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (*run_cmd) {
            RunConfig cfg = effective_config(rf);
            emit(serialize_transcript(run(cfg)), rf.out_path);
        } else if (*sweep_cmd) {
            auto d_grid = parse_list<double>(sweep_d, "--d-grid");
            auto n_grid = parse_list<std::size_t>(sweep_n, "--n-grid");
            emit(sweep_csv(sweep(d_grid, n_grid, sweep_trials, sweep_seed, workers)), sweep_out);
        } else if (*scaling_cmd) {
            auto d_grid = parse_list<double>(scaling_d, "--d-grid");
            ScalingReport report;
            try {
                report = scaling_experiment(d_grid, scaling_opt);
            } catch (const std::invalid_argument &e) {
                throw ConfigError(e.what());
            }
            emit(scaling_csv(report), scaling_out);
            if (report.d_values.size() >= 2) {
                std::fprintf(stderr, "slope of log(N_E/N_A) vs log(1/D): %.4f\n", report.slope());
            }
        } else if (*oracle_cmd) {
            double dp = oracle_d ? delta_p_for_disturbance(*oracle_d) : oracle_dp.value_or(kDefaultDeltaP);
            std::cout << dump_json(oracle_report(parse_direction(oracle_pre), parse_direction(oracle_post),
                                                 parse_direction(oracle_obs), dp));
        }
    } catch (const ProtocolViolation &e) {
        std::cerr << "protocol violation: " << e.what() << "\n";
        return kExitViolation;
    } catch (const ConfigError &e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument &e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }
    return 0;
}
