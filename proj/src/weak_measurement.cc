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

#include "weakcomm/weak_measurement.h"

#include <cmath>

namespace weakcomm {

PointerConfig::PointerConfig(double delta_p) : delta_p_(delta_p) {
    if (!(delta_p > 0.0) || !std::isfinite(delta_p)) {
        throw std::invalid_argument("PointerConfig: delta_p must be positive and finite");
    }
}

double PointerConfig::overlap_factor() const {
    return std::exp(-1.0 / (2.0 * delta_p_ * delta_p_));
}

double PointerConfig::nominal_disturbance() const {
    return disturbance(delta_p_, 0.5);
}

double disturbance(double delta_p, double var_a) {
    if (!(delta_p > 0.0)) {
        throw std::invalid_argument("disturbance: delta_p must be positive");
    }
    if (!(var_a >= 0.0 && var_a <= 1.0)) {
        throw std::invalid_argument("disturbance: variance must lie in [0, 1]");
    }
    // 1 - exp(-x) via expm1 keeps relative precision for wide pointers.
    return -(var_a / 2.0) * std::expm1(-1.0 / (2.0 * delta_p * delta_p));
}

double delta_p_for_disturbance(double d, double var_a) {
    if (!(var_a > 0.0 && var_a <= 1.0) || !(d > 0.0 && d < var_a / 2.0)) {
        throw std::invalid_argument("delta_p_for_disturbance: need 0 < d < var_a / 2");
    }
    return 1.0 / std::sqrt(-2.0 * std::log1p(-2.0 * d / var_a));
}

double fidelity(const QubitState &pre, const SpinObservable &obs, const PointerConfig &cfg) {
    double w_plus = born_probability(pre, obs, Outcome::kPlus);
    double w_minus = born_probability(pre, obs, Outcome::kMinus);
    return w_plus * w_plus + w_minus * w_minus + 2.0 * w_plus * w_minus * cfg.overlap_factor();
}

Complex weak_value(const SpinObservable &obs, const QubitState &pre, const QubitState &post) {
    Complex amp = overlap(post, pre);
    if (std::abs(amp) < 1e-12) {
        throw UndefinedWeakValue("weak_value: pre- and post-selected states are orthogonal");
    }
    return matrix_element(post, obs, pre) / amp;
}

double prob_shift(Complex a_w, double var_a, double d) {
    if (!(var_a > 0.0)) {
        throw std::invalid_argument("prob_shift: observable variance must be positive");
    }
    return -(1.0 - std::norm(a_w)) * d / var_a;
}

WeakValueReport conditional_mean(const SpinObservable &obs, const QubitState &pre, const QubitState &post,
                                 const PointerConfig &cfg) {
    WeakValueReport r;
    r.a_w = weak_value(obs, pre, post);
    r.re_a_w = r.a_w.real();
    r.prob_unperturbed = std::norm(overlap(post, pre));
    // (1 - e) / 2 equals D / var_a; writing it directly also covers var_a = 0.
    double half_gap = -std::expm1(-1.0 / (2.0 * cfg.delta_p() * cfg.delta_p())) / 2.0;
    r.rel_shift = -(1.0 - std::norm(r.a_w)) * half_gap;
    r.prob_perturbed = r.prob_unperturbed * (1.0 + r.rel_shift);
    r.cond_mean = r.re_a_w / (1.0 + r.rel_shift);
    return r;
}

WeakMeter::WeakMeter(const SpinObservable &obs, const PointerConfig &cfg)
    : obs_(obs),
      cfg_(cfg),
      a_plus_(obs.eigenstate(Outcome::kPlus)),
      a_minus_(obs.eigenstate(Outcome::kMinus)),
      inv_var_(1.0 / (cfg.delta_p() * cfg.delta_p())) {
}

WeakReading WeakMeter::sample(const QubitState &pre, RandomStream &rng) const {
    Complex c_plus = overlap(a_plus_, pre);
    Complex c_minus = overlap(a_minus_, pre);

    double shift = rng.uniform() < std::norm(c_plus) ? 1.0 : -1.0;
    double p = gaussian(rng, shift, cfg_.delta_p());

    // phi(p + 1) / phi(p - 1) = exp(-p / delta_p^2); scale the larger kernel to 1.
    double log_ratio = -p * inv_var_;
    double w_plus = log_ratio > 0.0 ? std::exp(-log_ratio) : 1.0;
    double w_minus = log_ratio > 0.0 ? 1.0 : std::exp(log_ratio);
    Complex up = c_plus * w_plus * a_plus_.up() + c_minus * w_minus * a_minus_.up();
    Complex down = c_plus * w_plus * a_plus_.down() + c_minus * w_minus * a_minus_.down();
    if (std::norm(up) + std::norm(down) == 0.0) {
        // Only reachable when one branch is empty and the other kernel underflowed.
        return {p, shift > 0.0 ? a_plus_ : a_minus_};
    }
    return {p, QubitState::normalized(up, down)};
}

WeakReading sample_weak_reading(const QubitState &pre, const SpinObservable &obs, const PointerConfig &cfg,
                                RandomStream &rng) {
    return WeakMeter(obs, cfg).sample(pre, rng);
}

double sum_rule_residual(const SpinObservable &obs, const QubitState &pre, const SpinObservable &post_axis) {
    double total = 0.0;
    for (Outcome o : {Outcome::kPlus, Outcome::kMinus}) {
        QubitState post = post_axis.eigenstate(o);
        total += std::norm(overlap(post, pre)) * weak_value(obs, pre, post).real();
    }
    return expectation(obs, pre) - total;
}

}  // namespace weakcomm
