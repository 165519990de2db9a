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

#ifndef WEAKCOMM_WEAK_MEASUREMENT_H
#define WEAKCOMM_WEAK_MEASUREMENT_H

#include <stdexcept>

#include "weakcomm/spin.h"
#include "weakcomm/stats.h"

namespace weakcomm {

/// Thrown when the pre- and post-selected states are orthogonal, where the
/// weak value diverges.
class UndefinedWeakValue : public std::domain_error {
   public:
    using std::domain_error::domain_error;
};

/// Gaussian pointer of standard deviation `delta_p` in |phi(p)|^2. The
/// coupling shifts the pointer by +1 or -1 according to the eigenvalue of the
/// measured spin observable.
class PointerConfig {
   public:
    /// Throws std::invalid_argument unless delta_p > 0 and finite.
    explicit PointerConfig(double delta_p);

    double delta_p() const { return delta_p_; }
    /// <phi+|phi-> = exp(-1 / (2 delta_p^2)).
    double overlap_factor() const;
    /// Disturbance at observable variance 1/2.
    double nominal_disturbance() const;
    /// Advisory only: nominal disturbance below 0.05.
    bool is_weak() const { return nominal_disturbance() < 0.05; }

   private:
    double delta_p_;
};

struct WeakReading {
    double p = 0.0;
    QubitState post_state;
};

struct WeakValueReport {
    Complex a_w;
    double re_a_w = 0.0;
    /// |<post|pre>|^2.
    double prob_unperturbed = 0.0;
    /// Probability of the post-selection after the weak coupling.
    double prob_perturbed = 0.0;
    /// (prob_perturbed - prob_unperturbed) / prob_unperturbed.
    double rel_shift = 0.0;
    /// Pointer mean conditioned on the post-selection.
    double cond_mean = 0.0;
};

/// (var_a / 2) (1 - exp(-1 / (2 delta_p^2))).
double disturbance(double delta_p, double var_a);

/// Pointer width whose disturbance at `var_a` equals `d`; requires
/// 0 < d < var_a / 2.
double delta_p_for_disturbance(double d, double var_a = 0.5);

/// Probability that `pre` survives the coupling to `obs`:
/// |c+|^4 + |c-|^4 + 2 |c+|^2 |c-|^2 exp(-1 / (2 delta_p^2)).
double fidelity(const QubitState &pre, const SpinObservable &obs, const PointerConfig &cfg);

/// <post|obs|pre> / <post|pre>. Throws UndefinedWeakValue when
/// |<post|pre>| < 1e-12.
Complex weak_value(const SpinObservable &obs, const QubitState &pre, const QubitState &post);

/// -(1 - |a_w|^2) d / var_a. Throws std::invalid_argument for var_a <= 0.
double prob_shift(Complex a_w, double var_a, double d);

/// Exact post-selected pointer statistics for the real Gaussian pointer.
/// Expanding <post|Psi_f> as C[(1 + A_w)/2 |phi+> + (1 - A_w)/2 |phi->] gives
///   P'(b)     = P(b) [(1 + |A_w|^2)/2 + (1 - |A_w|^2) e / 2],  e = <phi+|phi->
///   <p> P'(b) = P(b) Re A_w
/// because <phi+|p|phi-> vanishes by parity. With D = var_a (1 - e) / 2 this is
/// cond_mean = Re A_w / (1 + rel_shift), rel_shift = prob_shift(A_w, var_a, D),
/// with no truncation in D.
WeakValueReport conditional_mean(const SpinObservable &obs, const QubitState &pre, const QubitState &post,
                                 const PointerConfig &cfg);

/// Samples one weak reading. The reading follows the marginal
/// |c+|^2 N(+1, delta_p^2) + |c-|^2 N(-1, delta_p^2) (branch by one uniform,
/// then one normal deviate), and the spin is left in
///   c+ phi(p - 1) |a+> + c- phi(p + 1) |a->, normalized.
WeakReading sample_weak_reading(const QubitState &pre, const SpinObservable &obs, const PointerConfig &cfg,
                                RandomStream &rng);

/// Weak coupling to a fixed observable with the eigenbasis precomputed. The
/// draws are identical to sample_weak_reading.
class WeakMeter {
   public:
    WeakMeter(const SpinObservable &obs, const PointerConfig &cfg);

    WeakReading sample(const QubitState &pre, RandomStream &rng) const;

    const SpinObservable &observable() const { return obs_; }
    const PointerConfig &pointer() const { return cfg_; }

   private:
    SpinObservable obs_;
    PointerConfig cfg_;
    QubitState a_plus_;
    QubitState a_minus_;
    double inv_var_;
};

/// <obs> - [P(b+) Re A_w(b+) + P(b-) Re A_w(b-)] for post-selection in the
/// eigenbasis of `post_axis`. Zero up to rounding.
double sum_rule_residual(const SpinObservable &obs, const QubitState &pre, const SpinObservable &post_axis);

}  // namespace weakcomm

#endif
