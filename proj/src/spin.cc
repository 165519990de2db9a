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

#include "weakcomm/spin.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace weakcomm {

double Vec3::norm() const {
    return std::sqrt(dot(*this));
}

QubitState QubitState::from_amplitudes(Complex up, Complex down) {
    double n2 = std::norm(up) + std::norm(down);
    if (!(std::abs(n2 - 1.0) <= 1e-9)) {
        throw std::invalid_argument("QubitState: amplitudes are not normalized");
    }
    return normalized(up, down);
}

QubitState QubitState::normalized(Complex up, Complex down) {
    double n = std::sqrt(std::norm(up) + std::norm(down));
    if (!(n > 0.0) || !std::isfinite(n)) {
        throw std::invalid_argument("QubitState: cannot normalize a zero or non-finite vector");
    }
    return QubitState(up / n, down / n);
}

Vec3 QubitState::bloch() const {
    Complex cross = std::conj(up_) * down_;
    return {2.0 * cross.real(), 2.0 * cross.imag(), std::norm(up_) - std::norm(down_)};
}

bool QubitState::same_ray(const QubitState &other, double tol) const {
    return std::abs(std::abs(overlap(*this, other)) - 1.0) <= tol;
}

SpinObservable SpinObservable::along(const Vec3 &direction) {
    double n = direction.norm();
    if (!(std::abs(n - 1.0) <= 1e-9)) {
        throw std::invalid_argument("SpinObservable: direction must be a unit vector");
    }
    return SpinObservable({direction.x / n, direction.y / n, direction.z / n});
}

namespace {

// +1 eigenvector of n.sigma in the fixed phase convention. Written in terms of
// the azimuthal phase of (nx, ny) so it stays accurate near n = -z.
QubitState plus_eigenvector(const Vec3 &n) {
    double up = std::sqrt(std::max(0.0, (1.0 + n.z) / 2.0));
    double down_mag = std::sqrt(std::max(0.0, (1.0 - n.z) / 2.0));
    double r = std::hypot(n.x, n.y);
    Complex phase = r > 0.0 ? Complex(n.x / r, n.y / r) : Complex(1.0, 0.0);
    return QubitState::normalized(Complex(up, 0.0), phase * down_mag);
}

}  // namespace

QubitState SpinObservable::eigenstate(Outcome outcome) const {
    return outcome == Outcome::kPlus ? plus_eigenvector(direction_) : plus_eigenvector(-direction_);
}

std::pair<Complex, Complex> SpinObservable::apply(const QubitState &ket) const {
    const Vec3 &n = direction_;
    Complex off(n.x, -n.y);  // <up|n.sigma|down>
    return {n.z * ket.up() + off * ket.down(), std::conj(off) * ket.up() - n.z * ket.down()};
}

SpinObservable sigma_x() {
    return SpinObservable::along({1.0, 0.0, 0.0});
}

SpinObservable sigma_y() {
    return SpinObservable::along({0.0, 1.0, 0.0});
}

SpinObservable sigma_z() {
    return SpinObservable::along({0.0, 0.0, 1.0});
}

SpinObservable diagonal_xy_plus() {
    return SpinObservable::along({std::numbers::sqrt2 / 2.0, std::numbers::sqrt2 / 2.0, 0.0});
}

SpinObservable diagonal_xy_minus() {
    return SpinObservable::along({std::numbers::sqrt2 / 2.0, -std::numbers::sqrt2 / 2.0, 0.0});
}

QubitState bloch_state(const Vec3 &direction) {
    return SpinObservable::along(direction).eigenstate(Outcome::kPlus);
}

Complex overlap(const QubitState &bra, const QubitState &ket) {
    return std::conj(bra.up()) * ket.up() + std::conj(bra.down()) * ket.down();
}

Complex matrix_element(const QubitState &bra, const SpinObservable &obs, const QubitState &ket) {
    auto [up, down] = obs.apply(ket);
    return std::conj(bra.up()) * up + std::conj(bra.down()) * down;
}

double expectation(const SpinObservable &obs, const QubitState &state) {
    return std::clamp(state.bloch().dot(obs.direction()), -1.0, 1.0);
}

double variance(const SpinObservable &obs, const QubitState &state) {
    double e = expectation(obs, state);
    return 1.0 - e * e;
}

double born_probability(const QubitState &state, const SpinObservable &obs, Outcome outcome) {
    double plus = (1.0 + expectation(obs, state)) / 2.0;
    return outcome == Outcome::kPlus ? plus : 1.0 - plus;
}

StrongResult measure_strong(const QubitState &state, const SpinObservable &obs, RandomStream &rng) {
    Outcome outcome = rng.uniform() < born_probability(state, obs, Outcome::kPlus) ? Outcome::kPlus : Outcome::kMinus;
    return {outcome, obs.eigenstate(outcome)};
}

}  // namespace weakcomm
