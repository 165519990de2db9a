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

#ifndef WEAKCOMM_SPIN_H
#define WEAKCOMM_SPIN_H

#include <complex>

#include "weakcomm/stats.h"

namespace weakcomm {

using Complex = std::complex<double>;

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    double dot(const Vec3 &other) const { return x * other.x + y * other.y + z * other.z; }
    double norm() const;
    Vec3 operator-() const { return {-x, -y, -z}; }
    bool operator==(const Vec3 &) const = default;
};

/// Pure state of a spin-1/2, stored as amplitudes in the sigma_z basis.
///
/// Invariant: |up|^2 + |down|^2 == 1 within 1e-12. Global phase carries no
/// meaning; compare states with `same_ray`.
class QubitState {
   public:
    /// |z+>.
    QubitState() = default;

    /// Takes amplitudes that are already normalized (within 1e-9); they are
    /// renormalized to full precision. Throws std::invalid_argument otherwise.
    static QubitState from_amplitudes(Complex up, Complex down);
    /// Normalizes any non-zero amplitude pair.
    static QubitState normalized(Complex up, Complex down);

    Complex up() const { return up_; }
    Complex down() const { return down_; }
    Vec3 bloch() const;

    /// Equal up to global phase: |<this|other>| == 1 within `tol`.
    bool same_ray(const QubitState &other, double tol = 1e-9) const;

   private:
    QubitState(Complex up, Complex down) : up_(up), down_(down) {}

    Complex up_{1.0, 0.0};
    Complex down_{0.0, 0.0};
};

enum class Outcome : int { kMinus = -1, kPlus = 1 };

inline int value(Outcome o) { return static_cast<int>(o); }

/// The observable n.sigma for a unit Bloch direction n. Eigenvalues are +1 and -1.
class SpinObservable {
   public:
    /// Throws std::invalid_argument unless |direction| == 1 within 1e-9.
    static SpinObservable along(const Vec3 &direction);

    const Vec3 &direction() const { return direction_; }

    /// Eigenvector for eigenvalue `outcome`. The +1 eigenvector has a
    /// non-negative real up amplitude (non-negative real down amplitude when the
    /// up amplitude vanishes); the -1 eigenvector follows the same convention
    /// as the +1 eigenvector of -n.
    QubitState eigenstate(Outcome outcome) const;

    /// Returns (n.sigma)|ket> as an unnormalized amplitude pair.
    std::pair<Complex, Complex> apply(const QubitState &ket) const;

   private:
    explicit SpinObservable(const Vec3 &d) : direction_(d) {}
    Vec3 direction_;
};

SpinObservable sigma_x();
SpinObservable sigma_y();
SpinObservable sigma_z();
/// (sigma_x + sigma_y) / sqrt(2).
SpinObservable diagonal_xy_plus();
/// (sigma_x - sigma_y) / sqrt(2).
SpinObservable diagonal_xy_minus();

/// +1 eigenstate of direction.sigma.
QubitState bloch_state(const Vec3 &direction);

/// <bra|ket>.
Complex overlap(const QubitState &bra, const QubitState &ket);

/// <bra|obs|ket>.
Complex matrix_element(const QubitState &bra, const SpinObservable &obs, const QubitState &ket);

double expectation(const SpinObservable &obs, const QubitState &state);
double variance(const SpinObservable &obs, const QubitState &state);

/// (1 + outcome * <obs>) / 2. P(kMinus) is computed as 1 - P(kPlus) so the
/// pair sums to one.
double born_probability(const QubitState &state, const SpinObservable &obs, Outcome outcome);

struct StrongResult {
    Outcome outcome;
    QubitState collapsed;
};

/// Projective measurement; consumes one uniform draw.
StrongResult measure_strong(const QubitState &state, const SpinObservable &obs, RandomStream &rng);

}  // namespace weakcomm

#endif
