// Copyright 2026 The weakbell Authors
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

#ifndef WEAKBELL_OPTICS_H
#define WEAKBELL_OPTICS_H

#include <numbers>

#include "weakbell/fock.h"

namespace weakbell {

using ModeMatrix = Eigen::Matrix<Complex, kNumModes, kNumModes>;

/// Tolerance used when a transform is constructed from a raw matrix.
constexpr double kUnitarityTolerance = 1e-9;

/// Linear-optical mode transform. Column k holds the image of creation operator k:
///     a_k^dagger -> sum_j matrix(j, k) b_j^dagger
/// Always unitary; construction from a non-unitary matrix throws.
class ModeTransform {
   public:
    ModeTransform() : matrix_(ModeMatrix::Identity()) {}
    static ModeTransform identity() { return ModeTransform(); }
    /// Throws std::invalid_argument if `matrix` is not unitary within kUnitarityTolerance.
    static ModeTransform from_matrix(const ModeMatrix &matrix);

    const ModeMatrix &matrix() const { return matrix_; }
    Complex operator()(ModeLabel out, ModeLabel in) const { return matrix_(out.index(), in.index()); }
    /// Largest entrywise deviation of U^dagger U from the identity.
    double unitarity_error() const;
    ModeTransform adjoint() const;

   private:
    explicit ModeTransform(const ModeMatrix &matrix) : matrix_(matrix) {}
    ModeMatrix matrix_;
};

/// Phase convention of a balanced splitter.
enum class BeamSplitterConvention {
    /// x -> (x' + i y') / sqrt 2, y -> (i x' + y') / sqrt 2.
    symmetric,
    /// x -> (x' + y') / sqrt 2, y -> (x' - y') / sqrt 2.
    hadamard,
};

/// The output port paired with an input port: a <-> c, b <-> d.
Port partner_port(Port port);

/// Two-port splitter mixing `port_x` and `port_y` into their partner ports, identically for
/// both polarizations. With the symmetric convention and transmission amplitude t = cos(angle),
/// r = sin(angle):
///     x -> t x' + i r y',    y -> i r x' + t y'
/// and the partner ports are mapped back onto (x, y) by the same 2x2 block so the full 8x8
/// matrix is unitary. angle = pi/4 is the balanced 50:50 splitter.
ModeTransform beam_splitter(Port port_x, Port port_y, double transmissivity_angle = std::numbers::pi / 4,
                            BeamSplitterConvention convention = BeamSplitterConvention::symmetric);

/// Rotates linear polarization within `port`:
///     H -> cos H + sin V,    V -> -sin H + cos V.
ModeTransform polarization_rotator(Port port, double angle);

/// Multiplies both polarization modes of `port` by exp(i phase).
ModeTransform phase_shift(Port port, double phase);

/// `first` followed by `second`; the matrix product second * first.
ModeTransform compose(const ModeTransform &first, const ModeTransform &second);

/// Propagates a Fock state through a linear-optical network.
///
/// Each basis term prod_k (a_k^dagger)^{n_k} / sqrt(n_k!) |0> is expanded by multiplying the
/// image polynomial one creation operator at a time (an iterative convolution over output
/// monomials), after which every output monomial prod_j (b_j^dagger)^{m_j} picks up its
/// sqrt(prod m_j!) normalization. The result is not renormalized.
StateVector apply(const ModeTransform &transform, const StateVector &state);

/// Same as `apply`, for each component of the mixture.
DensityMixture apply(const ModeTransform &transform, const DensityMixture &mixture);

nlohmann::json to_json(const ModeTransform &transform);
ModeTransform transform_from_json(const nlohmann::json &json);

}  // namespace weakbell

#endif
