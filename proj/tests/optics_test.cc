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

#include "weakbell/optics.h"

#include <cmath>
#include <numbers>
#include <random>

#include "gtest/gtest.h"

using namespace weakbell;
using namespace weakbell::modes;

namespace {

const double kRoot2 = std::sqrt(2.0);
const double kPi = std::numbers::pi;
const Complex kI{0, 1};

double distance(const StateVector &x, const StateVector &y) { return std::sqrt((x - y).norm_squared()); }

ModeTransform random_unitary(std::mt19937_64 &rng) {
    std::normal_distribution<double> g;
    Eigen::MatrixXcd z(kNumModes, kNumModes);
    for (size_t r = 0; r < kNumModes; r++) {
        for (size_t c = 0; c < kNumModes; c++) {
            z(r, c) = Complex{g(rng), g(rng)};
        }
    }
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
    ModeMatrix q = qr.householderQ() * Eigen::MatrixXcd::Identity(kNumModes, kNumModes);
    return ModeTransform::from_matrix(q);
}

/// Normalized superposition of a few random basis states with at most `max_photons` photons.
StateVector random_state(std::mt19937_64 &rng, int max_photons) {
    std::normal_distribution<double> g;
    StateVector::Terms terms;
    for (int t = 0; t < 4; t++) {
        FockBasisState s;
        int photons = static_cast<int>(rng() % (max_photons + 1));
        for (int p = 0; p < photons; p++) {
            auto mode = ModeLabel::from_index(rng() % kNumModes);
            s = s.with(mode, s[mode] + 1);
        }
        terms[s] += Complex{g(rng), g(rng)};
    }
    return normalize(StateVector(terms));
}

ModeTransform splitter() { return beam_splitter(Port::a, Port::b); }

}  // namespace

TEST(beam_splitter, single_photon) {
    auto out = apply(splitter(), StateVector::basis({{aH, 1}}));
    StateVector expected{{FockBasisState{{cH, 1}}, 1 / kRoot2}, {FockBasisState{{dH, 1}}, kI / kRoot2}};
    ASSERT_LT(distance(out, expected), 1e-15);

    auto other = apply(splitter(), StateVector::basis({{bV, 1}}));
    StateVector expected_b{{FockBasisState{{cV, 1}}, kI / kRoot2}, {FockBasisState{{dV, 1}}, 1 / kRoot2}};
    ASSERT_LT(distance(other, expected_b), 1e-15);
}

TEST(beam_splitter, orthogonal_pair_gives_singlet_plus_same_port_state) {
    auto out = apply(splitter(), StateVector::basis({{aH, 1}, {bV, 1}}));
    StateVector psi_minus{{FockBasisState{{cH, 1}, {dV, 1}}, 1 / kRoot2},
                          {FockBasisState{{cV, 1}, {dH, 1}}, -1 / kRoot2}};
    StateVector phi_plus{{FockBasisState{{cH, 1}, {cV, 1}}, 1 / kRoot2},
                         {FockBasisState{{dH, 1}, {dV, 1}}, 1 / kRoot2}};
    auto expected = (psi_minus + phi_plus.scaled(kI)).scaled(1 / kRoot2);
    ASSERT_LT(distance(out, expected), 1e-15);
}

TEST(beam_splitter, two_photons_in_one_port) {
    auto out = apply(splitter(), StateVector::basis({{aH, 2}}));
    StateVector expected{{FockBasisState{{cH, 2}}, 0.5},
                         {FockBasisState{{dH, 2}}, -0.5},
                         {FockBasisState{{cH, 1}, {dH, 1}}, kI / kRoot2}};
    ASSERT_LT(distance(out, expected), 1e-15);
    ASSERT_NEAR(out.norm_squared(), 1, 1e-12);

    auto out_b = apply(splitter(), StateVector::basis({{bV, 2}}));
    StateVector expected_b{{FockBasisState{{cV, 2}}, -0.5},
                           {FockBasisState{{dV, 2}}, 0.5},
                           {FockBasisState{{cV, 1}, {dV, 1}}, kI / kRoot2}};
    ASSERT_LT(distance(out_b, expected_b), 1e-15);
}

TEST(beam_splitter, hong_ou_mandel) {
    auto out = apply(splitter(), StateVector::basis({{aH, 1}, {bH, 1}}));
    StateVector expected{{FockBasisState{{cH, 2}}, kI / kRoot2}, {FockBasisState{{dH, 2}}, kI / kRoot2}};
    ASSERT_LT(distance(out, expected), 1e-15);
    ASSERT_LT(std::abs(out.amplitude(FockBasisState{{cH, 1}, {dH, 1}})), 1e-12);

    // Holds for both polarizations and the other phase convention too.
    auto hadamard = beam_splitter(Port::a, Port::b, kPi / 4, BeamSplitterConvention::hadamard);
    auto out_v = apply(hadamard, StateVector::basis({{aV, 1}, {bV, 1}}));
    ASSERT_LT(std::abs(out_v.amplitude(FockBasisState{{cV, 1}, {dV, 1}})), 1e-12);

    // An unbalanced splitter does not cancel.
    auto unbalanced = beam_splitter(Port::a, Port::b, 0.6);
    auto leak = apply(unbalanced, StateVector::basis({{aH, 1}, {bH, 1}}));
    ASSERT_GT(std::abs(leak.amplitude(FockBasisState{{cH, 1}, {dH, 1}})), 0.1);
}

TEST(beam_splitter, errors_and_structure) {
    ASSERT_THROW(beam_splitter(Port::a, Port::a), std::invalid_argument);
    ASSERT_THROW(beam_splitter(Port::a, Port::c), std::invalid_argument);
    auto bs = splitter();
    ASSERT_LT(bs.unitarity_error(), 1e-12);
    // Identical action on H and V.
    ASSERT_EQ(bs(cH, aH), bs(cV, aV));
    ASSERT_EQ(bs(dH, bH), bs(dV, bV));
    ASSERT_EQ(bs(cV, aH), Complex{0.0});
    ASSERT_EQ(partner_port(Port::a), Port::c);
    ASSERT_EQ(partner_port(Port::d), Port::b);
    auto angle_zero = beam_splitter(Port::a, Port::b, 0);
    auto moved = apply(angle_zero, StateVector::basis({{aH, 1}}));
    ASSERT_LT(distance(moved, StateVector::basis({{cH, 1}})), 1e-15);
}

TEST(polarization_rotator, examples) {
    auto half_turn = polarization_rotator(Port::b, kPi / 2);
    auto out = apply(half_turn, StateVector::basis({{bH, 1}}));
    ASSERT_NEAR(std::abs(out.amplitude(FockBasisState{{bV, 1}})), 1, 1e-15);
    ASSERT_EQ(out.size(), 1u);

    ASSERT_EQ(polarization_rotator(Port::c, 0).matrix(), ModeMatrix::Identity());

    auto eighth = apply(polarization_rotator(Port::c, kPi / 4), StateVector::basis({{cH, 1}}));
    StateVector expected{{FockBasisState{{cH, 1}}, 1 / kRoot2}, {FockBasisState{{cV, 1}}, 1 / kRoot2}};
    ASSERT_LT(distance(eighth, expected), 1e-15);

    // Other ports untouched.
    auto r = polarization_rotator(Port::c, 0.7);
    ASSERT_EQ(r(aH, aH), Complex{1.0});
    ASSERT_EQ(r(dV, dV), Complex{1.0});
}

TEST(phase_shift, examples) {
    ASSERT_LT((phase_shift(Port::a, 0).matrix() - ModeMatrix::Identity()).cwiseAbs().maxCoeff(), 1e-15);
    auto flipped = apply(phase_shift(Port::b, kPi), StateVector::basis({{bV, 1}}));
    ASSERT_LT(distance(flipped, StateVector{{FockBasisState{{bV, 1}}, -1.0}}), 1e-15);
    double phi = 0.37;
    auto two = apply(phase_shift(Port::b, phi), StateVector::basis({{bV, 2}}));
    ASSERT_LT(std::abs(two.amplitude(FockBasisState{{bV, 2}}) - std::polar(1.0, 2 * phi)), 1e-15);
}

TEST(compose, examples) {
    std::mt19937_64 rng(11);
    auto u = random_unitary(rng);
    ASSERT_LT((compose(ModeTransform::identity(), u).matrix() - u.matrix()).cwiseAbs().maxCoeff(), 1e-15);
    ASSERT_LT((compose(u, u.adjoint()).matrix() - ModeMatrix::Identity()).cwiseAbs().maxCoeff(), 1e-12);
    auto quarter = polarization_rotator(Port::c, kPi / 4);
    auto half = polarization_rotator(Port::c, kPi / 2);
    ASSERT_LT((compose(quarter, quarter).matrix() - half.matrix()).cwiseAbs().maxCoeff(), 1e-12);
    // first, then second.
    auto bs = splitter();
    auto rot = polarization_rotator(Port::c, 0.3);
    ASSERT_EQ(compose(bs, rot).matrix(), rot.matrix() * bs.matrix());
}

TEST(mode_transform, rejects_non_unitary_matrices) {
    ModeMatrix m = ModeMatrix::Identity();
    m(0, 0) = 1.01;
    ASSERT_THROW(ModeTransform::from_matrix(m), std::invalid_argument);
    ModeMatrix nearly = ModeMatrix::Identity();
    nearly(0, 0) = 1 + 1e-11;
    ASSERT_NO_THROW(ModeTransform::from_matrix(nearly));
}

TEST(apply, identity_leaves_state_unchanged) {
    std::mt19937_64 rng(2);
    for (int t = 0; t < 20; t++) {
        auto s = random_state(rng, 4);
        ASSERT_LT(distance(apply(ModeTransform::identity(), s), s), 1e-15);
    }
}

TEST(apply, preserves_norm_and_photon_number) {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 40; t++) {
        auto u = random_unitary(rng);
        ASSERT_LT(u.unitarity_error(), 1e-12);
        auto s = random_state(rng, 4);
        auto out = apply(u, s);
        ASSERT_NEAR(out.norm_squared(), 1, 1e-12);
        // Photon number per input term is conserved term by term on a basis input.
        for (const auto &[basis, amplitude] : s.terms()) {
            auto image = apply(u, StateVector::basis(basis));
            for (const auto &[out_basis, a] : image.terms()) {
                ASSERT_EQ(out_basis.total_photons(), basis.total_photons());
            }
        }
    }
}

TEST(apply, composition_homomorphism) {
    std::mt19937_64 rng(4);
    for (int t = 0; t < 30; t++) {
        auto u = random_unitary(rng);
        auto v = random_unitary(rng);
        auto s = random_state(rng, 4);
        auto composed = apply(compose(u, v), s);
        auto sequential = apply(v, apply(u, s));
        ASSERT_LT(distance(composed, sequential), 1e-12);
    }
}

TEST(apply, unitarity_on_generated_elements) {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> angle(0, 2 * kPi);
    for (int t = 0; t < 30; t++) {
        auto network = compose(compose(beam_splitter(Port::a, Port::b, angle(rng)), polarization_rotator(Port::c, angle(rng))),
                               compose(phase_shift(Port::d, angle(rng)), polarization_rotator(Port::d, angle(rng))));
        ASSERT_LT(network.unitarity_error(), 1e-12);
        auto s = random_state(rng, 4);
        ASSERT_NEAR(apply(network, s).norm_squared(), 1, 1e-12);
    }
}

TEST(apply, mixture_componentwise) {
    DensityMixture m({{0.25, StateVector::basis({{aH, 1}})}, {0.75, StateVector::basis({{aH, 1}, {bV, 1}})}});
    auto out = apply(splitter(), m);
    ASSERT_EQ(out.components().size(), 2u);
    ASSERT_EQ(out.components()[1].weight, 0.75);
    ASSERT_LT(distance(out.components()[1].state, apply(splitter(), m.components()[1].state)), 1e-15);
}

TEST(mode_transform, json_round_trip) {
    auto bs = splitter();
    auto j = to_json(bs);
    ASSERT_EQ(j["labels"][0], "aH");
    ASSERT_EQ(j["labels"][7], "dV");
    ASSERT_EQ(j["matrix"].size(), 8u);
    auto back = transform_from_json(j);
    ASSERT_EQ(back.matrix(), bs.matrix());
    auto bad = j;
    std::swap(bad["labels"][0], bad["labels"][1]);
    ASSERT_THROW(transform_from_json(bad), std::invalid_argument);
    auto scaled = j;
    scaled["matrix"][0][0] = {2.0, 0.0};
    ASSERT_THROW(transform_from_json(scaled), std::invalid_argument);
}
