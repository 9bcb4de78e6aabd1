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

#include "oracle/exact_oracle.h"

#include <cmath>
#include <numbers>

#include "gtest/gtest.h"
#include "weakbell/chsh.h"
#include "weakbell/optics.h"

using namespace weakbell;
using namespace weakbell::modes;

namespace {

const double kRoot2 = std::sqrt(2.0);
const double kPi = std::numbers::pi;
const Complex kI{0, 1};

double distance(const StateVector &x, const StateVector &y) { return std::sqrt((x - y).norm_squared()); }

/// Every basis state over aH, aV, bH, bV with at most `max_photons` photons.
std::vector<FockBasisState> two_port_basis(int max_photons) {
    std::vector<FockBasisState> states;
    for (int a_h = 0; a_h <= max_photons; a_h++) {
        for (int a_v = 0; a_h + a_v <= max_photons; a_v++) {
            for (int b_h = 0; a_h + a_v + b_h <= max_photons; b_h++) {
                for (int b_v = 0; a_h + a_v + b_h + b_v <= max_photons; b_v++) {
                    states.push_back(FockBasisState{{aH, a_h}, {aV, a_v}, {bH, b_h}, {bV, b_v}});
                }
            }
        }
    }
    return states;
}

double library_subtracted_E(double mu, double alpha, double beta) {
    SourceSpec spec{mu, mu, 4, Blocked::none};
    AnalyzerSetting setting{alpha, beta};
    return correlation_E(subtract_background(exact_rates(spec, setting, {}),
                                             exact_rates(spec.with_blocked(Blocked::block_a), setting, {}),
                                             exact_rates(spec.with_blocked(Blocked::block_b), setting, {})))
        .e_value;
}

}  // namespace

TEST(oracle_bs_expand, examples) {
    auto pair = oracle::bs_expand({{aH, 1}, {bV, 1}});
    StateVector psi_minus{{FockBasisState{{cH, 1}, {dV, 1}}, 1 / kRoot2},
                          {FockBasisState{{cV, 1}, {dH, 1}}, -1 / kRoot2}};
    StateVector phi_plus{{FockBasisState{{cH, 1}, {cV, 1}}, 1 / kRoot2},
                         {FockBasisState{{dH, 1}, {dV, 1}}, 1 / kRoot2}};
    ASSERT_LT(distance(pair, (psi_minus + phi_plus.scaled(kI)).scaled(1 / kRoot2)), 1e-15);

    auto hom = oracle::bs_expand({{aH, 1}, {bH, 1}});
    StateVector bunched{{FockBasisState{{cH, 2}}, kI / kRoot2}, {FockBasisState{{dH, 2}}, kI / kRoot2}};
    ASSERT_LT(distance(hom, bunched), 1e-15);

    auto two = oracle::bs_expand({{aH, 2}});
    StateVector expected{{FockBasisState{{cH, 2}}, 0.5},
                         {FockBasisState{{dH, 2}}, -0.5},
                         {FockBasisState{{cH, 1}, {dH, 1}}, kI / kRoot2}};
    ASSERT_LT(distance(two, expected), 1e-15);
    // Unitary coefficients (1/2, 1/2, i/sqrt 2) carry unit norm; (1/2, 1/2, i) would carry 3/2.
    ASSERT_NEAR(two.norm_squared(), 1, 1e-15);
}

TEST(oracle_bs_expand, scope_errors) {
    ASSERT_THROW(oracle::bs_expand({{aH, 3}, {bV, 2}}), std::invalid_argument);
    ASSERT_THROW(oracle::bs_expand({{cH, 1}}), std::invalid_argument);
    ASSERT_NO_THROW(oracle::bs_expand({{aH, 2}, {bV, 2}}));
}

TEST(oracle_bs_expand, agrees_with_apply_on_all_small_two_port_states) {
    auto splitter = beam_splitter(Port::a, Port::b);
    auto states = two_port_basis(4);
    ASSERT_EQ(states.size(), 70u);
    for (const auto &s : states) {
        auto expected = oracle::bs_expand(s);
        auto actual = apply(splitter, StateVector::basis(s));
        for (const auto &[basis, amplitude] : expected.terms()) {
            ASSERT_LT(std::abs(actual.amplitude(basis) - amplitude), 1e-10) << s.str() << " -> " << basis.str();
        }
        for (const auto &[basis, amplitude] : actual.terms()) {
            ASSERT_LT(std::abs(expected.amplitude(basis) - amplitude), 1e-10) << s.str() << " -> " << basis.str();
        }
    }
}

TEST(oracle_expand, analyzers_agree_with_library) {
    for (double alpha : {0.0, 0.4, 2.1}) {
        for (double beta : {0.3, -1.0}) {
            auto images = oracle::analyzer_images(alpha, beta);
            auto transform = analyzer_transform({alpha, beta});
            for (auto s : {FockBasisState{{cH, 1}, {dV, 1}}, FockBasisState{{cH, 2}, {cV, 1}},
                           FockBasisState{{cV, 1}, {dH, 2}, {dV, 1}}}) {
                ASSERT_LT(distance(oracle::expand(s, images), apply(transform, StateVector::basis(s))), 1e-12);
            }
        }
    }
}

TEST(oracle_singlet_E, examples) {
    ASSERT_NEAR(oracle::singlet_E(0.3, 0.3), -1, 1e-15);
    ASSERT_NEAR(oracle::singlet_E(kPi / 4, 0), 0, 1e-15);
    ASSERT_NEAR(oracle::singlet_E(kPi / 8, 0), -1 / kRoot2, 1e-15);
}

TEST(oracle_pipeline, singlet_law_on_grid) {
    for (int i = 0; i < 4; i++) {
        for (int j = 0; j < 4; j++) {
            double alpha = i * kPi / 4, beta = j * kPi / 8;
            double law = oracle::singlet_E(alpha, beta);
            ASSERT_NEAR(oracle::subtracted_E(0.05, 0.05, 4, alpha, beta), law, 1e-9);
            ASSERT_NEAR(library_subtracted_E(0.05, alpha, beta), law, 1e-9);
        }
    }
}

TEST(oracle_pipeline, raw_statistic_is_pinned) {
    AngleQuad quad;
    auto settings = quad.settings();
    double e[4];
    for (size_t k = 0; k < 4; k++) {
        e[k] = oracle::raw_E(0.05, 0.05, 4, settings[k].alpha, settings[k].beta);
    }
    double s_raw = std::abs(e[0] - e[1] + e[2] + e[3]);
    ASSERT_NEAR(s_raw, 0.70710678118654752, 1e-9);
    // Same value at other equal means: only the two-photon sector reaches a coincidence.
    double e_small = oracle::raw_E(0.01, 0.01, 4, 0, kPi / 8);
    ASSERT_NEAR(e_small, e[0], 1e-12);
}
