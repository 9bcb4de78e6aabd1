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

#ifndef WEAKBELL_CHSH_H
#define WEAKBELL_CHSH_H

#include <array>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "weakbell/measurement.h"

namespace weakbell {

/// Isolated two-photon coincidence rates C_ij with their variances.
struct SubtractedTable {
    Outcomes rates{};
    Outcomes variances{};
    AnalyzerSetting setting;
    /// Entries that came out negative and were clamped to zero.
    int clamped_entries = 0;
    /// Sum of the magnitudes removed by clamping.
    double clamped_mass = 0;

    double total() const { return rates[0] + rates[1] + rates[2] + rates[3]; }
};

/// C_ij = N_ij(mu_a, mu_b) - N_ij(0, mu_b) - N_ij(mu_a, 0), entrywise on vacuum-referenced rates.
/// `blocked_a` is the run with arm a blocked, `blocked_b` the run with arm b blocked. Negative
/// entries are clamped to zero and recorded. Throws std::invalid_argument when the three tables
/// come from different settings or source means, or carry the wrong blocking labels.
SubtractedTable subtract_background(const CountTable &full, const CountTable &blocked_a, const CountTable &blocked_b);

/// The rates of a single table, with no background removed.
SubtractedTable without_subtraction(const CountTable &table);

struct CorrelationEstimate {
    double value = 0;
    double error = 0;
};

struct SubtractedCorrelation {
    SubtractedTable table;
    double e_value = 0;
    /// Propagated from the entry variances (Poisson approximation of multinomial counts).
    double std_error = 0;

    CorrelationEstimate estimate() const { return {e_value, std_error}; }
};

/// E = (C++ - C+- - C-+ + C--) / sum C. Throws std::domain_error when sum C is not positive.
SubtractedCorrelation correlation_E(const SubtractedTable &table);

/// Mean and sample standard deviation over repeated measurements of one correlation. A single
/// value has zero spread.
CorrelationEstimate repetition_estimate(std::span<const double> values);

struct ChshResult {
    /// Ordered (alpha, beta), (alpha, beta'), (alpha', beta), (alpha', beta').
    std::array<double, 4> e_values{};
    std::array<double, 4> e_errors{};
    double s_value = 0;
    double s_error = 0;
    std::optional<double> eta_fit;
};

/// Bell test angles (alpha, alpha', beta, beta').
struct AngleQuad {
    double alpha = 0;
    double alpha_prime = std::numbers::pi / 4;
    double beta = std::numbers::pi / 8;
    double beta_prime = 3 * std::numbers::pi / 8;

    /// Settings in ChshResult order.
    std::array<AnalyzerSetting, 4> settings() const {
        return {{{alpha, beta}, {alpha, beta_prime}, {alpha_prime, beta}, {alpha_prime, beta_prime}}};
    }
    friend bool operator==(const AngleQuad &, const AngleQuad &) = default;
};

/// S = |E(a,b) - E(a,b') + E(a',b) + E(a',b')| with errors added in quadrature.
ChshResult chsh_S(const std::array<CorrelationEstimate, 4> &quad);

/// S = |3 E(theta) - E(3 theta)|, the Bell-angle form valid when E depends only on the angle
/// difference. E(theta) enters three times, so its error is scaled by 3 rather than sqrt 3.
ChshResult bell_angle_S(const CorrelationEstimate &e_theta, const CorrelationEstimate &e_3theta);

/// Singlet correlation law in the analyzer-difference angle: E = -cos 2(alpha - beta).
inline double singlet_correlation(double difference) { return -std::cos(2 * difference); }

struct SweepPoint {
    double theta = 0;
    double e = 0;
    /// Zero or negative errors mean "unknown"; the fit then falls back to unit weights.
    double error = 0;
};

struct VisibilityFit {
    double eta = 0;
    double error = 0;
};

/// Weighted least-squares fit of E(theta) = -eta cos 2 theta. Needs at least three points.
/// Throws std::invalid_argument on fewer points and std::domain_error on a degenerate design.
VisibilityFit fit_visibility(std::span<const SweepPoint> sweep);

}  // namespace weakbell

#endif
