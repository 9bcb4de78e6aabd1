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

#include "weakbell/chsh.h"

#include <cmath>
#include <stdexcept>

namespace weakbell {

SubtractedTable subtract_background(const CountTable &full, const CountTable &blocked_a, const CountTable &blocked_b) {
    if (!(full.setting == blocked_a.setting) || !(full.setting == blocked_b.setting)) {
        throw std::invalid_argument("Background subtraction needs tables from the same analyzer setting.");
    }
    if (full.blocked != Blocked::none || blocked_a.blocked != Blocked::block_a ||
        blocked_b.blocked != Blocked::block_b) {
        throw std::invalid_argument("Background subtraction needs the full, block_a and block_b tables in order.");
    }
    if (full.mu_a != blocked_a.mu_a || full.mu_a != blocked_b.mu_a || full.mu_b != blocked_a.mu_b ||
        full.mu_b != blocked_b.mu_b) {
        throw std::invalid_argument("Background subtraction needs tables from the same source means.");
    }
    if ((full.trials == 0) != (blocked_a.trials == 0) || (full.trials == 0) != (blocked_b.trials == 0)) {
        throw std::invalid_argument("Can't subtract Monte Carlo counts from exact probabilities.");
    }
    SubtractedTable result;
    result.setting = full.setting;
    for (size_t k = 0; k < 4; k++) {
        double c = full.rate(k) - blocked_a.rate(k) - blocked_b.rate(k);
        result.variances[k] = full.rate_variance(k) + blocked_a.rate_variance(k) + blocked_b.rate_variance(k);
        if (c < 0) {
            result.clamped_entries++;
            result.clamped_mass += -c;
            c = 0;
        }
        result.rates[k] = c;
    }
    return result;
}

SubtractedTable without_subtraction(const CountTable &table) {
    SubtractedTable result;
    result.setting = table.setting;
    for (size_t k = 0; k < 4; k++) {
        result.rates[k] = table.rate(k);
        result.variances[k] = table.rate_variance(k);
    }
    return result;
}

SubtractedCorrelation correlation_E(const SubtractedTable &table) {
    double total = table.total();
    if (!(total > 0)) {
        throw std::domain_error("Correlation is undefined: no coincidences survive background subtraction.");
    }
    double numerator = 0;
    for (size_t k = 0; k < 4; k++) {
        numerator += outcome_sign(k) * table.rates[k];
    }
    double e = numerator / total;
    double variance = 0;
    for (size_t k = 0; k < 4; k++) {
        double derivative = (outcome_sign(k) - e) / total;
        variance += derivative * derivative * table.variances[k];
    }
    return {table, e, std::sqrt(variance)};
}

CorrelationEstimate repetition_estimate(std::span<const double> values) {
    if (values.empty()) {
        throw std::invalid_argument("No repetitions to summarize.");
    }
    double mean = 0;
    for (double v : values) {
        mean += v;
    }
    mean /= static_cast<double>(values.size());
    if (values.size() == 1) {
        return {mean, 0};
    }
    double ss = 0;
    for (double v : values) {
        ss += (v - mean) * (v - mean);
    }
    return {mean, std::sqrt(ss / static_cast<double>(values.size() - 1))};
}

ChshResult chsh_S(const std::array<CorrelationEstimate, 4> &quad) {
    ChshResult result;
    double signed_sum = 0;
    double variance = 0;
    constexpr double kSigns[4] = {1, -1, 1, 1};
    for (size_t k = 0; k < 4; k++) {
        result.e_values[k] = quad[k].value;
        result.e_errors[k] = quad[k].error;
        signed_sum += kSigns[k] * quad[k].value;
        variance += quad[k].error * quad[k].error;
    }
    result.s_value = std::abs(signed_sum);
    result.s_error = std::sqrt(variance);
    return result;
}

ChshResult bell_angle_S(const CorrelationEstimate &e_theta, const CorrelationEstimate &e_3theta) {
    ChshResult result;
    result.e_values = {e_theta.value, e_3theta.value, e_theta.value, e_theta.value};
    result.e_errors = {e_theta.error, e_3theta.error, e_theta.error, e_theta.error};
    result.s_value = std::abs(3 * e_theta.value - e_3theta.value);
    result.s_error = std::sqrt(9 * e_theta.error * e_theta.error + e_3theta.error * e_3theta.error);
    return result;
}

VisibilityFit fit_visibility(std::span<const SweepPoint> sweep) {
    if (sweep.size() < 3) {
        throw std::invalid_argument("Visibility fit needs at least three sweep points.");
    }
    bool weighted = true;
    for (const auto &p : sweep) {
        weighted &= p.error > 0;
    }
    double sxx = 0;
    double sxy = 0;
    for (const auto &p : sweep) {
        double x = singlet_correlation(p.theta);
        double w = weighted ? 1 / (p.error * p.error) : 1;
        sxx += w * x * x;
        sxy += w * x * p.e;
    }
    if (!(sxx > 1e-12 * static_cast<double>(sweep.size()))) {
        throw std::domain_error("Visibility fit is degenerate: every sweep angle sits on a zero of cos 2 theta.");
    }
    VisibilityFit fit;
    fit.eta = sxy / sxx;
    if (weighted) {
        fit.error = 1 / std::sqrt(sxx);
    } else {
        double rss = 0;
        for (const auto &p : sweep) {
            double r = p.e - fit.eta * singlet_correlation(p.theta);
            rss += r * r;
        }
        fit.error = std::sqrt(rss / static_cast<double>(sweep.size() - 1) / sxx);
    }
    return fit;
}

}  // namespace weakbell
