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

#ifndef WEAKBELL_SOURCE_H
#define WEAKBELL_SOURCE_H

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "weakbell/fock.h"
#include "weakbell/rng.h"

namespace weakbell {

enum class Blocked { none, block_a, block_b };

std::string_view blocked_name(Blocked blocked);
Blocked parse_blocked(std::string_view name);

/// Two phase-randomized weak coherent beams entering the recombining splitter: port a carries
/// H, port b carries V (the half-wave plate is already folded in).
struct SourceSpec {
    double mu_a = 0.05;
    double mu_b = 0.05;
    /// Per-arm photon-number cutoff for exact propagation and Fock sampling.
    int n_max = 4;
    Blocked blocked = Blocked::none;

    double effective_mu_a() const { return blocked == Blocked::block_a ? 0.0 : mu_a; }
    double effective_mu_b() const { return blocked == Blocked::block_b ? 0.0 : mu_b; }
    SourceSpec with_blocked(Blocked b) const {
        SourceSpec result = *this;
        result.blocked = b;
        return result;
    }
    /// Throws std::invalid_argument on negative means or cutoff.
    void validate() const;

    friend bool operator==(const SourceSpec &, const SourceSpec &) = default;
};

/// mu^n exp(-mu) / n!. Throws std::invalid_argument on negative arguments.
double poisson_pmf(double mu, int n);

/// Single-mode Poisson mixture sum_{n <= n_max} P(n) |n><n| on `mode`, renormalized.
TruncatedMixture poisson_mixture(double mu, int n_max, ModeLabel mode);

/// rho = sum_{i,j <= n_max} P_a(i) P_b(j) |i_aH, j_bV><i_aH, j_bV|, renormalized after the cutoff.
/// Zero-weight terms are omitted.
TruncatedMixture two_mode_input(const SourceSpec &spec);

/// The two-photon sector: weights mu_a mu_b, mu_a^2/2, mu_b^2/2 on |1_aH,1_bV>, |2_aH>, |2_bV>,
/// normalized. Throws std::domain_error when both effective means vanish.
DensityMixture two_photon_component(const SourceSpec &spec);

/// Equal-weight average of the truncated coherent projector |sqrt(mu) e^{i phi}> over
/// `n_phases` equally spaced phases in [0, 2 pi), kept as an explicit ensemble of pure states.
DensityMixture phase_averaged_coherent(double mu, int n_max, int n_phases, ModeLabel mode = modes::aH);

/// Truncated, normalized Poisson pmf over 0..n_max as a cumulative table.
std::vector<double> poisson_cdf(double mu, int n_max);

/// Independent inverse-CDF draws i ~ Poisson(mu_a), j ~ Poisson(mu_b) over the truncated pmf,
/// one uniform each. Returns |i_aH, j_bV>.
FockBasisState sample_input(const SourceSpec &spec, Rng &rng);

/// Precomputed form of `sample_input` for repeated draws.
class InputSampler {
   public:
    explicit InputSampler(const SourceSpec &spec);
    std::pair<int, int> draw(Rng &rng) const;

   private:
    std::vector<double> cdf_a_;
    std::vector<double> cdf_b_;
};

/// Coherent amplitudes (sqrt(mu_a) e^{i phi_a}, sqrt(mu_b) e^{i phi_b}) with independent uniform
/// phases. A blocked arm gives amplitude 0.
std::pair<Complex, Complex> sample_coherent_amplitudes(const SourceSpec &spec, Rng &rng);

}  // namespace weakbell

#endif
