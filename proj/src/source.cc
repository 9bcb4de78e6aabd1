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

#include "weakbell/source.h"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace weakbell {

std::string_view blocked_name(Blocked blocked) {
    switch (blocked) {
        case Blocked::none:
            return "none";
        case Blocked::block_a:
            return "block_a";
        case Blocked::block_b:
            return "block_b";
    }
    throw std::logic_error("unreachable");
}

Blocked parse_blocked(std::string_view name) {
    if (name == "none") {
        return Blocked::none;
    }
    if (name == "block_a") {
        return Blocked::block_a;
    }
    if (name == "block_b") {
        return Blocked::block_b;
    }
    throw std::invalid_argument("Unknown blocking '" + std::string(name) + "'. Expected none, block_a or block_b.");
}

void SourceSpec::validate() const {
    if (!(mu_a >= 0) || !(mu_b >= 0) || !std::isfinite(mu_a) || !std::isfinite(mu_b)) {
        throw std::invalid_argument("Mean photon numbers must be finite and non-negative.");
    }
    if (n_max < 0) {
        throw std::invalid_argument("Photon-number cutoff n_max must be non-negative.");
    }
}

double poisson_pmf(double mu, int n) {
    if (!(mu >= 0) || n < 0) {
        throw std::invalid_argument("poisson_pmf needs mu >= 0 and n >= 0.");
    }
    if (mu == 0) {
        return n == 0 ? 1.0 : 0.0;
    }
    return std::exp(n * std::log(mu) - mu - std::lgamma(n + 1.0));
}

TruncatedMixture poisson_mixture(double mu, int n_max, ModeLabel mode) {
    if (n_max < 0) {
        throw std::invalid_argument("Photon-number cutoff n_max must be non-negative.");
    }
    std::vector<DensityMixture::Component> components;
    double kept = 0;
    for (int n = 0; n <= n_max; n++) {
        double p = poisson_pmf(mu, n);
        if (p > 0) {
            kept += p;
            components.push_back({p, StateVector::basis(FockBasisState{{mode, n}})});
        }
    }
    return {DensityMixture(std::move(components)).normalized(), std::max(0.0, 1.0 - kept), 0};
}

TruncatedMixture two_mode_input(const SourceSpec &spec) {
    spec.validate();
    double mu_a = spec.effective_mu_a();
    double mu_b = spec.effective_mu_b();
    std::vector<DensityMixture::Component> components;
    double kept = 0;
    for (int i = 0; i <= spec.n_max; i++) {
        double pa = poisson_pmf(mu_a, i);
        for (int j = 0; j <= spec.n_max; j++) {
            double w = pa * poisson_pmf(mu_b, j);
            if (w > 0) {
                kept += w;
                components.push_back({w, StateVector::basis(FockBasisState{{modes::aH, i}, {modes::bV, j}})});
            }
        }
    }
    return {DensityMixture(std::move(components)).normalized(), std::max(0.0, 1.0 - kept), 0};
}

DensityMixture two_photon_component(const SourceSpec &spec) {
    spec.validate();
    double mu_a = spec.effective_mu_a();
    double mu_b = spec.effective_mu_b();
    if (mu_a == 0 && mu_b == 0) {
        throw std::domain_error("Two-photon component is empty when both arms are dark.");
    }
    std::vector<DensityMixture::Component> components;
    auto add = [&](double w, FockBasisState state) {
        if (w > 0) {
            components.push_back({w, StateVector::basis(state)});
        }
    };
    add(mu_a * mu_b, FockBasisState{{modes::aH, 1}, {modes::bV, 1}});
    add(mu_a * mu_a / 2, FockBasisState{{modes::aH, 2}});
    add(mu_b * mu_b / 2, FockBasisState{{modes::bV, 2}});
    return DensityMixture(std::move(components)).normalized();
}

DensityMixture phase_averaged_coherent(double mu, int n_max, int n_phases, ModeLabel mode) {
    if (n_phases < 1) {
        throw std::invalid_argument("Phase average needs at least one phase.");
    }
    if (!(mu >= 0) || n_max < 0) {
        throw std::invalid_argument("Coherent state needs mu >= 0 and n_max >= 0.");
    }
    std::vector<DensityMixture::Component> components;
    for (int k = 0; k < n_phases; k++) {
        double phi = 2 * std::numbers::pi * k / n_phases;
        StateVector::Terms terms;
        for (int n = 0; n <= n_max; n++) {
            terms[FockBasisState{{mode, n}}] = std::sqrt(poisson_pmf(mu, n)) * std::polar(1.0, n * phi);
        }
        components.push_back({1.0 / n_phases, normalize(StateVector(std::move(terms)))});
    }
    return DensityMixture(std::move(components));
}

std::vector<double> poisson_cdf(double mu, int n_max) {
    if (n_max < 0) {
        throw std::invalid_argument("Photon-number cutoff n_max must be non-negative.");
    }
    std::vector<double> cdf(n_max + 1);
    double total = 0;
    for (int n = 0; n <= n_max; n++) {
        total += poisson_pmf(mu, n);
        cdf[n] = total;
    }
    for (auto &c : cdf) {
        c /= total;
    }
    return cdf;
}

InputSampler::InputSampler(const SourceSpec &spec)
    : cdf_a_(poisson_cdf(spec.effective_mu_a(), spec.n_max)), cdf_b_(poisson_cdf(spec.effective_mu_b(), spec.n_max)) {
    spec.validate();
}

std::pair<int, int> InputSampler::draw(Rng &rng) const {
    int i = static_cast<int>(sample_index(cdf_a_, uniform01(rng)));
    int j = static_cast<int>(sample_index(cdf_b_, uniform01(rng)));
    return {i, j};
}

FockBasisState sample_input(const SourceSpec &spec, Rng &rng) {
    auto [i, j] = InputSampler(spec).draw(rng);
    return FockBasisState{{modes::aH, i}, {modes::bV, j}};
}

std::pair<Complex, Complex> sample_coherent_amplitudes(const SourceSpec &spec, Rng &rng) {
    double phi_a = 2 * std::numbers::pi * uniform01(rng);
    double phi_b = 2 * std::numbers::pi * uniform01(rng);
    return {std::polar(std::sqrt(spec.effective_mu_a()), phi_a), std::polar(std::sqrt(spec.effective_mu_b()), phi_b)};
}

}  // namespace weakbell
