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

#include "weakbell/measurement.h"

#include <cmath>
#include <stdexcept>

#include "weakbell/format.h"

namespace weakbell {

namespace {

constexpr std::array<ModeLabel, 4> kDetectorModes = {modes::cH, modes::cV, modes::dH, modes::dV};

std::array<int, 4> detector_counts_of(const FockBasisState &state) {
    return {state[modes::cH], state[modes::cV], state[modes::dH], state[modes::dV]};
}

bool occupies(const FockBasisState &state, Port port) { return state.photons_in(port) > 0; }

/// Cumulative Poisson table long enough that the remaining tail is below double resolution.
std::vector<double> untruncated_poisson_cdf(double mean) {
    std::vector<double> cdf;
    double total = 0;
    int limit = static_cast<int>(mean + 20 * std::sqrt(mean) + 30);
    for (int n = 0; n <= limit; n++) {
        total += poisson_pmf(mean, n);
        cdf.push_back(total);
        if (total >= 1.0 - 1e-17) {
            break;
        }
    }
    return cdf;
}

CountTable make_table(const SourceSpec &spec, const AnalyzerSetting &setting) {
    CountTable table;
    table.setting = setting;
    table.mu_a = spec.mu_a;
    table.mu_b = spec.mu_b;
    table.blocked = spec.blocked;
    return table;
}

Outcomes classify_probabilities(const DensityMixture &output, CoincidenceSemantics semantics) {
    Outcomes result{};
    for (const auto &c : output.components()) {
        for (const auto &[basis, amplitude] : c.state.terms()) {
            if (auto k = classify(detector_counts_of(basis), semantics)) {
                result[*k] += c.weight * std::norm(amplitude);
            }
        }
    }
    return result;
}

Outcomes finish_probabilities(Outcomes p, const DetectorModel &detector) {
    p = apply_visibility(p, detector.visibility);
    double pair_efficiency = detector.efficiency * detector.efficiency;
    for (auto &x : p) {
        x *= pair_efficiency;
    }
    return p;
}

void check_trials(uint64_t trials) {
    if (trials == 0) {
        throw std::invalid_argument("Monte Carlo runs need at least one trial.");
    }
}

}  // namespace

std::string_view semantics_name(CoincidenceSemantics semantics) {
    return semantics == CoincidenceSemantics::exact_one_one ? "exact_one_one" : "threshold";
}

CoincidenceSemantics parse_semantics(std::string_view name) {
    if (name == "exact_one_one") {
        return CoincidenceSemantics::exact_one_one;
    }
    if (name == "threshold") {
        return CoincidenceSemantics::threshold;
    }
    throw std::invalid_argument("Unknown coincidence semantics '" + std::string(name) + "'.");
}

void DetectorModel::validate() const {
    if (!(visibility >= 0 && visibility <= 1)) {
        throw std::invalid_argument("Visibility must lie in [0, 1].");
    }
    if (!(efficiency > 0 && efficiency <= 1)) {
        throw std::invalid_argument("Detection efficiency must lie in (0, 1].");
    }
    if (!(dark_count_rate >= 0) || !std::isfinite(dark_count_rate)) {
        throw std::invalid_argument("Dark count rate must be finite and non-negative.");
    }
}

double CountTable::rate(size_t outcome) const {
    double per_trial = trials > 0 ? values[outcome] / static_cast<double>(trials) : values[outcome];
    return per_trial / reference_probability;
}

double CountTable::rate_variance(size_t outcome) const {
    if (trials == 0) {
        return 0;
    }
    double scale = static_cast<double>(trials) * reference_probability;
    return values[outcome] / (scale * scale);
}

CountTable &CountTable::operator+=(const CountTable &other) {
    if (!(setting == other.setting) || mu_a != other.mu_a || mu_b != other.mu_b || blocked != other.blocked ||
        reference_probability != other.reference_probability) {
        throw std::invalid_argument("Can't merge count tables from different configurations.");
    }
    if ((trials == 0) != (other.trials == 0)) {
        throw std::invalid_argument("Can't merge exact probabilities with Monte Carlo counts.");
    }
    for (size_t k = 0; k < 4; k++) {
        values[k] += other.values[k];
    }
    trials += other.trials;
    return *this;
}

std::string count_table_csv_header() {
    return "setting_alpha,setting_beta,mu_a,mu_b,blocked,n_pp,n_pm,n_mp,n_mm,trials";
}

std::string to_csv_row(const CountTable &table) {
    std::string row = format_double(table.setting.alpha) + "," + format_double(table.setting.beta) + "," +
                      format_double(table.mu_a) + "," + format_double(table.mu_b) + "," +
                      std::string(blocked_name(table.blocked));
    for (double v : table.values) {
        row += "," + format_double(v);
    }
    return row + "," + std::to_string(table.trials);
}

ModeTransform analyzer_transform(const AnalyzerSetting &setting) {
    return compose(polarization_rotator(Port::c, -setting.alpha), polarization_rotator(Port::d, -setting.beta));
}

ModeTransform measurement_network(const AnalyzerSetting &setting, const Interferometer &interferometer) {
    return compose(beam_splitter(Port::a, Port::b, interferometer.splitter_angle, interferometer.convention),
                   analyzer_transform(setting));
}

std::optional<size_t> classify(const std::array<int, 4> &n, CoincidenceSemantics semantics) {
    // n = (cH, cV, dH, dV); H is "+", V is "-".
    int c_fired = -1;
    int d_fired = -1;
    if (semantics == CoincidenceSemantics::exact_one_one) {
        if (n[0] + n[1] != 1 || n[2] + n[3] != 1) {
            return std::nullopt;
        }
        c_fired = n[0] == 1 ? 0 : 1;
        d_fired = n[2] == 1 ? 0 : 1;
    } else {
        if ((n[0] > 0) == (n[1] > 0) || (n[2] > 0) == (n[3] > 0)) {
            return std::nullopt;
        }
        c_fired = n[0] > 0 ? 0 : 1;
        d_fired = n[2] > 0 ? 0 : 1;
    }
    return static_cast<size_t>(2 * c_fired + d_fired);
}

Outcomes apply_visibility(const Outcomes &probabilities, double visibility) {
    double total = probabilities[0] + probabilities[1] + probabilities[2] + probabilities[3];
    Outcomes result;
    for (size_t k = 0; k < 4; k++) {
        result[k] = visibility * probabilities[k] + (1 - visibility) * total / 4;
    }
    return result;
}

CountTable analyze_output(const DensityMixture &output, const AnalyzerSetting &setting,
                          const DetectorModel &detector) {
    detector.validate();
    for (const auto &c : output.components()) {
        for (const auto &[basis, _] : c.state.terms()) {
            if (occupies(basis, Port::a) || occupies(basis, Port::b)) {
                throw std::invalid_argument("analyze_output expects photons on ports c and d only.");
            }
        }
    }
    CountTable table;
    table.setting = setting;
    table.values = finish_probabilities(
        classify_probabilities(apply(analyzer_transform(setting), output), detector.coincidence), detector);
    return table;
}

CountTable coincidence_probabilities(const DensityMixture &input, const AnalyzerSetting &setting,
                                     const DetectorModel &detector, const Interferometer &interferometer) {
    detector.validate();
    for (const auto &c : input.components()) {
        for (const auto &[basis, _] : c.state.terms()) {
            if (occupies(basis, Port::c) || occupies(basis, Port::d)) {
                throw std::invalid_argument("coincidence_probabilities expects photons on ports a and b only.");
            }
        }
    }
    CountTable table;
    table.setting = setting;
    table.values = finish_probabilities(
        classify_probabilities(apply(measurement_network(setting, interferometer), input), detector.coincidence),
        detector);
    return table;
}

CountTable exact_rates(const SourceSpec &spec, const AnalyzerSetting &setting, const DetectorModel &detector,
                       const Interferometer &interferometer) {
    if (detector.dark_count_rate != 0) {
        throw std::invalid_argument("Dark counts are only modeled by the Monte Carlo samplers.");
    }
    auto input = two_mode_input(spec);
    double vacuum = 0;
    for (const auto &c : input.mixture.components()) {
        vacuum += c.weight * std::norm(c.state.amplitude(FockBasisState{}));
    }
    CountTable table = coincidence_probabilities(input.mixture, setting, detector, interferometer);
    CountTable result = make_table(spec, setting);
    result.values = table.values;
    result.reference_probability = vacuum;
    return result;
}

FockSampler::FockSampler(const SourceSpec &spec, const AnalyzerSetting &setting, const DetectorModel &detector,
                         const Interferometer &interferometer)
    : spec_(spec), setting_(setting), detector_(detector), input_(spec) {
    detector_.validate();
    auto network = measurement_network(setting, interferometer);
    int n = spec.n_max + 1;
    outputs_.resize(static_cast<size_t>(n * n));
    for (int i = 0; i < n; i++) {
        for (int j = 0; j < n; j++) {
            auto out = apply(network, StateVector::basis(FockBasisState{{modes::aH, i}, {modes::bV, j}}));
            auto &dist = outputs_[static_cast<size_t>(i * n + j)];
            double total = 0;
            for (const auto &[basis, amplitude] : out.terms()) {
                total += std::norm(amplitude);
                dist.detector_counts.push_back(detector_counts_of(basis));
                dist.cdf.push_back(total);
            }
        }
    }
    if (detector.dark_count_rate > 0) {
        dark_cdf_ = untruncated_poisson_cdf(detector.dark_count_rate);
    }
    // P(no photon reaches any detector) for the truncated, thinned input.
    auto thinned_vacuum = [&](double mu) {
        auto cdf = poisson_cdf(mu, spec.n_max);
        double p = 0;
        double prev = 0;
        for (int k = 0; k < n; k++) {
            p += (cdf[k] - prev) * std::pow(1 - detector.efficiency, k);
            prev = cdf[k];
        }
        return p;
    };
    reference_probability_ = thinned_vacuum(spec.effective_mu_a()) * thinned_vacuum(spec.effective_mu_b()) *
                             std::exp(-4 * detector.dark_count_rate);
}

CountTable FockSampler::run(uint64_t trials, Rng &rng) const {
    check_trials(trials);
    CountTable table = make_table(spec_, setting_);
    table.trials = trials;
    table.reference_probability = reference_probability_;
    const int n = spec_.n_max + 1;
    const bool dark = !dark_cdf_.empty();
    const bool lossy = detector_.efficiency < 1;
    for (uint64_t t = 0; t < trials; t++) {
        auto [i, j] = input_.draw(rng);
        if (i + j < 2 && !dark) {
            continue;
        }
        const auto &dist = outputs_[static_cast<size_t>(i * n + j)];
        std::array<int, 4> counts = dist.detector_counts[sample_index(dist.cdf, uniform01(rng))];
        if (lossy) {
            for (auto &m : counts) {
                int kept = 0;
                for (int p = 0; p < m; p++) {
                    kept += uniform01(rng) < detector_.efficiency;
                }
                m = kept;
            }
        }
        if (dark) {
            for (auto &m : counts) {
                m += static_cast<int>(sample_index(dark_cdf_, uniform01(rng)));
            }
        }
        auto outcome = classify(counts, detector_.coincidence);
        if (!outcome) {
            continue;
        }
        if (detector_.visibility < 1 && uniform01(rng) >= detector_.visibility) {
            outcome = std::min<size_t>(3, static_cast<size_t>(4 * uniform01(rng)));
        }
        table.values[*outcome] += 1;
    }
    return table;
}

CoherentSampler::CoherentSampler(const SourceSpec &spec, const AnalyzerSetting &setting,
                                 const DetectorModel &detector, const Interferometer &interferometer)
    : spec_(spec), setting_(setting), detector_(detector) {
    spec_.validate();
    detector_.validate();
    auto network = measurement_network(setting, interferometer);
    for (size_t k = 0; k < 4; k++) {
        network_[k] = {network(kDetectorModes[k], modes::aH), network(kDetectorModes[k], modes::bV)};
    }
    // The network is unitary and sends ports a, b entirely onto c, d, so the summed detector mean
    // does not depend on the input phases.
    total_mean_ = detector.efficiency * (spec.effective_mu_a() + spec.effective_mu_b()) +
                  4 * detector.dark_count_rate;
    total_cdf_ = untruncated_poisson_cdf(total_mean_);
}

CountTable CoherentSampler::run(uint64_t trials, Rng &rng) const {
    check_trials(trials);
    CountTable table = make_table(spec_, setting_);
    table.trials = trials;
    table.reference_probability = std::exp(-total_mean_);
    if (total_mean_ == 0) {
        return table;
    }
    // Independent Poisson counts with means m_k are drawn as a Poisson total with mean sum m_k,
    // split multinomially in proportion to m_k.
    std::array<double, 4> split_cdf;
    for (uint64_t t = 0; t < trials; t++) {
        auto photons = sample_index(total_cdf_, uniform01(rng));
        if (photons < 2) {
            continue;
        }
        auto [alpha_a, alpha_b] = sample_coherent_amplitudes(spec_, rng);
        double running = 0;
        for (size_t k = 0; k < 4; k++) {
            Complex amplitude = network_[k][0] * alpha_a + network_[k][1] * alpha_b;
            running += detector_.efficiency * std::norm(amplitude) + detector_.dark_count_rate;
            split_cdf[k] = running / total_mean_;
        }
        std::array<int, 4> counts{};
        for (size_t p = 0; p < photons; p++) {
            counts[sample_index(split_cdf, uniform01(rng))]++;
        }
        auto outcome = classify(counts, detector_.coincidence);
        if (!outcome) {
            continue;
        }
        if (detector_.visibility < 1 && uniform01(rng) >= detector_.visibility) {
            outcome = std::min<size_t>(3, static_cast<size_t>(4 * uniform01(rng)));
        }
        table.values[*outcome] += 1;
    }
    return table;
}

CountTable run_montecarlo_fock(const SourceSpec &spec, const AnalyzerSetting &setting, const DetectorModel &detector,
                               uint64_t trials, Rng &rng, const Interferometer &interferometer) {
    return FockSampler(spec, setting, detector, interferometer).run(trials, rng);
}

CountTable run_montecarlo_coherent(const SourceSpec &spec, const AnalyzerSetting &setting,
                                   const DetectorModel &detector, uint64_t trials, Rng &rng,
                                   const Interferometer &interferometer) {
    return CoherentSampler(spec, setting, detector, interferometer).run(trials, rng);
}

}  // namespace weakbell
