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

#ifndef WEAKBELL_MEASUREMENT_H
#define WEAKBELL_MEASUREMENT_H

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "weakbell/fock.h"
#include "weakbell/optics.h"
#include "weakbell/source.h"

namespace weakbell {

/// Analyzer rotation angles (radians) in front of the polarizing splitters at output ports c
/// and d. Only the angles mod pi are physical.
struct AnalyzerSetting {
    double alpha = 0;
    double beta = 0;

    friend bool operator==(const AnalyzerSetting &, const AnalyzerSetting &) = default;
};

enum class CoincidenceSemantics {
    /// Exactly one photon at one detector of each port and nothing anywhere else.
    exact_one_one,
    /// Click/no-click detectors: one detector fires at each port, the other stays dark.
    threshold,
};

std::string_view semantics_name(CoincidenceSemantics semantics);
CoincidenceSemantics parse_semantics(std::string_view name);

struct DetectorModel {
    /// With probability `visibility` an event keeps its ideal outcome; otherwise the outcome pair
    /// is redrawn uniformly. Scales every correlation by exactly `visibility`.
    double visibility = 1.0;
    /// Per-photon detection efficiency.
    double efficiency = 1.0;
    CoincidenceSemantics coincidence = CoincidenceSemantics::exact_one_one;
    /// Mean dark counts per detector per trial. Monte Carlo only.
    double dark_count_rate = 0.0;

    void validate() const;
    friend bool operator==(const DetectorModel &, const DetectorModel &) = default;
};

/// The recombining splitter between input ports (a, b) and output ports (c, d).
struct Interferometer {
    double splitter_angle = std::numbers::pi / 4;
    BeamSplitterConvention convention = BeamSplitterConvention::symmetric;

    friend bool operator==(const Interferometer &, const Interferometer &) = default;
};

/// Coincidence outcome index. "+" is the analyzer axis, "-" the orthogonal one.
enum Outcome : size_t { kPlusPlus = 0, kPlusMinus = 1, kMinusPlus = 2, kMinusMinus = 3 };
using Outcomes = std::array<double, 4>;

/// Sign s_ij of an outcome in the correlation sum: +1 for ++ and --, -1 otherwise.
constexpr double outcome_sign(size_t outcome) { return outcome == kPlusPlus || outcome == kMinusMinus ? 1.0 : -1.0; }

/// Coincidence counts (Monte Carlo, `trials` > 0) or probabilities (exact, `trials` == 0) for one
/// analyzer setting and one source configuration.
///
/// Rates are quoted relative to the configuration's vacuum probability `reference_probability`,
/// i.e. rate = probability per trial / P(no photon). For Poisson inputs this turns the weights
/// P_a(i) P_b(j) into mu_a^i mu_b^j / (i! j!), so the two-photon rates of the full and blocked
/// configurations combine linearly.
struct CountTable {
    Outcomes values{};
    uint64_t trials = 0;
    double reference_probability = 1.0;
    AnalyzerSetting setting;
    double mu_a = 0;
    double mu_b = 0;
    Blocked blocked = Blocked::none;

    double total() const { return values[0] + values[1] + values[2] + values[3]; }
    double rate(size_t outcome) const;
    /// Poisson estimate of the variance of `rate(outcome)`; zero for exact tables.
    double rate_variance(size_t outcome) const;
    /// Adds counts and trials. Throws std::invalid_argument on differing metadata.
    CountTable &operator+=(const CountTable &other);
};

/// CSV header and row for a count table.
std::string count_table_csv_header();
std::string to_csv_row(const CountTable &table);

/// Rotations by -alpha in port c and -beta in port d: light polarized along the analyzer axis
/// leaves as H ("+"), the orthogonal polarization as V ("-").
ModeTransform analyzer_transform(const AnalyzerSetting &setting);

/// The recombining splitter followed by both analyzers.
ModeTransform measurement_network(const AnalyzerSetting &setting, const Interferometer &interferometer = {});

/// Coincidence outcome for detector counts ordered (cH, cV, dH, dV), if the event is a coincidence.
std::optional<size_t> classify(const std::array<int, 4> &detector_counts, CoincidenceSemantics semantics);

/// eta * p + (1 - eta) * (sum p) / 4.
Outcomes apply_visibility(const Outcomes &probabilities, double visibility);

/// Coincidence probabilities of a state already on the output ports c, d: applies the analyzers
/// and classifies. Throws std::invalid_argument if any photon sits on port a or b.
CountTable analyze_output(const DensityMixture &output, const AnalyzerSetting &setting, const DetectorModel &detector);

/// Coincidence probabilities for a mixture on the input ports a, b, propagated through the
/// recombining splitter and the analyzers. Events with both photons in one port register
/// nowhere. Visibility is applied, then the efficiency^2 pair-detection factor. Throws
/// std::invalid_argument if any photon sits on port c or d.
CountTable coincidence_probabilities(const DensityMixture &input, const AnalyzerSetting &setting,
                                     const DetectorModel &detector, const Interferometer &interferometer = {});

/// Exact N_ij for the truncated Poisson input of `spec`, as vacuum-referenced rates.
/// Throws std::invalid_argument if the detector has dark counts.
CountTable exact_rates(const SourceSpec &spec, const AnalyzerSetting &setting, const DetectorModel &detector,
                       const Interferometer &interferometer = {});

/// Event sampler over Fock inputs: draws |i_aH, j_bV>, samples one output basis state from the
/// propagated amplitudes, thins by efficiency, adds dark counts and classifies.
class FockSampler {
   public:
    FockSampler(const SourceSpec &spec, const AnalyzerSetting &setting, const DetectorModel &detector,
                const Interferometer &interferometer = {});
    CountTable run(uint64_t trials, Rng &rng) const;

   private:
    struct OutputDistribution {
        std::vector<std::array<int, 4>> detector_counts;
        std::vector<double> cdf;
    };
    SourceSpec spec_;
    AnalyzerSetting setting_;
    DetectorModel detector_;
    InputSampler input_;
    // Indexed by i * (n_max + 1) + j.
    std::vector<OutputDistribution> outputs_;
    std::vector<double> dark_cdf_;
    double reference_probability_;
};

/// Semiclassical sampler: random-phase coherent amplitudes propagated through the network
/// matrix, then independent Poisson counts at the four detectors with means
/// efficiency * |amplitude|^2 + dark rate.
class CoherentSampler {
   public:
    CoherentSampler(const SourceSpec &spec, const AnalyzerSetting &setting, const DetectorModel &detector,
                    const Interferometer &interferometer = {});
    CountTable run(uint64_t trials, Rng &rng) const;

   private:
    SourceSpec spec_;
    AnalyzerSetting setting_;
    DetectorModel detector_;
    // Rows (cH, cV, dH, dV), columns (aH, bV).
    std::array<std::array<Complex, 2>, 4> network_;
    std::vector<double> total_cdf_;
    double total_mean_;
};

/// Throws std::invalid_argument when trials is zero.
CountTable run_montecarlo_fock(const SourceSpec &spec, const AnalyzerSetting &setting, const DetectorModel &detector,
                               uint64_t trials, Rng &rng, const Interferometer &interferometer = {});
CountTable run_montecarlo_coherent(const SourceSpec &spec, const AnalyzerSetting &setting,
                                   const DetectorModel &detector, uint64_t trials, Rng &rng,
                                   const Interferometer &interferometer = {});

}  // namespace weakbell

#endif
