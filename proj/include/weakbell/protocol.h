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

#ifndef WEAKBELL_PROTOCOL_H
#define WEAKBELL_PROTOCOL_H

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "weakbell/chsh.h"

namespace weakbell {

enum class Mode { exact, mc_fock, mc_coherent };

std::string_view mode_name(Mode mode);
Mode parse_mode(std::string_view name);

struct RunOptions {
    Mode mode = Mode::exact;
    /// Trials per configuration per setting per repetition.
    uint64_t trials = 1'000'000;
    int repetitions = 10;
    uint64_t seed = 1;
    int workers = 1;
    Interferometer interferometer;
};

/// Trials per independently seeded Monte Carlo chunk. Fixed so that results do not depend on how
/// chunks are spread over workers.
constexpr uint64_t kChunkTrials = uint64_t{1} << 20;

/// The full, arm-a-blocked and arm-b-blocked tables of one setting and repetition.
struct ProtocolTables {
    CountTable full;
    CountTable blocked_a;
    CountTable blocked_b;
};

/// Runs the three-configuration protocol for every setting. Returns tables indexed
/// [setting][repetition]; exact mode always has a single repetition. Chunk k of configuration c,
/// repetition r, setting s is seeded with derive_seed(seed, {s, c, r, k}).
std::vector<std::vector<ProtocolTables>> run_protocol(const SourceSpec &spec, const DetectorModel &detector,
                                                      std::span<const AnalyzerSetting> settings,
                                                      const RunOptions &options);

/// One correlation measured over repetitions.
struct MeasuredCorrelation {
    CorrelationEstimate estimate;
    /// Per-repetition values.
    std::vector<double> values;
    /// Total clamped entries over the repetitions.
    int clamped_entries = 0;
};

/// Subtracts and correlates each repetition. With one repetition the error is the propagated
/// count error; with several it is the sample standard deviation over repetitions.
MeasuredCorrelation measure_correlation(std::span<const ProtocolTables> repetitions, bool subtract = true);

struct SweepSeriesPoint {
    double theta = 0;
    double e_mean = 0;
    double e_std = 0;
    uint64_t trials = 0;
    int repetitions = 0;
};

/// E as a function of the analyzer difference theta (alpha = 0, beta = theta).
std::vector<SweepSeriesPoint> sweep_correlation(const SourceSpec &spec, const DetectorModel &detector,
                                                std::span<const double> thetas, const RunOptions &options);

struct ChshRun {
    ChshResult result;
    /// The same statistic computed without background subtraction.
    ChshResult raw;
    std::array<MeasuredCorrelation, 4> correlations;
    std::vector<std::vector<ProtocolTables>> tables;
};

ChshRun measure_chsh(const SourceSpec &spec, const DetectorModel &detector, const AngleQuad &quad,
                     const RunOptions &options);

}  // namespace weakbell

#endif
