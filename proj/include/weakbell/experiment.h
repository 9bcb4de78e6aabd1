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

#ifndef WEAKBELL_EXPERIMENT_H
#define WEAKBELL_EXPERIMENT_H

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "weakbell/protocol.h"

namespace weakbell {

enum class OutputFormat { csv, json };

/// Everything a run needs. Read from a single JSON document; every field has a default.
struct ExperimentConfig {
    SourceSpec source;
    DetectorModel detector;
    Interferometer interferometer;
    Mode mode = Mode::exact;
    uint64_t trials = 1'000'000;
    int repetitions = 10;
    AngleQuad quad;
    /// Analyzer differences for `sweep`. Empty when the config has no sweep grid.
    std::vector<double> sweep_thetas;
    std::optional<uint64_t> seed;
    int workers = 1;
    /// Empty path writes results to standard output.
    std::string output_path;
    std::optional<OutputFormat> format;
    /// Also write every raw N table of the protocol as CSV.
    bool export_raw = false;

    RunOptions run_options() const;
    /// Throws std::invalid_argument when the config can't drive a run.
    void validate() const;

    friend bool operator==(const ExperimentConfig &, const ExperimentConfig &) = default;
};

/// Parses a config document. Missing fields take their defaults; unknown keys are rejected.
/// A sweep grid is given either as {"thetas": [...]} or {"start": x, "stop": y, "points": n}
/// with both ends included.
ExperimentConfig parse_config(const nlohmann::json &json);
ExperimentConfig load_config(const std::string &path);
nlohmann::json to_json(const ExperimentConfig &config);

/// `points` equally spaced angles from `start` to `stop` inclusive.
std::vector<double> angle_grid(double start, double stop, int points);

nlohmann::json to_json(const ChshResult &result);

/// Runs the CHSH protocol and writes the result. Returns the process exit status: 0 on success
/// whatever the value of S, nonzero on invalid configuration or when a correlation is undefined.
int cmd_chsh(const ExperimentConfig &config, std::ostream &out, std::ostream &err);

/// Writes the E(theta) series as CSV (theta_radians, e_mean, e_std, trials, repetitions, e_ideal)
/// or JSON.
int cmd_sweep(const ExperimentConfig &config, std::ostream &out, std::ostream &err);

struct ValidateOptions {
    /// Splitter angle used by the interference checks; anything but pi/4 is a negative control.
    double splitter_angle = std::numbers::pi / 4;
};

/// Runs the built-in physics checks and prints one line per check with its residual.
int cmd_validate(const ValidateOptions &options, std::ostream &out, std::ostream &err);

enum class StateStage { input, two_photon, output };

/// Prints the source mixture (or its two-photon part, or the state after the splitter and the
/// analyzers at the first CHSH setting) as JSON.
int cmd_dump_state(const ExperimentConfig &config, StateStage stage, std::ostream &out, std::ostream &err);

enum class TransformElement { splitter, analyzer, network };

int cmd_dump_transform(const ExperimentConfig &config, TransformElement element, std::ostream &out,
                       std::ostream &err);

}  // namespace weakbell

#endif
