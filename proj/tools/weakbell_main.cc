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

#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "weakbell/experiment.h"

using namespace weakbell;

namespace {

struct CommonFlags {
    std::string config_path;
    std::optional<uint64_t> seed;
    std::optional<std::string> mode;
    std::optional<uint64_t> trials;
    std::optional<int> repetitions;
    std::optional<int> workers;
    std::optional<std::string> out;
    std::optional<std::string> format;
    bool export_raw = false;
};

void add_common_flags(CLI::App *cmd, CommonFlags &flags) {
    cmd->add_option("--config", flags.config_path, "Experiment config (JSON)");
    cmd->add_option("--seed", flags.seed, "Base seed for Monte Carlo modes");
    cmd->add_option("--mode", flags.mode, "exact, mc_fock or mc_coherent")
        ->check(CLI::IsMember({"exact", "mc_fock", "mc_coherent"}));
    cmd->add_option("--trials", flags.trials, "Trials per configuration, setting and repetition");
    cmd->add_option("--repetitions", flags.repetitions, "Independent repetitions per setting");
    cmd->add_option("--workers", flags.workers, "Worker threads (results do not depend on this)");
    cmd->add_option("--out", flags.out, "Output path (default: standard output)");
    cmd->add_option("--format", flags.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    cmd->add_flag("--export-raw", flags.export_raw, "Also write the raw N tables of all three configurations");
}

/// Config file values overridden by any flag given on the command line.
ExperimentConfig resolve(const CommonFlags &flags) {
    ExperimentConfig config = flags.config_path.empty() ? ExperimentConfig{} : load_config(flags.config_path);
    nlohmann::json doc = to_json(config);
    if (flags.seed) {
        doc["seed"] = *flags.seed;
    }
    if (flags.mode) {
        doc["mode"] = *flags.mode;
    }
    if (flags.trials) {
        doc["trials"] = *flags.trials;
    }
    if (flags.repetitions) {
        doc["repetitions"] = *flags.repetitions;
    }
    if (flags.workers) {
        doc["workers"] = *flags.workers;
    }
    if (flags.out) {
        doc["output"]["path"] = *flags.out;
    }
    if (flags.format) {
        doc["output"]["format"] = *flags.format;
    }
    if (flags.export_raw) {
        doc["export_raw"] = true;
    }
    return parse_config(doc);
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Linear-optics simulation of CHSH violation with phase-randomized weak coherent states"};
    app.require_subcommand(1);

    CommonFlags chsh_flags;
    auto *chsh = app.add_subcommand("chsh", "Run the three-configuration protocol at the four CHSH settings");
    add_common_flags(chsh, chsh_flags);

    CommonFlags sweep_flags;
    auto *sweep = app.add_subcommand("sweep", "Measure E(theta) over the config's sweep grid");
    add_common_flags(sweep, sweep_flags);

    ValidateOptions validate_options;
    auto *validate = app.add_subcommand("validate", "Run the built-in physics checks");
    validate->add_option("--bs-angle", validate_options.splitter_angle,
                         "Splitter angle for the interference checks (pi/4 is balanced; others are negative controls)");

    CommonFlags dump_state_flags;
    std::string stage = "input";
    auto *dump_state = app.add_subcommand("dump-state", "Print a source or output state as JSON");
    add_common_flags(dump_state, dump_state_flags);
    dump_state->add_option("--stage", stage, "input, two_photon or output")
        ->check(CLI::IsMember({"input", "two_photon", "output"}));

    CommonFlags dump_transform_flags;
    std::string element = "network";
    auto *dump_transform = app.add_subcommand("dump-transform", "Print a mode transform as JSON");
    add_common_flags(dump_transform, dump_transform_flags);
    dump_transform->add_option("--element", element, "splitter, analyzer or network")
        ->check(CLI::IsMember({"splitter", "analyzer", "network"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (*chsh) {
            return cmd_chsh(resolve(chsh_flags), std::cout, std::cerr);
        }
        if (*sweep) {
            return cmd_sweep(resolve(sweep_flags), std::cout, std::cerr);
        }
        if (*validate) {
            return cmd_validate(validate_options, std::cout, std::cerr);
        }
        if (*dump_state) {
            static const std::map<std::string, StateStage> stages = {
                {"input", StateStage::input}, {"two_photon", StateStage::two_photon}, {"output", StateStage::output}};
            return cmd_dump_state(resolve(dump_state_flags), stages.at(stage), std::cout, std::cerr);
        }
        if (*dump_transform) {
            static const std::map<std::string, TransformElement> elements = {{"splitter", TransformElement::splitter},
                                                                            {"analyzer", TransformElement::analyzer},
                                                                            {"network", TransformElement::network}};
            return cmd_dump_transform(resolve(dump_transform_flags), elements.at(element), std::cout, std::cerr);
        }
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
