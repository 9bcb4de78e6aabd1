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

#include "weakbell/experiment.h"

#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "weakbell/format.h"

namespace weakbell {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json &object, const std::set<std::string> &known, const std::string &where) {
    if (!object.is_object()) {
        throw std::invalid_argument("Config section '" + where + "' must be a JSON object.");
    }
    for (const auto &[key, _] : object.items()) {
        if (!known.contains(key)) {
            throw std::invalid_argument("Unknown config key '" + where + "." + key + "'.");
        }
    }
}

template <typename T>
void read(const json &object, const char *key, T &target) {
    if (object.contains(key)) {
        target = object.at(key).get<T>();
    }
}

std::string_view format_name(OutputFormat format) { return format == OutputFormat::csv ? "csv" : "json"; }

OutputFormat parse_format(std::string_view name) {
    if (name == "csv") {
        return OutputFormat::csv;
    }
    if (name == "json") {
        return OutputFormat::json;
    }
    throw std::invalid_argument("Unknown output format '" + std::string(name) + "'. Expected csv or json.");
}

std::string_view convention_name(BeamSplitterConvention convention) {
    return convention == BeamSplitterConvention::symmetric ? "symmetric" : "hadamard";
}

BeamSplitterConvention parse_convention(std::string_view name) {
    if (name == "symmetric") {
        return BeamSplitterConvention::symmetric;
    }
    if (name == "hadamard") {
        return BeamSplitterConvention::hadamard;
    }
    throw std::invalid_argument("Unknown beam splitter convention '" + std::string(name) + "'.");
}

/// Writes `content` to `path`, or to `out` when the path is empty.
void emit(const std::string &path, const std::string &content, std::ostream &out) {
    if (path.empty()) {
        out << content;
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) {
        throw std::runtime_error("Can't open output file '" + path + "'.");
    }
    file << content;
    if (!file) {
        throw std::runtime_error("Failed writing output file '" + path + "'.");
    }
}

std::string raw_tables_csv(const std::vector<std::vector<ProtocolTables>> &tables) {
    std::string csv = count_table_csv_header() + "\n";
    for (const auto &per_setting : tables) {
        for (const auto &rep : per_setting) {
            csv += to_csv_row(rep.full) + "\n";
            csv += to_csv_row(rep.blocked_a) + "\n";
            csv += to_csv_row(rep.blocked_b) + "\n";
        }
    }
    return csv;
}

/// Wraps a command body: configuration and statistics failures become a diagnostic plus exit
/// status 1.
int guarded(std::ostream &err, const std::function<int()> &body) {
    try {
        return body();
    } catch (const std::invalid_argument &e) {
        err << "error: invalid configuration: " << e.what() << "\n";
    } catch (const std::domain_error &e) {
        err << "error: insufficient statistics: " << e.what() << "\n";
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
    }
    return 1;
}

std::string fixed(double value, int digits) {
    std::ostringstream s;
    s.imbue(std::locale::classic());
    s << std::fixed << std::setprecision(digits) << value;
    return s.str();
}

}  // namespace

RunOptions ExperimentConfig::run_options() const {
    RunOptions options;
    options.mode = mode;
    options.trials = trials;
    options.repetitions = repetitions;
    options.seed = seed.value_or(0);
    options.workers = workers;
    options.interferometer = interferometer;
    return options;
}

void ExperimentConfig::validate() const {
    source.validate();
    detector.validate();
    if (mode != Mode::exact) {
        if (trials < 1) {
            throw std::invalid_argument("trials must be at least 1 for Monte Carlo modes.");
        }
        if (!seed) {
            throw std::invalid_argument("A seed is required for Monte Carlo modes (set \"seed\" or pass --seed).");
        }
    }
    if (mode == Mode::exact && detector.dark_count_rate != 0) {
        throw std::invalid_argument("Dark counts are only modeled in the Monte Carlo modes.");
    }
    if (repetitions < 1) {
        throw std::invalid_argument("repetitions must be at least 1.");
    }
    if (workers < 1) {
        throw std::invalid_argument("workers must be at least 1.");
    }
}

std::vector<double> angle_grid(double start, double stop, int points) {
    if (points < 1) {
        throw std::invalid_argument("A sweep grid needs at least one point.");
    }
    std::vector<double> grid;
    for (int k = 0; k < points; k++) {
        grid.push_back(points == 1 ? start : start + (stop - start) * k / (points - 1));
    }
    return grid;
}

ExperimentConfig parse_config(const json &doc) {
    ExperimentConfig config;
    reject_unknown_keys(doc,
                        {"source", "detector", "interferometer", "mode", "trials", "repetitions", "angles", "sweep",
                         "seed", "workers", "output", "export_raw"},
                        "config");
    try {
        if (doc.contains("source")) {
            const auto &s = doc.at("source");
            reject_unknown_keys(s, {"mu_a", "mu_b", "n_max"}, "source");
            read(s, "mu_a", config.source.mu_a);
            read(s, "mu_b", config.source.mu_b);
            read(s, "n_max", config.source.n_max);
        }
        if (doc.contains("detector")) {
            const auto &d = doc.at("detector");
            reject_unknown_keys(d, {"visibility", "efficiency", "coincidence", "dark_count_rate"}, "detector");
            read(d, "visibility", config.detector.visibility);
            read(d, "efficiency", config.detector.efficiency);
            read(d, "dark_count_rate", config.detector.dark_count_rate);
            if (d.contains("coincidence")) {
                config.detector.coincidence = parse_semantics(d.at("coincidence").get<std::string>());
            }
        }
        if (doc.contains("interferometer")) {
            const auto &i = doc.at("interferometer");
            reject_unknown_keys(i, {"splitter_angle", "convention"}, "interferometer");
            read(i, "splitter_angle", config.interferometer.splitter_angle);
            if (i.contains("convention")) {
                config.interferometer.convention = parse_convention(i.at("convention").get<std::string>());
            }
        }
        if (doc.contains("mode")) {
            config.mode = parse_mode(doc.at("mode").get<std::string>());
        }
        read(doc, "trials", config.trials);
        read(doc, "repetitions", config.repetitions);
        read(doc, "workers", config.workers);
        read(doc, "export_raw", config.export_raw);
        if (doc.contains("seed") && !doc.at("seed").is_null()) {
            config.seed = doc.at("seed").get<uint64_t>();
        }
        if (doc.contains("angles")) {
            const auto &a = doc.at("angles");
            reject_unknown_keys(a, {"alpha", "alpha_prime", "beta", "beta_prime"}, "angles");
            read(a, "alpha", config.quad.alpha);
            read(a, "alpha_prime", config.quad.alpha_prime);
            read(a, "beta", config.quad.beta);
            read(a, "beta_prime", config.quad.beta_prime);
        }
        if (doc.contains("sweep")) {
            const auto &s = doc.at("sweep");
            reject_unknown_keys(s, {"thetas", "start", "stop", "points"}, "sweep");
            if (s.contains("thetas")) {
                config.sweep_thetas = s.at("thetas").get<std::vector<double>>();
            } else {
                config.sweep_thetas =
                    angle_grid(s.value("start", 0.0), s.value("stop", std::numbers::pi), s.value("points", 17));
            }
        }
        if (doc.contains("output")) {
            const auto &o = doc.at("output");
            reject_unknown_keys(o, {"path", "format"}, "output");
            read(o, "path", config.output_path);
            if (o.contains("format") && !o.at("format").is_null()) {
                config.format = parse_format(o.at("format").get<std::string>());
            }
        }
    } catch (const json::exception &e) {
        throw std::invalid_argument(std::string("Malformed config: ") + e.what());
    }
    return config;
}

ExperimentConfig load_config(const std::string &path) {
    std::ifstream file(path);
    if (!file) {
        throw std::invalid_argument("Can't open config file '" + path + "'.");
    }
    json doc;
    try {
        doc = json::parse(file);
    } catch (const json::exception &e) {
        throw std::invalid_argument("Config file '" + path + "' is not valid JSON: " + e.what());
    }
    return parse_config(doc);
}

json to_json(const ExperimentConfig &config) {
    json doc;
    doc["source"] = {{"mu_a", config.source.mu_a}, {"mu_b", config.source.mu_b}, {"n_max", config.source.n_max}};
    doc["detector"] = {{"visibility", config.detector.visibility},
                       {"efficiency", config.detector.efficiency},
                       {"coincidence", semantics_name(config.detector.coincidence)},
                       {"dark_count_rate", config.detector.dark_count_rate}};
    doc["interferometer"] = {{"splitter_angle", config.interferometer.splitter_angle},
                             {"convention", convention_name(config.interferometer.convention)}};
    doc["mode"] = mode_name(config.mode);
    doc["trials"] = config.trials;
    doc["repetitions"] = config.repetitions;
    doc["workers"] = config.workers;
    doc["export_raw"] = config.export_raw;
    doc["seed"] = config.seed ? json(*config.seed) : json(nullptr);
    doc["angles"] = {{"alpha", config.quad.alpha},
                     {"alpha_prime", config.quad.alpha_prime},
                     {"beta", config.quad.beta},
                     {"beta_prime", config.quad.beta_prime}};
    if (!config.sweep_thetas.empty()) {
        doc["sweep"] = {{"thetas", config.sweep_thetas}};
    }
    doc["output"] = {{"path", config.output_path},
                     {"format", config.format ? json(format_name(*config.format)) : json(nullptr)}};
    return doc;
}

json to_json(const ChshResult &result) {
    return {{"e_values", result.e_values},
            {"e_errors", result.e_errors},
            {"s", result.s_value},
            {"s_err", result.s_error},
            {"eta", result.eta_fit ? json(*result.eta_fit) : json(nullptr)}};
}

int cmd_chsh(const ExperimentConfig &config, std::ostream &out, std::ostream &err) {
    return guarded(err, [&] {
        config.validate();
        auto run = measure_chsh(config.source, config.detector, config.quad, config.run_options());
        int clamped = 0;
        for (const auto &c : run.correlations) {
            clamped += c.clamped_entries;
        }
        OutputFormat format = config.format.value_or(OutputFormat::json);
        std::string raw_csv = raw_tables_csv(run.tables);

        json doc = to_json(run.result);
        doc["s_raw"] = run.raw.s_value;
        doc["mode"] = mode_name(config.mode);
        doc["error_kind"] = config.mode == Mode::exact      ? "none"
                            : config.repetitions == 1 ? "propagated_counts"
                                                      : "repetition_std";
        doc["trials"] = config.mode == Mode::exact ? 0 : config.trials;
        doc["repetitions"] = run.tables.front().size();
        doc["clamped_entries"] = clamped;

        std::ostringstream summary;
        summary << "CHSH (" << mode_name(config.mode) << ", mu_a=" << format_double(config.source.mu_a)
                << ", mu_b=" << format_double(config.source.mu_b)
                << ", visibility=" << format_double(config.detector.visibility) << ")\n";
        const char *labels[4] = {"E(a, b)  ", "E(a, b') ", "E(a', b) ", "E(a', b')"};
        for (size_t k = 0; k < 4; k++) {
            summary << "  " << labels[k] << " = " << fixed(run.result.e_values[k], 6) << " +/- "
                    << fixed(run.result.e_errors[k], 6) << "\n";
        }
        summary << "  S         = " << fixed(run.result.s_value, 6) << " +/- " << fixed(run.result.s_error, 6) << "\n";
        summary << "  S (no subtraction) = " << fixed(run.raw.s_value, 6) << "\n";
        if (run.result.eta_fit) {
            summary << "  fitted visibility  = " << fixed(*run.result.eta_fit, 6) << "\n";
        }
        if (run.result.s_error > 0) {
            summary << "  violation of the local bound: " << fixed((run.result.s_value - 2) / run.result.s_error, 2)
                    << " standard deviations\n";
        }
        if (clamped > 0) {
            summary << "  note: " << clamped << " negative subtracted entries clamped to zero\n";
        }

        if (format == OutputFormat::json) {
            std::string body = doc.dump(2) + "\n";
            if (config.output_path.empty()) {
                out << summary.str() << body;
            } else {
                emit(config.output_path, body, out);
                out << summary.str();
            }
            if (config.export_raw) {
                emit(config.output_path.empty() ? "" : config.output_path + ".tables.csv", raw_csv, out);
            }
        } else {
            if (config.output_path.empty()) {
                out << raw_csv;
            } else {
                emit(config.output_path, raw_csv, out);
                out << summary.str();
            }
        }
        return 0;
    });
}

int cmd_sweep(const ExperimentConfig &config, std::ostream &out, std::ostream &err) {
    return guarded(err, [&] {
        config.validate();
        if (config.sweep_thetas.empty()) {
            throw std::invalid_argument("The sweep command needs a \"sweep\" grid in the config.");
        }
        auto options = config.run_options();
        auto series = sweep_correlation(config.source, config.detector, config.sweep_thetas, options);
        OutputFormat format = config.format.value_or(OutputFormat::csv);
        std::string body;
        std::vector<SweepPoint> points;
        for (const auto &p : series) {
            points.push_back({p.theta, p.e_mean, p.e_std});
        }
        std::optional<VisibilityFit> fit;
        try {
            fit = fit_visibility(points);
        } catch (const std::exception &) {
        }
        if (format == OutputFormat::csv) {
            body = "theta_radians,e_mean,e_std,trials,repetitions,e_ideal\n";
            for (const auto &p : series) {
                body += format_double(p.theta) + "," + format_double(p.e_mean) + "," + format_double(p.e_std) + "," +
                        std::to_string(p.trials) + "," + std::to_string(p.repetitions) + "," +
                        format_double(singlet_correlation(p.theta)) + "\n";
            }
        } else {
            json doc;
            doc["points"] = json::array();
            for (const auto &p : series) {
                doc["points"].push_back({{"theta_radians", p.theta},
                                         {"e_mean", p.e_mean},
                                         {"e_std", p.e_std},
                                         {"trials", p.trials},
                                         {"repetitions", p.repetitions},
                                         {"e_ideal", singlet_correlation(p.theta)}});
            }
            doc["eta"] = fit ? json(fit->eta) : json(nullptr);
            doc["eta_err"] = fit ? json(fit->error) : json(nullptr);
            body = doc.dump(2) + "\n";
        }
        emit(config.output_path, body, out);
        if (!config.output_path.empty()) {
            out << "sweep: " << series.size() << " points (" << mode_name(config.mode) << ") written to "
                << config.output_path << "\n";
            if (fit) {
                out << "fitted visibility = " << fixed(fit->eta, 6) << " +/- " << fixed(fit->error, 6) << "\n";
            }
        }
        return 0;
    });
}

int cmd_validate(const ValidateOptions &options, std::ostream &out, std::ostream &err) {
    return guarded(err, [&] {
        Interferometer interferometer{options.splitter_angle, BeamSplitterConvention::symmetric};
        int failures = 0;
        auto report = [&](const std::string &name, double residual, double tolerance) {
            bool ok = residual < tolerance;
            failures += !ok;
            std::ostringstream line;
            line.imbue(std::locale::classic());
            line << (ok ? "PASS " : "FAIL ") << name << ": residual " << std::scientific << std::setprecision(3)
                 << residual << " (tolerance " << tolerance << ")\n";
            out << line.str();
        };

        {
            auto averaged = phase_averaged_coherent(0.2, 8, 256);
            auto poisson = poisson_mixture(0.2, 8, modes::aH).mixture;
            report("phase-average identity (mu=0.2, n_max=8, 256 phases)", trace_distance(averaged, poisson), 1e-6);
        }
        {
            auto splitter = beam_splitter(Port::a, Port::b, options.splitter_angle);
            auto out_state = apply(splitter, StateVector::basis(FockBasisState{{modes::aH, 1}, {modes::bH, 1}}));
            report("Hong-Ou-Mandel cancellation", std::abs(out_state.amplitude(FockBasisState{{modes::cH, 1}, {modes::dH, 1}})),
                   1e-12);
        }
        {
            double worst = 0;
            AngleQuad quad;
            for (const auto &setting : quad.settings()) {
                auto network = measurement_network(setting, interferometer);
                worst = std::max(worst, network.unitarity_error());
                for (auto state : {FockBasisState{{modes::aH, 1}, {modes::bV, 1}}, FockBasisState{{modes::aH, 2}},
                                   FockBasisState{{modes::aH, 2}, {modes::bV, 2}}}) {
                    worst = std::max(worst, std::abs(apply(network, StateVector::basis(state)).norm_squared() - 1));
                }
            }
            report("unitarity of splitter + analyzers", worst, 1e-12);
        }
        {
            SourceSpec spec{0.05, 0.05, 4, Blocked::none};
            DetectorModel ideal;
            double worst = 0;
            for (const auto &setting : AngleQuad{}.settings()) {
                auto n = exact_rates(spec, setting, ideal, interferometer);
                auto conditional = [&](FockBasisState input) {
                    return coincidence_probabilities(DensityMixture({{1.0, StateVector::basis(input)}}), setting,
                                                     ideal, interferometer)
                        .values;
                };
                auto p11 = conditional(FockBasisState{{modes::aH, 1}, {modes::bV, 1}});
                auto p20 = conditional(FockBasisState{{modes::aH, 2}});
                auto p02 = conditional(FockBasisState{{modes::bV, 2}});
                for (size_t k = 0; k < 4; k++) {
                    double model = spec.mu_a * spec.mu_b * p11[k] + spec.mu_a * spec.mu_a / 2 * p20[k] +
                                   spec.mu_b * spec.mu_b / 2 * p02[k];
                    worst = std::max(worst, std::abs(n.rate(k) - model));
                }
            }
            report("two-photon rate decomposition (mu=0.05)", worst, 1e-6);
        }
        {
            SourceSpec spec{0.05, 0.05, 4, Blocked::none};
            RunOptions run;
            run.interferometer = interferometer;
            double worst = 0;
            for (int k = 0; k < 16; k++) {
                double theta = std::numbers::pi * k / 16;
                auto tables = run_protocol(spec, DetectorModel{}, std::vector<AnalyzerSetting>{{0.0, theta}}, run);
                double e = measure_correlation(tables[0]).estimate.value;
                worst = std::max(worst, std::abs(e - singlet_correlation(theta)));
            }
            report("subtracted singlet correlation law (16 angles)", worst, 1e-9);
        }
        out << (failures == 0 ? "all checks passed\n" : std::to_string(failures) + " check(s) failed\n");
        return failures == 0 ? 0 : 1;
    });
}

int cmd_dump_state(const ExperimentConfig &config, StateStage stage, std::ostream &out, std::ostream &err) {
    return guarded(err, [&] {
        config.source.validate();
        DensityMixture mixture;
        switch (stage) {
            case StateStage::input:
                mixture = two_mode_input(config.source).mixture;
                break;
            case StateStage::two_photon:
                mixture = two_photon_component(config.source);
                break;
            case StateStage::output:
                mixture = apply(measurement_network(config.quad.settings()[0], config.interferometer),
                                two_mode_input(config.source).mixture);
                break;
        }
        emit(config.output_path, to_json(mixture).dump(2) + "\n", out);
        return 0;
    });
}

int cmd_dump_transform(const ExperimentConfig &config, TransformElement element, std::ostream &out,
                       std::ostream &err) {
    return guarded(err, [&] {
        auto setting = config.quad.settings()[0];
        ModeTransform transform;
        switch (element) {
            case TransformElement::splitter:
                transform = beam_splitter(Port::a, Port::b, config.interferometer.splitter_angle,
                                          config.interferometer.convention);
                break;
            case TransformElement::analyzer:
                transform = analyzer_transform(setting);
                break;
            case TransformElement::network:
                transform = measurement_network(setting, config.interferometer);
                break;
        }
        emit(config.output_path, to_json(transform).dump(2) + "\n", out);
        return 0;
    });
}

}  // namespace weakbell
