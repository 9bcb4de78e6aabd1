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

#include "weakbell/protocol.h"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace weakbell {

namespace {

constexpr Blocked kConfigurations[3] = {Blocked::none, Blocked::block_a, Blocked::block_b};

struct Chunk {
    size_t setting;
    size_t configuration;
    size_t repetition;
    uint64_t index;
    uint64_t trials;
};

CountTable &slot(ProtocolTables &tables, size_t configuration) {
    switch (configuration) {
        case 0:
            return tables.full;
        case 1:
            return tables.blocked_a;
        default:
            return tables.blocked_b;
    }
}

/// Runs `jobs` on `workers` threads, pulling indices from a shared counter. Rethrows the first
/// worker exception.
template <typename Job>
void run_parallel(size_t jobs, int workers, const Job &job) {
    std::atomic<size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto loop = [&] {
        while (true) {
            size_t k = next.fetch_add(1);
            if (k >= jobs) {
                return;
            }
            try {
                job(k);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
                next = jobs;
            }
        }
    };
    size_t thread_count = std::min<size_t>(static_cast<size_t>(std::max(workers, 1)), jobs);
    if (thread_count <= 1) {
        loop();
    } else {
        std::vector<std::thread> threads;
        for (size_t t = 0; t < thread_count; t++) {
            threads.emplace_back(loop);
        }
        for (auto &t : threads) {
            t.join();
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

}  // namespace

std::string_view mode_name(Mode mode) {
    switch (mode) {
        case Mode::exact:
            return "exact";
        case Mode::mc_fock:
            return "mc_fock";
        case Mode::mc_coherent:
            return "mc_coherent";
    }
    throw std::logic_error("unreachable");
}

Mode parse_mode(std::string_view name) {
    if (name == "exact") {
        return Mode::exact;
    }
    if (name == "mc_fock") {
        return Mode::mc_fock;
    }
    if (name == "mc_coherent") {
        return Mode::mc_coherent;
    }
    throw std::invalid_argument("Unknown mode '" + std::string(name) + "'. Expected exact, mc_fock or mc_coherent.");
}

std::vector<std::vector<ProtocolTables>> run_protocol(const SourceSpec &spec, const DetectorModel &detector,
                                                      std::span<const AnalyzerSetting> settings,
                                                      const RunOptions &options) {
    spec.validate();
    detector.validate();
    std::vector<std::vector<ProtocolTables>> result(settings.size());
    if (options.mode == Mode::exact) {
        for (size_t s = 0; s < settings.size(); s++) {
            ProtocolTables tables;
            for (size_t c = 0; c < 3; c++) {
                slot(tables, c) =
                    exact_rates(spec.with_blocked(kConfigurations[c]), settings[s], detector, options.interferometer);
            }
            result[s].push_back(tables);
        }
        return result;
    }
    if (options.trials == 0) {
        throw std::invalid_argument("Monte Carlo runs need at least one trial.");
    }
    if (options.repetitions < 1) {
        throw std::invalid_argument("Monte Carlo runs need at least one repetition.");
    }
    auto reps = static_cast<size_t>(options.repetitions);

    std::vector<Chunk> chunks;
    for (size_t s = 0; s < settings.size(); s++) {
        for (size_t c = 0; c < 3; c++) {
            for (size_t r = 0; r < reps; r++) {
                uint64_t remaining = options.trials;
                for (uint64_t k = 0; remaining > 0; k++) {
                    uint64_t n = std::min(remaining, kChunkTrials);
                    chunks.push_back({s, c, r, k, n});
                    remaining -= n;
                }
            }
        }
    }
    std::vector<CountTable> chunk_tables(chunks.size());
    run_parallel(chunks.size(), options.workers, [&](size_t k) {
        const Chunk &chunk = chunks[k];
        auto config = spec.with_blocked(kConfigurations[chunk.configuration]);
        Rng rng(derive_seed(options.seed, {chunk.setting, chunk.configuration, chunk.repetition, chunk.index}));
        const auto &setting = settings[chunk.setting];
        if (options.mode == Mode::mc_fock) {
            chunk_tables[k] = FockSampler(config, setting, detector, options.interferometer).run(chunk.trials, rng);
        } else {
            chunk_tables[k] =
                CoherentSampler(config, setting, detector, options.interferometer).run(chunk.trials, rng);
        }
    });

    for (auto &per_setting : result) {
        per_setting.resize(reps);
    }
    for (size_t k = 0; k < chunks.size(); k++) {
        const Chunk &chunk = chunks[k];
        CountTable &target = slot(result[chunk.setting][chunk.repetition], chunk.configuration);
        if (chunk.index == 0) {
            target = chunk_tables[k];
        } else {
            target += chunk_tables[k];
        }
    }
    return result;
}

MeasuredCorrelation measure_correlation(std::span<const ProtocolTables> repetitions, bool subtract) {
    MeasuredCorrelation result;
    CorrelationEstimate single;
    for (const auto &tables : repetitions) {
        SubtractedTable c = subtract ? subtract_background(tables.full, tables.blocked_a, tables.blocked_b)
                                     : without_subtraction(tables.full);
        result.clamped_entries += c.clamped_entries;
        auto e = correlation_E(c);
        result.values.push_back(e.e_value);
        single = e.estimate();
    }
    result.estimate = result.values.size() == 1 ? single : repetition_estimate(result.values);
    return result;
}

std::vector<SweepSeriesPoint> sweep_correlation(const SourceSpec &spec, const DetectorModel &detector,
                                                std::span<const double> thetas, const RunOptions &options) {
    std::vector<AnalyzerSetting> settings;
    for (double theta : thetas) {
        settings.push_back({0.0, theta});
    }
    auto tables = run_protocol(spec, detector, settings, options);
    std::vector<SweepSeriesPoint> series;
    for (size_t s = 0; s < thetas.size(); s++) {
        auto measured = measure_correlation(tables[s]);
        series.push_back({thetas[s], measured.estimate.value, measured.estimate.error,
                          options.mode == Mode::exact ? 0 : options.trials,
                          static_cast<int>(tables[s].size())});
    }
    return series;
}

ChshRun measure_chsh(const SourceSpec &spec, const DetectorModel &detector, const AngleQuad &quad,
                     const RunOptions &options) {
    auto settings = quad.settings();
    ChshRun run;
    run.tables = run_protocol(spec, detector, settings, options);
    std::array<CorrelationEstimate, 4> subtracted;
    std::array<CorrelationEstimate, 4> raw;
    for (size_t s = 0; s < 4; s++) {
        run.correlations[s] = measure_correlation(run.tables[s]);
        subtracted[s] = run.correlations[s].estimate;
        raw[s] = measure_correlation(run.tables[s], false).estimate;
    }
    run.result = chsh_S(subtracted);
    run.raw = chsh_S(raw);
    std::vector<SweepPoint> points;
    for (size_t s = 0; s < 4; s++) {
        points.push_back({settings[s].alpha - settings[s].beta, subtracted[s].value, subtracted[s].error});
    }
    try {
        run.result.eta_fit = fit_visibility(points).eta;
    } catch (const std::exception &) {
        run.result.eta_fit.reset();
    }
    return run;
}

}  // namespace weakbell
