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

#ifndef WEAKBELL_RNG_H
#define WEAKBELL_RNG_H

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace weakbell {

/// All sampling goes through mt19937_64 and the helpers below rather than the standard
/// distributions, whose output is implementation defined. Draw sequences are therefore
/// identical across standard libraries.
using Rng = std::mt19937_64;

/// Uniform double in [0, 1) built from the top 53 bits of one draw.
inline double uniform01(Rng &rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Seed for an independent stream identified by `base_seed` and a path of indices
/// (e.g. setting, configuration, repetition, chunk). Mixed through std::seed_seq.
inline uint64_t derive_seed(uint64_t base_seed, std::initializer_list<uint64_t> stream_path) {
    std::vector<uint32_t> words{static_cast<uint32_t>(base_seed), static_cast<uint32_t>(base_seed >> 32)};
    for (uint64_t index : stream_path) {
        words.push_back(static_cast<uint32_t>(index));
        words.push_back(static_cast<uint32_t>(index >> 32));
    }
    std::seed_seq seq(words.begin(), words.end());
    uint32_t out[2];
    seq.generate(out, out + 2);
    return (static_cast<uint64_t>(out[1]) << 32) | out[0];
}

/// Index into `cdf` (non-decreasing, last entry treated as 1) selected by one uniform draw.
template <typename Cdf>
size_t sample_index(const Cdf &cdf, double u) {
    size_t n = cdf.size();
    for (size_t k = 0; k + 1 < n; k++) {
        if (u < cdf[k]) {
            return k;
        }
    }
    return n - 1;
}

}  // namespace weakbell

#endif
