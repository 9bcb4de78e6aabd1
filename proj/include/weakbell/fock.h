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

#ifndef WEAKBELL_FOCK_H
#define WEAKBELL_FOCK_H

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"

namespace weakbell {

using Complex = std::complex<double>;

/// Spatial ports of the recombining beam splitter. `a` and `b` are its inputs,
/// `c` and `d` its outputs.
enum class Port : uint8_t { a = 0, b = 1, c = 2, d = 3 };
enum class Polarization : uint8_t { H = 0, V = 1 };

constexpr size_t kNumPorts = 4;
constexpr size_t kNumModes = 2 * kNumPorts;

/// A field mode: one (port, polarization) pair. The mode index
/// `2 * port + polarization` is the fixed total order used everywhere.
struct ModeLabel {
    Port port;
    Polarization polarization;

    constexpr size_t index() const {
        return 2 * static_cast<size_t>(port) + static_cast<size_t>(polarization);
    }
    static constexpr ModeLabel from_index(size_t index) {
        return ModeLabel{static_cast<Port>(index / 2), static_cast<Polarization>(index % 2)};
    }
    std::string name() const;
    static ModeLabel parse(std::string_view name);

    friend constexpr bool operator==(ModeLabel, ModeLabel) = default;
    friend constexpr auto operator<=>(ModeLabel lhs, ModeLabel rhs) { return lhs.index() <=> rhs.index(); }
};

namespace modes {
constexpr ModeLabel aH{Port::a, Polarization::H};
constexpr ModeLabel aV{Port::a, Polarization::V};
constexpr ModeLabel bH{Port::b, Polarization::H};
constexpr ModeLabel bV{Port::b, Polarization::V};
constexpr ModeLabel cH{Port::c, Polarization::H};
constexpr ModeLabel cV{Port::c, Polarization::V};
constexpr ModeLabel dH{Port::d, Polarization::H};
constexpr ModeLabel dV{Port::d, Polarization::V};
}  // namespace modes

char port_name(Port port);
Port parse_port(std::string_view name);

/// Photon occupation numbers over the eight modes. Comparison is lexicographic
/// in mode order, which gives the canonical iteration order of sparse states.
class FockBasisState {
   public:
    FockBasisState() = default;
    FockBasisState(std::initializer_list<std::pair<ModeLabel, int>> occupations);

    int operator[](ModeLabel mode) const { return occupations_[mode.index()]; }
    int at(size_t mode_index) const { return occupations_[mode_index]; }
    FockBasisState with(ModeLabel mode, int count) const;
    int total_photons() const;
    bool is_vacuum() const { return total_photons() == 0; }
    /// Photons found in `port` (both polarizations).
    int photons_in(Port port) const;
    const std::array<int, kNumModes> &occupations() const { return occupations_; }
    std::string str() const;

    friend bool operator==(const FockBasisState &, const FockBasisState &) = default;
    friend auto operator<=>(const FockBasisState &, const FockBasisState &) = default;

   private:
    std::array<int, kNumModes> occupations_{};
};

/// Amplitudes below this magnitude are dropped after every linear operation.
constexpr double kPruneThreshold = 1e-15;

/// Sparse pure state over the Fock basis.
class StateVector {
   public:
    using Terms = std::map<FockBasisState, Complex>;

    StateVector() = default;
    explicit StateVector(Terms terms);
    StateVector(std::initializer_list<std::pair<const FockBasisState, Complex>> terms);

    static StateVector basis(const FockBasisState &state) { return StateVector({{state, Complex{1.0}}}); }
    static StateVector vacuum() { return basis(FockBasisState{}); }

    const Terms &terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }
    size_t size() const { return terms_.size(); }
    /// Amplitude of `state`, zero when absent.
    Complex amplitude(const FockBasisState &state) const;
    double norm_squared() const;

    StateVector scaled(Complex factor) const;
    friend StateVector operator+(const StateVector &lhs, const StateVector &rhs);
    friend StateVector operator-(const StateVector &lhs, const StateVector &rhs);

   private:
    Terms terms_;
};

/// Returns `state` divided by its norm. Throws std::domain_error on a zero state.
StateVector normalize(const StateVector &state);

/// <lhs|rhs>, conjugate-linear in lhs.
Complex inner_product(const StateVector &lhs, const StateVector &rhs);

/// Composition of states on disjoint sets of modes. Throws std::invalid_argument when a mode is
/// occupied in terms of both sides.
StateVector tensor(const StateVector &lhs, const StateVector &rhs);

/// Photon-number cutoff that never removes anything.
constexpr int kNoTruncation = std::numeric_limits<int>::max();

/// Removes terms with more than `n_max` photons and renormalizes. Throws std::domain_error when
/// nothing survives.
StateVector truncate(const StateVector &state, int n_max);

/// Incoherent ensemble of normalized pure states.
class DensityMixture {
   public:
    struct Component {
        double weight;
        StateVector state;
    };

    DensityMixture() = default;
    explicit DensityMixture(std::vector<Component> components);

    const std::vector<Component> &components() const { return components_; }
    bool empty() const { return components_.empty(); }
    double total_weight() const;
    /// Rescales weights to sum to one and normalizes every component.
    DensityMixture normalized() const;

   private:
    std::vector<Component> components_;
};

struct TruncatedMixture {
    DensityMixture mixture;
    /// Probability mass removed by the cutoff, measured against the input's total weight.
    double discarded_weight = 0.0;
    /// Components that lost every term and were dropped entirely.
    size_t dropped_components = 0;
};

/// Drops all terms with more than `n_max` photons from every component, renormalizing the
/// survivors. Fully truncated components are dropped and counted in `dropped_components`.
/// Throws std::domain_error if every component is dropped.
TruncatedMixture truncate(const DensityMixture &mixture, int n_max);

/// Projection onto the sector with exactly `photons` photons, renormalized. Throws
/// std::domain_error if the sector carries no weight.
DensityMixture restrict_to_photon_number(const DensityMixture &mixture, int photons);

/// Dense density matrix over an explicit ordered basis.
struct DenseDensityMatrix {
    std::vector<FockBasisState> basis;
    Eigen::MatrixXcd rho;
};

/// Density matrix of `mixture` over the union of its basis states plus `extra_basis`.
DenseDensityMatrix density_matrix(const DensityMixture &mixture, const std::vector<FockBasisState> &extra_basis = {});

/// Half the trace norm of the difference of the two density operators.
double trace_distance(const DensityMixture &lhs, const DensityMixture &rhs);

nlohmann::json to_json(const StateVector &state);
nlohmann::json to_json(const DensityMixture &mixture);
StateVector state_from_json(const nlohmann::json &json);
DensityMixture mixture_from_json(const nlohmann::json &json);

}  // namespace weakbell

#endif
