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

#include "weakbell/fock.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

namespace weakbell {

char port_name(Port port) { return static_cast<char>('a' + static_cast<int>(port)); }

Port parse_port(std::string_view name) {
    if (name.size() != 1 || name[0] < 'a' || name[0] > 'd') {
        throw std::invalid_argument("Unknown port '" + std::string(name) + "'. Expected one of a, b, c, d.");
    }
    return static_cast<Port>(name[0] - 'a');
}

std::string ModeLabel::name() const {
    std::string result;
    result += port_name(port);
    result += polarization == Polarization::H ? 'H' : 'V';
    return result;
}

ModeLabel ModeLabel::parse(std::string_view name) {
    if (name.size() != 2 || (name[1] != 'H' && name[1] != 'V')) {
        throw std::invalid_argument("Unknown mode label '" + std::string(name) + "'.");
    }
    return ModeLabel{parse_port(name.substr(0, 1)), name[1] == 'H' ? Polarization::H : Polarization::V};
}

FockBasisState::FockBasisState(std::initializer_list<std::pair<ModeLabel, int>> occupations) {
    for (const auto &[mode, count] : occupations) {
        if (count < 0) {
            throw std::invalid_argument("Negative photon occupation.");
        }
        occupations_[mode.index()] += count;
    }
}

FockBasisState FockBasisState::with(ModeLabel mode, int count) const {
    if (count < 0) {
        throw std::invalid_argument("Negative photon occupation.");
    }
    FockBasisState result = *this;
    result.occupations_[mode.index()] = count;
    return result;
}

int FockBasisState::total_photons() const { return std::accumulate(occupations_.begin(), occupations_.end(), 0); }

int FockBasisState::photons_in(Port port) const {
    auto p = 2 * static_cast<size_t>(port);
    return occupations_[p] + occupations_[p + 1];
}

std::string FockBasisState::str() const {
    std::string result = "|";
    bool first = true;
    for (size_t k = 0; k < kNumModes; k++) {
        if (occupations_[k] == 0) {
            continue;
        }
        if (!first) {
            result += ',';
        }
        first = false;
        result += std::to_string(occupations_[k]) + "_" + ModeLabel::from_index(k).name();
    }
    if (first) {
        result += "vac";
    }
    return result + ">";
}

namespace {

void prune(StateVector::Terms &terms) {
    std::erase_if(terms, [](const auto &kv) { return std::abs(kv.second) < kPruneThreshold; });
}

}  // namespace

StateVector::StateVector(Terms terms) : terms_(std::move(terms)) { prune(terms_); }

StateVector::StateVector(std::initializer_list<std::pair<const FockBasisState, Complex>> terms) {
    for (const auto &[state, amplitude] : terms) {
        terms_[state] += amplitude;
    }
    prune(terms_);
}

Complex StateVector::amplitude(const FockBasisState &state) const {
    auto it = terms_.find(state);
    return it == terms_.end() ? Complex{} : it->second;
}

double StateVector::norm_squared() const {
    double total = 0;
    for (const auto &[_, amplitude] : terms_) {
        total += std::norm(amplitude);
    }
    return total;
}

StateVector StateVector::scaled(Complex factor) const {
    Terms result = terms_;
    for (auto &[_, amplitude] : result) {
        amplitude *= factor;
    }
    return StateVector(std::move(result));
}

StateVector operator+(const StateVector &lhs, const StateVector &rhs) {
    StateVector::Terms result = lhs.terms_;
    for (const auto &[state, amplitude] : rhs.terms_) {
        result[state] += amplitude;
    }
    return StateVector(std::move(result));
}

StateVector operator-(const StateVector &lhs, const StateVector &rhs) { return lhs + rhs.scaled(-1.0); }

StateVector normalize(const StateVector &state) {
    double n2 = state.norm_squared();
    if (state.empty() || n2 == 0) {
        throw std::domain_error("Can't normalize a zero state.");
    }
    return state.scaled(1.0 / std::sqrt(n2));
}

Complex inner_product(const StateVector &lhs, const StateVector &rhs) {
    const auto &small = lhs.size() <= rhs.size() ? lhs : rhs;
    const auto &large = lhs.size() <= rhs.size() ? rhs : lhs;
    Complex total{};
    for (const auto &[state, amplitude] : small.terms()) {
        auto it = large.terms().find(state);
        if (it == large.terms().end()) {
            continue;
        }
        total += &small == &lhs ? std::conj(amplitude) * it->second : std::conj(it->second) * amplitude;
    }
    return total;
}

StateVector tensor(const StateVector &lhs, const StateVector &rhs) {
    std::array<bool, kNumModes> lhs_modes{};
    for (const auto &[state, _] : lhs.terms()) {
        for (size_t k = 0; k < kNumModes; k++) {
            lhs_modes[k] |= state.at(k) > 0;
        }
    }
    StateVector::Terms result;
    for (const auto &[right_state, right_amplitude] : rhs.terms()) {
        for (size_t k = 0; k < kNumModes; k++) {
            if (right_state.at(k) > 0 && lhs_modes[k]) {
                throw std::invalid_argument(
                    "Can't tensor states that both occupy mode " + ModeLabel::from_index(k).name() + ".");
            }
        }
    }
    for (const auto &[left_state, left_amplitude] : lhs.terms()) {
        for (const auto &[right_state, right_amplitude] : rhs.terms()) {
            FockBasisState combined = left_state;
            for (size_t k = 0; k < kNumModes; k++) {
                if (right_state.at(k) > 0) {
                    combined = combined.with(ModeLabel::from_index(k), right_state.at(k));
                }
            }
            result[combined] += left_amplitude * right_amplitude;
        }
    }
    return StateVector(std::move(result));
}

StateVector truncate(const StateVector &state, int n_max) {
    if (n_max < 0) {
        throw std::invalid_argument("Photon-number cutoff must be non-negative.");
    }
    StateVector::Terms kept;
    for (const auto &[basis, amplitude] : state.terms()) {
        if (basis.total_photons() <= n_max) {
            kept.emplace(basis, amplitude);
        }
    }
    if (kept.empty()) {
        throw std::domain_error("Truncation at " + std::to_string(n_max) + " photons removed the entire state.");
    }
    return normalize(StateVector(std::move(kept)));
}

DensityMixture::DensityMixture(std::vector<Component> components) : components_(std::move(components)) {
    for (const auto &c : components_) {
        if (!(c.weight >= 0)) {
            throw std::invalid_argument("Mixture weights must be non-negative.");
        }
    }
}

double DensityMixture::total_weight() const {
    double total = 0;
    for (const auto &c : components_) {
        total += c.weight;
    }
    return total;
}

DensityMixture DensityMixture::normalized() const {
    double total = total_weight();
    if (total <= 0) {
        throw std::domain_error("Can't normalize a mixture with zero total weight.");
    }
    std::vector<Component> result;
    result.reserve(components_.size());
    for (const auto &c : components_) {
        if (c.weight > 0) {
            result.push_back({c.weight / total, normalize(c.state)});
        }
    }
    return DensityMixture(std::move(result));
}

TruncatedMixture truncate(const DensityMixture &mixture, int n_max) {
    if (n_max < 0) {
        throw std::invalid_argument("Photon-number cutoff must be non-negative.");
    }
    double total = mixture.total_weight();
    if (total <= 0) {
        throw std::domain_error("Can't truncate an empty mixture.");
    }
    TruncatedMixture result;
    std::vector<DensityMixture::Component> kept;
    double kept_weight = 0;
    for (const auto &c : mixture.components()) {
        StateVector::Terms terms;
        for (const auto &[basis, amplitude] : c.state.terms()) {
            if (basis.total_photons() <= n_max) {
                terms.emplace(basis, amplitude);
            }
        }
        StateVector survivor(std::move(terms));
        double fraction = survivor.norm_squared() / c.state.norm_squared();
        if (survivor.empty()) {
            result.dropped_components++;
            continue;
        }
        kept_weight += c.weight * fraction;
        kept.push_back({c.weight * fraction, normalize(survivor)});
    }
    if (kept.empty()) {
        throw std::domain_error("Truncation at " + std::to_string(n_max) + " photons removed every component.");
    }
    result.discarded_weight = std::max(0.0, 1.0 - kept_weight / total);
    result.mixture = DensityMixture(std::move(kept)).normalized();
    return result;
}

DensityMixture restrict_to_photon_number(const DensityMixture &mixture, int photons) {
    std::vector<DensityMixture::Component> kept;
    for (const auto &c : mixture.components()) {
        StateVector::Terms terms;
        for (const auto &[basis, amplitude] : c.state.terms()) {
            if (basis.total_photons() == photons) {
                terms.emplace(basis, amplitude);
            }
        }
        StateVector sector(std::move(terms));
        if (!sector.empty()) {
            kept.push_back({c.weight * sector.norm_squared() / c.state.norm_squared(), sector});
        }
    }
    if (kept.empty()) {
        throw std::domain_error("Mixture has no weight in the " + std::to_string(photons) + "-photon sector.");
    }
    return DensityMixture(std::move(kept)).normalized();
}

DenseDensityMatrix density_matrix(const DensityMixture &mixture, const std::vector<FockBasisState> &extra_basis) {
    std::set<FockBasisState> basis_set(extra_basis.begin(), extra_basis.end());
    for (const auto &c : mixture.components()) {
        for (const auto &[basis, _] : c.state.terms()) {
            basis_set.insert(basis);
        }
    }
    DenseDensityMatrix result;
    result.basis.assign(basis_set.begin(), basis_set.end());
    auto n = static_cast<Eigen::Index>(result.basis.size());
    result.rho = Eigen::MatrixXcd::Zero(n, n);
    for (const auto &c : mixture.components()) {
        Eigen::VectorXcd ket = Eigen::VectorXcd::Zero(n);
        for (const auto &[basis, amplitude] : c.state.terms()) {
            auto pos = std::lower_bound(result.basis.begin(), result.basis.end(), basis) - result.basis.begin();
            ket(pos) = amplitude;
        }
        result.rho += c.weight * ket * ket.adjoint();
    }
    return result;
}

double trace_distance(const DensityMixture &lhs, const DensityMixture &rhs) {
    std::vector<FockBasisState> rhs_basis;
    for (const auto &c : rhs.components()) {
        for (const auto &[basis, _] : c.state.terms()) {
            rhs_basis.push_back(basis);
        }
    }
    auto left = density_matrix(lhs, rhs_basis);
    auto right = density_matrix(rhs, left.basis);
    Eigen::MatrixXcd diff = left.rho - right.rho;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(diff, Eigen::EigenvaluesOnly);
    return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

nlohmann::json to_json(const StateVector &state) {
    auto terms = nlohmann::json::array();
    for (const auto &[basis, amplitude] : state.terms()) {
        auto occupations = nlohmann::json::object();
        for (size_t k = 0; k < kNumModes; k++) {
            if (basis.at(k) > 0) {
                occupations[ModeLabel::from_index(k).name()] = basis.at(k);
            }
        }
        terms.push_back({{"occupations", occupations}, {"re", amplitude.real()}, {"im", amplitude.imag()}});
    }
    return terms;
}

nlohmann::json to_json(const DensityMixture &mixture) {
    auto components = nlohmann::json::array();
    for (const auto &c : mixture.components()) {
        components.push_back({{"weight", c.weight}, {"terms", to_json(c.state)}});
    }
    return components;
}

StateVector state_from_json(const nlohmann::json &json) {
    if (!json.is_array()) {
        throw std::invalid_argument("State JSON must be an array of terms.");
    }
    StateVector::Terms terms;
    for (const auto &term : json) {
        FockBasisState basis;
        for (const auto &[name, count] : term.at("occupations").items()) {
            basis = basis.with(ModeLabel::parse(name), count.get<int>());
        }
        terms[basis] += Complex{term.at("re").get<double>(), term.at("im").get<double>()};
    }
    return StateVector(std::move(terms));
}

DensityMixture mixture_from_json(const nlohmann::json &json) {
    if (!json.is_array()) {
        throw std::invalid_argument("Mixture JSON must be an array of components.");
    }
    std::vector<DensityMixture::Component> components;
    for (const auto &c : json) {
        components.push_back({c.at("weight").get<double>(), state_from_json(c.at("terms"))});
    }
    return DensityMixture(std::move(components));
}

}  // namespace weakbell
