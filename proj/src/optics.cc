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

#include "weakbell/optics.h"

#include <cmath>
#include <stdexcept>

namespace weakbell {

namespace {

double factorial(int n) {
    double result = 1;
    for (int k = 2; k <= n; k++) {
        result *= k;
    }
    return result;
}

size_t mode_index(Port port, Polarization polarization) { return ModeLabel{port, polarization}.index(); }

}  // namespace

ModeTransform ModeTransform::from_matrix(const ModeMatrix &matrix) {
    ModeTransform result(matrix);
    double error = result.unitarity_error();
    if (!(error <= kUnitarityTolerance)) {
        throw std::invalid_argument(
            "Mode transform is not unitary (max |U^dagger U - I| = " + std::to_string(error) + ").");
    }
    return result;
}

double ModeTransform::unitarity_error() const {
    ModeMatrix gram = matrix_.adjoint() * matrix_ - ModeMatrix::Identity();
    return gram.cwiseAbs().maxCoeff();
}

ModeTransform ModeTransform::adjoint() const { return ModeTransform(ModeMatrix(matrix_.adjoint())); }

Port partner_port(Port port) { return static_cast<Port>((static_cast<int>(port) + 2) % 4); }

ModeTransform beam_splitter(Port port_x, Port port_y, double transmissivity_angle, BeamSplitterConvention convention) {
    if (port_x == port_y) {
        throw std::invalid_argument("Beam splitter needs two distinct ports.");
    }
    if (partner_port(port_x) == port_y) {
        throw std::invalid_argument(
            std::string("Ports ") + port_name(port_x) + " and " + port_name(port_y) +
            " are the two sides of one splitter path and can't be mixed.");
    }
    double t = std::cos(transmissivity_angle);
    double r = std::sin(transmissivity_angle);
    // block(out, in) over (x, y) -> (x', y').
    Complex block[2][2];
    if (convention == BeamSplitterConvention::symmetric) {
        block[0][0] = t;
        block[1][0] = Complex{0, r};
        block[0][1] = Complex{0, r};
        block[1][1] = t;
    } else {
        block[0][0] = t;
        block[1][0] = r;
        block[0][1] = r;
        block[1][1] = -t;
    }
    Port in_ports[2] = {port_x, port_y};
    Port out_ports[2] = {partner_port(port_x), partner_port(port_y)};
    ModeMatrix m = ModeMatrix::Identity();
    for (auto pol : {Polarization::H, Polarization::V}) {
        for (int i = 0; i < 2; i++) {
            m(mode_index(in_ports[i], pol), mode_index(in_ports[i], pol)) = 0;
            m(mode_index(out_ports[i], pol), mode_index(out_ports[i], pol)) = 0;
        }
        for (int out = 0; out < 2; out++) {
            for (int in = 0; in < 2; in++) {
                m(mode_index(out_ports[out], pol), mode_index(in_ports[in], pol)) = block[out][in];
                m(mode_index(in_ports[out], pol), mode_index(out_ports[in], pol)) = block[out][in];
            }
        }
    }
    return ModeTransform::from_matrix(m);
}

ModeTransform polarization_rotator(Port port, double angle) {
    ModeMatrix m = ModeMatrix::Identity();
    auto h = mode_index(port, Polarization::H);
    auto v = mode_index(port, Polarization::V);
    double c = std::cos(angle);
    double s = std::sin(angle);
    m(h, h) = c;
    m(v, h) = s;
    m(h, v) = -s;
    m(v, v) = c;
    return ModeTransform::from_matrix(m);
}

ModeTransform phase_shift(Port port, double phase) {
    ModeMatrix m = ModeMatrix::Identity();
    Complex factor = std::polar(1.0, phase);
    m(mode_index(port, Polarization::H), mode_index(port, Polarization::H)) = factor;
    m(mode_index(port, Polarization::V), mode_index(port, Polarization::V)) = factor;
    return ModeTransform::from_matrix(m);
}

ModeTransform compose(const ModeTransform &first, const ModeTransform &second) {
    return ModeTransform::from_matrix(second.matrix() * first.matrix());
}

StateVector apply(const ModeTransform &transform, const StateVector &state) {
    const ModeMatrix &u = transform.matrix();
    StateVector::Terms output;
    for (const auto &[input, amplitude] : state.terms()) {
        // Coefficients of output monomials prod_j (b_j^dagger)^{m_j}, keyed by exponents.
        std::map<FockBasisState, Complex> poly{{FockBasisState{}, Complex{1.0}}};
        double input_norm = 1;
        for (size_t k = 0; k < kNumModes; k++) {
            int n = input.at(k);
            input_norm *= factorial(n);
            for (int rep = 0; rep < n; rep++) {
                std::map<FockBasisState, Complex> next;
                for (const auto &[mono, coef] : poly) {
                    for (size_t j = 0; j < kNumModes; j++) {
                        if (u(j, k) == Complex{}) {
                            continue;
                        }
                        auto mode = ModeLabel::from_index(j);
                        next[mono.with(mode, mono.at(j) + 1)] += coef * u(j, k);
                    }
                }
                poly = std::move(next);
            }
        }
        double inv_input = 1.0 / std::sqrt(input_norm);
        for (const auto &[mono, coef] : poly) {
            double out_norm = 1;
            for (size_t j = 0; j < kNumModes; j++) {
                out_norm *= factorial(mono.at(j));
            }
            output[mono] += amplitude * coef * std::sqrt(out_norm) * inv_input;
        }
    }
    return StateVector(std::move(output));
}

DensityMixture apply(const ModeTransform &transform, const DensityMixture &mixture) {
    std::vector<DensityMixture::Component> result;
    result.reserve(mixture.components().size());
    for (const auto &c : mixture.components()) {
        result.push_back({c.weight, apply(transform, c.state)});
    }
    return DensityMixture(std::move(result));
}

nlohmann::json to_json(const ModeTransform &transform) {
    auto labels = nlohmann::json::array();
    for (size_t k = 0; k < kNumModes; k++) {
        labels.push_back(ModeLabel::from_index(k).name());
    }
    auto rows = nlohmann::json::array();
    for (size_t r = 0; r < kNumModes; r++) {
        auto row = nlohmann::json::array();
        for (size_t c = 0; c < kNumModes; c++) {
            row.push_back({transform.matrix()(r, c).real(), transform.matrix()(r, c).imag()});
        }
        rows.push_back(row);
    }
    return {{"labels", labels}, {"matrix", rows}};
}

ModeTransform transform_from_json(const nlohmann::json &json) {
    const auto &labels = json.at("labels");
    if (labels.size() != kNumModes) {
        throw std::invalid_argument("Transform JSON must list exactly 8 mode labels.");
    }
    for (size_t k = 0; k < kNumModes; k++) {
        if (ModeLabel::parse(labels[k].get<std::string>()).index() != k) {
            throw std::invalid_argument("Transform JSON uses a different mode order.");
        }
    }
    const auto &rows = json.at("matrix");
    if (rows.size() != kNumModes) {
        throw std::invalid_argument("Transform JSON matrix must be 8x8.");
    }
    ModeMatrix m;
    for (size_t r = 0; r < kNumModes; r++) {
        if (rows[r].size() != kNumModes) {
            throw std::invalid_argument("Transform JSON matrix must be 8x8.");
        }
        for (size_t c = 0; c < kNumModes; c++) {
            m(r, c) = Complex{rows[r][c].at(0).get<double>(), rows[r][c].at(1).get<double>()};
        }
    }
    return ModeTransform::from_matrix(m);
}

}  // namespace weakbell
