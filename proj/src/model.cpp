// Copyright (c) 2026 the tilesim authors
// SPDX-License-Identifier: Apache-2.0

#include "tilesim/model.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "tilesim/rng.hpp"
#include "tilesim/types.hpp"

namespace tilesim {

void MlpModel::check() const {
    if (layer_sizes.size() < 2) throw ConfigError("model needs at least two layer sizes");
    if (weights.size() != layer_sizes.size() - 1 || biases.size() != weights.size()) {
        throw ConfigError("model weight/bias count does not match layer sizes");
    }
    for (std::size_t l = 0; l < weights.size(); ++l) {
        const std::size_t n_in = layer_sizes[l];
        const std::size_t n_out = layer_sizes[l + 1];
        if (weights[l].size() != n_in * n_out) {
            throw ConfigError("layer " + std::to_string(l) + " weight shape mismatch");
        }
        if (biases[l].size() != n_out) {
            throw ConfigError("layer " + std::to_string(l) + " bias shape mismatch");
        }
    }
}

MlpModel random_model(std::vector<std::uint32_t> layer_sizes, std::uint64_t seed, double scale) {
    MlpModel m;
    m.layer_sizes = std::move(layer_sizes);
    Rng rng(seed);
    for (std::size_t l = 0; l + 1 < m.layer_sizes.size(); ++l) {
        const std::size_t n_in = m.layer_sizes[l];
        const std::size_t n_out = m.layer_sizes[l + 1];
        std::vector<Fx16> w(n_in * n_out);
        for (auto& v : w) v = Fx16::from_double(rng.next_real(-scale, scale));
        std::vector<Fx16> b(n_out);
        for (auto& v : b) v = Fx16::from_double(rng.next_real(-scale, scale));
        m.weights.push_back(std::move(w));
        m.biases.push_back(std::move(b));
    }
    m.check();
    return m;
}

MlpModel parse_model(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("model file is not valid JSON: ") + e.what());
    }
    if (!j.contains("layers") || !j["layers"].is_array()) {
        throw ConfigError("model file missing \"layers\" array");
    }
    std::vector<std::uint32_t> layers = j["layers"].get<std::vector<std::uint32_t>>();

    if (j.value("init", "") == "random") {
        const std::uint64_t seed = j.value("seed", std::uint64_t{1});
        const double scale = j.value("scale", 0.05);
        return random_model(std::move(layers), seed, scale);
    }

    MlpModel m;
    m.layer_sizes = std::move(layers);
    if (!j.contains("weights") || !j.contains("biases")) {
        throw ConfigError("model file needs either init=random or explicit weights/biases");
    }
    for (const auto& lw : j["weights"]) {
        std::vector<Fx16> w;
        w.reserve(lw.size());
        for (const auto& v : lw) w.push_back(Fx16::from_double(v.get<double>()));
        m.weights.push_back(std::move(w));
    }
    for (const auto& lb : j["biases"]) {
        std::vector<Fx16> b;
        b.reserve(lb.size());
        for (const auto& v : lb) b.push_back(Fx16::from_double(v.get<double>()));
        m.biases.push_back(std::move(b));
    }
    m.check();
    return m;
}

MlpModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open model file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_model(ss.str());
}

std::vector<Fx16> dense_forward(const MlpModel& m, std::size_t layer,
                                const std::vector<Fx16>& in, bool relu) {
    if (layer >= m.weights.size()) throw ConfigError("dense_forward: layer out of range");
    const std::size_t n_in = m.layer_sizes[layer];
    const std::size_t n_out = m.layer_sizes[layer + 1];
    if (in.size() != n_in) throw ConfigError("dense_forward: input width mismatch");

    const auto& w = m.weights[layer];
    const auto& b = m.biases[layer];
    std::vector<Fx16> out(n_out);
    for (std::size_t o = 0; o < n_out; ++o) {
        std::int64_t acc = 0;  // Q20
        const Fx16* row = &w[o * n_in];
        for (std::size_t i = 0; i < n_in; ++i) {
            acc += static_cast<std::int64_t>(row[i].raw()) * in[i].raw();
        }
        Fx16 v = fx16_mac_finalize(acc, b[o]);
        out[o] = relu ? v.relu() : v;
    }
    return out;
}

std::vector<Fx16> mlp_infer(const MlpModel& m, const std::vector<Fx16>& input) {
    std::vector<Fx16> x = input;
    for (std::size_t l = 0; l < m.weights.size(); ++l) {
        const bool hidden = l + 1 < m.weights.size();
        x = dense_forward(m, l, x, hidden);
    }
    return x;
}

std::vector<Fx16> autoencoder_infer(const MlpModel& m, const std::vector<Fx16>& input) {
    std::vector<Fx16> x = mlp_infer(m, input);
    // Clamp to the normalized pixel range [0, 255/256].
    const Fx16 lo = Fx16::from_raw(0);
    const Fx16 hi = Fx16::from_raw(255 << 2);
    for (auto& v : x) {
        if (v < lo) v = lo;
        if (hi < v) v = hi;
    }
    return x;
}

}  // namespace tilesim
