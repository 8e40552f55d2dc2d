// Copyright (c) 2026 the tilesim authors
// SPDX-License-Identifier: Apache-2.0

#ifndef TILESIM_MODEL_HPP
#define TILESIM_MODEL_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "tilesim/fixed_point.hpp"

namespace tilesim {

// Dense feed-forward model with quantized weights. weights[l] is row-major
// with shape (layer_sizes[l+1], layer_sizes[l]).
struct MlpModel {
    std::vector<std::uint32_t> layer_sizes;
    std::vector<std::vector<Fx16>> weights;
    std::vector<std::vector<Fx16>> biases;

    std::size_t layer_count() const { return weights.size(); }
    void check() const;  // throws ConfigError on inconsistent shapes
};

// Uniform random weights in [-scale, scale], quantized. Deterministic in seed.
MlpModel random_model(std::vector<std::uint32_t> layer_sizes, std::uint64_t seed, double scale);

// Model file: {"layers": [..], "init": "random", "seed": N, "scale": S} or
// explicit {"layers": [..], "weights": [[..]..], "biases": [[..]..]}.
MlpModel load_model(const std::string& path);
MlpModel parse_model(const std::string& json_text);

// One dense layer: out[o] = act(sum_i w[o,i]*in[i] + b[o]). Accumulation in
// Q20, rounded once; `relu` selects the hidden-layer activation.
std::vector<Fx16> dense_forward(const MlpModel& m, std::size_t layer,
                                const std::vector<Fx16>& in, bool relu);

// Hidden layers ReLU, output layer raw logits.
std::vector<Fx16> mlp_infer(const MlpModel& m, const std::vector<Fx16>& input);

// As mlp_infer but the linear output is clamped to the normalized pixel
// range [0, 255/256] (the decoder reconstructs pixel/256 values).
std::vector<Fx16> autoencoder_infer(const MlpModel& m, const std::vector<Fx16>& input);

}  // namespace tilesim

#endif
