// Copyright (c) 2026 the tilesim authors
// SPDX-License-Identifier: Apache-2.0

#ifndef TILESIM_KERNELS_HPP
#define TILESIM_KERNELS_HPP

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "tilesim/model.hpp"
#include "tilesim/types.hpp"

namespace tilesim {

constexpr int kImageDim = 32;
constexpr int kImagePixels = kImageDim * kImageDim;
constexpr int kHistBins = 256;

using Image = std::array<std::uint8_t, kImagePixels>;
using Histogram = std::array<std::uint32_t, kHistBins>;

// 3x3 median filter, edge pixels replicated.
Image noise_filter(const Image& img);

Histogram histogram(const Image& img);

// Standard CDF remap: out = round(255*(cdf(v)-cdf_min)/(N-cdf_min)). A
// single-valued image (denominator zero) maps everything to 255.
Image hist_equalize(const Image& img, const Histogram& hist);

// ----- latency model ---------------------------------------------------

std::uint64_t dense_layer_multipliers(std::uint32_t n_in, std::uint32_t n_out,
                                      std::uint32_t reuse_factor);
std::uint64_t dense_layer_cycles(std::uint32_t reuse_factor, std::uint32_t pipeline_depth);

// ----- functional kernels behind the accelerator socket ----------------

enum class KernelKind {
    Copy,       // identity, configurable width
    Blend,      // synthetic order-sensitive mix, configurable output width
    Median,     // noise_filter on one image
    HistKernel, // histogram of one image
    Equalize,   // image + histogram -> equalized image
    Mlp,        // full classifier, pixel input, logits out
    DenseStage, // one dense layer of a partitioned model, fx16 in/out
    Denoiser,   // autoencoder, pixel input, pixel output
};

KernelKind kernel_kind_from_string(const std::string& name);
const char* to_string(KernelKind k);

// Runtime-tunable knobs; each maps to a configuration register.
struct KernelTuning {
    std::uint64_t alpha = 0;          // 0 = kernel default
    std::uint64_t reuse_factor = 0;   // 0 = model default
    std::uint64_t out_words = 0;      // Copy/Blend output width override
    std::uint64_t seg_words[4] = {0, 0, 0, 0};
};

// A functional kernel instance as seen by the wrapper: fixed shapes set at
// SoC build time (plus width knobs for the generic kernels), a pure
// apply(), and a cycle cost model.
class Kernel {
public:
    Kernel(KernelKind kind, std::shared_ptr<const MlpModel> model, int dense_layer,
           std::uint64_t default_alpha, std::uint32_t reuse_factor,
           std::uint32_t pipeline_depth);

    KernelKind kind() const { return kind_; }
    const std::shared_ptr<const MlpModel>& model() const { return model_; }
    int dense_layer() const { return dense_layer_; }

    // Input segment widths in words for the given tuning (one entry per
    // input stream joined into in_buf, in order).
    std::vector<std::uint32_t> input_segments(const KernelTuning& t) const;
    std::uint32_t output_words(const KernelTuning& t) const;

    std::uint64_t compute_cycles(const KernelTuning& t, std::uint32_t chunk_words) const;

    // Pure function of one chunk. `in` holds the concatenated segments.
    std::vector<Word> apply(const KernelTuning& t, std::span<const Word> in) const;

    std::uint64_t default_alpha() const { return default_alpha_; }
    std::uint32_t default_reuse_factor() const { return reuse_factor_; }
    std::uint32_t pipeline_depth() const { return pipeline_depth_; }

private:
    KernelKind kind_;
    std::shared_ptr<const MlpModel> model_;
    int dense_layer_ = 0;
    std::uint64_t default_alpha_ = 1;
    std::uint32_t reuse_factor_ = 16;
    std::uint32_t pipeline_depth_ = 8;
};

// ----- word packing -----------------------------------------------------

inline Word word_from_fx(Fx16 v) { return static_cast<std::uint16_t>(v.raw()); }
inline Fx16 fx_from_word(Word w) {
    return Fx16::from_raw(static_cast<std::int16_t>(static_cast<std::uint16_t>(w & 0xffff)));
}

std::vector<Word> words_from_fx(const std::vector<Fx16>& v);
std::vector<Fx16> fx_from_words(std::span<const Word> w);

std::vector<Word> words_from_image(const Image& img);
Image image_from_words(std::span<const Word> w);

// Pixel -> normalized fx16 (p/256); exact in Q10.
inline Fx16 fx_from_pixel(std::uint8_t p) {
    return Fx16::from_raw(static_cast<std::int16_t>(p << 2));
}
// Normalized fx16 -> pixel: round(v*256), clamped to [0,255].
std::uint8_t pixel_from_fx(Fx16 v);

}  // namespace tilesim

#endif
