// Copyright (c) 2026 the tilesim authors
// SPDX-License-Identifier: Apache-2.0

#include "tilesim/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace tilesim {

Image noise_filter(const Image& img) {
    Image out{};
    auto at = [&img](int x, int y) {
        x = std::clamp(x, 0, kImageDim - 1);  // replicate edges
        y = std::clamp(y, 0, kImageDim - 1);
        return img[static_cast<std::size_t>(y) * kImageDim + x];
    };
    for (int y = 0; y < kImageDim; ++y) {
        for (int x = 0; x < kImageDim; ++x) {
            std::array<std::uint8_t, 9> win;
            int k = 0;
            for (int dy = -1; dy <= 1; ++dy)
                for (int dx = -1; dx <= 1; ++dx) win[k++] = at(x + dx, y + dy);
            std::nth_element(win.begin(), win.begin() + 4, win.end());
            out[static_cast<std::size_t>(y) * kImageDim + x] = win[4];
        }
    }
    return out;
}

Histogram histogram(const Image& img) {
    Histogram h{};
    for (auto p : img) h[p]++;
    return h;
}

Image hist_equalize(const Image& img, const Histogram& hist) {
    std::array<std::uint32_t, kHistBins> cdf{};
    std::uint32_t run = 0;
    std::uint32_t cdf_min = 0;
    bool have_min = false;
    for (int v = 0; v < kHistBins; ++v) {
        run += hist[v];
        cdf[v] = run;
        if (!have_min && hist[v] > 0) {
            cdf_min = run;
            have_min = true;
        }
    }
    const std::uint32_t total = run;
    std::array<std::uint8_t, kHistBins> map{};
    for (int v = 0; v < kHistBins; ++v) {
        if (total == cdf_min) {
            map[v] = 255;  // single-valued image: everything lands in the top bin
        } else {
            double t = 255.0 * (static_cast<double>(cdf[v]) - cdf_min) /
                       (static_cast<double>(total) - cdf_min);
            map[v] = static_cast<std::uint8_t>(std::lround(std::clamp(t, 0.0, 255.0)));
        }
    }
    Image out{};
    for (std::size_t i = 0; i < img.size(); ++i) out[i] = map[img[i]];
    return out;
}

std::uint64_t dense_layer_multipliers(std::uint32_t n_in, std::uint32_t n_out,
                                      std::uint32_t reuse_factor) {
    if (reuse_factor == 0) throw ConfigError("reuse_factor must be >= 1");
    const std::uint64_t macs = static_cast<std::uint64_t>(n_in) * n_out;
    return (macs + reuse_factor - 1) / reuse_factor;
}

std::uint64_t dense_layer_cycles(std::uint32_t reuse_factor, std::uint32_t pipeline_depth) {
    if (reuse_factor == 0) throw ConfigError("reuse_factor must be >= 1");
    return static_cast<std::uint64_t>(reuse_factor) + pipeline_depth;
}

KernelKind kernel_kind_from_string(const std::string& name) {
    if (name == "copy") return KernelKind::Copy;
    if (name == "blend") return KernelKind::Blend;
    if (name == "median") return KernelKind::Median;
    if (name == "histogram") return KernelKind::HistKernel;
    if (name == "equalize") return KernelKind::Equalize;
    if (name == "mlp") return KernelKind::Mlp;
    if (name == "dense_stage") return KernelKind::DenseStage;
    if (name == "denoiser") return KernelKind::Denoiser;
    throw ConfigError("unknown kernel: " + name);
}

const char* to_string(KernelKind k) {
    switch (k) {
        case KernelKind::Copy: return "copy";
        case KernelKind::Blend: return "blend";
        case KernelKind::Median: return "median";
        case KernelKind::HistKernel: return "histogram";
        case KernelKind::Equalize: return "equalize";
        case KernelKind::Mlp: return "mlp";
        case KernelKind::DenseStage: return "dense_stage";
        case KernelKind::Denoiser: return "denoiser";
    }
    return "?";
}

Kernel::Kernel(KernelKind kind, std::shared_ptr<const MlpModel> model, int dense_layer,
               std::uint64_t default_alpha, std::uint32_t reuse_factor,
               std::uint32_t pipeline_depth)
    : kind_(kind),
      model_(std::move(model)),
      dense_layer_(dense_layer),
      default_alpha_(default_alpha),
      reuse_factor_(reuse_factor),
      pipeline_depth_(pipeline_depth) {
    switch (kind_) {
        case KernelKind::Mlp:
        case KernelKind::DenseStage:
        case KernelKind::Denoiser:
            if (!model_) throw ConfigError("kernel needs a model file");
            model_->check();
            if (kind_ == KernelKind::DenseStage &&
                (dense_layer_ < 0 ||
                 static_cast<std::size_t>(dense_layer_) >= model_->layer_count())) {
                throw ConfigError("dense_stage layer index out of range");
            }
            break;
        default:
            break;
    }
}

std::vector<std::uint32_t> Kernel::input_segments(const KernelTuning& t) const {
    switch (kind_) {
        case KernelKind::Copy:
        case KernelKind::Blend: {
            std::vector<std::uint32_t> segs;
            for (auto w : t.seg_words)
                if (w > 0) segs.push_back(static_cast<std::uint32_t>(w));
            if (segs.empty()) segs.push_back(static_cast<std::uint32_t>(
                t.out_words > 0 ? t.out_words : kImagePixels));
            return segs;
        }
        case KernelKind::Median:
        case KernelKind::HistKernel:
        case KernelKind::Denoiser:
        case KernelKind::Mlp:
            return {kImagePixels};
        case KernelKind::Equalize:
            return {kImagePixels, kHistBins};
        case KernelKind::DenseStage:
            return {model_->layer_sizes[static_cast<std::size_t>(dense_layer_)]};
    }
    return {};
}

std::uint32_t Kernel::output_words(const KernelTuning& t) const {
    switch (kind_) {
        case KernelKind::Copy: {
            auto segs = input_segments(t);
            std::uint32_t sum = 0;
            for (auto s : segs) sum += s;
            return sum;
        }
        case KernelKind::Blend:
            return static_cast<std::uint32_t>(t.out_words > 0 ? t.out_words : kImagePixels);
        case KernelKind::Median:
        case KernelKind::Equalize:
        case KernelKind::Denoiser:
            return kImagePixels;
        case KernelKind::HistKernel:
            return kHistBins;
        case KernelKind::Mlp:
            return model_->layer_sizes.back();
        case KernelKind::DenseStage:
            return model_->layer_sizes[static_cast<std::size_t>(dense_layer_) + 1];
    }
    return 0;
}

std::uint64_t Kernel::compute_cycles(const KernelTuning& t, std::uint32_t chunk_words) const {
    const std::uint32_t rf =
        t.reuse_factor > 0 ? static_cast<std::uint32_t>(t.reuse_factor) : reuse_factor_;
    switch (kind_) {
        case KernelKind::Mlp:
        case KernelKind::Denoiser: {
            std::uint64_t total = 0;
            for (std::size_t l = 0; l < model_->layer_count(); ++l) {
                total += dense_layer_cycles(rf, pipeline_depth_);
            }
            return total;
        }
        case KernelKind::DenseStage:
            return dense_layer_cycles(rf, pipeline_depth_);
        default: {
            const std::uint64_t alpha = t.alpha > 0 ? t.alpha : default_alpha_;
            return alpha * chunk_words;
        }
    }
}

std::vector<Word> Kernel::apply(const KernelTuning& t, std::span<const Word> in) const {
    switch (kind_) {
        case KernelKind::Copy:
            return std::vector<Word>(in.begin(), in.end());
        case KernelKind::Blend: {
            Word s1 = 0, s2 = 0;
            for (std::size_t i = 0; i < in.size(); ++i) {
                s1 += in[i];
                s2 += in[i] * (static_cast<Word>(i) + 1);
            }
            std::vector<Word> out(output_words(t));
            for (std::size_t j = 0; j < out.size(); ++j) {
                out[j] = s1 * (static_cast<Word>(j) + 1) + s2;
            }
            return out;
        }
        case KernelKind::Median:
            return words_from_image(noise_filter(image_from_words(in)));
        case KernelKind::HistKernel: {
            Histogram h = histogram(image_from_words(in));
            std::vector<Word> out(h.size());
            for (std::size_t i = 0; i < h.size(); ++i) out[i] = h[i];
            return out;
        }
        case KernelKind::Equalize: {
            Image img = image_from_words(in.subspan(0, kImagePixels));
            Histogram h{};
            for (int i = 0; i < kHistBins; ++i) {
                h[i] = static_cast<std::uint32_t>(in[kImagePixels + i]);
            }
            return words_from_image(hist_equalize(img, h));
        }
        case KernelKind::Mlp: {
            std::vector<Fx16> x(in.size());
            for (std::size_t i = 0; i < in.size(); ++i) {
                x[i] = fx_from_pixel(static_cast<std::uint8_t>(in[i] & 0xff));
            }
            return words_from_fx(mlp_infer(*model_, x));
        }
        case KernelKind::DenseStage: {
            std::vector<Fx16> x = fx_from_words(in);
            const bool hidden =
                static_cast<std::size_t>(dense_layer_) + 1 < model_->layer_count();
            return words_from_fx(
                dense_forward(*model_, static_cast<std::size_t>(dense_layer_), x, hidden));
        }
        case KernelKind::Denoiser: {
            std::vector<Fx16> x(in.size());
            for (std::size_t i = 0; i < in.size(); ++i) {
                x[i] = fx_from_pixel(static_cast<std::uint8_t>(in[i] & 0xff));
            }
            std::vector<Fx16> y = autoencoder_infer(*model_, x);
            std::vector<Word> out(y.size());
            for (std::size_t i = 0; i < y.size(); ++i) out[i] = pixel_from_fx(y[i]);
            return out;
        }
    }
    return {};
}

std::vector<Word> words_from_fx(const std::vector<Fx16>& v) {
    std::vector<Word> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = word_from_fx(v[i]);
    return out;
}

std::vector<Fx16> fx_from_words(std::span<const Word> w) {
    std::vector<Fx16> out(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) out[i] = fx_from_word(w[i]);
    return out;
}

std::vector<Word> words_from_image(const Image& img) {
    std::vector<Word> out(img.size());
    for (std::size_t i = 0; i < img.size(); ++i) out[i] = img[i];
    return out;
}

Image image_from_words(std::span<const Word> w) {
    if (w.size() != kImagePixels) throw SimError("image chunk must be 1024 words");
    Image img{};
    for (std::size_t i = 0; i < img.size(); ++i) {
        img[i] = static_cast<std::uint8_t>(w[i] & 0xff);
    }
    return img;
}

std::uint8_t pixel_from_fx(Fx16 v) {
    // v is pixel/256; recover the pixel with one nearest-even shift of Q2.
    std::int64_t p = Fx16::round_shift(v.raw(), 2);
    return static_cast<std::uint8_t>(std::clamp<std::int64_t>(p, 0, 255));
}

}  // namespace tilesim
