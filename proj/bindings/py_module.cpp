// Copyright (c) 2026 the tilesim authors
// SPDX-License-Identifier: Apache-2.0

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tilesim/runtime.hpp"

namespace py = pybind11;
using namespace tilesim;

namespace {

MlpModel model_from_lists(const std::vector<std::uint32_t>& layers,
                          const std::vector<std::vector<double>>& weights,
                          const std::vector<std::vector<double>>& biases) {
    MlpModel m;
    m.layer_sizes = layers;
    for (const auto& lw : weights) {
        std::vector<Fx16> w(lw.size());
        for (std::size_t i = 0; i < lw.size(); ++i) w[i] = Fx16::from_double(lw[i]);
        m.weights.push_back(std::move(w));
    }
    for (const auto& lb : biases) {
        std::vector<Fx16> b(lb.size());
        for (std::size_t i = 0; i < lb.size(); ++i) b[i] = Fx16::from_double(lb[i]);
        m.biases.push_back(std::move(b));
    }
    m.check();
    return m;
}

std::vector<double> to_doubles(const std::vector<Fx16>& v) {
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i].to_double();
    return out;
}

std::vector<Fx16> to_fx(const std::vector<double>& v) {
    std::vector<Fx16> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = Fx16::from_double(v[i]);
    return out;
}

Image image_from_list(const std::vector<int>& pixels) {
    if (pixels.size() != kImagePixels) throw std::invalid_argument("image needs 1024 pixels");
    Image img{};
    for (std::size_t i = 0; i < img.size(); ++i) {
        img[i] = static_cast<std::uint8_t>(pixels[i] & 0xff);
    }
    return img;
}

py::dict report_to_dict(const RunReport& r) {
    py::dict d;
    d["soc"] = r.soc;
    d["dataflow"] = r.dataflow;
    d["mode"] = r.mode;
    d["frames"] = r.frames;
    d["seed"] = r.seed;
    d["total_cycles"] = r.total_cycles;
    d["clock_mhz"] = r.clock_mhz;
    d["frames_per_second"] = r.frames_per_second;
    d["dram_read_words"] = r.dram_read_words;
    d["dram_write_words"] = r.dram_write_words;
    d["dram_total_words"] = r.dram_total_words();
    d["total_link_flits"] = r.total_link_flits;
    d["max_queue_occupancy"] = r.max_queue_occupancy;
    d["fingerprint"] = r.fingerprint;
    py::list busy;
    for (const auto& n : r.node_busy) {
        py::dict e;
        e["node"] = n.node;
        e["instance"] = n.instance;
        e["tile"] = py::make_tuple(n.tile.x, n.tile.y);
        e["busy_cycles"] = n.busy_cycles;
        e["chunks"] = n.chunks;
        busy.append(e);
    }
    d["node_busy"] = busy;
    d["csv_row"] = r.csv_row();
    return d;
}

py::dict run_one(const std::string& soc_path, const std::string& flow_path,
                 const std::string& mode, std::uint64_t frames, std::uint64_t seed,
                 bool with_outputs) {
    SocConfig soc = SocConfig::from_file(soc_path);
    DataflowGraph graph = DataflowGraph::from_file(flow_path);
    std::vector<std::vector<Word>> outputs;
    RunReport r = run_experiment(soc, graph, mode_from_string(mode), frames, seed, nullptr,
                                 with_outputs ? &outputs : nullptr);
    py::dict d = report_to_dict(r);
    if (with_outputs) d["outputs"] = outputs;
    return d;
}

}  // namespace

PYBIND11_MODULE(_tilesim, m) {
    m.doc() = "cycle-level tile-based SoC simulator with p2p accelerator pipelines";

    m.def(
        "route_xy",
        [](std::pair<int, int> src, std::pair<int, int> dst, int cols, int rows) {
            auto hops = route_xy({src.first, src.second}, {dst.first, dst.second}, {cols, rows});
            std::vector<std::pair<int, int>> out;
            for (auto c : hops) out.emplace_back(c.x, c.y);
            return out;
        },
        py::arg("src"), py::arg("dst"), py::arg("cols"), py::arg("rows"),
        "XY dimension-order route; returns the hop list excluding src, including dst");

    m.def(
        "noise_filter",
        [](const std::vector<int>& img) {
            Image out = noise_filter(image_from_list(img));
            return std::vector<int>(out.begin(), out.end());
        },
        py::arg("image"), "3x3 median filter over a 32x32 image (edges replicated)");

    m.def(
        "histogram",
        [](const std::vector<int>& img) {
            Histogram h = histogram(image_from_list(img));
            return std::vector<std::uint32_t>(h.begin(), h.end());
        },
        py::arg("image"), "256-bin pixel histogram");

    m.def(
        "hist_equalize",
        [](const std::vector<int>& img, const std::vector<std::uint32_t>& hist) {
            if (hist.size() != kHistBins) throw std::invalid_argument("need 256 bins");
            Histogram h{};
            for (std::size_t i = 0; i < h.size(); ++i) h[i] = hist[i];
            Image out = hist_equalize(image_from_list(img), h);
            return std::vector<int>(out.begin(), out.end());
        },
        py::arg("image"), py::arg("hist"), "CDF remap equalization");

    m.def(
        "mlp_infer",
        [](const std::vector<std::uint32_t>& layers,
           const std::vector<std::vector<double>>& weights,
           const std::vector<std::vector<double>>& biases, const std::vector<double>& input) {
            return to_doubles(mlp_infer(model_from_lists(layers, weights, biases),
                                        to_fx(input)));
        },
        py::arg("layers"), py::arg("weights"), py::arg("biases"), py::arg("input"),
        "16-bit fixed-point dense inference; weights are flat row-major per layer");

    m.def(
        "autoencoder_infer",
        [](const std::vector<std::uint32_t>& layers,
           const std::vector<std::vector<double>>& weights,
           const std::vector<std::vector<double>>& biases, const std::vector<double>& input) {
            return to_doubles(
                autoencoder_infer(model_from_lists(layers, weights, biases), to_fx(input)));
        },
        py::arg("layers"), py::arg("weights"), py::arg("biases"), py::arg("input"));

    m.def(
        "quantize",
        [](const std::vector<double>& v) { return to_doubles(to_fx(v)); },
        py::arg("values"), "round values to the s6.10 fixed-point grid");

    m.def("dense_layer_cycles", &dense_layer_cycles, py::arg("reuse_factor"),
          py::arg("pipeline_depth"));
    m.def("dense_layer_multipliers", &dense_layer_multipliers, py::arg("n_in"),
          py::arg("n_out"), py::arg("reuse_factor"));

    m.def(
        "validate",
        [](const std::string& soc_path, const std::string& flow_path) {
            SocConfig soc = SocConfig::from_file(soc_path);
            DataflowGraph graph = DataflowGraph::from_file(flow_path);
            SocSim sim(soc);
            Runtime rt(sim);
            std::vector<std::string> out;
            for (const auto& i : rt.check(graph, nullptr)) {
                out.push_back("[" + i.where + "] " + i.message);
            }
            return out;
        },
        py::arg("soc"), py::arg("dataflow"),
        "validate a dataflow against an SoC; returns a list of issues (empty = valid)");

    m.def("run_experiment", &run_one, py::arg("soc"), py::arg("dataflow"), py::arg("mode"),
          py::arg("frames") = 64, py::arg("seed") = 1, py::arg("with_outputs") = false,
          "run one experiment and return the metrics report as a dict");

    m.def(
        "compare",
        [](const std::string& soc_path, const std::string& flow_path, std::uint64_t frames,
           std::uint64_t seed) {
            py::list out;
            for (const char* mode : {"serial", "pipe", "p2p"}) {
                out.append(run_one(soc_path, flow_path, mode, frames, seed, false));
            }
            return out;
        },
        py::arg("soc"), py::arg("dataflow"), py::arg("frames") = 64, py::arg("seed") = 1,
        "run all three execution modes and return their reports");

    py::register_exception<ValidationError>(m, "ValidationError");
    py::register_exception<DeadlockError>(m, "DeadlockError");
}
