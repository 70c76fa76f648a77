#pragma once

// Shared helpers for the unit and acceptance suites: seeded network and
// box generators, an independent forward-pass reference, and subprocess
// plumbing for driving the CLI. Everything is deterministic given the
// seeds; mt19937_64 plus the 53-bit mapping in oracle.hpp is the only
// randomness source.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

#include "nniv/nniv.hpp"

namespace testsupport {

inline double uniform_in(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * nniv::uniform01(rng);
}

inline nniv::Activation pick_activation(std::mt19937_64& rng) {
    static constexpr std::array<nniv::Activation, 4> kinds = {
        nniv::Activation::relu, nniv::Activation::sigmoid, nniv::Activation::tanh,
        nniv::Activation::linear};
    return kinds[rng() % kinds.size()];
}

/// Network with the given layer sizes; weights and biases uniform in
/// [-scale, scale], one activation per layer.
inline nniv::Network random_network(std::mt19937_64& rng, const std::vector<std::size_t>& dims,
                                    const std::vector<nniv::Activation>& acts,
                                    double scale = 1.0) {
    std::vector<nniv::Layer> layers;
    for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
        const std::size_t out = dims[l + 1];
        const std::size_t in = dims[l];
        std::vector<double> w(out * in);
        std::vector<double> b(out);
        for (double& v : w) v = uniform_in(rng, -scale, scale);
        for (double& v : b) v = uniform_in(rng, -scale, scale);
        layers.emplace_back(out, in, std::move(w), std::move(b), acts[l]);
    }
    return nniv::Network(std::move(layers));
}

/// Shape draw used by the soundness suite: depth 1-6, widths 1-12,
/// activations mixed across layers.
inline nniv::Network random_mixed_network(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const std::size_t depth = 1 + rng() % 6;
    std::vector<std::size_t> dims(depth + 1);
    for (std::size_t& d : dims) d = 1 + rng() % 12;
    std::vector<nniv::Activation> acts(depth);
    for (auto& a : acts) a = pick_activation(rng);
    return random_network(rng, dims, acts);
}

inline nniv::Box random_box(std::mt19937_64& rng, std::size_t n, double center_amp = 3.0,
                            double min_halfwidth = 1e-3, double max_halfwidth = 2.0) {
    nniv::Box box;
    for (std::size_t i = 0; i < n; ++i) {
        const double c = uniform_in(rng, -center_amp, center_amp);
        const double h = uniform_in(rng, min_halfwidth, max_halfwidth);
        box.dims.push_back(nniv::Interval(c - h, c + h));
    }
    return box;
}

/// Box drawn inside another box, for inclusion-monotonicity checks.
inline nniv::Box random_subbox(std::mt19937_64& rng, const nniv::Box& outer) {
    nniv::Box inner;
    for (const nniv::Interval& d : outer.dims) {
        double a = uniform_in(rng, d.lo, d.hi);
        double b = uniform_in(rng, d.lo, d.hi);
        if (a > b) std::swap(a, b);
        inner.dims.push_back(nniv::Interval(a, b));
    }
    return inner;
}

// ---------------------------------------------------------------------
// Independent forward pass: column-order accumulation starting from the
// bias, and different closed forms for the activations. Used as the
// second route when checking eval_network.

inline double reference_activation(nniv::Activation kind, double z) {
    switch (kind) {
        case nniv::Activation::relu: return std::max(z, 0.0);
        case nniv::Activation::sigmoid: return 0.5 * (1.0 + std::tanh(0.5 * z));
        case nniv::Activation::tanh: {
            if (z > 20.0) return 1.0;
            if (z < -20.0) return -1.0;
            const double e = std::expm1(2.0 * z);
            return e / (e + 2.0);
        }
        case nniv::Activation::linear: return z;
    }
    return z;
}

inline std::vector<double> reference_eval(const nniv::Network& net,
                                          const std::vector<double>& x) {
    std::vector<double> cur = x;
    for (const nniv::Layer& layer : net.layers) {
        std::vector<double> acc = layer.bias;
        for (std::size_t j = 0; j < layer.inputs; ++j)
            for (std::size_t i = 0; i < layer.outputs; ++i)
                acc[i] += layer.weight(i, j) * cur[j];
        for (double& v : acc) v = reference_activation(layer.activation, v);
        cur = std::move(acc);
    }
    return cur;
}

// ---------------------------------------------------------------------
// Worst-case bisection depth: total halvings needed to push every
// dimension's width to the tolerance.

inline std::uint32_t depth_bound(const nniv::Box& box, double epsilon) {
    std::uint32_t bound = 0;
    for (const nniv::Interval& d : box.dims) {
        double w = d.width();
        while (w > epsilon) {
            w *= 0.5;
            ++bound;
        }
    }
    return bound;
}

// ---------------------------------------------------------------------
// Scenario fixtures shared between the unit and acceptance suites.

/// The random-network comparison fixture: 2 inputs, five hidden sigmoid
/// layers of 10 neurons, 2 linear outputs. The seed and output scale are
/// pinned so the instance is safe for the [1,inf)^2 region over
/// [-5,5]^2 but forces real specification-guided refinement.
inline nniv::Network make_comparison_network() {
    std::mt19937_64 rng(2024);
    const std::vector<std::size_t> dims = {2, 10, 10, 10, 10, 10, 2};
    std::vector<nniv::Activation> acts(6, nniv::Activation::sigmoid);
    acts.back() = nniv::Activation::linear;
    nniv::Network net = random_network(rng, dims, acts);
    // Rescale the output layer so the image approaches the unsafe corner
    // without entering it.
    for (double& w : net.layers.back().weights) w *= 0.55;
    for (double& b : net.layers.back().bias) b *= 0.55;
    return net;
}

inline nniv::Box comparison_input_box() {
    return nniv::Box{nniv::Interval(-5.0, 5.0), nniv::Interval(-5.0, 5.0)};
}

inline nniv::UnsafeRegion comparison_region() {
    const double inf = std::numeric_limits<double>::infinity();
    nniv::UnsafeRegion region;
    region.boxes.push_back(nniv::Box{nniv::Interval(1.0, inf), nniv::Interval(1.0, inf)});
    return region;
}

struct VerificationInstance {
    nniv::Network net;
    nniv::Box input;
    nniv::UnsafeRegion region;
    double epsilon = 0.02;
};

/// Seeded two-input verification problems with thresholded corner
/// regions; even indices aim past the sampled image (safe side), odd
/// indices cut into it.
inline VerificationInstance verification_instance(std::uint32_t index) {
    std::mt19937_64 rng(90'000 + index);
    const std::size_t hidden = 4 + rng() % 7;
    const std::vector<std::size_t> dims = {2, hidden, 2};
    const nniv::Activation hidden_act =
        rng() % 2 == 0 ? nniv::Activation::tanh : nniv::Activation::sigmoid;
    VerificationInstance inst;
    inst.net = random_network(rng, dims, {hidden_act, nniv::Activation::linear}, 1.5);
    inst.input = random_box(rng, 2, 2.0, 0.5, 1.5);

    // Largest sampled min-coordinate: a point lands in [q,inf)^2 exactly
    // when both outputs reach q.
    double max_min = -std::numeric_limits<double>::infinity();
    for (int s = 0; s < 2000; ++s) {
        std::vector<double> x(2);
        for (std::size_t i = 0; i < 2; ++i)
            x[i] = uniform_in(rng, inst.input.dims[i].lo, inst.input.dims[i].hi);
        const std::vector<double> y = nniv::eval_network(inst.net, x);
        max_min = std::max(max_min, std::min(y[0], y[1]));
    }
    const double q = index % 2 == 0 ? max_min + 0.4 : max_min - 0.1;
    const double inf = std::numeric_limits<double>::infinity();
    inst.region.boxes.push_back(nniv::Box{nniv::Interval(q, inf), nniv::Interval(q, inf)});
    return inst;
}

struct ClassifierInstance {
    nniv::Network net;
    std::vector<double> image;
    std::array<std::size_t, 2> window;
    double delta = 0.25;
    std::size_t label = 0;
    double epsilon = 0.02;
};

/// Seeded tiny classifiers with a 2-D perturbation window; the label is
/// the network's own prediction at the unperturbed image.
inline ClassifierInstance classifier_instance(std::uint32_t index) {
    std::mt19937_64 rng(70'000 + index);
    ClassifierInstance inst;
    const std::size_t inputs = 2 + rng() % 3;
    const std::size_t classes = 2 + rng() % 2;
    const std::size_t hidden = 3 + rng() % 5;
    const nniv::Activation hidden_act =
        rng() % 2 == 0 ? nniv::Activation::tanh : nniv::Activation::relu;
    inst.net = random_network(rng, {inputs, hidden, classes},
                              {hidden_act, nniv::Activation::linear}, 1.5);
    inst.image.resize(inputs);
    for (double& v : inst.image) v = uniform_in(rng, 0.0, 1.0);
    inst.window[0] = rng() % inputs;
    inst.window[1] = (inst.window[0] + 1 + rng() % (inputs - 1)) % inputs;
    inst.delta = uniform_in(rng, 0.1, 0.6);
    inst.epsilon = inst.delta / 16.0;

    const std::vector<double> logits = nniv::eval_network(inst.net, inst.image);
    inst.label = 0;
    for (std::size_t k = 1; k < logits.size(); ++k)
        if (logits[k] > logits[inst.label]) inst.label = k;
    return inst;
}

/// Exhaustive grid over the two windowed inputs: true iff no grid point
/// moves the argmax off the label (ties count as a flip).
inline bool classifier_grid_robust(const ClassifierInstance& inst, std::size_t per_dim = 200) {
    std::vector<double> x = inst.image;
    for (std::size_t a = 0; a < per_dim; ++a) {
        for (std::size_t b = 0; b < per_dim; ++b) {
            const double fa = static_cast<double>(a) / static_cast<double>(per_dim - 1);
            const double fb = static_cast<double>(b) / static_cast<double>(per_dim - 1);
            x[inst.window[0]] = inst.image[inst.window[0]] + inst.delta * (2.0 * fa - 1.0);
            x[inst.window[1]] = inst.image[inst.window[1]] + inst.delta * (2.0 * fb - 1.0);
            const std::vector<double> y = nniv::eval_network(inst.net, x);
            for (std::size_t k = 0; k < y.size(); ++k)
                if (k != inst.label && y[k] >= y[inst.label]) return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------------
// Filesystem and subprocess plumbing.

inline std::filesystem::path scratch_dir() {
    static const std::filesystem::path dir = [] {
        auto d = std::filesystem::temp_directory_path() /
                 ("nniv-tests-" + std::to_string(::getpid()));
        std::filesystem::create_directories(d);
        return d;
    }();
    return dir;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

struct CliResult {
    int exit_code = -1;
    std::string stdout_text;
};

inline std::string shell_quote(const std::string& s) {
    std::string out = "'";
    for (char c : s) {
        if (c == '\'')
            out += "'\\''";
        else
            out += c;
    }
    return out + "'";
}

/// Runs the CLI binary, capturing stdout; stderr goes to a scratch file
/// so expected failures stay quiet.
inline CliResult run_cli(const std::string& binary, const std::vector<std::string>& args) {
    std::string cmd = shell_quote(binary);
    for (const std::string& a : args) cmd += " " + shell_quote(a);
    cmd += " 2>>" + shell_quote((scratch_dir() / "cli_stderr.log").string());

    CliResult result;
    FILE* pipe = ::popen(cmd.c_str(), "r");
    if (pipe == nullptr) return result;
    char buffer[4096];
    std::size_t n = 0;
    while ((n = ::fread(buffer, 1, sizeof buffer, pipe)) > 0)
        result.stdout_text.append(buffer, n);
    const int status = ::pclose(pipe);
    if (WIFEXITED(status)) result.exit_code = WEXITSTATUS(status);
    return result;
}

}  // namespace testsupport
