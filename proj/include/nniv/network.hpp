#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nniv/activation.hpp"
#include "nniv/errors.hpp"

namespace nniv {

/// One dense layer y = phi(W x + theta). Weights are stored row-major,
/// one row per output neuron.
struct Layer {
    std::size_t outputs = 0;
    std::size_t inputs = 0;
    std::vector<double> weights;  // outputs x inputs, row-major
    std::vector<double> bias;     // length outputs
    Activation activation = Activation::linear;

    Layer() = default;
    Layer(std::size_t out, std::size_t in, std::vector<double> w, std::vector<double> b,
          Activation act)
        : outputs(out), inputs(in), weights(std::move(w)), bias(std::move(b)), activation(act) {
        validate();
    }

    double weight(std::size_t i, std::size_t j) const { return weights[i * inputs + j]; }

    void validate() const {
        if (outputs == 0 || inputs == 0)
            throw DimensionError("layer: zero-sized weight matrix");
        if (weights.size() != outputs * inputs)
            throw DimensionError("layer: weight matrix is " + std::to_string(weights.size()) +
                                 " entries, expected " + std::to_string(outputs * inputs));
        if (bias.size() != outputs)
            throw DimensionError("layer: bias has " + std::to_string(bias.size()) +
                                 " entries, weight matrix has " + std::to_string(outputs) +
                                 " rows");
        for (double w : weights)
            if (!std::isfinite(w)) throw ParseError("layer: non-finite weight entry");
        for (double b : bias)
            if (!std::isfinite(b)) throw ParseError("layer: non-finite bias entry");
    }
};

/// A feedforward network: an ordered list of dimension-compatible layers.
struct Network {
    std::vector<Layer> layers;

    Network() = default;
    explicit Network(std::vector<Layer> ls) : layers(std::move(ls)) { validate(); }

    std::size_t depth() const { return layers.size(); }
    std::size_t input_dim() const { return layers.front().inputs; }
    std::size_t output_dim() const { return layers.back().outputs; }

    void validate() const {
        if (layers.empty()) throw DimensionError("network: needs at least one layer");
        for (const Layer& l : layers) l.validate();
        for (std::size_t l = 1; l < layers.size(); ++l) {
            if (layers[l].inputs != layers[l - 1].outputs)
                throw DimensionError("network: layer " + std::to_string(l) + " expects " +
                                     std::to_string(layers[l].inputs) + " inputs but layer " +
                                     std::to_string(l - 1) + " produces " +
                                     std::to_string(layers[l - 1].outputs));
        }
    }
};

/// Evaluates one layer. Sums run over ascending input index, bias added
/// last; interval propagation mirrors this order exactly.
inline std::vector<double> eval_layer(const Layer& layer, std::span<const double> x) {
    if (x.size() != layer.inputs)
        throw DimensionError("eval_layer: input has " + std::to_string(x.size()) +
                             " entries, layer expects " + std::to_string(layer.inputs));
    std::vector<double> y(layer.outputs);
    for (std::size_t i = 0; i < layer.outputs; ++i) {
        double acc = 0.0;
        const double* row = layer.weights.data() + i * layer.inputs;
        for (std::size_t j = 0; j < layer.inputs; ++j) acc += row[j] * x[j];
        y[i] = activation_eval(layer.activation, acc + layer.bias[i]);
    }
    return y;
}

/// Pointwise forward pass through the whole network.
inline std::vector<double> eval_network(const Network& net, std::span<const double> x) {
    if (x.size() != net.input_dim())
        throw DimensionError("eval_network: input has " + std::to_string(x.size()) +
                             " entries, network expects " + std::to_string(net.input_dim()));
    std::vector<double> cur(x.begin(), x.end());
    for (const Layer& layer : net.layers) cur = eval_layer(layer, cur);
    return cur;
}

}  // namespace nniv
