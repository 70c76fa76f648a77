#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "nniv/interval.hpp"
#include "nniv/network.hpp"

namespace nniv {

/// Width-growth constant gamma = xi^L * prod_l ||W^l||_inf, with xi the
/// largest activation Lipschitz constant across layers and ||.||_inf the
/// max absolute row sum.
struct LipschitzBound {
    double gamma = 0.0;
    double xi = 1.0;
    std::vector<double> per_layer_norms;
};

inline double matrix_inf_norm(const Layer& layer) {
    double norm = 0.0;
    for (std::size_t i = 0; i < layer.outputs; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < layer.inputs; ++j) row += std::abs(layer.weight(i, j));
        norm = std::max(norm, row);
    }
    return norm;
}

inline LipschitzBound lipschitz_gamma(const Network& net) {
    LipschitzBound out;
    out.xi = 0.0;
    double norm_product = 1.0;
    for (const Layer& layer : net.layers) {
        out.xi = std::max(out.xi, activation_lipschitz(layer.activation));
        out.per_layer_norms.push_back(matrix_inf_norm(layer));
        norm_product *= out.per_layer_norms.back();
    }
    out.gamma = std::pow(out.xi, static_cast<double>(net.depth())) * norm_product;
    return out;
}

/// Single-layer interval extension. Per output neuron the pre-activation
/// endpoints pick the input endpoint by the weight sign (nonnegative
/// weight takes lo for the lower bound, hi for the upper; negative weight
/// swaps them), sum in ascending input order, add the bias, then map both
/// endpoints through the monotone activation.
inline Box layer_interval(const Layer& layer, const Box& in_box) {
    if (in_box.size() != layer.inputs)
        throw DimensionError("layer_interval: box has " + std::to_string(in_box.size()) +
                             " dimensions, layer expects " + std::to_string(layer.inputs));
    Box out;
    out.dims.resize(layer.outputs);
    for (std::size_t i = 0; i < layer.outputs; ++i) {
        double lo = 0.0;
        double hi = 0.0;
        const double* row = layer.weights.data() + i * layer.inputs;
        for (std::size_t j = 0; j < layer.inputs; ++j) {
            const double w = row[j];
            const Interval& x = in_box.dims[j];
            if (w >= 0.0) {
                lo += w * x.lo;
                hi += w * x.hi;
            } else {
                lo += w * x.hi;
                hi += w * x.lo;
            }
        }
        lo += layer.bias[i];
        hi += layer.bias[i];
        out.dims[i].lo = activation_eval(layer.activation, lo);
        out.dims[i].hi = activation_eval(layer.activation, hi);
    }
    return out;
}

/// Layer-by-layer interval extension of the whole network. Sound: for
/// every x in in_box, eval_network(net, x) lies in the result.
inline Box network_interval(const Network& net, const Box& in_box) {
    if (in_box.size() != net.input_dim())
        throw DimensionError("network_interval: box has " + std::to_string(in_box.size()) +
                             " dimensions, network expects " + std::to_string(net.input_dim()));
    Box cur = in_box;
    for (const Layer& layer : net.layers) cur = layer_interval(layer, cur);
    return cur;
}

/// Upper bound gamma * w(in_box) on the excess width of the interval
/// extension over the true image hull.
inline double excess_width_bound(const Network& net, const Box& in_box) {
    if (in_box.size() != net.input_dim())
        throw DimensionError("excess_width_bound: box/network dimension mismatch");
    return lipschitz_gamma(net).gamma * in_box.width();
}

}  // namespace nniv
