#pragma once

#include <cmath>
#include <string>
#include <string_view>

#include "nniv/errors.hpp"

namespace nniv {

/// Supported activation kinds. All are monotone nondecreasing, which is
/// what makes exact endpoint mapping [phi(lo), phi(hi)] valid.
enum class Activation { relu, sigmoid, tanh, linear };

inline double activation_eval(Activation kind, double z) {
    switch (kind) {
        case Activation::relu: return z > 0.0 ? z : 0.0;
        case Activation::sigmoid: return 1.0 / (1.0 + std::exp(-z));
        case Activation::tanh: return std::tanh(z);
        case Activation::linear: return z;
    }
    throw std::invalid_argument("activation_eval: bad kind");
}

/// Global Lipschitz constant xi of the activation: relu/tanh/linear 1,
/// sigmoid 1/4 (slope at z = 0).
inline double activation_lipschitz(Activation kind) {
    return kind == Activation::sigmoid ? 0.25 : 1.0;
}

inline const char* activation_name(Activation kind) {
    switch (kind) {
        case Activation::relu: return "relu";
        case Activation::sigmoid: return "sigmoid";
        case Activation::tanh: return "tanh";
        case Activation::linear: return "linear";
    }
    return "?";
}

inline Activation activation_from_name(std::string_view name) {
    if (name == "relu") return Activation::relu;
    if (name == "sigmoid") return Activation::sigmoid;
    if (name == "tanh") return Activation::tanh;
    if (name == "linear") return Activation::linear;
    throw UnknownActivationError("unknown activation \"" + std::string(name) +
                                 "\" (supported: relu, sigmoid, tanh, linear)");
}

}  // namespace nniv
