#pragma once

#include <cmath>
#include <fstream>
#include <string>

#include <json.hpp>

#include "nniv/errors.hpp"
#include "nniv/network.hpp"

namespace nniv {

namespace detail {

inline double finite_number(const nlohmann::json& j, const char* where) {
    if (!j.is_number()) throw ParseError(std::string("model: expected a number in ") + where);
    const double v = j.get<double>();
    if (!std::isfinite(v))
        throw ParseError(std::string("model: non-finite value in ") + where);
    return v;
}

inline Layer parse_layer(const nlohmann::json& j, std::size_t index) {
    const std::string where = "layer " + std::to_string(index);
    if (!j.is_object()) throw ParseError("model: " + where + " is not an object");
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (key != "weights" && key != "bias" && key != "activation")
            throw ParseError("model: " + where + " has unexpected key \"" + key + "\"");
    }
    if (!j.contains("weights") || !j.contains("bias") || !j.contains("activation"))
        throw ParseError("model: " + where + " needs \"weights\", \"bias\" and \"activation\"");

    const auto& weights = j.at("weights");
    if (!weights.is_array() || weights.empty())
        throw ParseError("model: " + where + " \"weights\" must be a non-empty array of rows");
    const std::size_t rows = weights.size();
    if (!weights.at(0).is_array() || weights.at(0).empty())
        throw ParseError("model: " + where + " weight rows must be non-empty arrays");
    const std::size_t cols = weights.at(0).size();

    Layer layer;
    layer.outputs = rows;
    layer.inputs = cols;
    layer.weights.reserve(rows * cols);
    for (std::size_t r = 0; r < rows; ++r) {
        const auto& row = weights.at(r);
        if (!row.is_array() || row.size() != cols)
            throw DimensionError("model: " + where + " weight row " + std::to_string(r) +
                                 " has " + std::to_string(row.size()) + " entries, expected " +
                                 std::to_string(cols));
        for (const auto& entry : row)
            layer.weights.push_back(finite_number(entry, where.c_str()));
    }

    const auto& bias = j.at("bias");
    if (!bias.is_array())
        throw ParseError("model: " + where + " \"bias\" must be an array");
    if (bias.size() != rows)
        throw DimensionError("model: " + where + " bias has " + std::to_string(bias.size()) +
                             " entries, weight matrix has " + std::to_string(rows) + " rows");
    for (const auto& entry : bias) layer.bias.push_back(finite_number(entry, where.c_str()));

    const auto& act = j.at("activation");
    if (!act.is_string())
        throw ParseError("model: " + where + " \"activation\" must be a string");
    layer.activation = activation_from_name(act.get<std::string>());
    return layer;
}

}  // namespace detail

/// Parses a network from the JSON model format:
///   {"layers": [{"weights": [[...]], "bias": [...], "activation": "relu"}, ...]}
/// Dimensions are inferred from the arrays; layer objects admit no extra
/// keys and all numbers must be finite.
inline Network parse_model(const nlohmann::json& doc) {
    if (!doc.is_object() || !doc.contains("layers"))
        throw ParseError("model: top level must be an object with a \"layers\" array");
    const auto& layers = doc.at("layers");
    if (!layers.is_array() || layers.empty())
        throw ParseError("model: \"layers\" must be a non-empty array");
    std::vector<Layer> parsed;
    parsed.reserve(layers.size());
    for (std::size_t i = 0; i < layers.size(); ++i)
        parsed.push_back(detail::parse_layer(layers.at(i), i));
    return Network(std::move(parsed));  // validates cross-layer dimensions
}

inline Network load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("model: cannot open \"" + path + "\"");
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("model: \"" + path + "\": " + e.what());
    }
    return parse_model(doc);
}

/// Serializes a network in the same format load_model reads.
inline nlohmann::json model_to_json(const Network& net) {
    nlohmann::json layers = nlohmann::json::array();
    for (const Layer& l : net.layers) {
        nlohmann::json rows = nlohmann::json::array();
        for (std::size_t i = 0; i < l.outputs; ++i) {
            nlohmann::json row = nlohmann::json::array();
            for (std::size_t j = 0; j < l.inputs; ++j) row.push_back(l.weight(i, j));
            rows.push_back(std::move(row));
        }
        layers.push_back({{"weights", std::move(rows)},
                          {"bias", l.bias},
                          {"activation", activation_name(l.activation)}});
    }
    return nlohmann::json{{"layers", std::move(layers)}};
}

inline void save_model(const Network& net, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("model: cannot write \"" + path + "\"");
    out << model_to_json(net).dump(2) << "\n";
}

}  // namespace nniv
