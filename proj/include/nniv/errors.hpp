#pragma once

#include <stdexcept>
#include <string>

namespace nniv {

// Malformed input file (bad JSON, bad value, missing key).
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Incompatible shapes: layer/layer, network/box, region/output.
struct DimensionError : std::runtime_error {
    explicit DimensionError(const std::string& what) : std::runtime_error(what) {}
};

// Activation name outside the supported catalog.
struct UnknownActivationError : ParseError {
    explicit UnknownActivationError(const std::string& what) : ParseError(what) {}
};

}  // namespace nniv
