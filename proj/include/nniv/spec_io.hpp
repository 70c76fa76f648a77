#pragma once

#include <cmath>
#include <fstream>
#include <limits>
#include <string>

#include <json.hpp>

#include "nniv/errors.hpp"
#include "nniv/interval.hpp"
#include "nniv/unsafe_region.hpp"

namespace nniv {

/// A verification problem as stored on disk: the unsafe region, the input
/// box and the bisection tolerance.
struct ProblemSpec {
    UnsafeRegion unsafe;
    Box input;
    double epsilon = 0.0;
};

namespace detail {

// Endpoint inside an unsafe box: a finite number, or "inf"/"-inf".
inline double unsafe_endpoint(const nlohmann::json& j) {
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        throw ParseError("spec: bad endpoint string \"" + s + "\" (only \"inf\"/\"-inf\")");
    }
    if (!j.is_number()) throw ParseError("spec: endpoints must be numbers or \"inf\"/\"-inf\"");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw ParseError("spec: non-finite numeric endpoint");
    return v;
}

inline double finite_value(const nlohmann::json& j, const char* where) {
    if (!j.is_number()) throw ParseError(std::string("spec: expected a finite number for ") + where);
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw ParseError(std::string("spec: non-finite value for ") + where);
    return v;
}

inline Interval parse_pair(const nlohmann::json& j, bool allow_infinite, const char* where) {
    if (!j.is_array() || j.size() != 2)
        throw ParseError(std::string("spec: ") + where + " components must be [lo, hi] pairs");
    const double lo = allow_infinite ? unsafe_endpoint(j.at(0)) : finite_value(j.at(0), where);
    const double hi = allow_infinite ? unsafe_endpoint(j.at(1)) : finite_value(j.at(1), where);
    if (!(lo <= hi))
        throw ParseError(std::string("spec: ") + where + " has lo > hi");
    return Interval{lo, hi};
}

inline Box parse_box(const nlohmann::json& j, bool allow_infinite, const char* where) {
    if (!j.is_array() || j.empty())
        throw ParseError(std::string("spec: ") + where + " must be a non-empty array of pairs");
    Box box;
    for (const auto& pair : j) box.dims.push_back(parse_pair(pair, allow_infinite, where));
    return box;
}

inline nlohmann::json endpoint_to_json(double v) {
    if (std::isinf(v)) return v > 0 ? nlohmann::json("inf") : nlohmann::json("-inf");
    return nlohmann::json(v);
}

}  // namespace detail

inline ProblemSpec parse_spec(const nlohmann::json& doc) {
    if (!doc.is_object()) throw ParseError("spec: top level must be an object");
    if (!doc.contains("unsafe") || !doc.contains("input") || !doc.contains("epsilon"))
        throw ParseError("spec: needs \"unsafe\", \"input\" and \"epsilon\"");

    ProblemSpec spec;
    const auto& unsafe = doc.at("unsafe");
    if (!unsafe.is_object()) throw ParseError("spec: \"unsafe\" must be an object");
    if (unsafe.contains("boxes")) {
        const auto& boxes = unsafe.at("boxes");
        if (!boxes.is_array()) throw ParseError("spec: \"unsafe.boxes\" must be an array");
        for (const auto& b : boxes)
            spec.unsafe.boxes.push_back(detail::parse_box(b, true, "unsafe box"));
    }
    if (unsafe.contains("halfspaces")) {
        const auto& halfspaces = unsafe.at("halfspaces");
        if (!halfspaces.is_array()) throw ParseError("spec: \"unsafe.halfspaces\" must be an array");
        for (const auto& h : halfspaces) {
            if (!h.is_object() || !h.contains("a") || !h.contains("b"))
                throw ParseError("spec: half-spaces need \"a\" and \"b\"");
            Halfspace hs;
            const auto& a = h.at("a");
            if (!a.is_array() || a.empty())
                throw ParseError("spec: half-space \"a\" must be a non-empty array");
            for (const auto& c : a) hs.a.push_back(detail::finite_value(c, "halfspace a"));
            hs.b = detail::finite_value(h.at("b"), "halfspace b");
            spec.unsafe.halfspaces.push_back(std::move(hs));
        }
    }

    // Members of the unsafe region must agree on the output dimension.
    const std::size_t region_dim = spec.unsafe.dimension();
    if (region_dim > 0) spec.unsafe.require_dimension(region_dim);

    spec.input = detail::parse_box(doc.at("input"), false, "input box");
    spec.epsilon = detail::finite_value(doc.at("epsilon"), "epsilon");
    if (!(spec.epsilon > 0.0)) throw ParseError("spec: epsilon must be > 0");
    return spec;
}

inline ProblemSpec load_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("spec: cannot open \"" + path + "\"");
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("spec: \"" + path + "\": " + e.what());
    }
    return parse_spec(doc);
}

inline Box parse_box_json(const nlohmann::json& j, bool allow_infinite = false) {
    return detail::parse_box(j, allow_infinite, "box");
}

inline nlohmann::json box_to_json(const Box& box, bool allow_infinite = false) {
    nlohmann::json out = nlohmann::json::array();
    for (const Interval& d : box.dims) {
        if (allow_infinite)
            out.push_back({detail::endpoint_to_json(d.lo), detail::endpoint_to_json(d.hi)});
        else
            out.push_back({d.lo, d.hi});
    }
    return out;
}

inline nlohmann::json spec_to_json(const ProblemSpec& spec) {
    nlohmann::json boxes = nlohmann::json::array();
    for (const Box& b : spec.unsafe.boxes) boxes.push_back(box_to_json(b, true));
    nlohmann::json halfspaces = nlohmann::json::array();
    for (const Halfspace& h : spec.unsafe.halfspaces)
        halfspaces.push_back({{"a", h.a}, {"b", h.b}});
    return nlohmann::json{
        {"unsafe", {{"boxes", std::move(boxes)}, {"halfspaces", std::move(halfspaces)}}},
        {"input", box_to_json(spec.input)},
        {"epsilon", spec.epsilon}};
}

inline void save_spec(const ProblemSpec& spec, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("spec: cannot write \"" + path + "\"");
    out << spec_to_json(spec).dump(2) << "\n";
}

}  // namespace nniv
