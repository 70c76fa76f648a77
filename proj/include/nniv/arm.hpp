#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "nniv/errors.hpp"
#include "nniv/oracle.hpp"
#include "nniv/spec_io.hpp"

namespace nniv {

/// Planar two-link arm: link lengths and forward kinematics from joint
/// angles to the end-effector position.
struct ArmGeometry {
    double l1 = 10.0;
    double l2 = 10.0;
};

inline std::array<double, 2> arm_forward(const ArmGeometry& g, double theta1, double theta2) {
    return {g.l1 * std::cos(theta1) + g.l2 * std::cos(theta1 + theta2),
            g.l1 * std::sin(theta1) + g.l2 * std::sin(theta1 + theta2)};
}

/// The arm verification problem: joint angles range over
/// [pi/3, 2pi/3] x [pi/3, 2pi/3] and the position is safe inside
/// -14 <= x <= 3, 1 <= y <= 17. The unsafe region is the complement of
/// that rectangle, written as four unbounded boxes.
inline ProblemSpec make_arm_spec(double epsilon = 0.1) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("make_arm_spec: epsilon must be > 0");
    const double inf = std::numeric_limits<double>::infinity();
    const double lo = std::numbers::pi / 3.0;
    const double hi = 2.0 * std::numbers::pi / 3.0;

    ProblemSpec spec;
    spec.input = Box{Interval{lo, hi}, Interval{lo, hi}};
    spec.unsafe.boxes = {
        Box{Interval{-inf, -14.0}, Interval{-inf, inf}},  // too far left
        Box{Interval{3.0, inf}, Interval{-inf, inf}},     // too far right
        Box{Interval{-inf, inf}, Interval{-inf, 1.0}},    // too low
        Box{Interval{-inf, inf}, Interval{17.0, inf}},    // too high
    };
    spec.epsilon = epsilon;
    return spec;
}

/// Writes a (theta1, theta2, x, y) CSV over the full joint domain
/// [0, 2pi]^2, sampled uniformly at random with the documented generator.
/// Intended as training data for a demo kinematics model.
inline void write_arm_dataset(const ArmGeometry& g, const std::string& path,
                              std::uint64_t samples, std::uint64_t seed) {
    std::ofstream out(path);
    if (!out) throw ParseError("arm: cannot write \"" + path + "\"");
    out.precision(17);
    out << "theta1,theta2,x,y\n";
    std::mt19937_64 rng(seed);
    const double two_pi = 2.0 * std::numbers::pi;
    for (std::uint64_t s = 0; s < samples; ++s) {
        const double t1 = two_pi * uniform01(rng);
        const double t2 = two_pi * uniform01(rng);
        const auto [x, y] = arm_forward(g, t1, t2);
        out << t1 << "," << t2 << "," << x << "," << y << "\n";
    }
}

}  // namespace nniv
