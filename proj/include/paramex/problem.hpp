#pragma once

// Problem-file loading.  A problem is a JSON object:
// {
//   "n": 2, "p": 1,
//   "equations": ["x1^2 + x2^2 - 26 + s1^2", "x1*x2 - 13 + s1"],
//   "X": [[0,5],[0,5]], "S": [[0,2]],
//   "center_p": [1], "guess_z": [2.5, 4.5],
//   "approx": {"kind": "tangent"},
//   "v": [1,1], "y": [1]
// }
// Secant approximations add "x1": [...], "s1": [...] to "approx"; entries may
// be numbers or constant expressions such as "sqrt(13)".  Custom linear
// approximations pass "theta": [[...], ...].

#include <optional>
#include <string>

#include "paramex/parametric.hpp"

namespace paramex {

struct ApproxSpec {
    ApproxFn::Kind kind = ApproxFn::Kind::tangent;
    std::optional<RealVector> x1;
    std::optional<RealVector> s1;
    std::optional<RealMatrix> theta;
};

struct Problem {
    System sys;
    RealVector center_p;
    std::optional<RealVector> guess_z;
    ApproxSpec approx;
    std::optional<RealVector> v;
    std::optional<RealVector> y;
    std::string name;
    std::string source_text;  // original JSON, echoed into reports
};

Problem load_problem(const std::string& json_text);
Problem load_problem_file(const std::string& path);

// The system part of a problem description (equations, dimensions, domains).
System parse_system(const std::string& json_text);

}  // namespace paramex
