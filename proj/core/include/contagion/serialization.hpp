#pragma once

#include <string>
#include <string_view>

#include "contagion/params.hpp"

namespace contagion {

// JSON schema for ModelParams:
//
//   {
//     "delta1": 2.0, "delta2": 2.0,
//     "rho1": 1.0,   "rho2": 1.0,
//     "lambda0": [0.0, 0.0],
//     "h1":  {"kind": "exponential", "params": {"rate": 1.0}},
//     "h2":  {"kind": "point_mass",  "params": {"value": 1.0}},
//     "g11": {"kind": "gamma",       "params": {"shape": 2.0, "scale": 0.25}},
//     "g12": {"kind": "zero",        "params": {}},
//     "g21": ..., "g22": ...
//   }
//
// All eleven keys are required; unknown keys are rejected.

std::string params_to_json(const ModelParams& params, int indent = 2);

/// Parses the schema above. Syntax errors carry line and column; schema
/// errors carry the JSON pointer of the offending value.
ModelParams params_from_json(std::string_view text);

std::string mark_to_json(const MarkDistribution& dist);

/// Stable 64-bit FNV-1a hash of the compact canonical JSON form.
std::string params_hash(const ModelParams& params);

}  // namespace contagion
