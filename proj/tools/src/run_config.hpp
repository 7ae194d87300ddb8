#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "contagion/params.hpp"

namespace contagion::cli {

using VPanel = std::vector<std::pair<double, double>>;

struct SimulateBlock {
    std::optional<double> horizon;
    std::optional<std::size_t> paths;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> algorithm;
    std::optional<int> generations;
    std::optional<double> dt;  ///< spacing of the intensity CSV
};

struct LaplaceBlock {
    VPanel v;
    std::optional<int> n;
    std::optional<double> tol;
};

struct VerifyBlock {
    std::optional<std::size_t> paths;
    std::optional<double> horizon;
    std::optional<double> burn_in;
    std::optional<std::uint64_t> seed;
    std::optional<double> z_threshold;
    VPanel v;
};

struct OutputBlock {
    std::optional<std::string> dir;
    std::vector<std::string> formats;
};

/// A config file: the model plus optional per-subcommand blocks.
/// A bare model object (no "model" key) is accepted as well.
struct RunConfig {
    ModelParams model;
    SimulateBlock simulate;
    LaplaceBlock laplace;
    VerifyBlock verify;
    OutputBlock output;
};

/// Throws ValidationError with a line-anchored message for syntax errors
/// and a JSON-pointer message for schema errors.
RunConfig parse_run_config(const std::string& text);
RunConfig load_run_config(const std::string& path);

}  // namespace contagion::cli
