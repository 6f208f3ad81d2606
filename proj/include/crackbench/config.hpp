#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "crackbench/classify.hpp"
#include "crackbench/enhance.hpp"
#include "crackbench/noise.hpp"

namespace crackbench {

struct SyntheticSpec {
    int n = 200;
    int size = 128;
    uint64_t seed = 42;
};

/// Built-in classifier settings; tau is calibrated on the clean train split
/// when unset.
struct BuiltinClassifierConfig {
    double gradient_threshold = 0.25;
    std::optional<double> density_threshold;
};

/// External model outputs: model -> ("<noise_id>/<method>" -> predictions CSV
/// path). Every declared grid cell must be covered for every model.
struct ExternalPredictionsConfig {
    std::map<std::string, std::map<std::string, std::string>> cells;
};

/// Full declarative description of one benchmark grid run.
struct ExperimentConfig {
    // Exactly one of the two dataset sources is set.
    std::optional<std::string> manifest_dir;
    std::optional<SyntheticSpec> synthetic;

    std::vector<NoiseSpec> noises;    // "none" is always prepended at run time
    std::vector<std::string> methods; // subset of {M1,M2,M3}, non-empty

    WienerParams wiener;
    UsmParams usm;

    // Exactly one of the two classifier modes is set.
    std::optional<BuiltinClassifierConfig> builtin;
    std::optional<ExternalPredictionsConfig> external;

    int resize_target = 224;
    bool scale_variance = false; // variance scaling in normalize; default off
    double split_ratio = 0.7;
    uint64_t seed = 42;
    std::string output_dir; // may be overridden by the CLI --out
};

/// Parses and schema-validates config JSON; errors name the offending path
/// (e.g. "config: /noises/0/density: must be in [0,1]").
ExperimentConfig parse_config_json(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);

/// Parses one NoiseSpec object, e.g. {"kind":"salt_pepper","density":0.05,
/// "seed":42} or {"kind":"motion_blur","length":9,"angle_deg":0}.
NoiseSpec parse_noise_json(const std::string& json_text, uint64_t default_seed = 0);

/// Parses {"window":[P,Q],"noise_variance":null|number}.
WienerParams parse_wiener_json(const std::string& json_text);

/// Parses {"sigma":s,"lambda":l}.
UsmParams parse_usm_json(const std::string& json_text);

} // namespace crackbench
