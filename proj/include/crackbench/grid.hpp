#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "crackbench/config.hpp"
#include "crackbench/dataset.hpp"
#include "crackbench/metrics.hpp"
#include "crackbench/report.hpp"

namespace crackbench {

/// Outcome of one grid run. `rows` excludes the reference; `reference`
/// holds the per-model no-noise M1 rows computed first. measured_ct_minutes
/// is wall-clock time per row (reference rows first), in row order.
struct GridResult {
    std::vector<ResultRow> rows;
    std::vector<MethodResult> reference;
    std::vector<double> measured_ct_minutes;
    ReportBundle bundle;
};

/// Runs the (noise x method) grid: degrade -> enhance (M1 none, M2 Wiener,
/// M3 USM) -> resize -> normalize -> classify -> metrics, computes the
/// efficiency index per noise condition and percent change against each
/// model's reference, and, when out is non-empty, writes the report bundle
/// plus the timings.csv sidecar. Nothing is written if any cell fails.
GridResult run_grid(const ExperimentConfig& config, const std::filesystem::path& out);

/// Deterministic per-image degradation seed: fnv1a64(image_id) ^ base_seed.
uint64_t per_image_seed(const std::string& image_id, uint64_t base_seed);

/// One M1/M2/M3 enhancement step (M1 passes through).
Image apply_method(const Image& img, const std::string& method_id,
                   const WienerParams& wiener, const UsmParams& usm);

} // namespace crackbench
