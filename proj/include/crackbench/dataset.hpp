#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "crackbench/classify.hpp"
#include "crackbench/image.hpp"

namespace crackbench {

struct ManifestEntry {
    std::string image_id;
    std::string path; // relative to the manifest's directory
    Label label = Label::NonCrack;
};

/// Dataset listing plus the train/eval split parameters. image_ids are unique
/// and every path resolves at load time.
struct DatasetManifest {
    std::filesystem::path root; // directory holding manifest.csv
    std::vector<ManifestEntry> entries;
    double split_ratio = 0.7; // train fraction
    uint64_t split_seed = 0;

    std::filesystem::path resolve(const ManifestEntry& e) const { return root / e.path; }
};

/// Index partition of manifest entries, deterministic for a fixed
/// (entries, ratio, seed): seeded Fisher-Yates shuffle, first ratio*n train.
struct Split {
    std::vector<size_t> train;
    std::vector<size_t> eval;
};

Split split_dataset(const DatasetManifest& m);

/// Reads <dir>/manifest.csv (header image_id,path,label) and verifies that
/// ids are unique and every referenced file exists.
DatasetManifest load_manifest(const std::filesystem::path& dir,
                              double split_ratio = 0.7, uint64_t split_seed = 0);

void write_manifest(const DatasetManifest& m);

/// Desk-scale stand-in dataset: n/2 crack images (value-noise background of
/// intensity ~0.55-0.75 crossed by a dark random-walk polyline, width 1-3 px,
/// intensity ~0.1-0.3) and n/2 background-only images, some with low-contrast
/// blotches. Writes <dir>/images/*.pgm and <dir>/manifest.csv. Byte-identical
/// for identical (n, size, seed); n must be even and >= 2, size >= 64.
DatasetManifest generate_synthetic_dataset(int n, int size, uint64_t seed,
                                           const std::filesystem::path& dir);

} // namespace crackbench
