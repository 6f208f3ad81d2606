#pragma once

#include <memory>
#include <optional>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "crackbench/image.hpp"

namespace crackbench {

enum class Label { Crack, NonCrack };

/// "crack" / "non_crack".
std::string label_to_string(Label l);
/// Throws validation_error on anything else.
Label label_from_string(const std::string& s);

/// One classifier verdict.
struct Prediction {
    std::string image_id;
    Label label = Label::NonCrack;
    double score = 0.0;      // in [0,1], higher = more crack-like
    double elapsed_ms = 0.0; // wall time of the predict call
};

struct EdgeDensityParams {
    double gradient_threshold = 0.25; // g, > 0
    double density_threshold = 0.5;   // tau, in [0,1]
};

/// Fraction of pixels whose Sobel gradient magnitude sqrt(Gx^2+Gy^2)
/// (replicate padded) exceeds g. Grayscale input, at least 3x3.
double edge_density_score(const Image& img, double gradient_threshold);

/// Abstract classifier contract: deterministic label/score for a given image,
/// elapsed_ms measured per call with a monotonic clock.
class Classifier {
public:
    virtual ~Classifier() = default;
    virtual Prediction predict(const std::string& image_id, const Image& img) const = 0;
};

/// Built-in baseline: score = edge-density fraction, label = score > tau.
/// Polarity-agnostic and insensitive to mean shifts, so it accepts normalized
/// input. If an expected input size is declared, mismatches are rejected.
class EdgeDensityClassifier : public Classifier {
public:
    explicit EdgeDensityClassifier(EdgeDensityParams params) : params_(params) {}
    EdgeDensityClassifier(EdgeDensityParams params, int expected_w, int expected_h)
        : params_(params), expected_size_(std::make_pair(expected_w, expected_h)) {}

    Prediction predict(const std::string& image_id, const Image& img) const override;

    const EdgeDensityParams& params() const { return params_; }

private:
    EdgeDensityParams params_;
    std::optional<std::pair<int, int>> expected_size_;
};

/// Sweeps candidate cuts between adjacent sorted scores (plus the all-crack
/// and all-non-crack boundary cuts) and returns the midpoint maximizing
/// training accuracy under "crack iff score > tau"; ties break toward the
/// smallest tau. Training set must contain both labels.
double calibrate_threshold(const std::vector<std::pair<Image, Label>>& train,
                           double gradient_threshold);

/// Same sweep over precomputed scores.
double calibrate_threshold_scores(std::vector<std::pair<double, Label>> scored);

/// Parses a prediction CSV (header exactly "image_id,label,score,elapsed_ms",
/// UTF-8, LF). Every id must be in manifest_ids and unique, labels must be
/// crack/non_crack, scores in [0,1], elapsed_ms >= 0; violations are fatal
/// with the offending line number.
std::vector<Prediction> ingest_predictions(
    const std::string& path, const std::unordered_set<std::string>& manifest_ids);

/// Serializes predictions in the CSV schema above. Numbers use shortest
/// round-trip formatting, so ingest(write(p)) == p.
std::string predictions_to_csv(const std::vector<Prediction>& preds);
void write_predictions_csv(const std::vector<Prediction>& preds, const std::string& path);

} // namespace crackbench
