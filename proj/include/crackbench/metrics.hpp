#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "crackbench/classify.hpp"

namespace crackbench {

/// Counts with Crack as the positive class.
struct ConfusionMatrix {
    int64_t tp = 0, fp = 0, fn = 0, tn = 0;
    int64_t total() const { return tp + fp + fn + tn; }
};

struct MetricSet {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    double accuracy = 0.0;
    double ci = 0.0; // (precision + recall + f1) / 3
};

/// Metrics bundle for one (model, method, noise) grid cell.
struct MethodResult {
    std::string model_id;
    std::string method_id; // M1 | M2 | M3
    std::string noise_id;
    MetricSet metrics;
    double ct_minutes = 0.0;
};

struct EfficiencyTable {
    std::vector<MethodResult> rows;
    std::vector<double> cc; // parallel to rows, max is 1
};

/// Tallies predictions against ground truth. Every prediction id must have a
/// truth label and appear at most once.
ConfusionMatrix confusion(const std::vector<Prediction>& preds,
                          const std::unordered_map<std::string, Label>& truth);

/// precision = tp/(tp+fp), recall = tp/(tp+fn), f1 = 2PR/(P+R),
/// accuracy = (tp+tn)/total, ci = (P+R+F1)/3. Zero denominators yield 0.
MetricSet metric_set(const ConfusionMatrix& cm);

/// 100 * (value - reference) / reference; reference must be positive.
double percent_change(double value, double reference);

/// Cost-effectiveness: raw_i = ci_i / max(ct_i, 1.0), cc_i = raw_i / max(raw).
/// Values near 1 mark the superior, cheaper method. Needs at least one row
/// with positive ci.
EfficiencyTable efficiency_index(const std::vector<MethodResult>& rows);

/// One results-CSV row: a grid cell plus its derived columns.
struct ResultRow {
    MethodResult result;
    double cc = 1.0;
    double pct_change_ci = 0.0;
};

/// Canonical results CSV: header
/// model,method,noise,precision,recall,f1,accuracy,ci,ct_minutes,cc,pct_change_ci
/// fixed 6-decimal numbers, rows sorted by (model, method, noise).
std::string results_csv(std::vector<ResultRow> rows);

/// Fixed 6-decimal formatting used by every canonical report.
std::string format_fixed6(double v);

} // namespace crackbench
