#include "crackbench/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <tuple>
#include <unordered_set>

#include "crackbench/errors.hpp"

namespace crackbench {

ConfusionMatrix confusion(const std::vector<Prediction>& preds,
                          const std::unordered_map<std::string, Label>& truth) {
    ConfusionMatrix cm;
    std::unordered_set<std::string> seen;
    for (const auto& p : preds) {
        if (!seen.insert(p.image_id).second)
            throw validation_error("confusion: duplicate prediction for '" + p.image_id + "'");
        const auto it = truth.find(p.image_id);
        if (it == truth.end())
            throw validation_error("confusion: no truth label for '" + p.image_id + "'");
        const bool actual = it->second == Label::Crack;
        const bool predicted = p.label == Label::Crack;
        if (predicted && actual) ++cm.tp;
        else if (predicted && !actual) ++cm.fp;
        else if (!predicted && actual) ++cm.fn;
        else ++cm.tn;
    }
    return cm;
}

MetricSet metric_set(const ConfusionMatrix& cm) {
    if (cm.total() <= 0) throw validation_error("metric_set: empty confusion matrix");
    if (cm.tp < 0 || cm.fp < 0 || cm.fn < 0 || cm.tn < 0)
        throw validation_error("metric_set: negative count");

    MetricSet m;
    const double tp = static_cast<double>(cm.tp);
    m.precision = (cm.tp + cm.fp) > 0 ? tp / static_cast<double>(cm.tp + cm.fp) : 0.0;
    m.recall = (cm.tp + cm.fn) > 0 ? tp / static_cast<double>(cm.tp + cm.fn) : 0.0;
    m.f1 = (m.precision + m.recall) > 0.0
               ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
               : 0.0;
    m.accuracy = static_cast<double>(cm.tp + cm.tn) / static_cast<double>(cm.total());
    m.ci = (m.precision + m.recall + m.f1) / 3.0;
    return m;
}

double percent_change(double value, double reference) {
    if (!(reference > 0.0))
        throw validation_error("percent_change: reference must be > 0, got " +
                               std::to_string(reference));
    return 100.0 * (value - reference) / reference;
}

EfficiencyTable efficiency_index(const std::vector<MethodResult>& rows) {
    if (rows.empty()) throw validation_error("efficiency_index: no rows");
    for (const auto& r : rows)
        if (!(r.ct_minutes >= 0.0))
            throw validation_error("efficiency_index: negative ct_minutes");

    std::vector<double> raw(rows.size());
    double max_raw = 0.0;
    for (size_t i = 0; i < rows.size(); ++i) {
        // The one-minute floor: CT >= 1.0 inside the index.
        raw[i] = rows[i].metrics.ci / std::max(rows[i].ct_minutes, 1.0);
        max_raw = std::max(max_raw, raw[i]);
    }
    if (max_raw <= 0.0)
        throw validation_error("efficiency_index: all rows have ci = 0");

    EfficiencyTable t;
    t.rows = rows;
    t.cc.resize(rows.size());
    for (size_t i = 0; i < rows.size(); ++i) t.cc[i] = raw[i] / max_raw;
    return t;
}

std::string format_fixed6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

std::string results_csv(std::vector<ResultRow> rows) {
    std::sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
        return std::tie(a.result.model_id, a.result.method_id, a.result.noise_id) <
               std::tie(b.result.model_id, b.result.method_id, b.result.noise_id);
    });
    std::string out =
        "model,method,noise,precision,recall,f1,accuracy,ci,ct_minutes,cc,pct_change_ci\n";
    for (const auto& row : rows) {
        const auto& r = row.result;
        out += r.model_id + "," + r.method_id + "," + r.noise_id + "," +
               format_fixed6(r.metrics.precision) + "," + format_fixed6(r.metrics.recall) +
               "," + format_fixed6(r.metrics.f1) + "," + format_fixed6(r.metrics.accuracy) +
               "," + format_fixed6(r.metrics.ci) + "," + format_fixed6(r.ct_minutes) + "," +
               format_fixed6(row.cc) + "," + format_fixed6(row.pct_change_ci) + "\n";
    }
    return out;
}

} // namespace crackbench
