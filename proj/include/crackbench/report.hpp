#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "crackbench/metrics.hpp"

namespace crackbench {

/// All canonical report artifacts as text, built deterministically from the
/// sorted results. Chart map keys are paths relative to the output directory.
struct ReportBundle {
    std::string results_csv_text;
    std::string report_md;
    std::map<std::string, std::string> charts; // e.g. "charts/timing.svg" -> SVG
};

/// Pure assembly of the bundle: results CSV, markdown summary (reference
/// table, full results, best method per noise), one metrics bar chart per
/// noise condition, one efficiency chart per noise, and one timing chart.
/// `reference` holds the per-model no-noise M1 rows.
ReportBundle build_reports(const std::vector<ResultRow>& rows,
                           const std::vector<MethodResult>& reference);

/// build_reports + write every file under out (creating directories).
/// Contents are fully assembled before anything is written.
ReportBundle emit_reports(const std::vector<ResultRow>& rows,
                          const std::vector<MethodResult>& reference,
                          const std::filesystem::path& out);

/// Deterministic SVG 1.1 bar chart: fixed 800x400 canvas, fixed palette,
/// bar heights scaled to the maximum value.
std::string svg_bar_chart(const std::string& title,
                          const std::vector<std::pair<std::string, double>>& bars);

/// Values drawn by a chart, in bar order (test hook for ordering invariants).
std::vector<double> svg_bar_values(const std::string& svg);

} // namespace crackbench
