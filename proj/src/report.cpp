#include "crackbench/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <tuple>

#include "crackbench/errors.hpp"

namespace crackbench {

namespace {

std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

const char* kPalette[] = {"#4e79a7", "#f28e2b", "#e15759",
                          "#76b7b2", "#59a14f", "#edc949"};

std::string escape_xml(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

std::vector<ResultRow> sorted_rows(std::vector<ResultRow> rows) {
    std::sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
        return std::tie(a.result.model_id, a.result.method_id, a.result.noise_id) <
               std::tie(b.result.model_id, b.result.method_id, b.result.noise_id);
    });
    return rows;
}

} // namespace

std::string svg_bar_chart(const std::string& title,
                          const std::vector<std::pair<std::string, double>>& bars) {
    constexpr double kW = 800.0, kH = 400.0;
    constexpr double kLeft = 50.0, kRight = 20.0, kTop = 40.0, kBottom = 70.0;
    const double plot_w = kW - kLeft - kRight;
    const double plot_h = kH - kTop - kBottom;

    double max_v = 0.0;
    for (const auto& [label, v] : bars) max_v = std::max(max_v, v);

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"800\" "
           "height=\"400\" viewBox=\"0 0 800 400\">\n";
    svg += "<rect x=\"0\" y=\"0\" width=\"800\" height=\"400\" fill=\"#ffffff\"/>\n";
    svg += "<text x=\"400\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\" "
           "text-anchor=\"middle\">" + escape_xml(title) + "</text>\n";

    const size_t n = bars.size();
    const double slot = n > 0 ? plot_w / static_cast<double>(n) : plot_w;
    const double bar_w = slot * 0.7;
    for (size_t i = 0; i < n; ++i) {
        const double v = bars[i].second;
        const double h = max_v > 0.0 ? (v / max_v) * plot_h : 0.0;
        const double x = kLeft + slot * static_cast<double>(i) + slot * 0.15;
        const double y = kTop + plot_h - h;
        svg += "<rect data-value=\"" + fmt("%.6f", v) + "\" x=\"" + fmt("%.2f", x) +
               "\" y=\"" + fmt("%.2f", y) + "\" width=\"" + fmt("%.2f", bar_w) +
               "\" height=\"" + fmt("%.2f", h) + "\" fill=\"" +
               kPalette[i % (sizeof kPalette / sizeof kPalette[0])] + "\"/>\n";
        svg += "<text x=\"" + fmt("%.2f", x + bar_w / 2.0) + "\" y=\"" + fmt("%.2f", y - 4.0) +
               "\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"middle\">" +
               fmt("%.4f", v) + "</text>\n";
        svg += "<text x=\"" + fmt("%.2f", x + bar_w / 2.0) + "\" y=\"" +
               fmt("%.2f", kTop + plot_h + 14.0) +
               "\" font-family=\"sans-serif\" font-size=\"9\" text-anchor=\"middle\">" +
               escape_xml(bars[i].first) + "</text>\n";
    }
    svg += "<line x1=\"" + fmt("%.2f", kLeft) + "\" y1=\"" + fmt("%.2f", kTop + plot_h) +
           "\" x2=\"" + fmt("%.2f", kW - kRight) + "\" y2=\"" + fmt("%.2f", kTop + plot_h) +
           "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
    svg += "</svg>\n";
    return svg;
}

std::vector<double> svg_bar_values(const std::string& svg) {
    std::vector<double> values;
    const std::string needle = "data-value=\"";
    size_t pos = 0;
    while ((pos = svg.find(needle, pos)) != std::string::npos) {
        pos += needle.size();
        const size_t end = svg.find('"', pos);
        values.push_back(std::strtod(svg.substr(pos, end - pos).c_str(), nullptr));
        pos = end;
    }
    return values;
}

ReportBundle build_reports(const std::vector<ResultRow>& rows,
                           const std::vector<MethodResult>& reference) {
    if (rows.empty()) throw validation_error("build_reports: no result rows");

    const auto sorted = sorted_rows(rows);
    ReportBundle bundle;
    bundle.results_csv_text = results_csv(sorted);

    std::vector<MethodResult> refs = reference;
    std::sort(refs.begin(), refs.end(), [](const MethodResult& a, const MethodResult& b) {
        return a.model_id < b.model_id;
    });

    // Markdown summary.
    std::string md = "# Noise robustness benchmark\n\n";
    md += "## Reference (no noise)\n\n";
    if (!refs.empty()) {
        md += "| Attribute % |";
        for (const auto& r : refs) md += " " + r.model_id + " |";
        md += "\n|---|";
        for (size_t i = 0; i < refs.size(); ++i) md += "---|";
        md += "\n| Validation |";
        for (const auto& r : refs) md += " " + fmt("%.2f", r.metrics.recall * 100.0) + " |";
        md += "\n| Precision |";
        for (const auto& r : refs) md += " " + fmt("%.2f", r.metrics.precision * 100.0) + " |";
        md += "\n| F1 |";
        for (const auto& r : refs) md += " " + fmt("%.2f", r.metrics.f1 * 100.0) + " |";
        md += "\n\n";
    }

    md += "## Results\n\n";
    md += "| model | method | noise | precision | recall | f1 | accuracy | ci | ct_minutes "
          "| cc | pct_change_ci |\n";
    md += "|---|---|---|---|---|---|---|---|---|---|---|\n";
    for (const auto& row : sorted) {
        const auto& r = row.result;
        md += "| " + r.model_id + " | " + r.method_id + " | " + r.noise_id + " | " +
              format_fixed6(r.metrics.precision) + " | " + format_fixed6(r.metrics.recall) +
              " | " + format_fixed6(r.metrics.f1) + " | " + format_fixed6(r.metrics.accuracy) +
              " | " + format_fixed6(r.metrics.ci) + " | " + format_fixed6(r.ct_minutes) +
              " | " + format_fixed6(row.cc) + " | " + format_fixed6(row.pct_change_ci) +
              " |\n";
    }
    md += "\n";

    // Noise conditions in sorted order, reference rows aside.
    std::vector<std::string> noise_ids;
    for (const auto& row : sorted)
        if (row.result.noise_id != "reference" &&
            std::find(noise_ids.begin(), noise_ids.end(), row.result.noise_id) == noise_ids.end())
            noise_ids.push_back(row.result.noise_id);
    std::sort(noise_ids.begin(), noise_ids.end());

    md += "## Best method per noise\n\n";
    md += "| noise | method | model | ci % |\n|---|---|---|---|\n";
    for (const auto& nid : noise_ids) {
        const ResultRow* best = nullptr;
        for (const auto& row : sorted)
            if (row.result.noise_id == nid &&
                (best == nullptr || row.result.metrics.ci > best->result.metrics.ci))
                best = &row;
        if (best)
            md += "| " + nid + " | " + best->result.method_id + " | " + best->result.model_id +
                  " | " + fmt("%.2f", best->result.metrics.ci * 100.0) + " |\n";
    }
    bundle.report_md = md;

    // One metrics chart and one efficiency chart per noise condition.
    for (const auto& nid : noise_ids) {
        std::vector<std::pair<std::string, double>> acc_bars, cc_bars;
        for (const auto& row : sorted) {
            if (row.result.noise_id != nid) continue;
            const std::string label = row.result.model_id + "/" + row.result.method_id;
            acc_bars.emplace_back(label, row.result.metrics.accuracy);
            cc_bars.emplace_back(label, row.cc);
        }
        bundle.charts["charts/metrics_" + nid + ".svg"] =
            svg_bar_chart("Accuracy - " + nid, acc_bars);
        bundle.charts["charts/efficiency_" + nid + ".svg"] =
            svg_bar_chart("Efficiency index Cc - " + nid, cc_bars);
    }

    // Timing chart: bars in results-CSV row order.
    std::vector<std::pair<std::string, double>> ct_bars;
    for (const auto& row : sorted)
        ct_bars.emplace_back(row.result.model_id + "/" + row.result.method_id + "/" +
                                 row.result.noise_id,
                             row.result.ct_minutes);
    bundle.charts["charts/timing.svg"] = svg_bar_chart("Computation time (minutes)", ct_bars);
    return bundle;
}

ReportBundle emit_reports(const std::vector<ResultRow>& rows,
                          const std::vector<MethodResult>& reference,
                          const std::filesystem::path& out) {
    const ReportBundle bundle = build_reports(rows, reference);

    std::filesystem::create_directories(out / "charts");
    auto write_file = [&](const std::filesystem::path& p, const std::string& text) {
        std::ofstream f(p, std::ios::binary | std::ios::trunc);
        if (!f) throw io_error(p.string() + ": cannot open for writing");
        f.write(text.data(), static_cast<std::streamsize>(text.size()));
        if (!f) throw io_error(p.string() + ": write failed");
    };
    write_file(out / "results.csv", bundle.results_csv_text);
    write_file(out / "report.md", bundle.report_md);
    for (const auto& [rel, text] : bundle.charts) write_file(out / rel, text);
    return bundle;
}

} // namespace crackbench
