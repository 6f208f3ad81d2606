#include "crackbench/classify.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "crackbench/errors.hpp"

namespace crackbench {

std::string label_to_string(Label l) {
    return l == Label::Crack ? "crack" : "non_crack";
}

Label label_from_string(const std::string& s) {
    if (s == "crack") return Label::Crack;
    if (s == "non_crack") return Label::NonCrack;
    throw validation_error("unknown label '" + s + "', expected crack or non_crack");
}

double edge_density_score(const Image& img, double gradient_threshold) {
    check_image(img, "edge_density_score");
    if (img.channels != 1)
        throw validation_error("edge_density_score: grayscale input required");
    if (img.width < 3 || img.height < 3)
        throw validation_error("edge_density_score: image must be at least 3x3");
    if (!(gradient_threshold > 0.0))
        throw validation_error("edge_density_score: gradient threshold must be > 0");

    size_t hits = 0;
    for (int y = 0; y < img.height; ++y) {
        const int ym = std::max(y - 1, 0), yp = std::min(y + 1, img.height - 1);
        for (int x = 0; x < img.width; ++x) {
            const int xm = std::max(x - 1, 0), xp = std::min(x + 1, img.width - 1);
            const double gx = img.at(xp, ym) + 2.0 * img.at(xp, y) + img.at(xp, yp) -
                              img.at(xm, ym) - 2.0 * img.at(xm, y) - img.at(xm, yp);
            const double gy = img.at(xm, yp) + 2.0 * img.at(x, yp) + img.at(xp, yp) -
                              img.at(xm, ym) - 2.0 * img.at(x, ym) - img.at(xp, ym);
            if (std::sqrt(gx * gx + gy * gy) > gradient_threshold) ++hits;
        }
    }
    return static_cast<double>(hits) / static_cast<double>(img.pixel_count());
}

Prediction EdgeDensityClassifier::predict(const std::string& image_id,
                                          const Image& img) const {
    if (expected_size_ &&
        (img.width != expected_size_->first || img.height != expected_size_->second))
        throw validation_error("predict: input size " + std::to_string(img.width) + "x" +
                               std::to_string(img.height) + " does not match declared " +
                               std::to_string(expected_size_->first) + "x" +
                               std::to_string(expected_size_->second));
    const auto start = std::chrono::steady_clock::now();
    const Image gray = to_gray(img);
    const double score = edge_density_score(gray, params_.gradient_threshold);
    const auto stop = std::chrono::steady_clock::now();

    Prediction p;
    p.image_id = image_id;
    p.score = score;
    p.label = score > params_.density_threshold ? Label::Crack : Label::NonCrack;
    p.elapsed_ms = std::chrono::duration<double, std::milli>(stop - start).count();
    return p;
}

double calibrate_threshold_scores(std::vector<std::pair<double, Label>> scored) {
    if (scored.empty()) throw validation_error("calibrate_threshold: empty training set");
    const auto cracks = static_cast<size_t>(
        std::count_if(scored.begin(), scored.end(),
                      [](const auto& s) { return s.second == Label::Crack; }));
    if (cracks == 0 || cracks == scored.size())
        throw validation_error("calibrate_threshold: training set must contain both labels");

    std::sort(scored.begin(), scored.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    std::vector<double> candidates;
    candidates.push_back(scored.front().first / 2.0); // below all: everything crack
    for (size_t i = 0; i + 1 < scored.size(); ++i)
        if (scored[i].first < scored[i + 1].first)
            candidates.push_back((scored[i].first + scored[i + 1].first) / 2.0);
    candidates.push_back(scored.back().first); // at the top: everything non-crack

    double best_tau = candidates.front();
    size_t best_correct = 0;
    for (double tau : candidates) {
        size_t correct = 0;
        for (const auto& [score, label] : scored) {
            const Label predicted = score > tau ? Label::Crack : Label::NonCrack;
            if (predicted == label) ++correct;
        }
        if (correct > best_correct) { // strict: ties keep the smallest tau
            best_correct = correct;
            best_tau = tau;
        }
    }
    return best_tau;
}

double calibrate_threshold(const std::vector<std::pair<Image, Label>>& train,
                           double gradient_threshold) {
    std::vector<std::pair<double, Label>> scored;
    scored.reserve(train.size());
    for (const auto& [img, label] : train)
        scored.emplace_back(edge_density_score(to_gray(img), gradient_threshold), label);
    return calibrate_threshold_scores(std::move(scored));
}

namespace {

// Shortest decimal form that parses back to the same double.
std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    fields.push_back(cur);
    return fields;
}

bool valid_image_id(const std::string& id) {
    if (id.empty()) return false;
    for (char c : id)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '.' && c != '-')
            return false;
    return true;
}

double parse_number(const std::string& s, const std::string& path, size_t line_no,
                    const char* what) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v))
        throw validation_error(path + ": line " + std::to_string(line_no) +
                               ": malformed " + what + " '" + s + "'");
    return v;
}

} // namespace

std::vector<Prediction> ingest_predictions(
    const std::string& path, const std::unordered_set<std::string>& manifest_ids) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error(path + ": cannot open file");

    std::string line;
    size_t line_no = 0;
    if (!std::getline(in, line)) throw validation_error(path + ": empty file");
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "image_id,label,score,elapsed_ms")
        throw validation_error(path + ": line 1: bad header '" + line +
                               "', expected 'image_id,label,score,elapsed_ms'");

    std::vector<Prediction> preds;
    std::unordered_set<std::string> seen;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 4)
            throw validation_error(path + ": line " + std::to_string(line_no) +
                                   ": expected 4 fields, got " + std::to_string(fields.size()));
        Prediction p;
        p.image_id = fields[0];
        if (!valid_image_id(p.image_id))
            throw validation_error(path + ": line " + std::to_string(line_no) +
                                   ": image_id '" + p.image_id +
                                   "' outside the [A-Za-z0-9_.-] charset");
        if (!manifest_ids.count(p.image_id))
            throw validation_error(path + ": line " + std::to_string(line_no) +
                                   ": image_id '" + p.image_id + "' not in manifest");
        if (!seen.insert(p.image_id).second)
            throw validation_error(path + ": line " + std::to_string(line_no) +
                                   ": duplicate image_id '" + p.image_id + "'");
        try {
            p.label = label_from_string(fields[1]);
        } catch (const validation_error& e) {
            throw validation_error(path + ": line " + std::to_string(line_no) + ": " + e.what());
        }
        p.score = parse_number(fields[2], path, line_no, "score");
        if (p.score < 0.0 || p.score > 1.0)
            throw validation_error(path + ": line " + std::to_string(line_no) +
                                   ": score " + fields[2] + " outside [0,1]");
        p.elapsed_ms = parse_number(fields[3], path, line_no, "elapsed_ms");
        if (p.elapsed_ms < 0.0)
            throw validation_error(path + ": line " + std::to_string(line_no) +
                                   ": negative elapsed_ms " + fields[3]);
        preds.push_back(std::move(p));
    }
    return preds;
}

std::string predictions_to_csv(const std::vector<Prediction>& preds) {
    std::string out = "image_id,label,score,elapsed_ms\n";
    for (const auto& p : preds) {
        out += p.image_id;
        out += ',';
        out += label_to_string(p.label);
        out += ',';
        out += format_double(p.score);
        out += ',';
        out += format_double(p.elapsed_ms);
        out += '\n';
    }
    return out;
}

void write_predictions_csv(const std::vector<Prediction>& preds, const std::string& path) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw io_error(path + ": cannot open for writing");
    const std::string text = predictions_to_csv(preds);
    f.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!f) throw io_error(path + ": write failed");
}

} // namespace crackbench
