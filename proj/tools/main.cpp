#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "crackbench/config.hpp"
#include "crackbench/dataset.hpp"
#include "crackbench/errors.hpp"
#include "crackbench/grid.hpp"
#include "crackbench/metrics.hpp"

namespace fs = std::filesystem;
using namespace crackbench;

namespace {

// Image files of a directory in sorted order, so per-file seeds and outputs
// are stable regardless of directory enumeration order.
std::vector<fs::path> list_images(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw io_error(dir.string() + ": not a directory");
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (!e.is_regular_file()) continue;
        const auto ext = e.path().extension().string();
        if (ext == ".pgm" || ext == ".ppm") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw validation_error(dir.string() + ": no .pgm/.ppm images found");
    return files;
}

void copy_manifest_if_present(const fs::path& in, const fs::path& out) {
    if (fs::exists(in / "manifest.csv"))
        fs::copy_file(in / "manifest.csv", out / "manifest.csv",
                      fs::copy_options::overwrite_existing);
}

int cmd_synth(int n, int size, uint64_t seed, const std::string& out) {
    generate_synthetic_dataset(n, size, seed, out);
    std::cerr << "wrote " << n << " images to " << out << "\n";
    return 0;
}

int cmd_degrade(const std::string& in, const std::string& out, const std::string& noise_json) {
    const NoiseSpec spec = parse_noise_json(noise_json);
    fs::create_directories(out);
    for (const auto& file : list_images(in)) {
        NoiseSpec per_file = spec;
        per_file.seed = per_image_seed(file.filename().string(), spec.seed);
        save_image(apply_noise(load_image(file.string()), per_file),
                   (fs::path(out) / file.filename()).string());
    }
    copy_manifest_if_present(in, out);
    return 0;
}

int cmd_enhance(const std::string& in, const std::string& out, const std::string& method,
                const std::string& params_json) {
    WienerParams wiener;
    UsmParams usm;
    std::string method_id;
    if (method == "wiener") {
        method_id = "M2";
        if (!params_json.empty()) wiener = parse_wiener_json(params_json);
    } else if (method == "usm") {
        method_id = "M3";
        if (!params_json.empty()) usm = parse_usm_json(params_json);
    } else {
        throw validation_error("enhance: method must be 'wiener' or 'usm'");
    }
    fs::create_directories(out);
    for (const auto& file : list_images(in))
        save_image(apply_method(load_image(file.string()), method_id, wiener, usm),
                   (fs::path(out) / file.filename()).string());
    copy_manifest_if_present(in, out);
    return 0;
}

int cmd_predict(const std::string& dataset, const std::string& out, double g, double tau,
                bool tau_set, int resize, double split_ratio, uint64_t seed) {
    const DatasetManifest manifest = load_manifest(dataset, split_ratio, seed);

    auto preprocess = [&](const Image& img) {
        return resize > 0 ? resize_bilinear(img, resize, resize) : img;
    };

    EdgeDensityParams params;
    params.gradient_threshold = g;
    if (tau_set) {
        params.density_threshold = tau;
    } else {
        const Split split = split_dataset(manifest);
        if (split.train.empty())
            throw validation_error("predict: empty train split, pass --tau explicitly");
        std::vector<std::pair<Image, Label>> train;
        for (size_t idx : split.train) {
            const auto& e = manifest.entries[idx];
            train.emplace_back(preprocess(load_image(manifest.resolve(e).string())), e.label);
        }
        params.density_threshold = calibrate_threshold(train, g);
    }

    const EdgeDensityClassifier classifier(params);
    std::vector<Prediction> preds;
    for (const auto& e : manifest.entries)
        preds.push_back(classifier.predict(
            e.image_id, preprocess(load_image(manifest.resolve(e).string()))));
    write_predictions_csv(preds, out);
    std::cerr << "tau=" << params.density_threshold << ", wrote " << preds.size()
              << " predictions to " << out << "\n";
    return 0;
}

int cmd_eval(const std::string& preds_path, const std::string& dataset, const std::string& out,
             const std::string& model, const std::string& method, const std::string& noise) {
    const DatasetManifest manifest = load_manifest(dataset);
    std::unordered_set<std::string> ids;
    std::unordered_map<std::string, Label> truth;
    for (const auto& e : manifest.entries) {
        ids.insert(e.image_id);
        truth[e.image_id] = e.label;
    }
    const auto preds = ingest_predictions(preds_path, ids);
    if (preds.empty()) throw validation_error(preds_path + ": no predictions");

    ResultRow row;
    row.result.model_id = model;
    row.result.method_id = method;
    row.result.noise_id = noise;
    row.result.metrics = metric_set(confusion(preds, truth));
    double total_ms = 0.0;
    for (const auto& p : preds) total_ms += p.elapsed_ms;
    row.result.ct_minutes = total_ms / 60000.0;
    row.cc = 1.0;
    row.pct_change_ci = 0.0;

    std::ofstream f(out, std::ios::binary | std::ios::trunc);
    if (!f) throw io_error(out + ": cannot open for writing");
    f << results_csv({row});
    return 0;
}

int cmd_bench(const std::string& config_path, std::string out) {
    const ExperimentConfig config = load_config(config_path);
    if (out.empty()) out = config.output_dir;
    if (out.empty())
        throw validation_error("bench: pass --out or set output_dir in the config");
    const GridResult result = run_grid(config, out);
    std::cerr << "wrote " << result.rows.size() << " result rows to " << out << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Noise robustness benchmark for crack classification"};
    app.require_subcommand(1);

    auto* synth = app.add_subcommand("synth", "Generate a synthetic crack dataset");
    int n = 200, size = 128;
    uint64_t seed = 42;
    std::string out_dir;
    synth->add_option("--n", n, "image count (even)");
    synth->add_option("--size", size, "image edge length in pixels");
    synth->add_option("--seed", seed, "generator seed");
    synth->add_option("--out", out_dir, "output directory")->required();

    auto* degrade = app.add_subcommand("degrade", "Apply one noise spec to a directory");
    std::string in_dir, noise_json;
    degrade->add_option("--in", in_dir, "input image directory")->required();
    degrade->add_option("--out", out_dir, "output directory")->required();
    degrade->add_option("--noise", noise_json, "NoiseSpec JSON")->required();

    auto* enhance = app.add_subcommand("enhance", "Filter a directory with wiener or usm");
    std::string method, params_json;
    enhance->add_option("--in", in_dir, "input image directory")->required();
    enhance->add_option("--out", out_dir, "output directory")->required();
    enhance->add_option("--method", method, "wiener | usm")->required();
    enhance->add_option("--params", params_json, "filter parameter JSON");

    auto* predict = app.add_subcommand("predict", "Run the built-in edge-density classifier");
    std::string dataset, preds_out;
    double g = 0.25, tau = 0.5, split_ratio = 0.7;
    int resize = 0;
    predict->add_option("--dataset", dataset, "dataset directory with manifest.csv")->required();
    predict->add_option("--out", preds_out, "predictions CSV path")->required();
    predict->add_option("--g", g, "gradient threshold");
    auto* tau_opt = predict->add_option("--tau", tau, "density threshold (calibrated when absent)");
    predict->add_option("--resize", resize, "resize target, 0 = native size");
    predict->add_option("--split-ratio", split_ratio, "train fraction for calibration");
    predict->add_option("--seed", seed, "split seed for calibration");

    auto* eval = app.add_subcommand("eval", "Score one predictions file against a dataset");
    std::string preds_in, metrics_out, model = "external", method_id = "M1", noise_id = "none";
    eval->add_option("--preds", preds_in, "predictions CSV")->required();
    eval->add_option("--dataset", dataset, "dataset directory with manifest.csv")->required();
    eval->add_option("--out", metrics_out, "metrics CSV path")->required();
    eval->add_option("--model", model, "model id for the output row");
    eval->add_option("--method", method_id, "method id for the output row");
    eval->add_option("--noise", noise_id, "noise id for the output row");

    auto* bench = app.add_subcommand("bench", "Run the full benchmark grid");
    std::string config_path, bench_out;
    bench->add_option("--config", config_path, "experiment config JSON")->required();
    bench->add_option("--out", bench_out, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (synth->parsed()) return cmd_synth(n, size, seed, out_dir);
        if (degrade->parsed()) return cmd_degrade(in_dir, out_dir, noise_json);
        if (enhance->parsed()) return cmd_enhance(in_dir, out_dir, method, params_json);
        if (predict->parsed())
            return cmd_predict(dataset, preds_out, g, tau, tau_opt->count() > 0, resize,
                               split_ratio, seed);
        if (eval->parsed())
            return cmd_eval(preds_in, dataset, metrics_out, model, method_id, noise_id);
        if (bench->parsed()) return cmd_bench(config_path, bench_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
