// Acceptance suite: runs each criterion end to end and prints one PASS/FAIL
// line per criterion. Exit code is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "crackbench/classify.hpp"
#include "crackbench/config.hpp"
#include "crackbench/dataset.hpp"
#include "crackbench/enhance.hpp"
#include "crackbench/grid.hpp"
#include "crackbench/metrics.hpp"
#include "crackbench/noise.hpp"
#include "oracles.hpp"
#include "test_helpers.hpp"

using namespace crackbench;
namespace fs = std::filesystem;

namespace {

struct CheckFail {
    std::string what;
};

void require(bool ok, const std::string& what) {
    if (!ok) throw CheckFail{what};
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

// --- 1. Wiener oracle equivalence -----------------------------------------

void criterion_wiener() {
    const auto t0 = std::chrono::steady_clock::now();
    SplitMix64 rng(1001);
    for (int t = 0; t < 100; ++t) {
        const Image img = oracle::random_image(rng, 16, 16);
        const Image got = wiener_adaptive(img, WienerParams{});
        const Image want = oracle::wiener(img, 3, 3, std::nullopt);
        require(max_abs_diff(got.data, want.data) <= 1e-12,
                "wiener deviates from the brute-force oracle by more than 1e-12");
    }

    Image constant(16, 16, 1, 0.5);
    require(wiener_adaptive(constant, WienerParams{}).data == constant.data,
            "constant image is not an exact fixed point");

    const Image img = oracle::random_image(rng, 16, 16);
    WienerParams zero;
    zero.has_noise_variance = true;
    zero.noise_variance = 0.0;
    require(max_abs_diff(wiener_adaptive(img, zero).data, img.data) <= 1e-12,
            "v2=0 does not reproduce the input within 1e-12");

    require(seconds_since(t0) < 5.0, "runtime exceeded 5 s");
}

// --- 2. USM oracle equivalence ---------------------------------------------

void criterion_usm() {
    const auto t0 = std::chrono::steady_clock::now();
    const UsmParams params; // sigma 1, lambda 0.8
    int ksize = 0;
    const auto weights = oracle::gaussian_weights(params.sigma, ksize);

    SplitMix64 rng(2002);
    for (int t = 0; t < 100; ++t) {
        const Image img = oracle::random_image(rng, 16, 16);
        const Image raw = unsharp_mask_raw(img, params);
        const Image blurred = oracle::convolve(img, weights, ksize, ksize);
        double worst = 0.0;
        for (size_t i = 0; i < img.data.size(); ++i) {
            const double want =
                (1.0 + params.lambda) * img.data[i] - params.lambda * blurred.data[i];
            worst = std::max(worst, std::abs(raw.data[i] - want));
        }
        require(worst <= 1e-12, "pre-clamp USM deviates from brute force by more than 1e-12");
    }

    const Image img = oracle::random_image(rng, 16, 16);
    UsmParams identity;
    identity.lambda = 0.0;
    require(unsharp_mask(img, identity).data == img.data, "lambda=0 is not bit-identical");

    require(seconds_since(t0) < 5.0, "runtime exceeded 5 s");
}

// --- 3. Noise statistics ----------------------------------------------------

void criterion_noise_stats() {
    SplitMix64 rng(3003);
    const Image img = oracle::random_image(rng, 256, 256);

    for (uint64_t seed = 1; seed <= 20; ++seed) {
        const Image noisy = apply_salt_pepper(img, 0.05, seed);
        size_t changed = 0;
        for (size_t i = 0; i < img.data.size(); ++i)
            if (noisy.data[i] != img.data[i]) ++changed;
        const double frac = static_cast<double>(changed) / static_cast<double>(img.data.size());
        require(frac >= 0.04 && frac <= 0.06,
                "corrupted fraction " + std::to_string(frac) + " outside 0.05 +/- 0.01");
    }
    require(apply_salt_pepper(img, 0.05, 7).data == apply_salt_pepper(img, 0.05, 7).data,
            "repeated seeds are not bit-identical");

    const Kernel k = motion_blur_kernel(3.0, 0.0);
    require(k.width == 3 && k.height == 1, "L=3 horizontal kernel is not 1x3");
    for (double w : k.weights)
        require(w == 1.0 / 3.0, "L=3 horizontal kernel is not exactly [1/3,1/3,1/3]");

    SplitMix64 krng(777);
    for (int t = 0; t < 50; ++t) {
        const Kernel kk =
            motion_blur_kernel(1.0 + krng.next_in(0.0, 14.0), krng.next_in(0.0, 360.0));
        double sum = 0.0;
        for (double w : kk.weights) sum += w;
        require(std::abs(sum - 1.0) <= 1e-12, "kernel weights do not sum to 1 within 1e-12");
    }
}

// --- 4. Metric fixtures ------------------------------------------------------

void criterion_metric_fixtures() {
    const MetricSet m = metric_set({8, 2, 1, 9});
    require(format_fixed6(m.precision) == "0.800000", "precision != 0.800000");
    require(format_fixed6(m.recall) == "0.888889", "recall != 0.888889");
    require(format_fixed6(m.f1) == "0.842105", "f1 != 0.842105");
    require(format_fixed6(m.accuracy) == "0.850000", "accuracy != 0.850000");
    require(format_fixed6(m.ci) == "0.843665", "ci != 0.843665");

    const double ci = (0.8734 + 0.8730 + 0.8734) / 3.0;
    require(format_fixed6(ci) == "0.873267", "reference-table ci != 0.873267");
}

// --- 5. Efficiency-index fixture ---------------------------------------------

void criterion_efficiency_fixture() {
    auto row = [](const std::string& model, double ci, double ct) {
        MethodResult r;
        r.model_id = model;
        r.method_id = "M1";
        r.noise_id = "none";
        r.metrics.ci = ci;
        r.ct_minutes = ct;
        return r;
    };
    const std::vector<MethodResult> rows = {row("alexnet", 0.8733, 5.3),
                                            row("inception_v3", 0.8470, 27.0),
                                            row("resnet_101", 0.8664, 33.0)};
    const EfficiencyTable t = efficiency_index(rows);

    const double raw[3] = {0.8733 / 5.3, 0.8470 / 27.0, 0.8664 / 33.0};
    const double max_raw = std::max(raw[0], std::max(raw[1], raw[2]));
    for (int i = 0; i < 3; ++i)
        require(std::abs(t.cc[i] - raw[i] / max_raw) <= 1e-6,
                "cc deviates from the reconstruction formula");
    require(std::abs(t.cc[0] - 1.0) <= 1e-6, "fast-model cc != 1.000");
    require(t.cc[0] > t.cc[1] && t.cc[1] > t.cc[2], "cc ordering wrong");
}

// --- 6. Directional robustness on the synthetic fixture ----------------------

std::string fixture_config_json() {
    return R"({
        "dataset": {"synthetic": {"n": 200, "size": 128, "seed": 42}},
        "noises": [
            {"kind": "salt_pepper", "density": 0.05, "seed": 42},
            {"kind": "motion_blur", "length": 9, "angle_deg": 0}
        ],
        "methods": ["M1", "M2", "M3"],
        "classifier": {"builtin": {}},
        "seed": 42
    })";
}

void criterion_directional() {
    const auto t0 = std::chrono::steady_clock::now();
    const ExperimentConfig cfg = parse_config_json(fixture_config_json());
    const auto out = testutil::scratch_dir("acceptance_grid");
    const GridResult result = run_grid(cfg, out);

    auto accuracy_of = [&](const std::string& noise, const std::string& method) {
        for (const auto& row : result.rows)
            if (row.result.noise_id == noise && row.result.method_id == method)
                return row.result.metrics.accuracy;
        throw CheckFail{"missing grid row " + noise + "/" + method};
    };
    const double ref = accuracy_of("reference", "M1");
    const double sp_m1 = accuracy_of("salt_pepper_0.05", "M1");
    const double sp_m2 = accuracy_of("salt_pepper_0.05", "M2");
    const double mb_m1 = accuracy_of("motion_blur_9_0", "M1");
    const double mb_m3 = accuracy_of("motion_blur_9_0", "M3");

    std::ostringstream detail;
    detail << "ref=" << ref << " sp(M1)=" << sp_m1 << " sp(M2)=" << sp_m2
           << " mb(M1)=" << mb_m1 << " mb(M3)=" << mb_m3;
    std::cout << "      [" << detail.str() << "]\n";

    require(sp_m1 < ref, "salt & pepper did not degrade M1 below the reference: " + detail.str());
    require(sp_m2 >= sp_m1, "Wiener (M2) fell below M1 under salt & pepper: " + detail.str());
    require(mb_m3 >= mb_m1, "USM (M3) fell below M1 under motion blur: " + detail.str());

    const double elapsed = seconds_since(t0);
    require(elapsed < 60.0, "grid runtime " + std::to_string(elapsed) + " s exceeds 60 s");
}

// --- 7. End-to-end determinism -----------------------------------------------

bool trees_identical(const fs::path& a, const fs::path& b, const std::string& skip) {
    std::vector<fs::path> rel;
    for (const auto& e : fs::recursive_directory_iterator(a))
        if (e.is_regular_file()) rel.push_back(fs::relative(e.path(), a));
    std::sort(rel.begin(), rel.end());
    size_t b_count = 0;
    for (const auto& e : fs::recursive_directory_iterator(b))
        if (e.is_regular_file()) ++b_count;
    if (b_count != rel.size()) return false;
    for (const auto& r : rel) {
        if (r.filename() == skip) continue;
        if (!fs::exists(b / r)) return false;
        if (testutil::read_file(a / r) != testutil::read_file(b / r)) return false;
    }
    return true;
}

void criterion_determinism() {
    const auto root = testutil::scratch_dir("acceptance_det");
    const auto cfg_path = root / "cfg.json";
    testutil::write_file(cfg_path, fixture_config_json());
    const fs::path out1 = root / "run1", out2 = root / "run2";

    const char* cli = std::getenv("CRACKBENCH_CLI");
    if (cli != nullptr && *cli != '\0') {
        const std::string base = std::string(cli) + " bench --config " + cfg_path.string();
        require(std::system((base + " --out " + out1.string() + " 2>/dev/null").c_str()) == 0,
                "first bench run failed");
        require(std::system((base + " --out " + out2.string() + " 2>/dev/null").c_str()) == 0,
                "second bench run failed");
    } else {
        const ExperimentConfig cfg = parse_config_json(fixture_config_json());
        run_grid(cfg, out1);
        run_grid(cfg, out2);
    }
    require(trees_identical(out1, out2, "timings.csv"),
            "output trees differ outside the timing sidecar");
}

// --- 8. Property suites -------------------------------------------------------

void criterion_properties() {
    const auto t0 = std::chrono::steady_clock::now();
    SplitMix64 rng(8008);

    // Convolution convexity for normalized nonnegative kernels.
    for (int t = 0; t < 20; ++t) {
        const Image img = oracle::random_image(rng, 12, 12);
        const Kernel k =
            motion_blur_kernel(1.0 + rng.next_in(0.0, 10.0), rng.next_in(0.0, 180.0));
        for (double v : convolve2d(img, k).data)
            require(v >= -1e-12 && v <= 1.0 + 1e-12, "convolution left [0,1]");
    }

    // Wiener gain in [0,1] for random images (checked through local stats).
    for (int t = 0; t < 10; ++t) {
        const Image img = oracle::random_image(rng, 16, 16);
        const oracle::MeanVar mv = oracle::local_mean_var(img, 3, 3);
        double v2 = 0.0;
        for (double v : mv.var) v2 += v;
        v2 /= static_cast<double>(mv.var.size());
        for (double var : mv.var) {
            const double den = std::max(var, v2);
            const double gain = den > 0.0 ? std::max(var - v2, 0.0) / den : 0.0;
            require(gain >= 0.0 && gain <= 1.0, "wiener gain left [0,1]");
        }
    }

    // ci is the arithmetic mean of precision, recall, f1.
    for (int t = 0; t < 50; ++t) {
        const ConfusionMatrix cm{static_cast<int64_t>(rng.next_below(40)),
                                 static_cast<int64_t>(rng.next_below(40)),
                                 static_cast<int64_t>(rng.next_below(40)),
                                 static_cast<int64_t>(rng.next_below(40))};
        if (cm.total() == 0) continue;
        const MetricSet m = metric_set(cm);
        require(m.ci == (m.precision + m.recall + m.f1) / 3.0, "ci-mean identity broken");
    }

    // cc monotonicity and argmax invariance under uniform ct scaling.
    {
        std::vector<MethodResult> rows;
        for (int i = 0; i < 6; ++i) {
            MethodResult r;
            r.model_id = "m" + std::to_string(i);
            r.method_id = "M1";
            r.noise_id = "none";
            r.metrics.ci = rng.next_in(0.1, 1.0);
            r.ct_minutes = rng.next_in(1.0, 30.0);
            rows.push_back(r);
        }
        const EfficiencyTable before = efficiency_index(rows);
        auto argmax = [](const std::vector<double>& v) {
            return std::distance(v.begin(), std::max_element(v.begin(), v.end()));
        };
        std::vector<MethodResult> slower = rows;
        slower[2].ct_minutes *= 3.0;
        require(efficiency_index(slower).cc[2] <= before.cc[2] + 1e-12,
                "cc increased with ct");
        std::vector<MethodResult> better = rows;
        better[2].metrics.ci = std::min(1.0, better[2].metrics.ci + 0.2);
        require(efficiency_index(better).cc[2] >= before.cc[2] - 1e-12,
                "cc decreased with ci");
        std::vector<MethodResult> scaled = rows;
        for (auto& r : scaled) r.ct_minutes *= 2.0;
        require(argmax(efficiency_index(scaled).cc) == argmax(before.cc),
                "argmax moved under uniform ct scaling");
    }

    // Round-trip identities: PNM bytes, normalize/denormalize, prediction CSV.
    {
        const auto dir = testutil::scratch_dir("acceptance_roundtrip");
        std::string file = "P5\n9 4\n255\n";
        for (int i = 0; i < 36; ++i)
            file += static_cast<char>(static_cast<unsigned char>(rng.next_below(256)));
        testutil::write_file(dir / "r.pgm", file);
        save_image(load_image((dir / "r.pgm").string()), (dir / "r.pgm").string());
        require(testutil::read_file(dir / "r.pgm") == file, "PNM byte round trip broken");

        const Image img = oracle::random_image(rng, 10, 10, 3);
        save_image(img, (dir / "q.ppm").string());
        const Image back = load_image((dir / "q.ppm").string());
        require(max_abs_diff(back.data, img.data) <= 1.0 / 510.0 + 1e-12,
                "quantization bound 1/510 exceeded");

        const NormalizedImage n = normalize(img);
        require(max_abs_diff(denormalize(n).data, img.data) <= 1e-12,
                "normalize/denormalize round trip broken");

        std::vector<Prediction> preds;
        std::unordered_set<std::string> ids;
        for (int i = 0; i < 10; ++i) {
            Prediction p;
            p.image_id = "p" + std::to_string(i);
            p.label = rng.next_double() < 0.5 ? Label::Crack : Label::NonCrack;
            p.score = rng.next_double();
            p.elapsed_ms = rng.next_in(0.0, 100.0);
            preds.push_back(p);
            ids.insert(p.image_id);
        }
        write_predictions_csv(preds, (dir / "p.csv").string());
        const auto back_preds = ingest_predictions((dir / "p.csv").string(), ids);
        require(back_preds.size() == preds.size(), "prediction round trip lost rows");
        for (size_t i = 0; i < preds.size(); ++i)
            require(back_preds[i].image_id == preds[i].image_id &&
                        back_preds[i].label == preds[i].label &&
                        back_preds[i].score == preds[i].score &&
                        back_preds[i].elapsed_ms == preds[i].elapsed_ms,
                    "prediction round trip not identity");
    }

    require(seconds_since(t0) < 30.0, "property suite exceeded 30 s");
}

struct Criterion {
    const char* name;
    std::function<void()> run;
};

} // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {"1. Wiener oracle equivalence (100x16x16, 1e-12, <5s)", criterion_wiener},
        {"2. USM oracle equivalence (100x16x16, 1e-12, <5s)", criterion_usm},
        {"3. Noise statistics (d within 0.05+/-0.01, exact L=3 kernel)", criterion_noise_stats},
        {"4. Metric fixtures at 6-decimal formatting", criterion_metric_fixtures},
        {"5. Efficiency-index fixture ranking (cc +/- 1e-6)", criterion_efficiency_fixture},
        {"6. Directional robustness on the synthetic fixture (<60s)", criterion_directional},
        {"7. End-to-end determinism of bench output trees", criterion_determinism},
        {"8. Property suites (<30s)", criterion_properties},
    };

    int failures = 0;
    for (const auto& c : criteria) {
        try {
            c.run();
            std::cout << "PASS  " << c.name << "\n";
        } catch (const CheckFail& f) {
            ++failures;
            std::cout << "FAIL  " << c.name << " -- " << f.what << "\n";
        } catch (const std::exception& e) {
            ++failures;
            std::cout << "FAIL  " << c.name << " -- unexpected error: " << e.what() << "\n";
        }
    }
    std::cout << (failures == 0 ? "all criteria passed" : "criteria failed") << "\n";
    return failures;
}
