#include "crackbench/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "crackbench/errors.hpp"

namespace crackbench {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& why) {
    throw validation_error("config: " + path + ": " + why);
}

json parse_json_text(const std::string& text, const std::string& what) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw validation_error(what + ": invalid JSON");
    return j;
}

double require_number(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "must be a number");
    return j.get<double>();
}

uint64_t require_u64(const json& j, const std::string& path) {
    if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<int64_t>() >= 0))
        fail(path, "must be a non-negative integer");
    return j.get<uint64_t>();
}

int require_int(const json& j, const std::string& path) {
    if (!j.is_number_integer()) fail(path, "must be an integer");
    return j.get<int>();
}

NoiseSpec parse_noise(const json& j, const std::string& path, uint64_t default_seed) {
    if (!j.is_object()) fail(path, "must be an object");
    if (!j.contains("kind")) fail(path + "/kind", "missing");
    const std::string kind = j.at("kind").is_string() ? j.at("kind").get<std::string>() : "";

    NoiseSpec spec;
    spec.seed = default_seed;
    std::set<std::string> allowed{"kind", "seed"};
    if (kind == "none") {
        spec.kind = NoiseKind::None;
    } else if (kind == "salt_pepper") {
        spec.kind = NoiseKind::SaltPepper;
        allowed.insert("density");
        if (j.contains("density")) {
            spec.density = require_number(j.at("density"), path + "/density");
            if (spec.density < 0.0 || spec.density > 1.0)
                fail(path + "/density", "must be in [0,1]");
        }
    } else if (kind == "motion_blur") {
        spec.kind = NoiseKind::MotionBlur;
        allowed.insert("length");
        allowed.insert("angle_deg");
        if (j.contains("length")) {
            spec.length = require_number(j.at("length"), path + "/length");
            if (spec.length < 1.0) fail(path + "/length", "must be >= 1");
        }
        if (j.contains("angle_deg"))
            spec.angle_deg =
                normalize_angle_deg(require_number(j.at("angle_deg"), path + "/angle_deg"));
    } else {
        fail(path + "/kind", "must be one of none, salt_pepper, motion_blur");
    }
    if (j.contains("seed")) spec.seed = require_u64(j.at("seed"), path + "/seed");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key())) fail(path + "/" + it.key(), "unknown field");
    return spec;
}

WienerParams parse_wiener(const json& j, const std::string& path) {
    if (!j.is_object()) fail(path, "must be an object");
    WienerParams p;
    if (j.contains("window")) {
        const auto& w = j.at("window");
        if (!w.is_array() || w.size() != 2) fail(path + "/window", "must be [P,Q]");
        p.window_h = require_int(w.at(0), path + "/window/0");
        p.window_w = require_int(w.at(1), path + "/window/1");
        if (p.window_h < 1 || p.window_w < 1 || p.window_h % 2 == 0 || p.window_w % 2 == 0)
            fail(path + "/window", "dimensions must be odd and >= 1");
    }
    if (j.contains("noise_variance") && !j.at("noise_variance").is_null()) {
        p.has_noise_variance = true;
        p.noise_variance = require_number(j.at("noise_variance"), path + "/noise_variance");
        if (p.noise_variance < 0.0) fail(path + "/noise_variance", "must be >= 0");
    }
    return p;
}

UsmParams parse_usm(const json& j, const std::string& path) {
    if (!j.is_object()) fail(path, "must be an object");
    UsmParams p;
    if (j.contains("sigma")) {
        p.sigma = require_number(j.at("sigma"), path + "/sigma");
        if (!(p.sigma > 0.0)) fail(path + "/sigma", "must be > 0");
    }
    if (j.contains("lambda")) {
        p.lambda = require_number(j.at("lambda"), path + "/lambda");
        if (p.lambda < 0.0) fail(path + "/lambda", "must be >= 0");
    }
    return p;
}

} // namespace

NoiseSpec parse_noise_json(const std::string& json_text, uint64_t default_seed) {
    return parse_noise(parse_json_text(json_text, "noise spec"), "/noise", default_seed);
}

WienerParams parse_wiener_json(const std::string& json_text) {
    return parse_wiener(parse_json_text(json_text, "wiener params"), "/wiener");
}

UsmParams parse_usm_json(const std::string& json_text) {
    return parse_usm(parse_json_text(json_text, "usm params"), "/usm");
}

ExperimentConfig parse_config_json(const std::string& json_text) {
    const json j = parse_json_text(json_text, "config");
    if (!j.is_object()) fail("/", "must be an object");

    ExperimentConfig cfg;
    if (j.contains("seed")) cfg.seed = require_u64(j.at("seed"), "/seed");

    // Dataset: manifest directory or synthetic spec, exactly one.
    if (!j.contains("dataset")) fail("/dataset", "missing");
    const auto& ds = j.at("dataset");
    if (!ds.is_object()) fail("/dataset", "must be an object");
    if (ds.contains("manifest") == ds.contains("synthetic"))
        fail("/dataset", "must have exactly one of 'manifest' or 'synthetic'");
    if (ds.contains("manifest")) {
        if (!ds.at("manifest").is_string()) fail("/dataset/manifest", "must be a string path");
        cfg.manifest_dir = ds.at("manifest").get<std::string>();
    } else {
        const auto& sy = ds.at("synthetic");
        if (!sy.is_object()) fail("/dataset/synthetic", "must be an object");
        SyntheticSpec spec;
        spec.seed = cfg.seed;
        if (sy.contains("n")) spec.n = require_int(sy.at("n"), "/dataset/synthetic/n");
        if (sy.contains("size")) spec.size = require_int(sy.at("size"), "/dataset/synthetic/size");
        if (sy.contains("seed")) spec.seed = require_u64(sy.at("seed"), "/dataset/synthetic/seed");
        if (spec.n < 2 || spec.n % 2 != 0) fail("/dataset/synthetic/n", "must be even and >= 2");
        if (spec.size < 64) fail("/dataset/synthetic/size", "must be >= 64");
        cfg.synthetic = spec;
    }

    if (j.contains("noises")) {
        if (!j.at("noises").is_array()) fail("/noises", "must be an array");
        size_t i = 0;
        for (const auto& nj : j.at("noises")) {
            const NoiseSpec spec = parse_noise(nj, "/noises/" + std::to_string(i), cfg.seed);
            if (spec.kind != NoiseKind::None) cfg.noises.push_back(spec);
            ++i;
        }
    }

    if (!j.contains("methods")) fail("/methods", "missing");
    if (!j.at("methods").is_array() || j.at("methods").empty())
        fail("/methods", "must be a non-empty array");
    {
        std::set<std::string> seen;
        size_t i = 0;
        for (const auto& mj : j.at("methods")) {
            const std::string m = mj.is_string() ? mj.get<std::string>() : "";
            if (m != "M1" && m != "M2" && m != "M3")
                fail("/methods/" + std::to_string(i), "must be one of M1, M2, M3");
            if (seen.insert(m).second) cfg.methods.push_back(m);
            ++i;
        }
    }

    if (j.contains("wiener")) cfg.wiener = parse_wiener(j.at("wiener"), "/wiener");
    if (j.contains("usm")) cfg.usm = parse_usm(j.at("usm"), "/usm");

    // Classifier: builtin or external predictions, exactly one (builtin default).
    if (j.contains("classifier")) {
        const auto& cj = j.at("classifier");
        if (!cj.is_object()) fail("/classifier", "must be an object");
        if (cj.contains("builtin") == cj.contains("predictions"))
            fail("/classifier", "must have exactly one of 'builtin' or 'predictions'");
        if (cj.contains("builtin")) {
            const auto& bj = cj.at("builtin");
            if (!bj.is_object()) fail("/classifier/builtin", "must be an object");
            BuiltinClassifierConfig b;
            if (bj.contains("gradient_threshold")) {
                b.gradient_threshold =
                    require_number(bj.at("gradient_threshold"), "/classifier/builtin/gradient_threshold");
                if (!(b.gradient_threshold > 0.0))
                    fail("/classifier/builtin/gradient_threshold", "must be > 0");
            }
            if (bj.contains("density_threshold") && !bj.at("density_threshold").is_null()) {
                b.density_threshold =
                    require_number(bj.at("density_threshold"), "/classifier/builtin/density_threshold");
                if (*b.density_threshold < 0.0 || *b.density_threshold > 1.0)
                    fail("/classifier/builtin/density_threshold", "must be in [0,1]");
            }
            cfg.builtin = b;
        } else {
            const auto& pj = cj.at("predictions");
            if (!pj.is_object() || pj.empty())
                fail("/classifier/predictions", "must be a non-empty object of models");
            ExternalPredictionsConfig ext;
            for (auto it = pj.begin(); it != pj.end(); ++it) {
                if (!it.value().is_object())
                    fail("/classifier/predictions/" + it.key(), "must map cells to CSV paths");
                for (auto cell = it.value().begin(); cell != it.value().end(); ++cell) {
                    if (!cell.value().is_string())
                        fail("/classifier/predictions/" + it.key() + "/" + cell.key(),
                             "must be a string path");
                    ext.cells[it.key()][cell.key()] = cell.value().get<std::string>();
                }
            }
            cfg.external = ext;
        }
    } else {
        cfg.builtin = BuiltinClassifierConfig{};
    }

    if (j.contains("resize")) {
        cfg.resize_target = require_int(j.at("resize"), "/resize");
        if (cfg.resize_target < 3) fail("/resize", "must be >= 3");
    }
    if (j.contains("scale_variance")) {
        if (!j.at("scale_variance").is_boolean()) fail("/scale_variance", "must be a boolean");
        cfg.scale_variance = j.at("scale_variance").get<bool>();
    }
    if (j.contains("split_ratio")) {
        cfg.split_ratio = require_number(j.at("split_ratio"), "/split_ratio");
        if (!(cfg.split_ratio > 0.0 && cfg.split_ratio < 1.0))
            fail("/split_ratio", "must be in (0,1)");
    }
    if (j.contains("output_dir")) {
        if (!j.at("output_dir").is_string()) fail("/output_dir", "must be a string");
        cfg.output_dir = j.at("output_dir").get<std::string>();
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error(path + ": cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_json(ss.str());
}

} // namespace crackbench
