#include "crackbench/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "crackbench/errors.hpp"
#include "crackbench/noise.hpp"

namespace crackbench {

Split split_dataset(const DatasetManifest& m) {
    const size_t n = m.entries.size();
    std::vector<size_t> idx(n);
    for (size_t i = 0; i < n; ++i) idx[i] = i;

    SplitMix64 rng(m.split_seed);
    for (size_t i = n; i > 1; --i) {
        const size_t j = static_cast<size_t>(rng.next_below(i));
        std::swap(idx[i - 1], idx[j]);
    }

    const auto train_count = static_cast<size_t>(std::clamp<long long>(
        std::llround(m.split_ratio * static_cast<double>(n)), 0, static_cast<long long>(n)));
    Split s;
    s.train.assign(idx.begin(), idx.begin() + static_cast<long>(train_count));
    s.eval.assign(idx.begin() + static_cast<long>(train_count), idx.end());
    return s;
}

DatasetManifest load_manifest(const std::filesystem::path& dir, double split_ratio,
                              uint64_t split_seed) {
    const auto file = dir / "manifest.csv";
    std::ifstream in(file, std::ios::binary);
    if (!in) throw io_error(file.string() + ": cannot open file");

    DatasetManifest m;
    m.root = dir;
    m.split_ratio = split_ratio;
    m.split_seed = split_seed;

    std::string line;
    size_t line_no = 0;
    if (!std::getline(in, line)) throw validation_error(file.string() + ": empty file");
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "image_id,path,label")
        throw validation_error(file.string() + ": line 1: bad header '" + line + "'");

    std::set<std::string> ids;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto c1 = line.find(',');
        const auto c2 = c1 == std::string::npos ? std::string::npos : line.find(',', c1 + 1);
        if (c2 == std::string::npos || line.find(',', c2 + 1) != std::string::npos)
            throw validation_error(file.string() + ": line " + std::to_string(line_no) +
                                   ": expected 3 fields");
        ManifestEntry e;
        e.image_id = line.substr(0, c1);
        e.path = line.substr(c1 + 1, c2 - c1 - 1);
        e.label = label_from_string(line.substr(c2 + 1));
        if (!ids.insert(e.image_id).second)
            throw validation_error(file.string() + ": line " + std::to_string(line_no) +
                                   ": duplicate image_id '" + e.image_id + "'");
        if (!std::filesystem::exists(m.resolve(e)))
            throw io_error(file.string() + ": line " + std::to_string(line_no) +
                           ": missing image file '" + m.resolve(e).string() + "'");
        m.entries.push_back(std::move(e));
    }
    return m;
}

void write_manifest(const DatasetManifest& m) {
    const auto file = m.root / "manifest.csv";
    std::ofstream f(file, std::ios::binary | std::ios::trunc);
    if (!f) throw io_error(file.string() + ": cannot open for writing");
    f << "image_id,path,label\n";
    for (const auto& e : m.entries)
        f << e.image_id << "," << e.path << "," << label_to_string(e.label) << "\n";
    if (!f) throw io_error(file.string() + ": write failed");
}

namespace {

// Value noise: a coarse random lattice in [lo,hi], bilinearly interpolated.
Image value_noise_background(SplitMix64& rng, int size) {
    constexpr int kCell = 16;
    const int gw = size / kCell + 2;
    std::vector<double> lattice(static_cast<size_t>(gw) * gw);
    for (double& v : lattice) v = rng.next_in(0.55, 0.75);

    Image img(size, size, 1);
    for (int y = 0; y < size; ++y) {
        const double gy = static_cast<double>(y) / kCell;
        const int j = static_cast<int>(gy);
        const double fy = gy - j;
        for (int x = 0; x < size; ++x) {
            const double gx = static_cast<double>(x) / kCell;
            const int i = static_cast<int>(gx);
            const double fx = gx - i;
            const double v00 = lattice[static_cast<size_t>(j) * gw + i];
            const double v10 = lattice[static_cast<size_t>(j) * gw + i + 1];
            const double v01 = lattice[static_cast<size_t>(j + 1) * gw + i];
            const double v11 = lattice[static_cast<size_t>(j + 1) * gw + i + 1];
            img.at(x, y) = v00 * (1 - fx) * (1 - fy) + v10 * fx * (1 - fy) +
                           v01 * (1 - fx) * fy + v11 * fx * fy;
        }
    }
    for (double& v : img.data) v += rng.next_in(-0.015, 0.015);
    return img;
}

void stamp_disc(Image& img, double cx, double cy, double radius, double value) {
    const int x0 = std::max(0, static_cast<int>(std::floor(cx - radius)));
    const int x1 = std::min(img.width - 1, static_cast<int>(std::ceil(cx + radius)));
    const int y0 = std::max(0, static_cast<int>(std::floor(cy - radius)));
    const int y1 = std::min(img.height - 1, static_cast<int>(std::ceil(cy + radius)));
    const double r2 = radius * radius;
    for (int y = y0; y <= y1; ++y)
        for (int x = x0; x <= x1; ++x) {
            const double dx = x - cx, dy = y - cy;
            if (dx * dx + dy * dy <= r2) img.at(x, y) = value;
        }
}

// Small dark pits: the surface irregularities both classes share. They give
// background images a small but nonzero edge response.
void draw_pits(Image& img, SplitMix64& rng) {
    const int count = 2 + static_cast<int>(rng.next_below(8));
    for (int p = 0; p < count; ++p) {
        const double cx = rng.next_in(0.05, 0.95) * img.width;
        const double cy = rng.next_in(0.05, 0.95) * img.height;
        const double r = rng.next_in(0.5, 0.9);
        stamp_disc(img, cx, cy, r, rng.next_in(0.32, 0.42));
    }
}

// Downward random walk with occasional horizontal jogs.
void draw_crack(Image& img, SplitMix64& rng) {
    const int size = img.width;
    const double width = 1.0 + static_cast<double>(rng.next_below(3)); // 1..3 px
    const double ink = rng.next_in(0.1, 0.3);
    const double radius = width / 2.0;

    double x = rng.next_in(0.15, 0.85) * size;
    for (int y = 0; y < size; ++y) {
        x = std::clamp(x + rng.next_in(-1.2, 1.2), 1.0, size - 2.0);
        stamp_disc(img, x, y, radius, ink);
        if (rng.next_double() < 0.05) {
            const double dir = rng.next_double() < 0.5 ? -1.0 : 1.0;
            const auto run = 2 + static_cast<int>(rng.next_below(5));
            for (int k = 0; k < run; ++k) {
                x = std::clamp(x + dir, 1.0, size - 2.0);
                stamp_disc(img, x, y, radius, ink);
            }
        }
    }
}

// Low-contrast blobs with a polynomial falloff; soft enough to stay below
// the edge detector's default gradient threshold.
void draw_blotches(Image& img, SplitMix64& rng) {
    const int count = 1 + static_cast<int>(rng.next_below(3));
    for (int b = 0; b < count; ++b) {
        const double cx = rng.next_in(0.2, 0.8) * img.width;
        const double cy = rng.next_in(0.2, 0.8) * img.height;
        const double r = rng.next_in(6.0, 20.0);
        const double amp = rng.next_in(-0.05, 0.05);
        const int x0 = std::max(0, static_cast<int>(cx - r)), x1 = std::min(img.width - 1, static_cast<int>(cx + r));
        const int y0 = std::max(0, static_cast<int>(cy - r)), y1 = std::min(img.height - 1, static_cast<int>(cy + r));
        for (int y = y0; y <= y1; ++y)
            for (int x = x0; x <= x1; ++x) {
                const double u2 = ((x - cx) * (x - cx) + (y - cy) * (y - cy)) / (r * r);
                if (u2 < 1.0) img.at(x, y) += amp * (1.0 - u2) * (1.0 - u2);
            }
    }
}

Image synth_image(uint64_t image_seed, int size, Label label) {
    SplitMix64 rng(image_seed);
    Image img = value_noise_background(rng, size);
    draw_pits(img, rng);
    if (label == Label::Crack) {
        draw_crack(img, rng);
    } else if (rng.next_double() < 0.5) {
        draw_blotches(img, rng);
    }
    for (double& v : img.data) v = std::clamp(v, 0.0, 1.0);
    return img;
}

} // namespace

DatasetManifest generate_synthetic_dataset(int n, int size, uint64_t seed,
                                           const std::filesystem::path& dir) {
    if (n < 2 || n % 2 != 0)
        throw validation_error("generate_synthetic_dataset: n must be even and >= 2");
    if (size < 64)
        throw validation_error("generate_synthetic_dataset: size must be >= 64");

    std::filesystem::create_directories(dir / "images");

    DatasetManifest m;
    m.root = dir;
    SplitMix64 master(seed);
    for (int i = 0; i < n; ++i) {
        const uint64_t image_seed = master.next();
        const Label label = (i % 2 == 0) ? Label::Crack : Label::NonCrack;
        char id[32];
        std::snprintf(id, sizeof id, "img_%04d", i);
        ManifestEntry e;
        e.image_id = id;
        e.path = std::string("images/") + id + ".pgm";
        e.label = label;
        save_image(synth_image(image_seed, size, label), (dir / e.path).string());
        m.entries.push_back(std::move(e));
    }
    write_manifest(m);
    return m;
}

} // namespace crackbench
