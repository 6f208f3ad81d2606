#include "crackbench/noise.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "crackbench/errors.hpp"

namespace crackbench {

namespace {

std::string fmt_g(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

} // namespace

double normalize_angle_deg(double deg) {
    double a = std::fmod(deg, 180.0);
    if (a < 0.0) a += 180.0;
    return a;
}

std::string NoiseSpec::id() const {
    switch (kind) {
        case NoiseKind::None: return "none";
        case NoiseKind::SaltPepper: return "salt_pepper_" + fmt_g(density);
        case NoiseKind::MotionBlur:
            return "motion_blur_" + fmt_g(length) + "_" + fmt_g(normalize_angle_deg(angle_deg));
    }
    return "none";
}

uint64_t fnv1a64(const std::string& s) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

Image apply_salt_pepper(const Image& img, double d, uint64_t seed) {
    check_image(img, "apply_salt_pepper");
    if (!(d >= 0.0 && d <= 1.0))
        throw validation_error("apply_salt_pepper: density " + std::to_string(d) +
                               " outside [0,1]");
    Image out = img;
    SplitMix64 rng(seed);
    for (size_t p = 0; p < img.pixel_count(); ++p) {
        if (rng.next_double() < d) {
            const double v = rng.next_double() < 0.5 ? 1.0 : 0.0;
            for (int c = 0; c < img.channels; ++c) out.data[p * img.channels + c] = v;
        }
    }
    return out;
}

Kernel motion_blur_kernel(double length, double angle_deg) {
    if (!(length >= 1.0))
        throw validation_error("motion_blur_kernel: length must be >= 1, got " +
                               std::to_string(length));
    const double theta = normalize_angle_deg(angle_deg);

    // Unit direction; axis-aligned angles kept exact so canonical kernels
    // (e.g. L=3 horizontal -> [1/3,1/3,1/3]) are reproduced bit-for-bit.
    double ux, uy;
    if (theta == 0.0) {
        ux = 1.0; uy = 0.0;
    } else if (theta == 90.0) {
        ux = 0.0; uy = 1.0;
    } else {
        const double rad = theta * 3.14159265358979323846 / 180.0;
        ux = std::cos(rad);
        uy = std::sin(rad);
    }

    const double half = length / 2.0;
    const double eps = 1e-12;
    auto half_cells = [&](double extent) {
        return std::max(0, static_cast<int>(std::ceil(extent - 0.5 - eps)));
    };
    int rx = half_cells(std::abs(ux) * half);
    int ry = half_cells(std::abs(uy) * half);

    // Each cell's weight is the length of segment it contains: clip the
    // parameter interval [-L/2, L/2] against the cell's x- and y-slabs.
    auto clip_slab = [&](double u, double lo, double hi, double& t0, double& t1) -> bool {
        if (u == 0.0) return lo <= 0.0 && 0.0 <= hi; // segment parallel to slab
        double a = lo / u, b = hi / u;
        if (a > b) std::swap(a, b);
        t0 = std::max(t0, a);
        t1 = std::min(t1, b);
        return t0 < t1;
    };

    const int kw = 2 * rx + 1, kh = 2 * ry + 1;
    std::vector<double> w(static_cast<size_t>(kw) * kh, 0.0);
    double total = 0.0;
    for (int j = -ry; j <= ry; ++j) {
        for (int i = -rx; i <= rx; ++i) {
            double t0 = -half, t1 = half;
            if (!clip_slab(ux, i - 0.5, i + 0.5, t0, t1)) continue;
            if (!clip_slab(uy, j - 0.5, j + 0.5, t0, t1)) continue;
            const double len = t1 - t0;
            if (len <= 0.0) continue;
            w[static_cast<size_t>(j + ry) * kw + (i + rx)] = len;
            total += len;
        }
    }

    Kernel k;
    k.width = kw;
    k.height = kh;
    k.weights.assign(w.size(), 0.0);
    for (size_t i = 0; i < w.size(); ++i) k.weights[i] = w[i] / total;
    return k;
}

Image convolve2d(const Image& img, const Kernel& k) {
    check_image(img, "convolve2d");
    if (k.width % 2 == 0 || k.height % 2 == 0)
        throw validation_error("convolve2d: kernel dimensions must be odd, got " +
                               std::to_string(k.width) + "x" + std::to_string(k.height));
    const int rx = k.width / 2, ry = k.height / 2;
    Image out(img.width, img.height, img.channels);
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            for (int c = 0; c < img.channels; ++c) {
                double acc = 0.0;
                for (int j = -ry; j <= ry; ++j) {
                    const int yy = std::clamp(y + j, 0, img.height - 1);
                    for (int i = -rx; i <= rx; ++i) {
                        const int xx = std::clamp(x + i, 0, img.width - 1);
                        acc += k.at(i + rx, j + ry) * img.at(xx, yy, c);
                    }
                }
                out.at(x, y, c) = acc;
            }
        }
    }
    return out;
}

Image apply_noise(const Image& img, const NoiseSpec& spec) {
    switch (spec.kind) {
        case NoiseKind::None: return img;
        case NoiseKind::SaltPepper: return apply_salt_pepper(img, spec.density, spec.seed);
        case NoiseKind::MotionBlur:
            return convolve2d(img, motion_blur_kernel(spec.length, spec.angle_deg));
    }
    return img;
}

} // namespace crackbench
