#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "crackbench/image.hpp"

namespace crackbench {

/// SplitMix64 stream. All randomness in the project flows through this so
/// outputs are bit-reproducible across runs and platforms.
class SplitMix64 {
public:
    explicit SplitMix64(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0,1), 53 bits.
    double next_double() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    /// Uniform double in [lo,hi).
    double next_in(double lo, double hi) {
        return lo + (hi - lo) * next_double();
    }

    /// Uniform integer in [0,bound). Modulo bias is irrelevant here; what
    /// matters is that the draw sequence is fixed.
    uint64_t next_below(uint64_t bound) { return next() % bound; }

private:
    uint64_t state_;
};

enum class NoiseKind { None, SaltPepper, MotionBlur };

/// Tagged description of one degradation, including its seed.
struct NoiseSpec {
    NoiseKind kind = NoiseKind::None;
    double density = 0.05;    // SaltPepper: per-pixel corruption probability
    double length = 9.0;      // MotionBlur: line length in pixels, >= 1
    double angle_deg = 0.0;   // MotionBlur: normalized to [0,180)
    uint64_t seed = 0;

    /// "none", "salt_pepper_<d>" or "motion_blur_<L>_<angle>".
    std::string id() const;
};

/// Normalizes an angle in degrees to [0,180).
double normalize_angle_deg(double deg);

/// Odd-sized convolution kernel, weights summing to 1.
struct Kernel {
    int width = 1;
    int height = 1;
    std::vector<double> weights{1.0};

    double at(int x, int y) const {
        return weights[static_cast<size_t>(y) * width + x];
    }
};

/// Impulse noise: iterates pixels in row-major order with a SplitMix64 stream
/// seeded directly by `seed`; each pixel is corrupted with probability d
/// (first draw), and a corrupted pixel is set across all channels to 1
/// (second draw < 0.5) or 0. Uncorrupted pixels are bit-identical to input.
Image apply_salt_pepper(const Image& img, double d, uint64_t seed);

/// Point-spread function of linear motion: the anti-aliased rasterization of
/// a centered line segment of length L at angle theta, each cell weighted by
/// the length of segment it contains, normalized to sum 1.
Kernel motion_blur_kernel(double length, double angle_deg);

/// Per-channel 2-D correlation with replicate (edge-clamp) padding;
/// output has the input's dimensions. Kernel dimensions must be odd.
Image convolve2d(const Image& img, const Kernel& k);

/// Applies spec.kind to img (None returns a copy).
Image apply_noise(const Image& img, const NoiseSpec& spec);

/// FNV-1a 64-bit hash; used to derive stable per-image noise seeds.
uint64_t fnv1a64(const std::string& s);

} // namespace crackbench
