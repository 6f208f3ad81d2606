#pragma once

#include "crackbench/image.hpp"
#include "crackbench/noise.hpp"

namespace crackbench {

/// Per-pixel local mean and variance over a P x Q window (replicate padded).
struct LocalStats {
    Image mean_map;   // 1-channel, same dimensions as source
    Image var_map;    // clamped at 0 against floating-point cancellation
    int window_h = 3; // P
    int window_w = 3; // Q
};

struct WienerParams {
    int window_h = 3;               // P, odd
    int window_w = 3;               // Q, odd
    bool has_noise_variance = false;
    double noise_variance = 0.0;    // v^2 >= 0; estimated from the image when unset
};

struct UsmParams {
    double sigma = 1.0;   // Gaussian std-dev in pixels, > 0
    double lambda = 0.8;  // sharpening amount, >= 0
};

/// mean = average of the P x Q neighborhood, var = mean of squares - mean^2
/// (clamped at 0). Grayscale input only; callers run per channel.
LocalStats local_stats(const Image& img, int window_h, int window_w);

/// 2-D adaptive noise filter. Per channel:
///   r = mean + gain * (s - mean),  gain = max(var - v2, 0) / max(var, v2)
/// with v2 the supplied noise variance, or the mean of the channel's local
/// variances when unset (gain = 0 when both are zero). Output clamped to [0,1].
Image wiener_adaptive(const Image& img, const WienerParams& params);

/// Square Gaussian low-pass kernel of radius ceil(3*sigma),
/// weights proportional to exp(-(i^2+j^2)/(2 sigma^2)), normalized to sum 1.
Kernel gaussian_kernel(double sigma);

/// Unsharp masking before the final clamp: O = I + lambda * (I - I (*) G_sigma),
/// computed per channel in double precision with replicate-padded convolution.
Image unsharp_mask_raw(const Image& img, const UsmParams& params);

/// unsharp_mask_raw clamped to [0,1].
Image unsharp_mask(const Image& img, const UsmParams& params);

} // namespace crackbench
