#include "crackbench/enhance.hpp"

#include <algorithm>
#include <cmath>

#include "crackbench/errors.hpp"

namespace crackbench {

namespace {

void check_window(int h, int w) {
    if (h < 1 || w < 1 || h % 2 == 0 || w % 2 == 0)
        throw validation_error("window dimensions must be odd and >= 1, got " +
                               std::to_string(h) + "x" + std::to_string(w));
}

// One grayscale plane extracted from a multi-channel image.
Image extract_channel(const Image& img, int c) {
    Image out(img.width, img.height, 1);
    for (size_t p = 0; p < img.pixel_count(); ++p)
        out.data[p] = img.data[p * img.channels + c];
    return out;
}

} // namespace

LocalStats local_stats(const Image& img, int window_h, int window_w) {
    check_image(img, "local_stats");
    if (img.channels != 1)
        throw validation_error("local_stats: grayscale input required");
    check_window(window_h, window_w);

    const int ry = window_h / 2, rx = window_w / 2;
    const double n = static_cast<double>(window_h) * window_w;
    LocalStats st;
    st.window_h = window_h;
    st.window_w = window_w;
    st.mean_map = Image(img.width, img.height, 1);
    st.var_map = Image(img.width, img.height, 1);

    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            double sum = 0.0, sum_sq = 0.0;
            for (int j = -ry; j <= ry; ++j) {
                const int yy = std::clamp(y + j, 0, img.height - 1);
                for (int i = -rx; i <= rx; ++i) {
                    const int xx = std::clamp(x + i, 0, img.width - 1);
                    const double v = img.at(xx, yy);
                    sum += v;
                    sum_sq += v * v;
                }
            }
            const double mean = sum / n;
            st.mean_map.at(x, y) = mean;
            st.var_map.at(x, y) = std::max(0.0, sum_sq / n - mean * mean);
        }
    }
    return st;
}

Image wiener_adaptive(const Image& img, const WienerParams& params) {
    check_image(img, "wiener_adaptive");
    check_window(params.window_h, params.window_w);
    if (params.has_noise_variance && !(params.noise_variance >= 0.0))
        throw validation_error("wiener_adaptive: noise variance must be >= 0");

    Image out(img.width, img.height, img.channels);
    for (int c = 0; c < img.channels; ++c) {
        const Image plane = img.channels == 1 ? img : extract_channel(img, c);
        const LocalStats st = local_stats(plane, params.window_h, params.window_w);

        double v2;
        if (params.has_noise_variance) {
            v2 = params.noise_variance;
        } else {
            // Fallback: the mean of this channel's local variances.
            double sum = 0.0;
            for (double v : st.var_map.data) sum += v;
            v2 = sum / static_cast<double>(st.var_map.data.size());
        }

        for (size_t p = 0; p < plane.pixel_count(); ++p) {
            const double s = plane.data[p];
            const double mean = st.mean_map.data[p];
            const double var = st.var_map.data[p];
            const double den = std::max(var, v2);
            const double gain = den > 0.0 ? std::max(var - v2, 0.0) / den : 0.0;
            const double r = mean + gain * (s - mean);
            out.data[p * img.channels + c] = std::clamp(r, 0.0, 1.0);
        }
    }
    return out;
}

Kernel gaussian_kernel(double sigma) {
    if (!(sigma > 0.0))
        throw validation_error("gaussian_kernel: sigma must be > 0, got " +
                               std::to_string(sigma));
    const int radius = static_cast<int>(std::ceil(3.0 * sigma));
    const int size = 2 * radius + 1;
    Kernel k;
    k.width = size;
    k.height = size;
    k.weights.assign(static_cast<size_t>(size) * size, 0.0);

    const double inv_two_s2 = 1.0 / (2.0 * sigma * sigma);
    double total = 0.0;
    for (int j = -radius; j <= radius; ++j)
        for (int i = -radius; i <= radius; ++i) {
            const double w = std::exp(-(i * i + j * j) * inv_two_s2);
            k.weights[static_cast<size_t>(j + radius) * size + (i + radius)] = w;
            total += w;
        }
    for (double& w : k.weights) w /= total;
    return k;
}

Image unsharp_mask_raw(const Image& img, const UsmParams& params) {
    check_image(img, "unsharp_mask");
    if (!(params.sigma > 0.0) || !(params.lambda >= 0.0))
        throw validation_error("unsharp_mask: require sigma > 0 and lambda >= 0");

    const Image blurred = convolve2d(img, gaussian_kernel(params.sigma));
    Image out(img.width, img.height, img.channels);
    for (size_t i = 0; i < img.data.size(); ++i)
        out.data[i] = img.data[i] + params.lambda * (img.data[i] - blurred.data[i]);
    return out;
}

Image unsharp_mask(const Image& img, const UsmParams& params) {
    Image out = unsharp_mask_raw(img, params);
    for (double& v : out.data) v = std::clamp(v, 0.0, 1.0);
    return out;
}

} // namespace crackbench
