#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace crackbench {

/// Raster of intensities in [0,1] (or mean-centered values for normalized
/// data), row-major, channel-interleaved. 1 channel = grayscale, 3 = RGB.
struct Image {
    int width = 0;
    int height = 0;
    int channels = 1;
    std::vector<double> data;

    Image() = default;
    Image(int w, int h, int c, double fill = 0.0)
        : width(w), height(h), channels(c),
          data(static_cast<size_t>(w) * h * c, fill) {}

    double& at(int x, int y, int c = 0) {
        return data[(static_cast<size_t>(y) * width + x) * channels + c];
    }
    double at(int x, int y, int c = 0) const {
        return data[(static_cast<size_t>(y) * width + x) * channels + c];
    }

    size_t pixel_count() const { return static_cast<size_t>(width) * height; }

    bool same_shape(const Image& o) const {
        return width == o.width && height == o.height && channels == o.channels;
    }
};

/// Mean-centered image plus the per-channel means that were subtracted.
/// channel_stds is all 1.0 unless variance scaling was requested.
struct NormalizedImage {
    Image base;
    std::vector<double> channel_means;
    std::vector<double> channel_stds;
};

/// Throws validation_error if dimensions/channels/data length are inconsistent.
void check_image(const Image& img, const char* what = "image");

/// Reads a binary PGM (P5) or PPM (P6) file with maxval 255. Intensities are
/// mapped v/255 into [0,1]. Errors carry the file path and byte offset.
Image load_image(const std::string& path);

/// Writes P5 (1 channel) or P6 (3 channels) with maxval 255 and the canonical
/// single-space header "P5\n<w> <h>\n255\n". Values are rounded half-up to
/// bytes; input must lie in [0,1].
void save_image(const Image& img, const std::string& path);

/// Bilinear resample with half-pixel-center mapping
/// (src_x = (dst_x + 0.5) * w / out_w - 0.5) and edge clamping.
Image resize_bilinear(const Image& img, int out_w, int out_h);

/// 3-channel input is reduced with luma weights 0.299/0.587/0.114;
/// 1-channel input is returned unchanged.
Image to_gray(const Image& img);

/// Subtracts the per-channel mean; set scale_variance to also divide by the
/// per-channel standard deviation (unit-variance channels).
NormalizedImage normalize(const Image& img, bool scale_variance = false);

/// Inverse of normalize: multiplies stds back in and re-adds channel means.
Image denormalize(const NormalizedImage& n);

} // namespace crackbench
