#include "crackbench/image.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "crackbench/errors.hpp"

namespace crackbench {

void check_image(const Image& img, const char* what) {
    if (img.width <= 0 || img.height <= 0)
        throw validation_error(std::string(what) + ": dimensions must be positive");
    if (img.channels != 1 && img.channels != 3)
        throw validation_error(std::string(what) + ": channels must be 1 or 3");
    const size_t expected =
        static_cast<size_t>(img.width) * img.height * img.channels;
    if (img.data.size() != expected)
        throw validation_error(std::string(what) + ": data length " +
                               std::to_string(img.data.size()) + " != w*h*c " +
                               std::to_string(expected));
}

namespace {

[[noreturn]] void pnm_fail(const std::string& path, size_t offset, const std::string& why) {
    throw io_error(path + ": " + why + " (byte offset " + std::to_string(offset) + ")");
}

// Reads one whitespace/comment-delimited token of a PNM header.
std::string next_token(const std::string& bytes, size_t& pos, const std::string& path) {
    while (pos < bytes.size()) {
        char c = bytes[pos];
        if (c == '#') { // comment runs to end of line
            while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
        } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            ++pos;
        } else {
            break;
        }
    }
    if (pos >= bytes.size()) pnm_fail(path, pos, "truncated header");
    size_t start = pos;
    while (pos < bytes.size() && !std::isspace(static_cast<unsigned char>(bytes[pos])) &&
           bytes[pos] != '#')
        ++pos;
    return bytes.substr(start, pos - start);
}

int parse_dim(const std::string& tok, const std::string& path, size_t offset,
              const char* what) {
    if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
        pnm_fail(path, offset, std::string("malformed ") + what + " '" + tok + "'");
    long v = std::strtol(tok.c_str(), nullptr, 10);
    if (v <= 0 || v > 1 << 20)
        pnm_fail(path, offset, std::string(what) + " out of range: " + tok);
    return static_cast<int>(v);
}

} // namespace

Image load_image(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error(path + ": cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    const std::string bytes = ss.str();

    size_t pos = 0;
    const std::string magic = next_token(bytes, pos, path);
    int channels;
    if (magic == "P5") channels = 1;
    else if (magic == "P6") channels = 3;
    else pnm_fail(path, 0, "unsupported magic '" + magic + "', expected P5 or P6");

    size_t tok_at = pos;
    const int width = parse_dim(next_token(bytes, pos, path), path, tok_at, "width");
    tok_at = pos;
    const int height = parse_dim(next_token(bytes, pos, path), path, tok_at, "height");
    tok_at = pos;
    const std::string maxval = next_token(bytes, pos, path);
    if (maxval != "255") pnm_fail(path, tok_at, "unsupported maxval '" + maxval + "', expected 255");

    // Exactly one whitespace byte separates the header from the raster.
    if (pos >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[pos])))
        pnm_fail(path, pos, "missing whitespace after maxval");
    ++pos;

    const size_t count = static_cast<size_t>(width) * height * channels;
    if (bytes.size() - pos < count)
        pnm_fail(path, bytes.size(), "raster truncated: expected " + std::to_string(count) +
                                         " bytes, got " + std::to_string(bytes.size() - pos));

    Image img(width, height, channels);
    for (size_t i = 0; i < count; ++i)
        img.data[i] = static_cast<unsigned char>(bytes[pos + i]) / 255.0;
    return img;
}

void save_image(const Image& img, const std::string& path) {
    check_image(img, "save_image");
    for (double v : img.data)
        if (!(v >= 0.0 && v <= 1.0))
            throw validation_error("save_image: intensity " + std::to_string(v) +
                                   " outside [0,1]");

    std::string out;
    out += (img.channels == 1) ? "P5\n" : "P6\n";
    out += std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
    out.reserve(out.size() + img.data.size());
    for (double v : img.data)
        out.push_back(static_cast<char>(static_cast<unsigned char>(std::llround(v * 255.0))));

    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw io_error(path + ": cannot open for writing");
    f.write(out.data(), static_cast<std::streamsize>(out.size()));
    if (!f) throw io_error(path + ": write failed");
}

Image resize_bilinear(const Image& img, int out_w, int out_h) {
    check_image(img, "resize_bilinear");
    if (out_w < 1 || out_h < 1)
        throw validation_error("resize_bilinear: target dimensions must be >= 1");

    Image out(out_w, out_h, img.channels);
    const double sx = static_cast<double>(img.width) / out_w;
    const double sy = static_cast<double>(img.height) / out_h;
    for (int y = 0; y < out_h; ++y) {
        const double src_y = (y + 0.5) * sy - 0.5;
        int y0 = static_cast<int>(std::floor(src_y));
        const double fy = src_y - y0;
        const int y0c = std::clamp(y0, 0, img.height - 1);
        const int y1c = std::clamp(y0 + 1, 0, img.height - 1);
        for (int x = 0; x < out_w; ++x) {
            const double src_x = (x + 0.5) * sx - 0.5;
            int x0 = static_cast<int>(std::floor(src_x));
            const double fx = src_x - x0;
            const int x0c = std::clamp(x0, 0, img.width - 1);
            const int x1c = std::clamp(x0 + 1, 0, img.width - 1);
            for (int c = 0; c < img.channels; ++c) {
                const double v00 = img.at(x0c, y0c, c);
                const double v10 = img.at(x1c, y0c, c);
                const double v01 = img.at(x0c, y1c, c);
                const double v11 = img.at(x1c, y1c, c);
                out.at(x, y, c) = v00 * (1 - fx) * (1 - fy) + v10 * fx * (1 - fy) +
                                  v01 * (1 - fx) * fy + v11 * fx * fy;
            }
        }
    }
    return out;
}

Image to_gray(const Image& img) {
    check_image(img, "to_gray");
    if (img.channels == 1) return img;
    Image out(img.width, img.height, 1);
    for (size_t p = 0; p < img.pixel_count(); ++p) {
        const double* px = &img.data[p * 3];
        out.data[p] = 0.299 * px[0] + 0.587 * px[1] + 0.114 * px[2];
    }
    return out;
}

NormalizedImage normalize(const Image& img, bool scale_variance) {
    check_image(img, "normalize");
    NormalizedImage n;
    n.base = img;
    n.channel_means.assign(img.channels, 0.0);
    n.channel_stds.assign(img.channels, 1.0);

    const size_t pixels = img.pixel_count();
    for (int c = 0; c < img.channels; ++c) {
        double sum = 0.0;
        for (size_t p = 0; p < pixels; ++p) sum += img.data[p * img.channels + c];
        n.channel_means[c] = sum / static_cast<double>(pixels);
    }
    for (size_t p = 0; p < pixels; ++p)
        for (int c = 0; c < img.channels; ++c)
            n.base.data[p * img.channels + c] -= n.channel_means[c];

    if (scale_variance) {
        for (int c = 0; c < img.channels; ++c) {
            double sq = 0.0;
            for (size_t p = 0; p < pixels; ++p) {
                const double v = n.base.data[p * img.channels + c];
                sq += v * v;
            }
            const double sd = std::sqrt(sq / static_cast<double>(pixels));
            if (sd > 0.0) n.channel_stds[c] = sd;
        }
        for (size_t p = 0; p < pixels; ++p)
            for (int c = 0; c < img.channels; ++c)
                n.base.data[p * img.channels + c] /= n.channel_stds[c];
    }
    return n;
}

Image denormalize(const NormalizedImage& n) {
    check_image(n.base, "denormalize");
    Image out = n.base;
    for (size_t p = 0; p < out.pixel_count(); ++p)
        for (int c = 0; c < out.channels; ++c) {
            double& v = out.data[p * out.channels + c];
            v = v * n.channel_stds[c] + n.channel_means[c];
        }
    return out;
}

} // namespace crackbench
