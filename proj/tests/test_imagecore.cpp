#include <doctest.h>

#include <cmath>

#include "crackbench/errors.hpp"
#include "crackbench/image.hpp"
#include "crackbench/noise.hpp"
#include "oracles.hpp"
#include "test_helpers.hpp"

using namespace crackbench;

TEST_CASE("load_image maps P5 bytes to [0,1]") {
    const auto dir = testutil::scratch_dir("pnm_load");
    const std::string bytes = std::string("P5\n2 1\n255\n") + '\x00' + '\xff';
    testutil::write_file(dir / "a.pgm", bytes);

    const Image img = load_image((dir / "a.pgm").string());
    CHECK(img.width == 2);
    CHECK(img.height == 1);
    CHECK(img.channels == 1);
    CHECK(img.data[0] == 0.0);
    CHECK(img.data[1] == 1.0);
}

TEST_CASE("load_image maps P6 bytes to a 1x1x3 image") {
    const auto dir = testutil::scratch_dir("pnm_load6");
    std::string bytes = "P6\n1 1\n255\n";
    bytes += '\xff';
    bytes += '\x00';
    bytes += '\x00';
    testutil::write_file(dir / "a.ppm", bytes);

    const Image img = load_image((dir / "a.ppm").string());
    CHECK(img.channels == 3);
    CHECK(img.data[0] == 1.0);
    CHECK(img.data[1] == 0.0);
    CHECK(img.data[2] == 0.0);
}

TEST_CASE("load_image failure modes carry path and byte offset") {
    const auto dir = testutil::scratch_dir("pnm_err");
    CHECK_THROWS_AS(load_image((dir / "missing.pgm").string()), io_error);

    testutil::write_file(dir / "magic.pgm", "P4\n1 1\n255\n\x00");
    CHECK_THROWS_WITH_AS(load_image((dir / "magic.pgm").string()),
                         doctest::Contains("unsupported magic"), io_error);

    testutil::write_file(dir / "maxval.pgm", "P5\n1 1\n65535\n\x00");
    try {
        load_image((dir / "maxval.pgm").string());
        FAIL("expected io_error");
    } catch (const io_error& e) {
        const std::string msg = e.what();
        CHECK(msg.find("maxval.pgm") != std::string::npos);
        CHECK(msg.find("byte offset") != std::string::npos);
    }

    testutil::write_file(dir / "short.pgm", "P5\n4 4\n255\nab");
    CHECK_THROWS_WITH_AS(load_image((dir / "short.pgm").string()),
                         doctest::Contains("truncated"), io_error);

    testutil::write_file(dir / "dim.pgm", "P5\n-3 2\n255\n");
    CHECK_THROWS_AS(load_image((dir / "dim.pgm").string()), io_error);
}

TEST_CASE("save_image rounds half-up and writes canonical headers") {
    const auto dir = testutil::scratch_dir("pnm_save");
    Image img(1, 1, 1);
    img.data[0] = 0.5;
    save_image(img, (dir / "half.pgm").string());
    const std::string half = testutil::read_file(dir / "half.pgm");
    CHECK(half == std::string("P5\n1 1\n255\n") + '\x80'); // round(127.5) = 128

    Image ends(2, 1, 1);
    ends.data = {0.0, 1.0};
    save_image(ends, (dir / "ends.pgm").string());
    const std::string got = testutil::read_file(dir / "ends.pgm");
    CHECK(got == std::string("P5\n2 1\n255\n") + '\x00' + '\xff');
}

TEST_CASE("save rejects out-of-range intensities and bad paths") {
    Image img(1, 1, 1);
    img.data[0] = 1.5;
    CHECK_THROWS_AS(save_image(img, "/tmp/range.pgm"), validation_error);
    img.data[0] = 0.5;
    CHECK_THROWS_AS(save_image(img, "/nonexistent_dir_zz/x.pgm"), io_error);
}

TEST_CASE("save-load round trip is byte-identical for canonical files") {
    const auto dir = testutil::scratch_dir("pnm_roundtrip");
    SplitMix64 rng(123);
    for (int t = 0; t < 20; ++t) {
        const int w = 1 + static_cast<int>(rng.next_below(16));
        const int h = 1 + static_cast<int>(rng.next_below(16));
        const int c = rng.next_double() < 0.5 ? 1 : 3;
        std::string f = (c == 1 ? "P5\n" : "P6\n");
        f += std::to_string(w) + " " + std::to_string(h) + "\n255\n";
        for (int i = 0; i < w * h * c; ++i)
            f += static_cast<char>(static_cast<unsigned char>(rng.next_below(256)));

        const auto path = dir / ("r" + std::to_string(t) + ".pnm");
        testutil::write_file(path, f);
        save_image(load_image(path.string()), path.string());
        CHECK(testutil::read_file(path) == f);
    }
}

TEST_CASE("load-save quantization error is bounded by 1/510") {
    const auto dir = testutil::scratch_dir("pnm_quant");
    SplitMix64 rng(7);
    const Image img = oracle::random_image(rng, 13, 9, 3);
    const auto path = (dir / "q.ppm").string();
    save_image(img, path);
    const Image back = load_image(path);
    for (size_t i = 0; i < img.data.size(); ++i)
        CHECK(std::abs(back.data[i] - img.data[i]) <= 1.0 / 510.0 + 1e-12);
}

TEST_CASE("resize to identical dimensions is bit-exact") {
    SplitMix64 rng(11);
    const Image img = oracle::random_image(rng, 17, 9, 3);
    const Image out = resize_bilinear(img, 17, 9);
    CHECK(out.data == img.data);
}

TEST_CASE("resize of a constant image stays constant") {
    Image img(7, 5, 1, 0.7);
    const Image out = resize_bilinear(img, 13, 3);
    for (double v : out.data) CHECK(v == doctest::Approx(0.7).epsilon(1e-12));
}

TEST_CASE("resize 2x2 checker to 1x1 samples the center") {
    Image img(2, 2, 1);
    img.data = {0.0, 1.0, 1.0, 0.0};
    const Image out = resize_bilinear(img, 1, 1);
    CHECK(out.data[0] == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("resize output is a convex combination of inputs") {
    SplitMix64 rng(29);
    for (int t = 0; t < 10; ++t) {
        const int w = 2 + static_cast<int>(rng.next_below(20));
        const int h = 2 + static_cast<int>(rng.next_below(20));
        const Image img = oracle::random_image(rng, w, h);
        double lo = 1.0, hi = 0.0;
        for (double v : img.data) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        const int ow = 1 + static_cast<int>(rng.next_below(30));
        const int oh = 1 + static_cast<int>(rng.next_below(30));
        const Image out = resize_bilinear(img, ow, oh);
        for (double v : out.data) {
            CHECK(v >= lo - 1e-12);
            CHECK(v <= hi + 1e-12);
        }
    }
}

TEST_CASE("resize rejects zero target dimensions") {
    Image img(2, 2, 1, 0.5);
    CHECK_THROWS_AS(resize_bilinear(img, 0, 4), validation_error);
    CHECK_THROWS_AS(resize_bilinear(img, 4, 0), validation_error);
}

TEST_CASE("to_gray passes 1-channel input through and applies luma weights") {
    SplitMix64 rng(3);
    const Image gray_in = oracle::random_image(rng, 6, 4, 1);
    CHECK(to_gray(gray_in).data == gray_in.data);

    Image px(1, 1, 3);
    px.data = {1.0, 1.0, 1.0};
    CHECK(to_gray(px).data[0] == doctest::Approx(1.0).epsilon(1e-12));

    px.data = {1.0, 0.0, 0.0};
    CHECK(to_gray(px).data[0] == 0.299);

    // Gray-valued RGB pixels map to their own value.
    for (int t = 0; t < 20; ++t) {
        const double v = rng.next_double();
        px.data = {v, v, v};
        CHECK(to_gray(px).data[0] == doctest::Approx(v).epsilon(1e-12));
    }
}

TEST_CASE("normalize centers channels and stays invertible") {
    SUBCASE("constant image") {
        Image img(5, 5, 1, 0.4);
        const NormalizedImage n = normalize(img);
        CHECK(n.channel_means[0] == doctest::Approx(0.4).epsilon(1e-12));
        for (double v : n.base.data) CHECK(std::abs(v) < 1e-12);
    }
    SUBCASE("symmetric two-pixel image") {
        Image img(2, 1, 1);
        img.data = {0.0, 1.0};
        const NormalizedImage n = normalize(img);
        CHECK(n.base.data[0] == doctest::Approx(-0.5).epsilon(1e-15));
        CHECK(n.base.data[1] == doctest::Approx(0.5).epsilon(1e-15));
    }
    SUBCASE("random images: mean within 1e-9, round trip within 1e-12") {
        SplitMix64 rng(41);
        for (int t = 0; t < 5; ++t) {
            const Image img = oracle::random_image(rng, 16, 16, 3);
            const NormalizedImage n = normalize(img);
            for (int c = 0; c < 3; ++c) {
                double sum = 0.0;
                for (size_t p = 0; p < n.base.pixel_count(); ++p) sum += n.base.data[p * 3 + c];
                CHECK(std::abs(sum / static_cast<double>(n.base.pixel_count())) < 1e-9);
            }
            const Image back = denormalize(n);
            for (size_t i = 0; i < img.data.size(); ++i)
                CHECK(std::abs(back.data[i] - img.data[i]) < 1e-12);
        }
    }
    SUBCASE("variance scaling is recorded and invertible") {
        SplitMix64 rng(43);
        const Image img = oracle::random_image(rng, 12, 12, 1);
        const NormalizedImage n = normalize(img, true);
        double sq = 0.0;
        for (double v : n.base.data) sq += v * v;
        CHECK(sq / static_cast<double>(n.base.data.size()) == doctest::Approx(1.0).epsilon(1e-9));
        const Image back = denormalize(n);
        for (size_t i = 0; i < img.data.size(); ++i)
            CHECK(std::abs(back.data[i] - img.data[i]) < 1e-12);
    }
}
