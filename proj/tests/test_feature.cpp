#include <gtest/gtest.h>

#include <fstream>
#include <numeric>
#include <random>

#include "outfit/error.hpp"
#include "outfit/feature.hpp"
#include "outfit/kernels.hpp"
#include "support.hpp"

using namespace outfit;
using outfit::testkit::oracle_histogram;

namespace {

double block_sum(std::span<const double> xs) { return std::accumulate(xs.begin(), xs.end(), 0.0); }

}  // namespace

TEST(RgbToHsv, PureRedIsHueOrigin) {
  const auto hsv = rgb_to_hsv({255, 0, 0});
  EXPECT_EQ(hsv.h, 0.0);
  EXPECT_EQ(hsv.s, 1.0);
  EXPECT_EQ(hsv.v, 1.0);
}

TEST(RgbToHsv, GrayIsAchromatic) {
  const auto hsv = rgb_to_hsv({128, 128, 128});
  EXPECT_EQ(hsv.h, 0.0);
  EXPECT_EQ(hsv.s, 0.0);
  EXPECT_NEAR(hsv.v, 0.502, 1e-3);
}

TEST(RgbToHsv, MatchesReferenceConversion) {
  // Python colorsys.rgb_to_hsv(10/255, 200/255, 30/255), hue scaled to degrees.
  const auto hsv = rgb_to_hsv({10, 200, 30});
  EXPECT_NEAR(hsv.h, 0.3508771929824562 * 360.0, 1e-9);
  EXPECT_NEAR(hsv.s, 0.9500000000000001, 1e-12);
  EXPECT_NEAR(hsv.v, 0.7843137254901961, 1e-12);
}

TEST(RgbToHsv, RoundTripsThroughHsvToRgb) {
  std::mt19937_64 gen(7);
  std::uniform_int_distribution<int> byte(0, 255);
  for (int i = 0; i < 5000; ++i) {
    const Pixel p{static_cast<std::uint8_t>(byte(gen)), static_cast<std::uint8_t>(byte(gen)),
                  static_cast<std::uint8_t>(byte(gen))};
    EXPECT_EQ(hsv_to_rgb(rgb_to_hsv(p)), p);
  }
}

TEST(Binning, EdgesClampIntoLastBin) {
  EXPECT_EQ(hue_bin(0.0), 0u);
  EXPECT_EQ(hue_bin(14.999), 0u);
  EXPECT_EQ(hue_bin(15.0), 1u);
  EXPECT_EQ(hue_bin(359.999), 23u);
  EXPECT_EQ(saturation_bin(1.0), 7u);
  EXPECT_EQ(value_bin(1.0), 7u);
  EXPECT_EQ(value_bin(0.0), 0u);
}

TEST(Binning, AllPixelsAgreeWithIntegerOracle) {
  // Coarse lattice over the RGB cube; strides are coprime so channels decorrelate.
  for (int r = 0; r < 256; r += 5)
    for (int g = 0; g < 256; g += 3)
      for (int b = 0; b < 256; b += 7) {
        const auto hsv = rgb_to_hsv({static_cast<std::uint8_t>(r), static_cast<std::uint8_t>(g),
                                     static_cast<std::uint8_t>(b)});
        ASSERT_EQ(hue_bin(hsv.h), static_cast<std::size_t>(testkit::oracle_hue_bin(r, g, b)))
            << r << "," << g << "," << b;
        ASSERT_EQ(saturation_bin(hsv.s), static_cast<std::size_t>(testkit::oracle_sat_bin(r, g, b)));
        ASSERT_EQ(value_bin(hsv.v), static_cast<std::size_t>(testkit::oracle_val_bin(r, g, b)));
      }
}

TEST(ExtractHistogram, UniformRedIsThreePointMasses) {
  const Image img(16, 9, {255, 0, 0});
  const auto h = extract_histogram(img);
  ColorHistogram expected;
  expected.bins[0] = 1.0;
  expected.bins[kSaturationOffset + 7] = 1.0;
  expected.bins[kValueOffset + 7] = 1.0;
  EXPECT_EQ(h, expected);
  EXPECT_EQ(h.bins.size(), 40u);
}

TEST(ExtractHistogram, FourPixelHandBinned) {
  Image img(2, 2);
  img.at(0, 0) = {255, 0, 0};    // h 0   -> bin 0,  s 1 -> 7, v 1 -> 7
  img.at(1, 0) = {0, 0, 255};    // h 240 -> bin 16, s 1 -> 7, v 1 -> 7
  img.at(0, 1) = {64, 64, 64};   // gray  -> bin 0,  s 0 -> 0, v 64/255 -> 2
  img.at(1, 1) = {0, 128, 128};  // h 180 -> bin 12, s 1 -> 7, v 128/255 -> 4
  ColorHistogram expected;
  expected.bins[0] = 0.5;
  expected.bins[16] = 0.25;
  expected.bins[12] = 0.25;
  expected.bins[kSaturationOffset + 7] = 0.75;
  expected.bins[kSaturationOffset + 0] = 0.25;
  expected.bins[kValueOffset + 7] = 0.5;
  expected.bins[kValueOffset + 2] = 0.25;
  expected.bins[kValueOffset + 4] = 0.25;
  EXPECT_EQ(extract_histogram(img), expected);
}

TEST(ExtractHistogram, RandomImagesMatchOracleAndNormalize) {
  std::mt19937_64 gen(11);
  std::uniform_int_distribution<int> dim(1, 64);
  for (int i = 0; i < 100; ++i) {
    const Image img = testkit::random_image(gen, dim(gen), dim(gen));
    const auto h = extract_histogram(img);
    const auto oracle = oracle_histogram(img);
    for (std::size_t b = 0; b < 40; ++b) ASSERT_NEAR(h.bins[b], oracle[b], 1e-9) << "bin " << b;
    EXPECT_NEAR(block_sum(h.hue()), 1.0, 1e-6);
    EXPECT_NEAR(block_sum(h.saturation()), 1.0, 1e-6);
    EXPECT_NEAR(block_sum(h.value()), 1.0, 1e-6);
  }
}

TEST(ExtractHistogram, InvariantToPixelOrderAndReplication) {
  std::mt19937_64 gen(3);
  const Image img = testkit::random_image(gen, 20, 10);
  Image shuffled = img;
  std::shuffle(shuffled.pixels.begin(), shuffled.pixels.end(), gen);
  Image doubled(20, 20);
  for (int y = 0; y < 20; ++y)
    for (int x = 0; x < 20; ++x) doubled.at(x, y) = img.at(x, y % 10);
  const auto h = extract_histogram(img);
  EXPECT_EQ(extract_histogram(shuffled), h);
  for (std::size_t b = 0; b < 40; ++b) EXPECT_NEAR(extract_histogram(doubled).bins[b], h.bins[b], 1e-15);
}

TEST(ExtractHistogram, MaskSelectsPixels) {
  Image img(2, 1);
  img.at(0, 0) = {255, 0, 0};
  img.at(1, 0) = {0, 0, 255};
  const std::vector<std::uint8_t> mask = {0, 1};
  EXPECT_EQ(extract_histogram(img, mask), extract_histogram(Image(1, 1, {0, 0, 255})));
}

TEST(ExtractHistogram, EmptyInputsThrow) {
  try {
    extract_histogram(Image{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyImage);
  }
  const Image img(2, 2, {1, 2, 3});
  const std::vector<std::uint8_t> none(4, 0), wrong(3, 1);
  try {
    extract_histogram(img, none);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyImage);
  }
  EXPECT_THROW(extract_histogram(img, wrong), Error);
}

TEST(HistogramSerialization, BytesAndTextRoundTripExactly) {
  std::mt19937_64 gen(5);
  for (int i = 0; i < 200; ++i) {
    const auto h = testkit::random_histogram(gen);
    const auto bytes = to_bytes(h);
    EXPECT_EQ(histogram_from_bytes(bytes), h);
    EXPECT_EQ(histogram_from_text(to_text(h)), h);
  }
  EXPECT_THROW(histogram_from_text("1,2,3"), Error);
  EXPECT_THROW(histogram_from_bytes(std::vector<std::uint8_t>(10)), Error);
}

TEST(ImageIo, PngRoundTripAndErrors) {
  testkit::TempDir dir;
  std::mt19937_64 gen(9);
  const Image img = testkit::random_image(gen, 13, 7);
  const auto path = (dir / "a.png").string();
  write_png(path, img);
  const Image back = load_image(path);
  EXPECT_EQ(back.width, 13);
  EXPECT_EQ(back.height, 7);
  EXPECT_EQ(back.pixels, img.pixels);

  try {
    load_image((dir / "missing.png").string());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MissingImage);
  }
  std::ofstream(dir / "junk.png") << "not an image";
  try {
    load_image((dir / "junk.png").string());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DecodeError);
  }
}

TEST(HistogramKernels, ParallelBatchEqualsSerial) {
  std::mt19937_64 gen(21);
  std::vector<Image> images;
  for (int i = 0; i < 40; ++i) images.push_back(testkit::random_image(gen, 17 + i, 9));
  const auto serial = kernels::histograms_serial(images);
  const auto parallel = kernels::histograms_omp(images);
  ASSERT_EQ(serial.size(), images.size());
  EXPECT_EQ(serial, parallel);
  for (std::size_t i = 0; i < images.size(); ++i) EXPECT_EQ(serial[i], extract_histogram(images[i]));

  images.push_back(Image{});
  EXPECT_THROW(kernels::histograms_omp(images), Error);
}
