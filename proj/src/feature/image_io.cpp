#include <filesystem>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "outfit/error.hpp"
#include "outfit/feature.hpp"

namespace outfit {

Image load_image(const std::string& path) {
  if (!std::filesystem::exists(path)) throw Error(ErrorCode::MissingImage, "missing image: " + path);
  const cv::Mat bgr = cv::imread(path, cv::IMREAD_COLOR);
  if (bgr.empty()) throw Error(ErrorCode::DecodeError, "cannot decode image: " + path);

  Image img(bgr.cols, bgr.rows);
  for (int y = 0; y < bgr.rows; ++y) {
    const auto* row = bgr.ptr<cv::Vec3b>(y);
    for (int x = 0; x < bgr.cols; ++x) img.at(x, y) = Pixel{row[x][2], row[x][1], row[x][0]};
  }
  return img;
}

void write_png(const std::string& path, const Image& image) {
  cv::Mat bgr(image.height, image.width, CV_8UC3);
  for (int y = 0; y < image.height; ++y) {
    auto* row = bgr.ptr<cv::Vec3b>(y);
    for (int x = 0; x < image.width; ++x) {
      const Pixel p = image.at(x, y);
      row[x] = cv::Vec3b(p.b, p.g, p.r);
    }
  }
  if (!cv::imwrite(path, bgr, {cv::IMWRITE_PNG_COMPRESSION, 6}))
    throw Error(ErrorCode::IoError, "cannot write image: " + path);
}

}  // namespace outfit
