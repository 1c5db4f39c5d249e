#ifndef LTCF_FEATURES_HPP_
#define LTCF_FEATURES_HPP_

#include <memory>
#include <string>
#include <vector>

#include <opencv2/core.hpp>

namespace ltcf {

// 8-bit color frame. Channel order is BGR (the cv::imread convention).
struct ImageFrame {
  cv::Mat pixels;
  int frame_index = 0;
};

// Probability table mapping quantized RGB colors to the 10 color-name
// channels. Row index layout: floor(R/8) + 32*floor(G/8) + 1024*floor(B/8).
// Loads either raw little-endian float32 (32768 x 10) or CSV with one
// 10-value row per line; see docs/colorname_table.md.
class ColorNameTable {
 public:
  static constexpr int kRows = 32768;
  static constexpr int kChannels = 10;

  static ColorNameTable Load(const std::string &path);

  const float *LookupBgr(const cv::Vec3b &bgr) const {
    int idx = (bgr[2] >> 3) | ((bgr[1] >> 3) << 5) | ((bgr[0] >> 3) << 10);
    return values_.data() + idx * kChannels;
  }

 private:
  std::vector<float> values_;
};

struct FeatureConfig {
  int cell_size = 4;
  bool use_hog = true;
  bool use_colornames = true;
  bool use_gray = true;
  std::shared_ptr<const ColorNameTable> colornames;  // required when use_colornames
};

constexpr int kHogChannels = 18;

// Stack of real-valued feature planes extracted from an image region.
// All channels share the same size; one cell covers cell_size pixels of
// the resampled patch.
struct FeatureStack {
  std::vector<cv::Mat> channels;  // CV_64FC1, equal sizes
  int cell_size = 4;
  cv::Rect2d region;

  cv::Size PlaneSize() const {
    return channels.empty() ? cv::Size() : channels.front().size();
  }
};

// Cuts region out of the frame (replicate padding past borders), resamples
// it to template_px and converts it to the configured channel stack:
// 18 contrast-sensitive HOG orientation channels, 10 color-name channels,
// 1 zero-mean grayscale channel.
FeatureStack ExtractFeatures(const ImageFrame &frame, const cv::Rect2d &region,
                             const cv::Size &template_px, const FeatureConfig &config);

// 2-D Hann window, outer product of the 1-D windows; single sample -> 1.
cv::Mat HannWindow2d(const cv::Size &size);

// Elementwise multiplication of every channel with a matching Hann window.
FeatureStack ApplyWindow(const FeatureStack &features);

// Region subwindow with replicate padding for the parts outside the image.
cv::Mat GetSubwindow(const cv::Mat &image, const cv::Point2d &center, int width, int height);

}  // namespace ltcf

#endif  // LTCF_FEATURES_HPP_
