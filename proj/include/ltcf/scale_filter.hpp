#ifndef LTCF_SCALE_FILTER_HPP_
#define LTCF_SCALE_FILTER_HPP_

#include <opencv2/core.hpp>

namespace ltcf {

struct ScaleFilterParams {
  int num_scales = 33;        // odd, center sample = current scale
  double scale_step = 1.02;
  double sigma_factor = 0.25;  // sigma = sigma_factor * sqrt(num_scales)
  double lambda = 0.01;
  double min_scale = 0.2;     // clamp relative to the initial size
  double max_scale = 5.0;
  cv::Size sample_size = {32, 32};
};

// 1-D correlation filter over the scale axis. Every scale sample is the
// grayscale patch at that size, resampled to a fixed template and
// flattened, so the filter correlates a (dims x num_scales) feature
// matrix along its rows.
class ScaleFilter {
 public:
  void Init(const cv::Mat &image, const cv::Point2d &center, const cv::Size2d &base_size,
            double scale, const ScaleFilterParams &params);

  // Returns the clamped scale multiplier scale * step^(k* - center) where
  // k* is the response argmax over the sample grid.
  double Estimate(const cv::Mat &image, const cv::Point2d &center, double scale) const;

  // Blends numerator/denominator with the current-frame sample at rate eta.
  void Update(const cv::Mat &image, const cv::Point2d &center, double scale, double eta);

  bool Trained() const { return !num_.empty(); }
  const ScaleFilterParams &params() const { return params_; }

 private:
  cv::Mat SampleFeatures(const cv::Mat &image, const cv::Point2d &center, double scale) const;
  void NumDen(const cv::Mat &features, cv::Mat *num, cv::Mat *den) const;

  ScaleFilterParams params_;
  cv::Size2d base_size_;
  cv::Mat ghat_;    // 1 x n, CV_64FC2
  cv::Mat window_;  // 1 x n, CV_64FC1 Hann over samples
  cv::Mat num_;     // dims x n, CV_64FC2
  cv::Mat den_;     // 1 x n, CV_64FC1
};

}  // namespace ltcf

#endif  // LTCF_SCALE_FILTER_HPP_
