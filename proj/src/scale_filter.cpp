#include "ltcf/scale_filter.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <opencv2/imgproc.hpp>

#include "ltcf/features.hpp"

namespace ltcf {

namespace {

cv::Mat RowFft(const cv::Mat &rows_real) {
  cv::Mat out;
  cv::dft(rows_real, out, cv::DFT_ROWS | cv::DFT_COMPLEX_OUTPUT);
  return out;
}

cv::Mat RowIfftReal(const cv::Mat &rows_complex) {
  cv::Mat out;
  cv::dft(rows_complex, out,
          cv::DFT_ROWS | cv::DFT_INVERSE | cv::DFT_SCALE | cv::DFT_REAL_OUTPUT);
  return out;
}

}  // namespace

void ScaleFilter::Init(const cv::Mat &image, const cv::Point2d &center,
                       const cv::Size2d &base_size, double scale,
                       const ScaleFilterParams &params) {
  if (params.num_scales < 3 || params.num_scales % 2 == 0) {
    throw std::invalid_argument("ScaleFilter: num_scales must be odd and >= 3");
  }
  params_ = params;
  base_size_ = base_size;

  const int n = params_.num_scales;
  const int center_idx = n / 2;
  const double sigma = params_.sigma_factor * std::sqrt(static_cast<double>(n));

  ghat_ = cv::Mat(1, n, CV_64FC1);
  window_ = cv::Mat(1, n, CV_64FC1);
  for (int k = 0; k < n; ++k) {
    double d = k - center_idx;
    ghat_.at<double>(0, k) = std::exp(-d * d / (2.0 * sigma * sigma));
    window_.at<double>(0, k) =
        0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * k / (n - 1)));
  }
  ghat_ = RowFft(ghat_);

  NumDen(SampleFeatures(image, center, scale), &num_, &den_);
}

cv::Mat ScaleFilter::SampleFeatures(const cv::Mat &image, const cv::Point2d &center,
                                    double scale) const {
  const int n = params_.num_scales;
  const int center_idx = n / 2;
  const int dims = params_.sample_size.area();
  cv::Mat features(dims, n, CV_64FC1);

  for (int k = 0; k < n; ++k) {
    double factor = std::pow(params_.scale_step, k - center_idx);
    int w = std::max(1, static_cast<int>(std::round(base_size_.width * scale * factor)));
    int h = std::max(1, static_cast<int>(std::round(base_size_.height * scale * factor)));
    cv::Mat patch = GetSubwindow(image, center, w, h);
    cv::Mat gray;
    cv::cvtColor(patch, gray, cv::COLOR_BGR2GRAY);
    cv::resize(gray, gray, params_.sample_size, 0, 0, cv::INTER_LINEAR);
    gray.convertTo(gray, CV_64FC1, 1.0 / 255.0, -0.5);
    cv::Mat column = gray.reshape(1, dims) * window_.at<double>(0, k);
    column.copyTo(features.col(k));
  }
  return features;
}

void ScaleFilter::NumDen(const cv::Mat &features, cv::Mat *num, cv::Mat *den) const {
  cv::Mat fhat = RowFft(features);
  cv::mulSpectrums(fhat, cv::repeat(ghat_, fhat.rows, 1), *num, cv::DFT_ROWS, true);

  cv::Mat power;
  cv::mulSpectrums(fhat, fhat, power, cv::DFT_ROWS, true);
  cv::Mat power_real;
  cv::extractChannel(power, power_real, 0);
  cv::reduce(power_real, *den, 0, cv::REDUCE_SUM);
}

double ScaleFilter::Estimate(const cv::Mat &image, const cv::Point2d &center,
                             double scale) const {
  CV_Assert(Trained());
  cv::Mat zhat = RowFft(SampleFeatures(image, center, scale));
  cv::Mat prod;
  cv::mulSpectrums(zhat, num_, prod, cv::DFT_ROWS, true);
  cv::Mat spectrum;
  cv::reduce(prod, spectrum, 0, cv::REDUCE_SUM);

  cv::Mat planes[2];
  cv::split(spectrum, planes);
  cv::Mat den = den_ + params_.lambda;
  cv::divide(planes[0], den, planes[0]);
  cv::divide(planes[1], den, planes[1]);
  cv::merge(planes, 2, spectrum);

  cv::Mat response = RowIfftReal(spectrum);
  int best = 0;
  double best_value = response.at<double>(0, 0);
  for (int k = 1; k < response.cols; ++k) {
    if (response.at<double>(0, k) > best_value) {
      best_value = response.at<double>(0, k);
      best = k;
    }
  }

  double estimated = scale * std::pow(params_.scale_step, best - params_.num_scales / 2);
  return std::clamp(estimated, params_.min_scale, params_.max_scale);
}

void ScaleFilter::Update(const cv::Mat &image, const cv::Point2d &center, double scale,
                         double eta) {
  CV_Assert(Trained());
  if (eta == 0.0) return;
  cv::Mat num, den;
  NumDen(SampleFeatures(image, center, scale), &num, &den);
  num_ = (1.0 - eta) * num_ + eta * num;
  den_ = (1.0 - eta) * den_ + eta * den;
}

}  // namespace ltcf
