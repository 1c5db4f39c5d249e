#include "ltcf/correlation.hpp"

#include <cmath>
#include <stdexcept>

#include "ltcf/fft.hpp"
#include "ltcf/filter_learning.hpp"

namespace ltcf {

cv::Point FindPeak(const cv::Mat &response, double *peak_value) {
  CV_Assert(response.type() == CV_64FC1 && !response.empty());
  cv::Point best(0, 0);
  double best_value = response.at<double>(0, 0);
  for (int y = 0; y < response.rows; ++y) {
    const double *row = response.ptr<double>(y);
    for (int x = 0; x < response.cols; ++x) {
      if (row[x] > best_value) {
        best_value = row[x];
        best = cv::Point(x, y);
      }
    }
  }
  if (peak_value) *peak_value = best_value;
  return best;
}

double Psr(const cv::Mat &response, const cv::Point &peak, int exclusion_radius) {
  CV_Assert(response.type() == CV_64FC1);
  if (response.empty()) throw std::invalid_argument("Psr: empty response");
  const int w = response.cols;
  const int h = response.rows;
  const int win = 2 * exclusion_radius + 1;
  if (win >= w && win >= h) {
    throw std::invalid_argument("Psr: exclusion window covers the entire plane");
  }

  double sum = 0.0, sum_sq = 0.0;
  long count = 0;
  for (int y = 0; y < h; ++y) {
    int dy = std::abs(y - peak.y);
    dy = std::min(dy, h - dy);  // circular wrap
    const double *row = response.ptr<double>(y);
    for (int x = 0; x < w; ++x) {
      int dx = std::abs(x - peak.x);
      dx = std::min(dx, w - dx);
      if (dx <= exclusion_radius && dy <= exclusion_radius) continue;
      sum += row[x];
      sum_sq += row[x] * row[x];
      ++count;
    }
  }
  if (count == 0) throw std::invalid_argument("Psr: exclusion window covers the entire plane");

  double mean = sum / count;
  double var = std::max(0.0, sum_sq / count - mean * mean);
  double stddev = std::sqrt(var);
  if (stddev < 1e-12) return 0.0;
  return (response.at<double>(peak) - mean) / stddev;
}

ResponseMap CircularCorrelate(const std::vector<cv::Mat> &feature_channels,
                              const std::vector<cv::Mat> &filter_channels,
                              const std::vector<double> &weights,
                              int psr_exclusion_radius) {
  if (feature_channels.empty()) {
    throw std::invalid_argument("CircularCorrelate: empty feature stack");
  }
  if (feature_channels.size() != filter_channels.size() ||
      feature_channels.size() != weights.size()) {
    throw std::invalid_argument("CircularCorrelate: channel count mismatch");
  }

  const cv::Size plane = feature_channels.front().size();
  cv::Mat acc = cv::Mat::zeros(plane, CV_64FC2);
  for (size_t d = 0; d < feature_channels.size(); ++d) {
    const cv::Mat &f = feature_channels[d];
    const cv::Mat &h = filter_channels[d];
    CV_Assert(f.size() == plane);
    if (h.cols > plane.width || h.rows > plane.height) {
      throw std::invalid_argument("CircularCorrelate: filter larger than feature plane");
    }
    cv::Mat fhat = Fft2(f);
    cv::Mat hhat = Fft2(ZeroPadToSize(h, plane));
    acc += SpectrumMulConj(fhat, hhat) * weights[d];
  }

  ResponseMap out;
  out.values = Ifft2Real(acc);
  out.peak_pos = FindPeak(out.values, &out.peak_value);
  // Planes no larger than the exclusion window have no sidelobe to measure.
  const int win = 2 * psr_exclusion_radius + 1;
  out.psr = (win >= plane.width && win >= plane.height)
                ? 0.0
                : Psr(out.values, out.peak_pos, psr_exclusion_radius);
  return out;
}

ResponseMap CircularCorrelate(const FeatureStack &features, const ConstrainedFilter &filter,
                              int psr_exclusion_radius) {
  return CircularCorrelate(features.channels, filter.channels, filter.weights,
                           psr_exclusion_radius);
}

namespace {

// Vertex offset of the parabola through (-1, ym), (0, y0), (+1, yp);
// 0 when the curvature is non-negative (degenerate fit).
double QuadraticOffset(double ym, double y0, double yp) {
  double denom = ym - 2.0 * y0 + yp;
  if (denom >= 0.0) return 0.0;
  double offset = (ym - yp) / (2.0 * denom);
  return std::clamp(offset, -0.5, 0.5);
}

}  // namespace

cv::Point2d SubgridPeak(const ResponseMap &response) {
  const cv::Mat &v = response.values;
  if (v.rows < 3 || v.cols < 3) {
    throw std::invalid_argument("SubgridPeak: response smaller than 3x3");
  }
  const int px = response.peak_pos.x;
  const int py = response.peak_pos.y;
  const double y0 = v.at<double>(py, px);

  double left = v.at<double>(py, (px - 1 + v.cols) % v.cols);
  double right = v.at<double>(py, (px + 1) % v.cols);
  double up = v.at<double>((py - 1 + v.rows) % v.rows, px);
  double down = v.at<double>((py + 1) % v.rows, px);

  return {px + QuadraticOffset(left, y0, right), py + QuadraticOffset(up, y0, down)};
}

}  // namespace ltcf
