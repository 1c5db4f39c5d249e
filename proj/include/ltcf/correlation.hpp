#ifndef LTCF_CORRELATION_HPP_
#define LTCF_CORRELATION_HPP_

#include <vector>

#include <opencv2/core.hpp>

#include "ltcf/features.hpp"

namespace ltcf {

struct ConstrainedFilter;

// Dense correlation response over a feature grid. peak_pos is the first
// maximum in row-major scan order (smallest row, then smallest column),
// which makes tie-breaking deterministic.
struct ResponseMap {
  cv::Mat values;  // CV_64FC1
  cv::Point peak_pos;
  double peak_value = 0.0;
  double psr = 0.0;
};

constexpr int kDefaultPsrExclusionRadius = 5;

// r = sum_d w_d * ifft(fft(f_d) .* conj(fft(h_d))), i.e. circular
// cross-correlation r[u] = sum_x f[x+u] h[x] per channel, fused with the
// channel weights. Filter channels smaller than the feature planes are
// zero-padded (top-left embedding) before the transform.
ResponseMap CircularCorrelate(const std::vector<cv::Mat> &feature_channels,
                              const std::vector<cv::Mat> &filter_channels,
                              const std::vector<double> &weights,
                              int psr_exclusion_radius = kDefaultPsrExclusionRadius);

ResponseMap CircularCorrelate(const FeatureStack &features, const ConstrainedFilter &filter,
                              int psr_exclusion_radius = kDefaultPsrExclusionRadius);

// Peak-to-sidelobe ratio: (peak - mean(sidelobe)) / std(sidelobe) where the
// sidelobe excludes a (2r+1)^2 window around the peak (wrapping circularly).
// Returns 0 when the sidelobe standard deviation is below 1e-12.
double Psr(const cv::Mat &response, const cv::Point &peak, int exclusion_radius);

// First row-major maximum (deterministic tie-break).
cv::Point FindPeak(const cv::Mat &response, double *peak_value = nullptr);

// Refines the integer peak with an independent 1-D quadratic fit per axis
// over the circular neighbors. Falls back to the integer coordinate on
// non-negative curvature; the offset is clamped to [-0.5, 0.5].
cv::Point2d SubgridPeak(const ResponseMap &response);

}  // namespace ltcf

#endif  // LTCF_CORRELATION_HPP_
