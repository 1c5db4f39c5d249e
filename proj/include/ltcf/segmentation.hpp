#ifndef LTCF_SEGMENTATION_HPP_
#define LTCF_SEGMENTATION_HPP_

#include <opencv2/core.hpp>

#include "ltcf/features.hpp"

namespace ltcf {

// Binary support mask at feature-grid resolution. Values are exactly 0.0
// or 1.0 so that multiplying a filter by the mask zeroes coefficients
// bit-exactly.
struct BinaryMask {
  cv::Mat cells;  // CV_64FC1, values in {0.0, 1.0}
  double foreground_fraction = 0.0;
};

BinaryMask MakeMask(const cv::Mat &cells);

// Rectangle mask used as the segmentation fallback: the target rectangle
// projected onto the feature grid.
BinaryMask RectangleMask(const cv::Size &grid, const cv::Rect &target_cells);

// Color-histogram segmentation of the target within its search region.
// Foreground/background 16x16x16 BGR histograms (Laplace-smoothed) feed a
// per-pixel Bayes posterior whose foreground prior is 0.5 shaped by an
// Epanechnikov profile centered on the target; the thresholded map is
// majority-voted down to the feature grid and sanitized.
//
// The patch geometry matches ExtractFeatures: the region is resampled to
// template_px, so the mask lines up with the training feature stack.
BinaryMask EstimateMask(const ImageFrame &frame, const cv::Rect2d &target,
                        const cv::Rect2d &region, const cv::Size &template_px, int cell_size);

// Keeps only the largest 8-connected foreground component; falls back to
// the projected target rectangle when the component is degenerate (mask
// fraction < 0.05 or component area < 10% of the target's grid area).
// Idempotent, and the output is never all-zero.
BinaryMask SanitizeMask(const BinaryMask &mask, const cv::Rect &target_cells);

}  // namespace ltcf

#endif  // LTCF_SEGMENTATION_HPP_
