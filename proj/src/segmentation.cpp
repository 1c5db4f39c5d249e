#include "ltcf/segmentation.hpp"

#include <array>
#include <stdexcept>
#include <vector>

#include <opencv2/imgproc.hpp>

#include "ltcf/geometry.hpp"

namespace ltcf {

namespace {

constexpr int kBins = 16;              // per color axis
constexpr int kHistSize = kBins * kBins * kBins;
constexpr double kMinForegroundFraction = 0.05;
constexpr double kMinComponentTargetCover = 0.10;

int HistIndex(const cv::Vec3b &bgr) {
  return (bgr[0] >> 4) + ((bgr[1] >> 4) << 4) + ((bgr[2] >> 4) << 8);
}

// Epanechnikov profile centered on the target rectangle: 1 at the center,
// 0 at the rectangle corners, clipped at 0 outside.
double SpatialPrior(double x, double y, const cv::Rect2d &target) {
  cv::Point2d c = RectCenter(target);
  double nx = 2.0 * (x - c.x) / target.width;
  double ny = 2.0 * (y - c.y) / target.height;
  return std::max(0.0, 1.0 - 0.5 * (nx * nx + ny * ny));
}

}  // namespace

BinaryMask MakeMask(const cv::Mat &cells) {
  CV_Assert(cells.type() == CV_64FC1);
  BinaryMask mask;
  mask.cells = cells;
  mask.foreground_fraction = cv::mean(cells)[0];
  return mask;
}

BinaryMask RectangleMask(const cv::Size &grid, const cv::Rect &target_cells) {
  cv::Mat cells = cv::Mat::zeros(grid, CV_64FC1);
  cv::Rect inside = target_cells & cv::Rect(0, 0, grid.width, grid.height);
  if (inside.empty()) inside = CenteredRect(grid, cv::Size(1, 1));
  cells(inside).setTo(1.0);
  return MakeMask(cells);
}

BinaryMask EstimateMask(const ImageFrame &frame, const cv::Rect2d &target,
                        const cv::Rect2d &region, const cv::Size &template_px, int cell_size) {
  if (region.width <= 0.0 || region.height <= 0.0) {
    throw std::invalid_argument("EstimateMask: degenerate region");
  }

  // Same patch geometry as ExtractFeatures, so the mask matches the
  // training feature grid.
  const int region_w = std::max(1, static_cast<int>(std::round(region.width)));
  const int region_h = std::max(1, static_cast<int>(std::round(region.height)));
  const cv::Point2d region_center = RectCenter(region);
  cv::Mat patch = GetSubwindow(frame.pixels, region_center, region_w, region_h);
  if (patch.size() != template_px) {
    cv::resize(patch, patch, template_px, 0, 0, cv::INTER_LINEAR);
  }

  // Target rectangle mapped into template coordinates through the same
  // subwindow origin GetSubwindow used.
  const double origin_x = std::floor(region_center.x - region_w / 2.0);
  const double origin_y = std::floor(region_center.y - region_h / 2.0);
  const double sx = static_cast<double>(template_px.width) / region_w;
  const double sy = static_cast<double>(template_px.height) / region_h;
  cv::Rect2d target_tpl((target.x - origin_x) * sx, (target.y - origin_y) * sy,
                        target.width * sx, target.height * sy);

  // Laplace-smoothed fg/bg color histograms.
  std::vector<double> fg_hist(kHistSize, 1.0), bg_hist(kHistSize, 1.0);
  double fg_total = kHistSize, bg_total = kHistSize;
  for (int y = 0; y < patch.rows; ++y) {
    const cv::Vec3b *row = patch.ptr<cv::Vec3b>(y);
    for (int x = 0; x < patch.cols; ++x) {
      bool inside = target_tpl.contains(cv::Point2d(x + 0.5, y + 0.5));
      if (inside) {
        fg_hist[HistIndex(row[x])] += 1.0;
        fg_total += 1.0;
      } else {
        bg_hist[HistIndex(row[x])] += 1.0;
        bg_total += 1.0;
      }
    }
  }

  // Per-pixel posterior, thresholded at 0.5.
  cv::Mat binary(patch.size(), CV_8UC1);
  for (int y = 0; y < patch.rows; ++y) {
    const cv::Vec3b *row = patch.ptr<cv::Vec3b>(y);
    uchar *out = binary.ptr<uchar>(y);
    for (int x = 0; x < patch.cols; ++x) {
      int idx = HistIndex(row[x]);
      double prior = 0.5 * SpatialPrior(x + 0.5, y + 0.5, target_tpl);
      double pf = fg_hist[idx] / fg_total * prior;
      double pb = bg_hist[idx] / bg_total * (1.0 - prior);
      out[x] = pf > pb ? 1 : 0;  // posterior > 0.5
    }
  }

  // Majority vote per feature cell.
  cv::Size grid((template_px.width + cell_size - 1) / cell_size,
                (template_px.height + cell_size - 1) / cell_size);
  cv::Mat cells = cv::Mat::zeros(grid, CV_64FC1);
  for (int cy = 0; cy < grid.height; ++cy) {
    for (int cx = 0; cx < grid.width; ++cx) {
      int x0 = cx * cell_size, y0 = cy * cell_size;
      int x1 = std::min(x0 + cell_size, patch.cols), y1 = std::min(y0 + cell_size, patch.rows);
      int fg = 0, total = 0;
      for (int y = y0; y < y1; ++y) {
        const uchar *row = binary.ptr<uchar>(y);
        for (int x = x0; x < x1; ++x) {
          fg += row[x];
          ++total;
        }
      }
      cells.at<double>(cy, cx) = (2 * fg > total) ? 1.0 : 0.0;
    }
  }

  cv::Rect target_cells(
      static_cast<int>(std::round(target_tpl.x / cell_size)),
      static_cast<int>(std::round(target_tpl.y / cell_size)),
      std::max(1, static_cast<int>(std::round(target_tpl.width / cell_size))),
      std::max(1, static_cast<int>(std::round(target_tpl.height / cell_size))));
  return SanitizeMask(MakeMask(cells), target_cells);
}

BinaryMask SanitizeMask(const BinaryMask &mask, const cv::Rect &target_cells) {
  const cv::Size grid = mask.cells.size();
  cv::Rect target = target_cells & cv::Rect(0, 0, grid.width, grid.height);
  if (target.empty()) target = CenteredRect(grid, cv::Size(1, 1));

  cv::Mat mask8u;
  mask.cells.convertTo(mask8u, CV_8UC1);
  cv::Mat labels, stats, centroids;
  int n = cv::connectedComponentsWithStats(mask8u, labels, stats, centroids, 8, CV_32S);

  int best_label = 0, best_area = 0;
  for (int i = 1; i < n; ++i) {
    int area = stats.at<int>(i, cv::CC_STAT_AREA);
    if (area > best_area) {
      best_area = area;
      best_label = i;
    }
  }

  // The fallback checks run on the surviving component, which keeps the
  // operation idempotent: its output always passes them.
  double fraction = static_cast<double>(best_area) / (grid.width * grid.height);
  double target_area = static_cast<double>(target.width) * target.height;
  if (best_label == 0 || fraction < kMinForegroundFraction ||
      best_area < kMinComponentTargetCover * target_area) {
    return RectangleMask(grid, target);
  }

  cv::Mat cells = cv::Mat::zeros(grid, CV_64FC1);
  cells.setTo(1.0, labels == best_label);
  return MakeMask(cells);
}

}  // namespace ltcf
