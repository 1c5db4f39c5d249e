#ifndef LTCF_GEOMETRY_HPP_
#define LTCF_GEOMETRY_HPP_

#include <opencv2/core.hpp>

namespace ltcf {

inline cv::Point2d RectCenter(const cv::Rect2d &r) {
  return {r.x + r.width / 2.0, r.y + r.height / 2.0};
}

inline cv::Rect2d RectFromCenterSize(const cv::Point2d &center, const cv::Size2d &size) {
  return {center.x - size.width / 2.0, center.y - size.height / 2.0, size.width, size.height};
}

// Clamps a rectangle to the image extent; may return a zero-area rectangle.
inline cv::Rect2d ClampRectToImage(const cv::Rect2d &r, const cv::Size &image_size) {
  double x0 = std::max(r.x, 0.0);
  double y0 = std::max(r.y, 0.0);
  double x1 = std::min(r.x + r.width, static_cast<double>(image_size.width));
  double y1 = std::min(r.y + r.height, static_cast<double>(image_size.height));
  return {x0, y0, std::max(0.0, x1 - x0), std::max(0.0, y1 - y0)};
}

// Integer rectangle of the given size centered on a grid plane, clipped to it.
// Never returns an empty rectangle for a non-empty plane.
inline cv::Rect CenteredRect(const cv::Size &plane, const cv::Size &inner) {
  int w = std::min(std::max(inner.width, 1), plane.width);
  int h = std::min(std::max(inner.height, 1), plane.height);
  int x = (plane.width - w) / 2;
  int y = (plane.height - h) / 2;
  return {x, y, w, h};
}

// Maps a wrapped circular index into the signed displacement range
// [-n/2, n/2): indices past the midpoint alias to negative offsets.
inline double WrapSignedOffset(double index, int n) {
  return index > n / 2.0 ? index - n : index;
}

}  // namespace ltcf

#endif  // LTCF_GEOMETRY_HPP_
