#include "ltcf/short_term.hpp"

#include <cmath>
#include <stdexcept>

#include "ltcf/geometry.hpp"

namespace ltcf {

namespace {

int EvenGridSide(double region_px, int cell) {
  int cells = static_cast<int>(std::ceil(region_px / cell));
  cells += cells % 2;  // even sides put the target center on a grid line
  return std::max(cells, 4);
}

}  // namespace

TemplateGeometry MakeTemplateGeometry(const cv::Size2d &target_size, int cell_size,
                                      double padding, int max_template_side) {
  if (target_size.width <= 0.0 || target_size.height <= 0.0) {
    throw std::invalid_argument("MakeTemplateGeometry: degenerate target size");
  }
  TemplateGeometry g;
  g.cell_size = cell_size;
  double longer = std::max(target_size.width, target_size.height);
  g.rescale = std::min(1.0, max_template_side / longer);
  g.target_px = {target_size.width * g.rescale, target_size.height * g.rescale};

  double region_w = g.target_px.width * (1.0 + padding);
  double region_h = g.target_px.height * (1.0 + padding);
  g.grid = {EvenGridSide(region_w, cell_size), EvenGridSide(region_h, cell_size)};
  g.region_px = {g.grid.width * cell_size, g.grid.height * cell_size};

  cv::Size target_cells(
      std::max(1, static_cast<int>(std::round(g.target_px.width / cell_size))),
      std::max(1, static_cast<int>(std::round(g.target_px.height / cell_size))));
  g.target_rect_cells = CenteredRect(g.grid, target_cells);
  return g;
}

const ConstrainedFilter &ShortTermTracker::Init(const ImageFrame &frame, const cv::Rect2d &box,
                                                const ShortTermParams &params) {
  params_ = params;
  cv::Rect2d clamped = ClampRectToImage(box, frame.pixels.size());
  if (clamped.width <= 0.0 || clamped.height <= 0.0) {
    throw std::invalid_argument("ShortTermTracker: initialization box outside the frame");
  }

  geometry_ = MakeTemplateGeometry(clamped.size(), params_.features.cell_size, params_.padding,
                                   params_.max_template_side);
  double target_area_cells = (geometry_.target_px.width / geometry_.cell_size) *
                             (geometry_.target_px.height / geometry_.cell_size);
  desired_ = MakeDesiredResponse(geometry_.grid, target_area_cells, params_.sigma_factor);

  TargetState state{RectCenter(clamped), clamped.size(), 1.0};
  model_ = LearnAt(frame, state);
  scale_filter_.Init(frame.pixels, state.center, state.size, 1.0, params_.scale);
  return model_;
}

cv::Rect2d ShortTermTracker::SearchRegion(const TargetState &state) const {
  return RectFromCenterSize(state.center, geometry_.RegionImagePx(state.scale));
}

ShortTermTracker::Localization ShortTermTracker::Localize(const ImageFrame &frame,
                                                          const TargetState &prev) const {
  if (model_.Empty()) throw std::logic_error("ShortTermTracker: not initialized");

  FeatureStack features = ApplyWindow(
      ExtractFeatures(frame, SearchRegion(prev), geometry_.region_px, params_.features));

  Localization out;
  out.response = CircularCorrelate(features, model_, params_.psr_exclusion_radius);

  cv::Point2d peak = SubgridPeak(out.response);
  double dx_cells = WrapSignedOffset(peak.x, geometry_.grid.width);
  double dy_cells = WrapSignedOffset(peak.y, geometry_.grid.height);

  double cells_to_image = geometry_.cell_size * prev.scale / geometry_.rescale;
  out.state = prev;
  out.state.center.x += dx_cells * cells_to_image;
  out.state.center.y += dy_cells * cells_to_image;
  return out;
}

double ShortTermTracker::EstimateScale(const ImageFrame &frame, const TargetState &state) const {
  return scale_filter_.Estimate(frame.pixels, state.center, state.scale);
}

ConstrainedFilter ShortTermTracker::LearnAt(const ImageFrame &frame,
                                            const TargetState &state) const {
  cv::Rect2d region = SearchRegion(state);
  cv::Rect2d target = RectFromCenterSize(state.center, state.size);
  BinaryMask mask = EstimateMask(frame, target, region, geometry_.region_px,
                                 geometry_.cell_size);
  FeatureStack features =
      ApplyWindow(ExtractFeatures(frame, region, geometry_.region_px, params_.features));
  return LearnFilter(features, mask, desired_, params_.admm);
}

ConstrainedFilter ShortTermTracker::UpdateModel(const ImageFrame &frame,
                                                const TargetState &state, double eta) {
  ConstrainedFilter fresh = LearnAt(frame, state);
  model_ = UpdateFilter(model_, fresh, eta);
  return fresh;
}

void ShortTermTracker::UpdateScaleFilter(const ImageFrame &frame, const TargetState &state,
                                         double eta) {
  scale_filter_.Update(frame.pixels, state.center, state.scale, eta);
}

}  // namespace ltcf
