#ifndef LTCF_SHORT_TERM_HPP_
#define LTCF_SHORT_TERM_HPP_

#include <opencv2/core.hpp>

#include "ltcf/correlation.hpp"
#include "ltcf/features.hpp"
#include "ltcf/filter_learning.hpp"
#include "ltcf/scale_filter.hpp"

namespace ltcf {

// Target pose in image coordinates. size is the current extent in pixels
// and scale the multiplier relative to the initial size, so
// size == initial_size * scale at all times.
struct TargetState {
  cv::Point2d center;
  cv::Size2d size;
  double scale = 1.0;
};

// Fixed template geometry decided at initialization. The initial target
// is shrunk so its longer side is at most max_template_side pixels; the
// padded search region is rounded so the feature grid has even sides and
// region_px = grid * cell_size exactly.
struct TemplateGeometry {
  int cell_size = 4;
  double rescale = 1.0;       // image px at scale 1 -> template px
  cv::Size region_px;         // search-region template in pixels
  cv::Size grid;              // feature plane, even dimensions
  cv::Size2d target_px;       // target extent in template pixels
  cv::Rect target_rect_cells; // grid-projected centered target rectangle

  // Search region in image pixels for a target at the given scale.
  cv::Size2d RegionImagePx(double scale) const {
    double f = scale / rescale;
    return {region_px.width * f, region_px.height * f};
  }
  // Template-cell center offset: a response peak at u places the target
  // center at (u + CenterCell()) on the feature plane.
  cv::Point2d CenterCell() const { return {grid.width / 2.0, grid.height / 2.0}; }
};

struct ShortTermParams {
  FeatureConfig features;
  AdmmConfig admm;
  ScaleFilterParams scale;
  double padding = 2.0;
  int max_template_side = 100;
  double sigma_factor = 1.0 / 16.0;
  int psr_exclusion_radius = 5;
};

TemplateGeometry MakeTemplateGeometry(const cv::Size2d &target_size, int cell_size,
                                      double padding, int max_template_side);

// CSRDCF-style short-term component: constrained-filter localization in a
// padded search region plus the 1-D scale filter.
class ShortTermTracker {
 public:
  struct Localization {
    TargetState state;  // shifted center, same size/scale as the input
    ResponseMap response;
  };

  // Learns the initial model at the box; returns the initial filter.
  const ConstrainedFilter &Init(const ImageFrame &frame, const cv::Rect2d &box,
                                const ShortTermParams &params);

  Localization Localize(const ImageFrame &frame, const TargetState &prev) const;

  double EstimateScale(const ImageFrame &frame, const TargetState &state) const;

  // Segmentation + constrained learning at the state, blended into the
  // model at rate eta. Returns the fresh (unblended) filter.
  ConstrainedFilter UpdateModel(const ImageFrame &frame, const TargetState &state, double eta);

  void UpdateScaleFilter(const ImageFrame &frame, const TargetState &state, double eta);

  // Constrained filter learned at the state without touching the model.
  ConstrainedFilter LearnAt(const ImageFrame &frame, const TargetState &state) const;

  const ConstrainedFilter &model() const { return model_; }
  const TemplateGeometry &geometry() const { return geometry_; }
  const ShortTermParams &params() const { return params_; }
  const DesiredResponse &desired() const { return desired_; }

 private:
  cv::Rect2d SearchRegion(const TargetState &state) const;

  ShortTermParams params_;
  TemplateGeometry geometry_;
  DesiredResponse desired_;
  ConstrainedFilter model_;
  ScaleFilter scale_filter_;
};

}  // namespace ltcf

#endif  // LTCF_SHORT_TERM_HPP_
