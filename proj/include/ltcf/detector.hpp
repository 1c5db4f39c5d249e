#ifndef LTCF_DETECTOR_HPP_
#define LTCF_DETECTOR_HPP_

#include <optional>
#include <utility>
#include <vector>

#include "ltcf/correlation.hpp"
#include "ltcf/filter_learning.hpp"
#include "ltcf/short_term.hpp"

namespace ltcf {

// Random-walk position prior anchored at the last confident estimate.
// The per-axis spread starts at the target extent and grows geometrically
// with the number of frames since that estimate.
struct MotionPrior {
  cv::Point2d anchor;
  cv::Size2d base_sigma;  // target width/height in pixels
  double growth = 1.05;
  int frames_since_confident = 0;

  double SigmaX() const { return base_sigma.width * std::pow(growth, frames_since_confident); }
  double SigmaY() const { return base_sigma.height * std::pow(growth, frames_since_confident); }
};

// Unnormalized Gaussian density with peak value 1 at the anchor.
double PriorDensity(const MotionPrior &prior, const cv::Point2d &pos);

// Detector filters maintained at different update periods ("temporal
// scales"). Slot 0 holds the initialization filter and is never updated;
// the last slot has period 1 and therefore stays equal to the short-term
// model under the shared blending rule.
struct FilterBank {
  std::vector<ConstrainedFilter> filters;
  std::vector<int> update_periods;  // 0 = never updated
  std::vector<int> frames_since_update;
};

FilterBank MakeFilterBank(const ConstrainedFilter &initial, const std::vector<int> &periods);

// Counts a confident frame for every updatable slot; a slot whose counter
// reaches its period is blended with the fresh short-term filter and the
// counter resets. A zero eta is a complete no-op.
void UpdateBank(FilterBank &bank, const ConstrainedFilter &fresh_short_term, double eta);

// Cursor over the (filter, size-scale) product in filter-major order,
// advanced once per detection frame.
struct DetectorSchedule {
  std::vector<int> filter_indices;
  std::vector<double> scale_factors;
  int cursor = 0;

  int CycleLength() const {
    return static_cast<int>(filter_indices.size() * scale_factors.size());
  }
  std::pair<int, double> Current() const {
    int n_scales = static_cast<int>(scale_factors.size());
    return {filter_indices[cursor / n_scales], scale_factors[cursor % n_scales]};
  }
  void Advance() { cursor = (cursor + 1) % CycleLength(); }
};

struct Detection {
  cv::Point2d center;   // image pixels
  double scale;         // absolute scale multiplier hypothesis
  double quality;       // from the unweighted correlation response
  int bank_index;
  double scale_factor;
};

// Argmax of response .* prior over the hypothesis positions implied by
// each response cell: peak u maps to position (u + center_cell) * cells_to_image
// wrapped on the plane. Ties resolve to the first cell in row-major order.
cv::Point PriorWeightedPeak(const cv::Mat &response, const MotionPrior &prior,
                            const cv::Point2d &center_cell, double cells_to_image);

// Evaluates the scheduled (filter, scale) pair over the whole frame: the
// image is resampled so a target at base_scale * scale_factor appears at
// template size, the filter is zero-padded to the full feature plane and
// the detected position maximizes response * motion prior. Pairs whose
// resampled plane cannot fit the filter are skipped (consuming their
// cycle step); returns nullopt when every pair in a full cycle skips.
std::optional<Detection> Detect(const ImageFrame &frame, const FilterBank &bank,
                                DetectorSchedule &schedule, const MotionPrior &prior,
                                const TemplateGeometry &geometry, double base_scale,
                                const FeatureConfig &features, int psr_exclusion_radius);

}  // namespace ltcf

#endif  // LTCF_DETECTOR_HPP_
