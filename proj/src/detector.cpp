#include "ltcf/detector.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "ltcf/uncertainty.hpp"

namespace ltcf {

double PriorDensity(const MotionPrior &prior, const cv::Point2d &pos) {
  double dx = (pos.x - prior.anchor.x) / prior.SigmaX();
  double dy = (pos.y - prior.anchor.y) / prior.SigmaY();
  return std::exp(-0.5 * (dx * dx + dy * dy));
}

FilterBank MakeFilterBank(const ConstrainedFilter &initial, const std::vector<int> &periods) {
  if (periods.empty()) throw std::invalid_argument("MakeFilterBank: no update periods");
  FilterBank bank;
  bank.filters.assign(periods.size(), initial);
  bank.update_periods = periods;
  bank.frames_since_update.assign(periods.size(), 0);
  return bank;
}

cv::Point PriorWeightedPeak(const cv::Mat &response, const MotionPrior &prior,
                            const cv::Point2d &center_cell, double cells_to_image) {
  // Hypothesis position for peak u is (u + template center) on the plane.
  cv::Point best(0, 0);
  double best_score = -std::numeric_limits<double>::infinity();
  for (int y = 0; y < response.rows; ++y) {
    const double *row = response.ptr<double>(y);
    for (int x = 0; x < response.cols; ++x) {
      double px = std::fmod(x + center_cell.x, static_cast<double>(response.cols)) * cells_to_image;
      double py = std::fmod(y + center_cell.y, static_cast<double>(response.rows)) * cells_to_image;
      double score = row[x] * PriorDensity(prior, {px, py});
      if (score > best_score) {
        best_score = score;
        best = cv::Point(x, y);
      }
    }
  }
  return best;
}

void UpdateBank(FilterBank &bank, const ConstrainedFilter &fresh_short_term, double eta) {
  if (eta == 0.0) return;
  for (size_t i = 0; i < bank.filters.size(); ++i) {
    if (bank.update_periods[i] <= 0) continue;  // the initialization slot
    if (++bank.frames_since_update[i] >= bank.update_periods[i]) {
      bank.filters[i] = UpdateFilter(bank.filters[i], fresh_short_term, eta);
      bank.frames_since_update[i] = 0;
    }
  }
}

std::optional<Detection> Detect(const ImageFrame &frame, const FilterBank &bank,
                                DetectorSchedule &schedule, const MotionPrior &prior,
                                const TemplateGeometry &geometry, double base_scale,
                                const FeatureConfig &features, int psr_exclusion_radius) {
  if (schedule.CycleLength() == 0) return std::nullopt;
  const cv::Size frame_size = frame.pixels.size();
  const cv::Rect2d full_frame(0.0, 0.0, frame_size.width, frame_size.height);
  const int cell = geometry.cell_size;

  for (int attempt = 0; attempt < schedule.CycleLength(); ++attempt) {
    auto [bank_index, scale_factor] = schedule.Current();

    // Resample the image so a target at base_scale * scale_factor shows up
    // at template size.
    double resize = geometry.rescale / (base_scale * scale_factor);
    cv::Size resized(std::max(1, static_cast<int>(std::round(frame_size.width * resize))),
                     std::max(1, static_cast<int>(std::round(frame_size.height * resize))));
    cv::Size plane((resized.width + cell - 1) / cell, (resized.height + cell - 1) / cell);
    if (plane.width < geometry.grid.width || plane.height < geometry.grid.height) {
      schedule.Advance();  // frame too small at this scale: skip, consume the step
      continue;
    }

    FeatureStack stack = ExtractFeatures(frame, full_frame, resized, features);
    const ConstrainedFilter &filter = bank.filters[bank_index];
    ResponseMap response = CircularCorrelate(stack, filter, psr_exclusion_radius);

    const cv::Point2d c0 = geometry.CenterCell();
    const double cells_to_image = cell / resize;
    cv::Point best = PriorWeightedPeak(response.values, prior, c0, cells_to_image);

    Detection detection;
    detection.center = {
        std::fmod(best.x + c0.x, static_cast<double>(plane.width)) * cells_to_image,
        std::fmod(best.y + c0.y, static_cast<double>(plane.height)) * cells_to_image};
    detection.scale = base_scale * scale_factor;
    detection.quality = Quality(response);  // unweighted response only
    detection.bank_index = bank_index;
    detection.scale_factor = scale_factor;
    schedule.Advance();
    return detection;
  }
  return std::nullopt;
}

}  // namespace ltcf
