#ifndef LTCF_TRACKER_HPP_
#define LTCF_TRACKER_HPP_

#include <optional>
#include <string>
#include <vector>

#include "ltcf/config.hpp"
#include "ltcf/detector.hpp"
#include "ltcf/short_term.hpp"
#include "ltcf/uncertainty.hpp"

namespace ltcf {

// Per-frame diagnostics record. mode is "ST" when the short-term
// hypothesis won (or the detector did not run) and "DET" when the
// detection hypothesis was selected.
struct FrameTrace {
  int frame_index = 0;
  std::string mode = "ST";
  cv::Point2d st_pos;
  double st_quality = 0.0;
  std::optional<cv::Point2d> det_pos;
  std::optional<double> det_quality;
  bool confident = true;
  cv::Rect2d box;
};

std::string FrameTraceToJsonLine(const FrameTrace &trace);

// Long-term tracker: short-term constrained-filter tracking, quality-ratio
// failure detection, and whole-image re-detection through a bank of
// filters updated at different temporal scales.
class LongTermTracker {
 public:
  // Learns the initialization model, fills every bank slot with it and
  // seeds the quality history with the first-frame quality. Emits the
  // frame-0 trace.
  void Init(const ImageFrame &frame, const cv::Rect2d &box, const RunParams &params);

  // Runs one tracking iteration and returns the estimated bounding box.
  cv::Rect2d Step(const ImageFrame &frame);

  const std::vector<FrameTrace> &traces() const { return traces_; }
  const FrameTrace &last_trace() const { return traces_.back(); }

  bool confident() const { return confident_; }
  const TargetState &state() const { return state_; }
  const ConstrainedFilter &model() const { return short_term_.model(); }
  const FilterBank &bank() const { return bank_; }
  FilterBank &mutable_bank() { return bank_; }
  const DetectorSchedule &schedule() const { return schedule_; }
  const MotionPrior &prior() const { return prior_; }
  const QualityHistory &history() const { return history_; }
  const ShortTermTracker &short_term() const { return short_term_; }
  const RunParams &params() const { return params_; }

 private:
  cv::Rect2d CurrentBox() const;
  void PushTrace(FrameTrace trace);

  RunParams params_;
  FeatureConfig feature_config_;
  UncertaintyConfig uncertainty_config_;
  ShortTermTracker short_term_;
  FilterBank bank_;
  DetectorSchedule schedule_;
  QualityHistory history_{100};
  MotionPrior prior_;
  TargetState state_;
  cv::Size2d initial_size_;
  // Scale hypothesis proposed by a detection win; it steers the next
  // search and is committed only if that frame turns out confident.
  std::optional<double> pending_scale_;
  bool confident_ = true;
  bool initialized_ = false;
  int frame_index_ = 0;
  std::vector<FrameTrace> traces_;
};

// Feature configuration from run parameters; drops the color-name family
// with a warning on stderr when the table is missing.
FeatureConfig MakeFeatureConfig(const RunParams &params);

// Detector schedule for an ablation variant; empty for kShortTermOnly.
DetectorSchedule MakeSchedule(const RunParams &params);

}  // namespace ltcf

#endif  // LTCF_TRACKER_HPP_
