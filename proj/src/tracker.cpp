#include "ltcf/tracker.hpp"

#include <cstdlib>
#include <iostream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "ltcf/geometry.hpp"

namespace ltcf {

std::string FrameTraceToJsonLine(const FrameTrace &t) {
  nlohmann::json j;
  j["frame"] = t.frame_index;
  j["mode"] = t.mode;
  j["st_pos"] = {t.st_pos.x, t.st_pos.y};
  j["st_quality"] = t.st_quality;
  if (t.det_pos) j["det_pos"] = {t.det_pos->x, t.det_pos->y};
  if (t.det_quality) j["det_quality"] = *t.det_quality;
  j["confident"] = t.confident;
  j["box"] = {t.box.x, t.box.y, t.box.width, t.box.height};
  return j.dump();
}

FeatureConfig MakeFeatureConfig(const RunParams &params) {
  FeatureConfig config;
  config.cell_size = params.cell_size;
  config.use_hog = params.use_hog;
  config.use_gray = params.use_gray;
  config.use_colornames = params.use_colornames;
  if (config.use_colornames) {
    std::string path = params.colornames_table;
    if (const char *env = std::getenv("LTCF_COLORNAMES"); env && *env) path = env;
    if (path.empty()) {
      std::cerr << "ltcf: no color-name table configured; tracking with HOG+gray only\n";
      config.use_colornames = false;
    } else {
      config.colornames = std::make_shared<ColorNameTable>(ColorNameTable::Load(path));
    }
  }
  return config;
}

DetectorSchedule MakeSchedule(const RunParams &params) {
  DetectorSchedule schedule;
  const int n = static_cast<int>(params.detector_periods.size());
  switch (params.variant) {
    case Variant::kFull:
      for (int i = 0; i < n; ++i) schedule.filter_indices.push_back(i);
      schedule.scale_factors = params.detector_scales;
      break;
    case Variant::kD0S1:
      schedule.filter_indices = {0};
      schedule.scale_factors = {1.0};
      break;
    case Variant::kD0SM:
      schedule.filter_indices = {0};
      schedule.scale_factors = params.detector_scales;
      break;
    case Variant::kDstS1:
      schedule.filter_indices = {n - 1};
      schedule.scale_factors = {1.0};
      break;
    case Variant::kDstSM:
      schedule.filter_indices = {n - 1};
      schedule.scale_factors = params.detector_scales;
      break;
    case Variant::kShortTermOnly:
      break;
  }
  return schedule;
}

void LongTermTracker::Init(const ImageFrame &frame, const cv::Rect2d &box,
                           const RunParams &params) {
  params_ = params;
  feature_config_ = MakeFeatureConfig(params);
  uncertainty_config_ = {params.tau_q, params.n_q, params.psr_radius};

  ShortTermParams st;
  st.features = feature_config_;
  st.admm = {params.lambda, params.mu_init, params.mu_scale, params.mu_max,
             params.admm_iterations};
  st.scale = {params.num_scales, params.scale_step, 0.25, params.lambda,
              params.scale_min, params.scale_max, {32, 32}};
  st.padding = params.padding;
  st.max_template_side = params.max_template_side;
  st.sigma_factor = params.sigma_factor;
  st.psr_exclusion_radius = params.psr_radius;

  const ConstrainedFilter &initial = short_term_.Init(frame, box, st);

  cv::Rect2d clamped = ClampRectToImage(box, frame.pixels.size());
  state_ = {RectCenter(clamped), clamped.size(), 1.0};
  initial_size_ = clamped.size();
  pending_scale_.reset();

  bank_ = MakeFilterBank(initial, params.detector_periods);
  schedule_ = MakeSchedule(params);
  history_ = QualityHistory(params.n_q);

  // First-frame quality from self-localization on the training frame.
  auto loc = short_term_.Localize(frame, state_);
  double q0 = Quality(loc.response);
  history_.RecordConfident(q0);

  prior_ = {state_.center, state_.size, params.alpha_s, 0};
  confident_ = true;
  initialized_ = true;
  frame_index_ = frame.frame_index;
  traces_.clear();

  FrameTrace trace;
  trace.frame_index = frame_index_;
  trace.mode = "ST";
  trace.st_pos = state_.center;
  trace.st_quality = q0;
  trace.confident = true;
  trace.box = CurrentBox();
  PushTrace(std::move(trace));
}

cv::Rect2d LongTermTracker::CurrentBox() const {
  return RectFromCenterSize(state_.center, state_.size);
}

void LongTermTracker::PushTrace(FrameTrace trace) { traces_.push_back(std::move(trace)); }

cv::Rect2d LongTermTracker::Step(const ImageFrame &frame) {
  if (!initialized_) throw std::logic_error("LongTermTracker: Step before Init");
  ++frame_index_;

  FrameTrace trace;
  trace.frame_index = frame_index_;

  // A detection-win scale hypothesis steers exactly one search.
  const double search_scale = pending_scale_.value_or(state_.scale);
  pending_scale_.reset();
  TargetState search_state{state_.center,
                           {initial_size_.width * search_scale,
                            initial_size_.height * search_scale},
                           search_scale};

  ShortTermTracker::Localization loc;
  bool localization_failed = false;
  try {
    loc = short_term_.Localize(frame, search_state);
  } catch (const std::exception &) {
    localization_failed = true;
  }

  if (localization_failed) {
    // Degenerate frame: keep the previous box, mark the frame uncertain.
    confident_ = false;
    prior_.frames_since_confident += 1;
    trace.mode = "ST";
    trace.st_pos = state_.center;
    trace.st_quality = 0.0;
    trace.confident = false;
    trace.box = CurrentBox();
    PushTrace(std::move(trace));
    return CurrentBox();
  }

  double st_quality = Quality(loc.response);
  trace.st_pos = loc.state.center;
  trace.st_quality = st_quality;

  cv::Point2d winner_pos = loc.state.center;
  double winner_scale = search_scale;
  double winner_quality = st_quality;
  trace.mode = "ST";

  // The detector runs only when the previous frame was uncertain. Its
  // size-scale hypotheses are relative to the committed scale.
  if (!confident_ && schedule_.CycleLength() > 0) {
    auto detection = Detect(frame, bank_, schedule_, prior_, short_term_.geometry(),
                            state_.scale, feature_config_, params_.psr_radius);
    if (detection) {
      trace.det_pos = detection->center;
      trace.det_quality = detection->quality;
      if (detection->quality > winner_quality) {  // ties go to the short-term
        winner_pos = detection->center;
        winner_scale = detection->scale;
        winner_quality = detection->quality;
        trace.mode = "DET";
      }
    }
  }

  bool uncertain = IsUncertain(winner_quality, history_, uncertainty_config_);

  // The winner position always becomes the next search center; the scale
  // is committed only on confident frames, so a spurious detection cannot
  // poison the search geometry for good.
  state_.center = winner_pos;

  if (!uncertain) {
    state_.scale = winner_scale;
    state_.size = {initial_size_.width * state_.scale, initial_size_.height * state_.scale};
    state_.scale = short_term_.EstimateScale(frame, state_);
    state_.size = {initial_size_.width * state_.scale, initial_size_.height * state_.scale};

    ConstrainedFilter fresh = short_term_.UpdateModel(frame, state_, params_.eta);
    short_term_.UpdateScaleFilter(frame, state_, params_.eta);
    UpdateBank(bank_, fresh, params_.eta);

    history_.RecordConfident(winner_quality);
    prior_.anchor = state_.center;
    prior_.base_sigma = state_.size;
    prior_.frames_since_confident = 0;
    confident_ = true;
  } else {
    if (trace.mode == "DET") pending_scale_ = winner_scale;
    prior_.frames_since_confident += 1;
    confident_ = false;
  }

  trace.confident = !uncertain;
  trace.box = CurrentBox();
  PushTrace(std::move(trace));
  return CurrentBox();
}

}  // namespace ltcf
