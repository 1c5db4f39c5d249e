#ifndef LTCF_EVAL_HPP_
#define LTCF_EVAL_HPP_

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include <opencv2/core.hpp>

#include "ltcf/config.hpp"
#include "ltcf/tracker.hpp"

namespace ltcf {

// Frame list plus per-frame ground truth. A zero-size rectangle marks a
// frame where the target is absent.
struct Sequence {
  std::string name;
  std::vector<std::string> image_paths;     // empty for in-memory sequences
  std::vector<cv::Rect2d> ground_truth;
  std::vector<std::string> attributes;

  int FrameCount() const { return static_cast<int>(ground_truth.size()); }
  static bool IsAbsent(const cv::Rect2d &r) { return r.width <= 0.0 || r.height <= 0.0; }
};

// Loads <dir>/img/*.png|jpg... (sorted) and <dir>/groundtruth.txt with one
// "x,y,w,h" line per frame; NaN fields mark absent-target frames. An
// optional attributes.txt carries free-form tags, one per line.
Sequence LoadSequence(const std::filesystem::path &dir);

// Intersection over union; 0 when either rectangle is degenerate.
double Overlap(const cv::Rect2d &a, const cv::Rect2d &b);

// One-pass-evaluation metrics. Success: fraction of present-target frames
// with overlap strictly above each threshold in 0..1 step 0.01, summarized
// by the trapezoidal area under that curve. Precision: fraction of all
// frames with center error strictly below each threshold in 0..50 step 1,
// summarized at 20 px. Absent-target frames are excluded from the success
// denominator and count as infinite error for precision.
struct EvalResult {
  std::vector<double> overlaps;       // per frame; -1 for absent-target frames
  std::vector<double> center_errors;  // per frame; +inf for absent-target frames
  std::vector<double> success_curve;   // 101 samples
  std::vector<double> precision_curve; // 51 samples
  double auc = 0.0;
  double precision_at_20 = 0.0;
};

constexpr int kSuccessSamples = 101;
constexpr int kPrecisionSamples = 51;

EvalResult ComputeMetrics(const std::vector<double> &overlaps,
                          const std::vector<double> &center_errors,
                          const std::vector<bool> &present);

struct OpeOutput {
  EvalResult metrics;
  std::vector<cv::Rect2d> boxes;
  std::vector<FrameTrace> traces;
  double fps = 0.0;  // tracking time only, image decoding excluded
};

using FrameProvider = std::function<cv::Mat(int)>;

// Initializes on the first frame's ground truth and tracks to the end
// without resets. frame_provider overrides image loading (in-memory
// sequences); by default frames come from sequence.image_paths.
OpeOutput RunOpe(const RunParams &params, const Sequence &sequence,
                 const FrameProvider &frame_provider = nullptr);

// Fixed crop window of the given per-axis fraction, centered on the
// initial target position and clamped inside the frame.
cv::Rect ComputeCropWindow(const cv::Size &frame_size, const cv::Point2d &initial_center,
                           double fraction);

// Ground truth mapped into crop coordinates; rectangles that do not
// intersect the window become absent.
cv::Rect2d RemapToCrop(const cv::Rect2d &rect, const cv::Rect &window);

// Serialization helpers shared by the CLI.
void WriteBoxesFile(const std::vector<cv::Rect2d> &boxes, const std::filesystem::path &path);
std::vector<cv::Rect2d> ReadBoxesFile(const std::filesystem::path &path);
void WriteGroundTruth(const std::vector<cv::Rect2d> &rects, const std::filesystem::path &path);

struct LabeledCurve {
  std::string label;
  std::vector<double> values;
};

void WriteCurvesCsv(const std::vector<LabeledCurve> &curves, double threshold_step,
                    const std::filesystem::path &path);

// Minimal SVG line plot, one polyline per curve with a legend.
void WriteSvgPlot(const std::vector<LabeledCurve> &curves, const std::string &title,
                  double x_max, const std::filesystem::path &path);

}  // namespace ltcf

#endif  // LTCF_EVAL_HPP_
