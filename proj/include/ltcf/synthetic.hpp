#ifndef LTCF_SYNTHETIC_HPP_
#define LTCF_SYNTHETIC_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <opencv2/core.hpp>

#include "ltcf/eval.hpp"

namespace ltcf {

struct SyntheticKeyframe {
  int frame = 0;
  double x = 0.0;  // target center, image pixels
  double y = 0.0;
  double scale = 1.0;
};

struct OcclusionInterval {
  int from = 0;  // inclusive
  int to = 0;    // inclusive
};

// Deterministic rendering script: textured target on a textured
// background, piecewise-linear trajectory between keyframes, full
// occlusions over the listed intervals.
struct SyntheticScript {
  std::string name = "synthetic";
  cv::Size frame_size = {320, 240};
  int frame_count = 60;
  std::uint64_t seed = 1;
  cv::Size2d target_size = {40, 30};
  std::vector<SyntheticKeyframe> trajectory;
  std::vector<OcclusionInterval> occlusions;
  double occluder_margin = 1.6;       // occluder extent relative to the target
  bool occluder_follows = false;      // occluder moves with the hidden target
  bool occluder_textured = false;     // block texture instead of a solid color
  double background_contrast = 1.0;   // 0 = flat gray, 1 = full-range texture
};

SyntheticScript ParseSyntheticScript(const std::string &json_text);
SyntheticScript LoadSyntheticScript(const std::filesystem::path &path);

struct RenderedSequence {
  Sequence meta;                // image_paths empty until written out
  std::vector<cv::Mat> frames;  // CV_8UC3
};

// Renders the script. Absent-target frames (occluded or fully outside the
// image) carry a zero-size ground-truth rectangle. Bit-identical output
// for identical scripts.
RenderedSequence GenerateSynthetic(const SyntheticScript &script);

// Writes dir/img/%08d.png plus dir/groundtruth.txt.
void WriteSequenceDir(const RenderedSequence &sequence, const std::filesystem::path &dir);

}  // namespace ltcf

#endif  // LTCF_SYNTHETIC_HPP_
