// Shared synthetic scenes for the tracker-level tests.
#ifndef LTCF_TESTS_SCENES_HPP_
#define LTCF_TESTS_SCENES_HPP_

#include "ltcf/config.hpp"
#include "ltcf/synthetic.hpp"

namespace ltcf::scenes {

inline RunParams FastParams() {
  RunParams params;
  params.use_colornames = false;  // no table needed in tests
  return params;
}

// Target resting at the frame center.
inline SyntheticScript StaticScript(int frames = 30, std::uint64_t seed = 5) {
  SyntheticScript script;
  script.name = "static";
  script.frame_size = {320, 240};
  script.frame_count = frames;
  script.seed = seed;
  script.target_size = {48, 36};
  script.trajectory = {{0, 160.0, 120.0, 1.0}};
  return script;
}

// In-place full occlusion over [from, to]; the target never moves.
inline SyntheticScript OcclusionInPlaceScript(int frames, int from, int to,
                                              std::uint64_t seed = 6) {
  SyntheticScript script = StaticScript(frames, seed);
  script.name = "occlusion_in_place";
  script.occlusions = {{from, to}};
  return script;
}

// Occlusion during which the target jumps several widths away. The target
// keeps drifting slowly while visible, as real targets do; a pixel-static
// target saturates the quality history at one alignment phase.
inline SyntheticScript OcclusionJumpScript(int frames, int from, int to, double jump_widths,
                                           std::uint64_t seed = 7) {
  SyntheticScript script;
  script.name = "occlusion_jump";
  script.frame_size = {400, 240};
  script.frame_count = frames;
  script.seed = seed;
  script.target_size = {40, 30};
  double x0 = 80.0, y0 = 118.0;
  double xa = x0 + 0.7 * from, ya = y0 + 0.15 * from;   // drift until the onset
  double x1 = xa + jump_widths * script.target_size.width;
  script.trajectory = {{0, x0, y0, 1.0},
                       {from, xa, ya, 1.0},
                       {to, x1, ya, 1.0},
                       {frames - 1, x1 + 0.4 * (frames - 1 - to), ya, 1.0}};
  script.occlusions = {{from, to}};
  return script;
}

inline ImageFrame FrameAt(const RenderedSequence &seq, int index) {
  return {seq.frames[index], index};
}

inline cv::Rect2d InitBox(const RenderedSequence &seq) { return seq.meta.ground_truth.front(); }

}  // namespace ltcf::scenes

#endif  // LTCF_TESTS_SCENES_HPP_
