#include "ltcf/synthetic.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <stdexcept>

#include <nlohmann/json.hpp>
#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "ltcf/geometry.hpp"

namespace ltcf {

namespace {

// Raw engine output only: std::uniform_int_distribution is not pinned by
// the standard, raw draws keep rendering identical everywhere.
uchar NextByte(std::mt19937_64 &rng) { return static_cast<uchar>(rng() & 0xFF); }

cv::Vec3b NextColor(std::mt19937_64 &rng) {
  return {NextByte(rng), NextByte(rng), NextByte(rng)};
}

// Smooth value-noise background: a coarse grid of random colors,
// bilinearly interpolated. contrast scales the color spread around
// mid-gray; low values keep the short-term tracker anchored when the
// target is gone.
cv::Mat RenderBackground(const cv::Size &size, std::mt19937_64 &rng, double contrast) {
  constexpr int kCoarse = 32;
  int gw = size.width / kCoarse + 2;
  int gh = size.height / kCoarse + 2;
  cv::Mat coarse(gh, gw, CV_8UC3);
  for (int y = 0; y < gh; ++y) {
    for (int x = 0; x < gw; ++x) {
      cv::Vec3b c = NextColor(rng);
      if (contrast != 1.0) {
        for (int ch = 0; ch < 3; ++ch) {
          c[ch] = cv::saturate_cast<uchar>(128.0 + contrast * (c[ch] - 128.0));
        }
      }
      coarse.at<cv::Vec3b>(y, x) = c;
    }
  }

  cv::Mat out(size, CV_8UC3);
  for (int y = 0; y < size.height; ++y) {
    double gy = static_cast<double>(y) / kCoarse;
    int y0 = static_cast<int>(gy);
    double fy = gy - y0;
    for (int x = 0; x < size.width; ++x) {
      double gx = static_cast<double>(x) / kCoarse;
      int x0 = static_cast<int>(gx);
      double fx = gx - x0;
      cv::Vec3d c(0, 0, 0);
      const cv::Vec3b &tl = coarse.at<cv::Vec3b>(y0, x0);
      const cv::Vec3b &tr = coarse.at<cv::Vec3b>(y0, x0 + 1);
      const cv::Vec3b &bl = coarse.at<cv::Vec3b>(y0 + 1, x0);
      const cv::Vec3b &br = coarse.at<cv::Vec3b>(y0 + 1, x0 + 1);
      for (int ch = 0; ch < 3; ++ch) {
        c[ch] = (1 - fy) * ((1 - fx) * tl[ch] + fx * tr[ch]) +
                fy * ((1 - fx) * bl[ch] + fx * br[ch]);
      }
      out.at<cv::Vec3b>(y, x) = {static_cast<uchar>(c[0]), static_cast<uchar>(c[1]),
                                 static_cast<uchar>(c[2])};
    }
  }
  return out;
}

// Block-textured target patch: strong edges for HOG, saturated distinct
// colors for the segmenter.
cv::Mat RenderTargetPatch(const cv::Size &size, std::mt19937_64 &rng) {
  constexpr int kBlocks = 4;
  cv::Mat patch(size, CV_8UC3);
  cv::Vec3b palette[kBlocks][kBlocks];
  for (int by = 0; by < kBlocks; ++by) {
    for (int bx = 0; bx < kBlocks; ++bx) {
      cv::Vec3b c = NextColor(rng);
      c[(bx + by) % 3] = 255;  // keep every block saturated somewhere
      palette[by][bx] = c;
    }
  }
  for (int y = 0; y < size.height; ++y) {
    int by = std::min(y * kBlocks / std::max(1, size.height), kBlocks - 1);
    for (int x = 0; x < size.width; ++x) {
      int bx = std::min(x * kBlocks / std::max(1, size.width), kBlocks - 1);
      patch.at<cv::Vec3b>(y, x) = palette[by][bx];
    }
  }
  // Soft interior edges; razor-sharp block boundaries interact badly with
  // the feature cell quantization and make response peaks phase-brittle.
  cv::GaussianBlur(patch, patch, cv::Size(0, 0), 1.2, 1.2);
  return patch;
}

SyntheticKeyframe InterpolateAt(const std::vector<SyntheticKeyframe> &keys, int frame) {
  if (keys.empty()) throw std::invalid_argument("synthetic script: empty trajectory");
  if (frame <= keys.front().frame) return keys.front();
  if (frame >= keys.back().frame) return keys.back();
  for (size_t i = 1; i < keys.size(); ++i) {
    if (frame <= keys[i].frame) {
      const auto &a = keys[i - 1];
      const auto &b = keys[i];
      double t = static_cast<double>(frame - a.frame) / (b.frame - a.frame);
      return {frame, a.x + t * (b.x - a.x), a.y + t * (b.y - a.y),
              a.scale + t * (b.scale - a.scale)};
    }
  }
  return keys.back();
}

void PasteClipped(cv::Mat &canvas, const cv::Mat &patch, const cv::Point2d &center) {
  int x0 = static_cast<int>(std::round(center.x - patch.cols / 2.0));
  int y0 = static_cast<int>(std::round(center.y - patch.rows / 2.0));
  cv::Rect dst = cv::Rect(x0, y0, patch.cols, patch.rows) & cv::Rect(0, 0, canvas.cols, canvas.rows);
  if (dst.empty()) return;
  cv::Rect src(dst.x - x0, dst.y - y0, dst.width, dst.height);
  patch(src).copyTo(canvas(dst));
}

}  // namespace

SyntheticScript ParseSyntheticScript(const std::string &json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error &e) {
    throw std::runtime_error(std::string("synthetic script: invalid JSON: ") + e.what());
  }

  SyntheticScript s;
  try {
    s.name = j.value("name", s.name);
    if (j.contains("frame_size")) {
      s.frame_size = {j["frame_size"][0].get<int>(), j["frame_size"][1].get<int>()};
    }
    s.frame_count = j.value("frame_count", s.frame_count);
    s.seed = j.value("seed", s.seed);
    if (j.contains("target_size")) {
      s.target_size = {j["target_size"][0].get<double>(), j["target_size"][1].get<double>()};
    }
    s.occluder_margin = j.value("occluder_margin", s.occluder_margin);
    s.background_contrast = j.value("background_contrast", s.background_contrast);
    s.occluder_follows = j.value("occluder_follows", s.occluder_follows);
    s.occluder_textured = j.value("occluder_textured", s.occluder_textured);
    for (const auto &k : j.value("trajectory", nlohmann::json::array())) {
      s.trajectory.push_back({k.at("frame").get<int>(), k.at("x").get<double>(),
                              k.at("y").get<double>(), k.value("scale", 1.0)});
    }
    for (const auto &o : j.value("occlusions", nlohmann::json::array())) {
      s.occlusions.push_back({o.at("from").get<int>(), o.at("to").get<int>()});
    }
  } catch (const nlohmann::json::exception &e) {
    throw std::runtime_error(std::string("synthetic script: bad field: ") + e.what());
  }

  if (s.frame_count < 1 || s.frame_size.width < 16 || s.frame_size.height < 16) {
    throw std::runtime_error("synthetic script: frame_count/frame_size out of range");
  }
  if (s.trajectory.empty()) {
    s.trajectory.push_back({0, s.frame_size.width / 2.0, s.frame_size.height / 2.0, 1.0});
  }
  if (!std::is_sorted(s.trajectory.begin(), s.trajectory.end(),
                      [](const auto &a, const auto &b) { return a.frame < b.frame; })) {
    throw std::runtime_error("synthetic script: trajectory keyframes not sorted");
  }
  return s;
}

SyntheticScript LoadSyntheticScript(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("synthetic script not readable: " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return ParseSyntheticScript(text);
}

RenderedSequence GenerateSynthetic(const SyntheticScript &script) {
  std::mt19937_64 rng(script.seed);
  cv::Mat background = RenderBackground(script.frame_size, rng, script.background_contrast);

  cv::Size base_size(std::max(2, static_cast<int>(std::round(script.target_size.width))),
                     std::max(2, static_cast<int>(std::round(script.target_size.height))));
  cv::Mat target = RenderTargetPatch(base_size, rng);
  cv::Vec3b occluder_color = NextColor(rng);
  cv::Mat occluder_pattern;
  if (script.occluder_textured) occluder_pattern = RenderTargetPatch(base_size, rng);

  auto occluded_at = [&](int frame) {
    for (const auto &o : script.occlusions) {
      if (frame >= o.from && frame <= o.to) return true;
    }
    return false;
  };

  RenderedSequence out;
  out.meta.name = script.name;
  for (int f = 0; f < script.frame_count; ++f) {
    SyntheticKeyframe pose = InterpolateAt(script.trajectory, f);
    cv::Mat frame = background.clone();
    cv::Size scaled(std::max(2, static_cast<int>(std::round(base_size.width * pose.scale))),
                    std::max(2, static_cast<int>(std::round(base_size.height * pose.scale))));

    bool occluded = occluded_at(f);
    cv::Rect2d gt = RectFromCenterSize({pose.x, pose.y},
                                       {static_cast<double>(scaled.width),
                                        static_cast<double>(scaled.height)});

    if (!occluded) {
      cv::Mat patch;
      cv::resize(target, patch, scaled, 0, 0, cv::INTER_LINEAR);
      PasteClipped(frame, patch, {pose.x, pose.y});
    } else {
      // Obstruction drawn over the target: either parked where the target
      // went out of sight or moving along with it.
      SyntheticKeyframe cover = pose;
      if (!script.occluder_follows) {
        for (const auto &o : script.occlusions) {
          if (f >= o.from && f <= o.to) {
            cover = InterpolateAt(script.trajectory, o.from);
            break;
          }
        }
      }
      cv::Size occ(std::max(2, static_cast<int>(std::round(scaled.width * script.occluder_margin))),
                   std::max(2, static_cast<int>(std::round(scaled.height * script.occluder_margin))));
      cv::Mat block;
      if (script.occluder_textured) {
        cv::resize(occluder_pattern, block, occ, 0, 0, cv::INTER_LINEAR);
      } else {
        block = cv::Mat(occ, CV_8UC3, occluder_color);
      }
      PasteClipped(frame, block, {cover.x, cover.y});
    }

    bool visible = !occluded &&
                   !(gt & cv::Rect2d(0, 0, script.frame_size.width, script.frame_size.height))
                        .empty();
    out.meta.ground_truth.push_back(visible ? gt : cv::Rect2d(0, 0, 0, 0));
    out.frames.push_back(frame);
  }
  return out;
}

void WriteGroundTruth(const std::vector<cv::Rect2d> &rects, const std::filesystem::path &path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write ground truth: " + path.string());
  out.precision(10);
  for (const auto &r : rects) {
    if (Sequence::IsAbsent(r)) {
      out << "NaN,NaN,NaN,NaN\n";
    } else {
      out << r.x << "," << r.y << "," << r.width << "," << r.height << "\n";
    }
  }
}

void WriteSequenceDir(const RenderedSequence &sequence, const std::filesystem::path &dir) {
  std::filesystem::create_directories(dir / "img");
  for (size_t i = 0; i < sequence.frames.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "%08zu.png", i + 1);
    if (!cv::imwrite((dir / "img" / name).string(), sequence.frames[i])) {
      throw std::runtime_error("cannot write frame " + std::string(name));
    }
  }
  WriteGroundTruth(sequence.meta.ground_truth, dir / "groundtruth.txt");
}

}  // namespace ltcf
