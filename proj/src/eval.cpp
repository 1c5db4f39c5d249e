#include "ltcf/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <opencv2/imgcodecs.hpp>

#include "ltcf/geometry.hpp"

namespace ltcf {

namespace {

bool HasImageExtension(const std::filesystem::path &p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), ::tolower);
  return ext == ".png" || ext == ".jpg" || ext == ".jpeg" || ext == ".bmp";
}

bool IsNanToken(std::string token) {
  std::transform(token.begin(), token.end(), token.begin(), ::tolower);
  return token.find("nan") != std::string::npos;
}

cv::Rect2d ParseGroundTruthLine(const std::string &line, int line_number) {
  std::string normalized = line;
  std::replace(normalized.begin(), normalized.end(), ',', ' ');
  std::replace(normalized.begin(), normalized.end(), '\t', ' ');
  std::istringstream ss(normalized);
  std::string tokens[4];
  for (auto &token : tokens) {
    if (!(ss >> token)) {
      throw std::runtime_error("groundtruth line " + std::to_string(line_number) +
                               ": expected 4 fields");
    }
  }
  if (IsNanToken(tokens[0])) return {0, 0, 0, 0};
  try {
    return {std::stod(tokens[0]), std::stod(tokens[1]), std::stod(tokens[2]),
            std::stod(tokens[3])};
  } catch (const std::exception &) {
    throw std::runtime_error("groundtruth line " + std::to_string(line_number) +
                             ": bad number");
  }
}

}  // namespace

Sequence LoadSequence(const std::filesystem::path &dir) {
  Sequence seq;
  seq.name = dir.filename().string();
  if (seq.name.empty()) seq.name = dir.parent_path().filename().string();

  std::filesystem::path img_dir = dir / "img";
  if (!std::filesystem::is_directory(img_dir)) {
    throw std::runtime_error("sequence has no img/ directory: " + dir.string());
  }
  for (const auto &entry : std::filesystem::directory_iterator(img_dir)) {
    if (entry.is_regular_file() && HasImageExtension(entry.path())) {
      seq.image_paths.push_back(entry.path().string());
    }
  }
  std::sort(seq.image_paths.begin(), seq.image_paths.end());

  std::filesystem::path gt_path = dir / "groundtruth.txt";
  std::ifstream gt(gt_path);
  if (!gt) throw std::runtime_error("missing ground truth: " + gt_path.string());
  std::string line;
  int line_number = 0;
  while (std::getline(gt, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    seq.ground_truth.push_back(ParseGroundTruthLine(line, line_number));
  }

  if (seq.ground_truth.size() != seq.image_paths.size()) {
    throw std::runtime_error("sequence " + seq.name + ": " +
                             std::to_string(seq.ground_truth.size()) + " ground-truth rows vs " +
                             std::to_string(seq.image_paths.size()) + " images");
  }

  std::ifstream attrs(dir / "attributes.txt");
  while (attrs && std::getline(attrs, line)) {
    line = line.substr(0, line.find_last_not_of(" \t\r\n") + 1);
    if (!line.empty()) seq.attributes.push_back(line);
  }
  return seq;
}

double Overlap(const cv::Rect2d &a, const cv::Rect2d &b) {
  if (Sequence::IsAbsent(a) || Sequence::IsAbsent(b)) return 0.0;
  double inter = (a & b).area();
  double uni = a.area() + b.area() - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

EvalResult ComputeMetrics(const std::vector<double> &overlaps,
                          const std::vector<double> &center_errors,
                          const std::vector<bool> &present) {
  EvalResult r;
  r.overlaps = overlaps;
  r.center_errors = center_errors;

  int present_count = 0;
  for (bool p : present) present_count += p ? 1 : 0;

  r.success_curve.resize(kSuccessSamples, 0.0);
  for (int i = 0; i < kSuccessSamples; ++i) {
    double threshold = i * 0.01;
    int hits = 0;
    for (size_t f = 0; f < overlaps.size(); ++f) {
      if (present[f] && overlaps[f] > threshold) ++hits;
    }
    r.success_curve[i] = present_count > 0 ? static_cast<double>(hits) / present_count : 0.0;
  }

  // Trapezoidal area under the success curve over the unit threshold range.
  r.auc = 0.0;
  for (int i = 0; i + 1 < kSuccessSamples; ++i) {
    r.auc += 0.5 * (r.success_curve[i] + r.success_curve[i + 1]) * 0.01;
  }

  r.precision_curve.resize(kPrecisionSamples, 0.0);
  const size_t total = center_errors.size();
  for (int i = 0; i < kPrecisionSamples; ++i) {
    double threshold = i;
    int hits = 0;
    for (double e : center_errors) {
      if (e < threshold) ++hits;
    }
    r.precision_curve[i] = total > 0 ? static_cast<double>(hits) / total : 0.0;
  }
  r.precision_at_20 = r.precision_curve[20];
  return r;
}

OpeOutput RunOpe(const RunParams &params, const Sequence &sequence,
                 const FrameProvider &frame_provider) {
  if (sequence.FrameCount() < 1) throw std::runtime_error("RunOpe: empty sequence");
  if (Sequence::IsAbsent(sequence.ground_truth.front())) {
    throw std::runtime_error("RunOpe: target absent in the first frame");
  }

  auto load_frame = [&](int index) {
    if (frame_provider) return frame_provider(index);
    cv::Mat image = cv::imread(sequence.image_paths[index], cv::IMREAD_COLOR);
    if (image.empty()) {
      throw std::runtime_error("cannot read image: " + sequence.image_paths[index]);
    }
    return image;
  };

  OpeOutput out;
  LongTermTracker tracker;
  double tracking_seconds = 0.0;

  for (int f = 0; f < sequence.FrameCount(); ++f) {
    ImageFrame frame{load_frame(f), f};
    auto t0 = std::chrono::steady_clock::now();
    if (f == 0) {
      tracker.Init(frame, sequence.ground_truth.front(), params);
      out.boxes.push_back(tracker.last_trace().box);
    } else {
      out.boxes.push_back(tracker.Step(frame));
    }
    tracking_seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }

  out.traces = tracker.traces();
  out.fps = tracking_seconds > 0.0 ? sequence.FrameCount() / tracking_seconds : 0.0;

  std::vector<double> overlaps, errors;
  std::vector<bool> present;
  for (int f = 0; f < sequence.FrameCount(); ++f) {
    const cv::Rect2d &gt = sequence.ground_truth[f];
    bool has_target = !Sequence::IsAbsent(gt);
    present.push_back(has_target);
    if (has_target) {
      overlaps.push_back(Overlap(out.boxes[f], gt));
      errors.push_back(cv::norm(RectCenter(out.boxes[f]) - RectCenter(gt)));
    } else {
      overlaps.push_back(-1.0);
      errors.push_back(std::numeric_limits<double>::infinity());
    }
  }
  out.metrics = ComputeMetrics(overlaps, errors, present);
  return out;
}

cv::Rect ComputeCropWindow(const cv::Size &frame_size, const cv::Point2d &initial_center,
                           double fraction) {
  if (fraction <= 0.0 || fraction > 1.0) {
    throw std::invalid_argument("crop fraction must be in (0, 1]");
  }
  int w = std::max(1, static_cast<int>(std::round(frame_size.width * fraction)));
  int h = std::max(1, static_cast<int>(std::round(frame_size.height * fraction)));
  int x = static_cast<int>(std::round(initial_center.x - w / 2.0));
  int y = static_cast<int>(std::round(initial_center.y - h / 2.0));
  x = std::clamp(x, 0, frame_size.width - w);
  y = std::clamp(y, 0, frame_size.height - h);
  return {x, y, w, h};
}

cv::Rect2d RemapToCrop(const cv::Rect2d &rect, const cv::Rect &window) {
  if (Sequence::IsAbsent(rect)) return {0, 0, 0, 0};
  cv::Rect2d window_d(window.x, window.y, window.width, window.height);
  if ((rect & window_d).empty()) return {0, 0, 0, 0};  // fully out of the cropped view
  return {rect.x - window.x, rect.y - window.y, rect.width, rect.height};
}

void WriteBoxesFile(const std::vector<cv::Rect2d> &boxes, const std::filesystem::path &path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write boxes: " + path.string());
  out.precision(10);
  for (const auto &b : boxes) {
    out << b.x << "," << b.y << "," << b.width << "," << b.height << "\n";
  }
}

std::vector<cv::Rect2d> ReadBoxesFile(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read boxes: " + path.string());
  std::vector<cv::Rect2d> boxes;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    boxes.push_back(ParseGroundTruthLine(line, line_number));
  }
  return boxes;
}

void WriteCurvesCsv(const std::vector<LabeledCurve> &curves, double threshold_step,
                    const std::filesystem::path &path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write curves: " + path.string());
  out << "threshold";
  for (const auto &c : curves) out << "," << c.label;
  out << "\n";
  size_t samples = curves.empty() ? 0 : curves.front().values.size();
  out.precision(10);
  for (size_t i = 0; i < samples; ++i) {
    out << i * threshold_step;
    for (const auto &c : curves) out << "," << c.values[i];
    out << "\n";
  }
}

void WriteSvgPlot(const std::vector<LabeledCurve> &curves, const std::string &title,
                  double x_max, const std::filesystem::path &path) {
  constexpr int kWidth = 640, kHeight = 480, kMargin = 56;
  const char *palette[] = {"#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write plot: " + path.string());
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
      << title << "</text>\n";
  // axes
  out << "<line x1=\"" << kMargin << "\" y1=\"" << kHeight - kMargin << "\" x2=\""
      << kWidth - kMargin << "\" y2=\"" << kHeight - kMargin << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << kMargin << "\" y1=\"" << kHeight - kMargin << "\" x2=\"" << kMargin
      << "\" y2=\"" << kMargin << "\" stroke=\"black\"/>\n";
  for (int tick = 0; tick <= 5; ++tick) {
    double fx = tick / 5.0;
    int x = kMargin + static_cast<int>(fx * (kWidth - 2 * kMargin));
    int y = kHeight - kMargin + 16;
    out << "<text x=\"" << x << "\" y=\"" << y << "\" text-anchor=\"middle\" font-size=\"10\">"
        << fx * x_max << "</text>\n";
    out << "<text x=\"" << kMargin - 8 << "\" y=\""
        << kHeight - kMargin - static_cast<int>(fx * (kHeight - 2 * kMargin)) + 4
        << "\" text-anchor=\"end\" font-size=\"10\">" << fx << "</text>\n";
  }

  for (size_t c = 0; c < curves.size(); ++c) {
    const auto &curve = curves[c];
    out << "<polyline fill=\"none\" stroke=\"" << palette[c % 6] << "\" stroke-width=\"2\" points=\"";
    for (size_t i = 0; i < curve.values.size(); ++i) {
      double fx = curve.values.size() > 1 ? static_cast<double>(i) / (curve.values.size() - 1) : 0;
      double x = kMargin + fx * (kWidth - 2 * kMargin);
      double y = kHeight - kMargin - std::clamp(curve.values[i], 0.0, 1.0) * (kHeight - 2 * kMargin);
      out << x << "," << y << " ";
    }
    out << "\"/>\n";
    out << "<text x=\"" << kWidth - kMargin - 8 << "\" y=\"" << kMargin + 18 * (c + 1)
        << "\" text-anchor=\"end\" font-size=\"12\" fill=\"" << palette[c % 6] << "\">"
        << curve.label << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace ltcf
