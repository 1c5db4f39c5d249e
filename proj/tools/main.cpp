#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "ltcf/config.hpp"
#include "ltcf/eval.hpp"
#include "ltcf/geometry.hpp"
#include "ltcf/synthetic.hpp"
#include "ltcf/tracker.hpp"

namespace fs = std::filesystem;

namespace {

ltcf::RunParams LoadParamsOrDefaults(const std::string &config_path) {
  if (config_path.empty()) return {};
  if (!fs::exists(config_path)) {
    std::cerr << "ltcf: config '" << config_path << "' not found, using defaults\n";
    return {};
  }
  return ltcf::LoadRunParams(config_path);
}

void WriteTraces(const std::vector<ltcf::FrameTrace> &traces, const fs::path &path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write trace: " + path.string());
  for (const auto &t : traces) out << ltcf::FrameTraceToJsonLine(t) << "\n";
}

void WriteOverlays(const ltcf::Sequence &seq, const std::vector<cv::Rect2d> &boxes,
                   const fs::path &dir) {
  fs::create_directories(dir);
  for (size_t i = 0; i < seq.image_paths.size(); ++i) {
    cv::Mat image = cv::imread(seq.image_paths[i], cv::IMREAD_COLOR);
    if (image.empty()) continue;
    cv::rectangle(image, boxes[i], cv::Scalar(0, 0, 255), 2);
    if (!ltcf::Sequence::IsAbsent(seq.ground_truth[i])) {
      cv::rectangle(image, seq.ground_truth[i], cv::Scalar(0, 255, 255), 1);
    }
    char name[32];
    std::snprintf(name, sizeof(name), "%08zu.png", i + 1);
    cv::imwrite((dir / name).string(), image);
  }
}

int CmdTrack(const std::string &seq_dir, const std::string &config_path,
             const std::string &out_dir, bool overlay) {
  ltcf::RunParams params = LoadParamsOrDefaults(config_path);
  ltcf::Sequence seq = ltcf::LoadSequence(seq_dir);
  fs::create_directories(out_dir);
  ltcf::SaveRunParams(params, fs::path(out_dir) / "effective_config.txt");

  ltcf::OpeOutput result = ltcf::RunOpe(params, seq);

  ltcf::WriteBoxesFile(result.boxes, fs::path(out_dir) / (seq.name + ".txt"));
  WriteTraces(result.traces, fs::path(out_dir) / (seq.name + "_trace.jsonl"));
  if (overlay) WriteOverlays(seq, result.boxes, fs::path(out_dir) / (seq.name + "_overlay"));

  std::ofstream summary(fs::path(out_dir) / (seq.name + "_summary.txt"));
  summary.precision(10);
  summary << "frames = " << seq.FrameCount() << "\n"
          << "fps = " << result.fps << "\n"
          << "auc = " << result.metrics.auc << "\n"
          << "precision20 = " << result.metrics.precision_at_20 << "\n";

  std::cout << seq.name << ": " << seq.FrameCount() << " frames, " << result.fps
            << " fps, AUC " << result.metrics.auc << ", precision@20 "
            << result.metrics.precision_at_20 << "\n";
  return 0;
}

std::vector<fs::path> SequenceDirs(const fs::path &dataset_dir) {
  std::vector<fs::path> dirs;
  for (const auto &entry : fs::directory_iterator(dataset_dir)) {
    if (entry.is_directory() && fs::exists(entry.path() / "groundtruth.txt")) {
      dirs.push_back(entry.path());
    }
  }
  std::sort(dirs.begin(), dirs.end());
  if (dirs.empty()) throw std::runtime_error("no sequences under " + dataset_dir.string());
  return dirs;
}

int CmdEval(const std::string &results_dir, const std::string &dataset_dir,
            const std::string &out_dir) {
  std::vector<fs::path> variants;
  for (const auto &entry : fs::directory_iterator(results_dir)) {
    if (entry.is_directory()) variants.push_back(entry.path());
  }
  std::sort(variants.begin(), variants.end());
  if (variants.empty()) throw std::runtime_error("no result variants under " + results_dir);

  std::vector<fs::path> sequences = SequenceDirs(dataset_dir);
  fs::create_directories(out_dir);

  std::vector<ltcf::LabeledCurve> success_curves, precision_curves;
  std::ofstream table(fs::path(out_dir) / "summary.csv");
  table << "variant,auc,precision20\n";
  table.precision(10);

  for (const auto &variant_dir : variants) {
    std::string variant = variant_dir.filename().string();
    std::vector<double> overlaps, errors;
    std::vector<bool> present;
    std::vector<std::string> missing;

    for (const auto &seq_dir : sequences) {
      ltcf::Sequence seq = ltcf::LoadSequence(seq_dir);
      fs::path boxes_path = variant_dir / (seq.name + ".txt");
      if (!fs::exists(boxes_path)) {
        missing.push_back(seq.name);
        continue;
      }
      std::vector<cv::Rect2d> boxes = ltcf::ReadBoxesFile(boxes_path);
      if (static_cast<int>(boxes.size()) != seq.FrameCount()) {
        throw std::runtime_error(variant + "/" + seq.name + ": box count mismatch");
      }
      for (int f = 0; f < seq.FrameCount(); ++f) {
        bool has_target = !ltcf::Sequence::IsAbsent(seq.ground_truth[f]);
        present.push_back(has_target);
        if (has_target) {
          overlaps.push_back(ltcf::Overlap(boxes[f], seq.ground_truth[f]));
          errors.push_back(cv::norm(ltcf::RectCenter(boxes[f]) -
                                    ltcf::RectCenter(seq.ground_truth[f])));
        } else {
          overlaps.push_back(-1.0);
          errors.push_back(std::numeric_limits<double>::infinity());
        }
      }
    }
    if (!missing.empty()) {
      std::cerr << "ltcf eval: variant '" << variant << "' is missing results for:";
      for (const auto &name : missing) std::cerr << " " << name;
      std::cerr << "\n";
      return 1;
    }

    ltcf::EvalResult metrics = ltcf::ComputeMetrics(overlaps, errors, present);
    char success_label[128], precision_label[128];
    std::snprintf(success_label, sizeof(success_label), "%s (AUC %.3f)", variant.c_str(),
                  metrics.auc);
    std::snprintf(precision_label, sizeof(precision_label), "%s (P20 %.3f)", variant.c_str(),
                  metrics.precision_at_20);
    success_curves.push_back({success_label, metrics.success_curve});
    precision_curves.push_back({precision_label, metrics.precision_curve});
    table << variant << "," << metrics.auc << "," << metrics.precision_at_20 << "\n";
    std::cout << variant << ": AUC " << metrics.auc << ", precision@20 "
              << metrics.precision_at_20 << "\n";
  }

  ltcf::WriteCurvesCsv(success_curves, 0.01, fs::path(out_dir) / "success.csv");
  ltcf::WriteCurvesCsv(precision_curves, 1.0, fs::path(out_dir) / "precision.csv");
  ltcf::WriteSvgPlot(success_curves, "Success plot", 1.0, fs::path(out_dir) / "success.svg");
  ltcf::WriteSvgPlot(precision_curves, "Precision plot", 50.0,
                     fs::path(out_dir) / "precision.svg");
  return 0;
}

int CmdSynth(const std::string &script_path, const std::string &out_dir) {
  ltcf::SyntheticScript script = ltcf::LoadSyntheticScript(script_path);
  ltcf::RenderedSequence rendered = ltcf::GenerateSynthetic(script);
  ltcf::WriteSequenceDir(rendered, fs::path(out_dir) / script.name);
  std::cout << script.name << ": " << rendered.frames.size() << " frames -> "
            << (fs::path(out_dir) / script.name).string() << "\n";
  return 0;
}

int CmdCrop(const std::string &dataset_dir, double fraction, const std::string &out_dir) {
  for (const auto &seq_dir : SequenceDirs(dataset_dir)) {
    ltcf::Sequence seq = ltcf::LoadSequence(seq_dir);
    if (seq.FrameCount() == 0 || ltcf::Sequence::IsAbsent(seq.ground_truth.front())) {
      throw std::runtime_error(seq.name + ": no initial target to center the crop on");
    }
    cv::Mat first = cv::imread(seq.image_paths.front(), cv::IMREAD_COLOR);
    if (first.empty()) throw std::runtime_error("cannot read " + seq.image_paths.front());

    cv::Rect window = ltcf::ComputeCropWindow(
        first.size(), ltcf::RectCenter(seq.ground_truth.front()), fraction);

    fs::path dst = fs::path(out_dir) / seq.name;
    fs::create_directories(dst / "img");
    std::vector<cv::Rect2d> remapped;
    for (int f = 0; f < seq.FrameCount(); ++f) {
      cv::Mat image = cv::imread(seq.image_paths[f], cv::IMREAD_COLOR);
      if (image.empty()) throw std::runtime_error("cannot read " + seq.image_paths[f]);
      char name[32];
      std::snprintf(name, sizeof(name), "%08d.png", f + 1);
      cv::imwrite((dst / "img" / name).string(), image(window));
      remapped.push_back(ltcf::RemapToCrop(seq.ground_truth[f], window));
    }
    ltcf::WriteGroundTruth(remapped, dst / "groundtruth.txt");
    std::cout << seq.name << ": cropped to " << window.width << "x" << window.height << " at ("
              << window.x << "," << window.y << ")\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char **argv) try {
  cv::setNumThreads(0);  // keep tracking single-threaded and deterministic

  CLI::App app{"ltcf - long-term correlation-filter tracker"};
  app.require_subcommand(1);

  std::string seq_dir, config_path, out_dir, results_dir, dataset_dir, script_path;
  bool overlay = false;
  double fraction = 0.4;

  auto *track = app.add_subcommand("track", "run the tracker over one sequence");
  track->add_option("--seq", seq_dir, "sequence directory")->required();
  track->add_option("--config", config_path, "key=value config file");
  track->add_option("--out", out_dir, "output directory")->required();
  track->add_flag("--overlay", overlay, "write annotated frames");

  auto *eval = app.add_subcommand("eval", "score stored results against a dataset");
  eval->add_option("--results", results_dir, "per-variant results directory")->required();
  eval->add_option("--dataset", dataset_dir, "dataset directory")->required();
  eval->add_option("--out", out_dir, "output directory")->required();

  auto *synth = app.add_subcommand("synth", "render a synthetic sequence");
  synth->add_option("--script", script_path, "JSON script")->required();
  synth->add_option("--out", out_dir, "output dataset directory")->required();

  auto *crop = app.add_subcommand("crop", "crop a dataset around each initial target");
  crop->add_option("--dataset", dataset_dir, "dataset directory")->required();
  crop->add_option("--fraction", fraction, "per-axis crop fraction in (0,1]");
  crop->add_option("--out", out_dir, "output dataset directory")->required();

  CLI11_PARSE(app, argc, argv);

  if (track->parsed()) return CmdTrack(seq_dir, config_path, out_dir, overlay);
  if (eval->parsed()) return CmdEval(results_dir, dataset_dir, out_dir);
  if (synth->parsed()) return CmdSynth(script_path, out_dir);
  if (crop->parsed()) return CmdCrop(dataset_dir, fraction, out_dir);
  return 0;
} catch (const std::exception &e) {
  std::cerr << "ltcf: " << e.what() << "\n";
  return 1;
}
