#ifndef LTCF_CONFIG_HPP_
#define LTCF_CONFIG_HPP_

#include <filesystem>
#include <string>
#include <vector>

namespace ltcf {

// Detector composition switches used by the ablation study: which bank
// slots the detector cycles through and whether it searches one size
// scale or all of them.
enum class Variant {
  kFull,          // all temporal-scale filters, all size scales
  kD0S1,          // initialization filter only, single scale
  kD0SM,          // initialization filter only, multiple scales
  kDstS1,         // most recent short-term filter only, single scale
  kDstSM,         // most recent short-term filter only, multiple scales
  kShortTermOnly  // detector disabled
};

std::string VariantName(Variant v);
Variant VariantFromName(const std::string &name);

// Every tunable of the tracker with its default value. The defaults are
// the working point of the whole system; none of them require per-
// sequence tuning.
struct RunParams {
  double eta = 0.02;        // model learning rate
  double lambda = 0.01;     // learning regularization
  double tau_q = 2.7;       // uncertainty threshold
  int n_q = 100;            // quality history window
  double alpha_s = 1.05;    // motion prior growth rate
  std::vector<int> detector_periods = {0, 250, 50, 10, 1};  // 0 = never updated
  std::vector<double> detector_scales = {0.5, 0.7, 1.0, 1.2, 1.5, 2.0};
  Variant variant = Variant::kFull;

  int cell_size = 4;
  double padding = 2.0;          // search region = target * (1 + padding)
  int max_template_side = 100;   // template cap in pixels
  double sigma_factor = 1.0 / 16.0;
  int psr_radius = 5;

  bool use_hog = true;
  bool use_colornames = true;
  bool use_gray = true;
  std::string colornames_table;  // optional path; empty = feature disabled with a warning

  int admm_iterations = 4;
  double mu_init = 5.0;
  double mu_scale = 3.0;
  double mu_max = 20.0;

  int num_scales = 33;
  double scale_step = 1.02;
  double scale_min = 0.2;
  double scale_max = 5.0;
};

// Flat "key = value" file, '#' comments, every key optional. Unknown keys
// are an error.
RunParams LoadRunParams(const std::filesystem::path &path);
void ApplyConfigLine(RunParams &params, const std::string &line, int line_number);
std::string SerializeRunParams(const RunParams &params);
void SaveRunParams(const RunParams &params, const std::filesystem::path &path);

}  // namespace ltcf

#endif  // LTCF_CONFIG_HPP_
