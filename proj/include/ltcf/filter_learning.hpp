#ifndef LTCF_FILTER_LEARNING_HPP_
#define LTCF_FILTER_LEARNING_HPP_

#include <vector>

#include <opencv2/core.hpp>

#include "ltcf/features.hpp"
#include "ltcf/segmentation.hpp"

namespace ltcf {

// Per-channel correlation filters constrained to the mask support, plus
// the reliability weights used when fusing channel responses. Every
// coefficient outside the mask is exactly zero.
struct ConstrainedFilter {
  std::vector<cv::Mat> channels;  // CV_64FC1, mask-sized
  std::vector<double> weights;    // nonnegative, sum to 1
  cv::Size template_size;         // feature-grid size the filter was learned on
  BinaryMask mask_used;

  bool Empty() const { return channels.empty(); }
};

struct AdmmConfig {
  double lambda = 0.01;
  double mu_init = 5.0;
  double mu_scale = 3.0;
  double mu_max = 20.0;
  int iterations = 4;
};

// Desired correlation output: a unit-peak Gaussian circularly shifted so
// its maximum sits at (0,0). sigma = sigma_factor * sqrt(target area in
// cells). Values are floored at the smallest normal double so the map
// stays strictly positive.
struct DesiredResponse {
  cv::Mat g;  // CV_64FC1
  double sigma = 1.0;
};

DesiredResponse MakeDesiredResponse(const cv::Size &grid, double target_area_cells,
                                    double sigma_factor = 1.0 / 16.0);

// Optional per-iteration diagnostics of the constrained learning loop.
struct AdmmTrace {
  std::vector<double> lagrangian;     // augmented Lagrangian after each iteration
  std::vector<double> residual_norm;  // || hc_hat - F(m .* h) || after each iteration
};

// Learns one mask-constrained filter per feature channel by ADMM over the
// split (h_c, h): a Fourier-domain ridge step for h_c, a masked spatial
// shrinkage step for h, and a multiplier update, with the mu ladder
// mu <- min(mu_scale * mu, mu_max). The primal starts from the masked
// unconstrained ridge filter and the multiplier from its stationarity
// residual. Channel weights come from ComputeWeights.
ConstrainedFilter LearnFilter(const FeatureStack &features, const BinaryMask &mask,
                              const DesiredResponse &desired, const AdmmConfig &config,
                              std::vector<AdmmTrace> *traces = nullptr);

// w_d = max over the training region of (f_d corr h_d), floored at 1e-6
// and normalized to sum 1.
std::vector<double> ComputeWeights(const std::vector<cv::Mat> &filter_channels,
                                   const FeatureStack &features);

// (1 - eta) * current + eta * fresh on every channel and weight, weights
// renormalized. eta == 0 and eta == 1 return the inputs unchanged.
ConstrainedFilter UpdateFilter(const ConstrainedFilter &current, const ConstrainedFilter &fresh,
                               double eta);

}  // namespace ltcf

#endif  // LTCF_FILTER_LEARNING_HPP_
