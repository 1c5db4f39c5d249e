#include "ltcf/filter_learning.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "ltcf/correlation.hpp"
#include "ltcf/fft.hpp"

namespace ltcf {

DesiredResponse MakeDesiredResponse(const cv::Size &grid, double target_area_cells,
                                    double sigma_factor) {
  DesiredResponse out;
  out.sigma = sigma_factor * std::sqrt(std::max(target_area_cells, 1.0));
  out.g = cv::Mat(grid, CV_64FC1);
  const double inv_two_sigma_sq = 1.0 / (2.0 * out.sigma * out.sigma);
  for (int y = 0; y < grid.height; ++y) {
    double dy = std::min(y, grid.height - y);  // circular distance to row 0
    double *row = out.g.ptr<double>(y);
    for (int x = 0; x < grid.width; ++x) {
      double dx = std::min(x, grid.width - x);
      row[x] = std::max(std::exp(-(dx * dx + dy * dy) * inv_two_sigma_sq),
                        std::numeric_limits<double>::min());
    }
  }
  return out;
}

namespace {

double SquaredNorm(const cv::Mat &complex_mat) {
  cv::Mat planes[2];
  cv::split(complex_mat, planes);
  return planes[0].dot(planes[0]) + planes[1].dot(planes[1]);
}

double RealInnerProduct(const cv::Mat &a, const cv::Mat &b) {
  // Re(a^H b) over complex planes
  cv::Mat pa[2], pb[2];
  cv::split(a, pa);
  cv::split(b, pb);
  return pa[0].dot(pb[0]) + pa[1].dot(pb[1]);
}

cv::Mat Conj(const cv::Mat &complex_mat) {
  cv::Mat planes[2];
  cv::split(complex_mat, planes);
  planes[1] = -planes[1];
  cv::Mat out;
  cv::merge(planes, 2, out);
  return out;
}

// One channel of the constrained learning problem. Minimizes
// || conj(fhat) .* hc_hat - conj(ghat) ||^2 + lambda/2 || m .* h ||^2
// subject to hc = m .* h via ADMM on the augmented Lagrangian.
cv::Mat LearnChannel(const cv::Mat &feature, const cv::Mat &mask, const cv::Mat &ghat,
                     const AdmmConfig &cfg, AdmmTrace *trace) {
  const double D = static_cast<double>(feature.total());
  const cv::Mat fhat = Fft2(feature);
  const cv::Mat sxy = SpectrumMulConj(fhat, ghat);  // fhat .* conj(ghat)
  const cv::Mat sxx = SpectrumMulConj(fhat, fhat);  // |fhat|^2 (real part)

  cv::Mat sxx_real;
  cv::extractChannel(sxx, sxx_real, 0);

  auto complex_divide_by_real = [](const cv::Mat &num, const cv::Mat &den_real) {
    cv::Mat planes[2];
    cv::split(num, planes);
    cv::divide(planes[0], den_real, planes[0]);
    cv::divide(planes[1], den_real, planes[1]);
    cv::Mat out;
    cv::merge(planes, 2, out);
    return out;
  };
  auto real_times_complex = [](const cv::Mat &re, const cv::Mat &cplx) {
    cv::Mat planes[2];
    cv::split(cplx, planes);
    planes[0] = planes[0].mul(re);
    planes[1] = planes[1].mul(re);
    cv::Mat out;
    cv::merge(planes, 2, out);
    return out;
  };

  // Warm start: masked unconstrained ridge filter, and the multiplier that
  // makes the data block stationary there. The zero multiplier makes the
  // first iterations overshoot and breaks the residual decrease.
  cv::Mat h = Ifft2Real(complex_divide_by_real(sxy, sxx_real + cfg.lambda)).mul(mask);
  cv::Mat mh_hat = Fft2(h);
  cv::Mat lhat = sxy - real_times_complex(sxx_real, mh_hat);

  double mu = cfg.mu_init;
  cv::Mat hc_hat;
  for (int iter = 0; iter < cfg.iterations; ++iter) {
    hc_hat = complex_divide_by_real(sxy + mu * mh_hat - lhat, sxx_real + mu);
    h = Ifft2Real(lhat + mu * hc_hat).mul(mask) / (cfg.lambda / (2.0 * D) + mu);
    mh_hat = Fft2(h);
    cv::Mat residual = hc_hat - mh_hat;
    lhat += mu * residual;

    if (trace) {
      // Data term || diag(fhat) conj(hc) - ghat ||^2 through its conjugate
      // mirror || conj(fhat) .* hc - conj(ghat) ||^2.
      double data = SquaredNorm(SpectrumMulConj(hc_hat, fhat) - Conj(ghat));
      double reg = 0.5 * cfg.lambda * h.dot(h);
      double lagr = data + reg + 2.0 * RealInnerProduct(lhat, residual) +
                    mu * SquaredNorm(residual);
      trace->lagrangian.push_back(lagr);
      trace->residual_norm.push_back(std::sqrt(SquaredNorm(residual)));
    }
    mu = std::min(cfg.mu_scale * mu, cfg.mu_max);
  }
  return h;
}

}  // namespace

std::vector<double> ComputeWeights(const std::vector<cv::Mat> &filter_channels,
                                   const FeatureStack &features) {
  if (filter_channels.size() != features.channels.size()) {
    throw std::invalid_argument("ComputeWeights: channel count mismatch");
  }
  std::vector<double> weights(filter_channels.size());
  double sum = 0.0;
  const std::vector<double> unit{1.0};
  for (size_t d = 0; d < filter_channels.size(); ++d) {
    ResponseMap r = CircularCorrelate(std::vector<cv::Mat>{features.channels[d]},
                                      std::vector<cv::Mat>{filter_channels[d]}, unit);
    weights[d] = std::max(r.peak_value, 1e-6);
    sum += weights[d];
  }
  for (double &w : weights) w /= sum;
  return weights;
}

ConstrainedFilter LearnFilter(const FeatureStack &features, const BinaryMask &mask,
                              const DesiredResponse &desired, const AdmmConfig &config,
                              std::vector<AdmmTrace> *traces) {
  if (features.channels.empty()) throw std::invalid_argument("LearnFilter: empty stack");
  const cv::Size plane = features.PlaneSize();
  if (mask.cells.size() != plane || desired.g.size() != plane) {
    throw std::invalid_argument("LearnFilter: size mismatch between features, mask and output");
  }

  const cv::Mat ghat = Fft2(desired.g);
  ConstrainedFilter filter;
  filter.template_size = plane;
  filter.mask_used = mask;
  filter.channels.resize(features.channels.size());
  if (traces) traces->assign(features.channels.size(), AdmmTrace{});
  for (size_t d = 0; d < features.channels.size(); ++d) {
    filter.channels[d] = LearnChannel(features.channels[d], mask.cells, ghat, config,
                                      traces ? &(*traces)[d] : nullptr);
  }
  filter.weights = ComputeWeights(filter.channels, features);
  return filter;
}

ConstrainedFilter UpdateFilter(const ConstrainedFilter &current, const ConstrainedFilter &fresh,
                               double eta) {
  if (current.channels.size() != fresh.channels.size()) {
    throw std::invalid_argument("UpdateFilter: channel count mismatch");
  }
  if (eta < 0.0 || eta > 1.0) throw std::invalid_argument("UpdateFilter: eta outside [0,1]");
  if (eta == 0.0) return current;
  if (eta == 1.0) return fresh;

  ConstrainedFilter out;
  out.template_size = fresh.template_size;
  out.mask_used = fresh.mask_used;
  out.channels.resize(current.channels.size());
  out.weights.resize(current.weights.size());
  double sum = 0.0;
  for (size_t d = 0; d < current.channels.size(); ++d) {
    if (current.channels[d].size() != fresh.channels[d].size()) {
      throw std::invalid_argument("UpdateFilter: channel shape mismatch");
    }
    out.channels[d] = (1.0 - eta) * current.channels[d] + eta * fresh.channels[d];
    out.weights[d] = (1.0 - eta) * current.weights[d] + eta * fresh.weights[d];
    sum += out.weights[d];
  }
  for (double &w : out.weights) w /= sum;
  return out;
}

}  // namespace ltcf
