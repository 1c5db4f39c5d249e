#include "ltcf/uncertainty.hpp"

#include <numeric>

namespace ltcf {

double Quality(const ResponseMap &response) {
  if (response.peak_value < 0.0) return 0.0;
  return response.psr * response.peak_value;
}

void QualityHistory::RecordConfident(double quality) {
  values_.push_back(quality);
  if (static_cast<int>(values_.size()) > capacity_) values_.pop_front();
  mean_ = std::accumulate(values_.begin(), values_.end(), 0.0) / values_.size();
}

bool IsUncertain(double quality, const QualityHistory &history, const UncertaintyConfig &config) {
  if (history.Empty()) return false;
  if (quality <= 1e-12) return true;
  return history.Mean() / quality > config.tau_q;
}

}  // namespace ltcf
