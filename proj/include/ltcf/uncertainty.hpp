#ifndef LTCF_UNCERTAINTY_HPP_
#define LTCF_UNCERTAINTY_HPP_

#include <deque>

#include "ltcf/correlation.hpp"

namespace ltcf {

struct UncertaintyConfig {
  double tau_q = 2.7;          // uncertainty threshold on mean/current quality
  int n_q = 100;               // history window of confidently tracked frames
  int psr_exclusion_radius = 5;
};

// Localization quality of a correlation response: PSR times the peak
// value; 0 when the peak is negative.
double Quality(const ResponseMap &response);

// Ring buffer of quality values from confidently tracked frames.
class QualityHistory {
 public:
  explicit QualityHistory(int capacity) : capacity_(capacity) {}

  void RecordConfident(double quality);

  bool Empty() const { return values_.empty(); }
  double Mean() const { return mean_; }
  size_t Size() const { return values_.size(); }

 private:
  int capacity_;
  std::deque<double> values_;
  double mean_ = 0.0;
};

// Tracking is uncertain when mean(history) / q_t exceeds tau_q. An empty
// history (first frame) is confident by definition; a vanishing quality
// on a non-empty history is always uncertain.
bool IsUncertain(double quality, const QualityHistory &history, const UncertaintyConfig &config);

}  // namespace ltcf

#endif  // LTCF_UNCERTAINTY_HPP_
