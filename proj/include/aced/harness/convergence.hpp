#ifndef ACED_HARNESS_CONVERGENCE_HPP_
#define ACED_HARNESS_CONVERGENCE_HPP_

#include <cstdint>
#include <deque>
#include <vector>

namespace aced {

// "Stably above the threshold": the rolling success rate over the last
// `window` episodes must hold at or above `threshold` for `checks`
// consecutive evaluations of the rule, one per appended episode batch.
// Monotone: raising any success value never flips the verdict to false.
bool detect_convergence(const std::vector<std::uint8_t>& episode_successes, int window = 50,
                        int checks = 5, double threshold = 0.9);

// Incremental form used by the training loop: feed every episode, poll once
// per iteration.
class ConvergenceTracker {
 public:
  ConvergenceTracker(int window, int checks, double threshold)
      : window_(window), checks_(checks), threshold_(threshold) {}

  void add_episode(bool success) {
    recent_.push_back(success ? 1 : 0);
    if (static_cast<int>(recent_.size()) > window_) {
      sum_ -= recent_.front();
      recent_.pop_front();
    }
    if (success) ++sum_;
    ++total_;
  }

  // One check; true once `checks` consecutive checks passed.
  bool check() {
    const bool pass = total_ >= window_ &&
                      static_cast<double>(sum_) / window_ >= threshold_;
    streak_ = pass ? streak_ + 1 : 0;
    return streak_ >= checks_;
  }

  double rolling_rate() const {
    return recent_.empty() ? 0.0 : static_cast<double>(sum_) / recent_.size();
  }
  long episodes_seen() const { return total_; }

 private:
  int window_, checks_;
  double threshold_;
  std::deque<std::uint8_t> recent_;
  long sum_ = 0;
  long total_ = 0;
  int streak_ = 0;
};

}  // namespace aced

#endif  // ACED_HARNESS_CONVERGENCE_HPP_
