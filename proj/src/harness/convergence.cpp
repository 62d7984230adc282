#include "aced/harness/convergence.hpp"

#include <stdexcept>

namespace aced {

bool detect_convergence(const std::vector<std::uint8_t>& episode_successes, int window,
                        int checks, double threshold) {
  if (episode_successes.empty()) throw std::invalid_argument("detect_convergence: empty history");
  ConvergenceTracker tracker(window, checks, threshold);
  bool converged = false;
  for (std::uint8_t s : episode_successes) {
    tracker.add_episode(s != 0);
    converged = tracker.check();
  }
  return converged;
}

}  // namespace aced
