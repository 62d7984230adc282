#ifndef ACED_HARNESS_METRICS_HPP_
#define ACED_HARNESS_METRICS_HPP_

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "aced/types.hpp"

namespace aced {

// One training-iteration summary. wall_time_s is informational and is *not*
// written to the metrics CSV so that equal-seed runs produce byte-identical
// files; it appears in the run summary instead.
struct MetricsRow {
  long iteration = 0;
  long env_steps = 0;  // cumulative, non-decreasing
  int episodes = 0;
  double mean_return = 0.0;
  double success_rate = 0.0;  // rolling, last conv_window episodes
  double mean_curriculum = 0.0;
  double frac_normal = 0.0;
  double wall_time_s = 0.0;
};

inline constexpr const char* kMetricsHeader =
    "iteration,env_steps,episodes,mean_return,success_rate,mean_curriculum,frac_normal";

class MetricsWriter {
 public:
  explicit MetricsWriter(const std::filesystem::path& path);
  void write(const MetricsRow& row);

 private:
  std::ofstream out_;
};

// Per-worker curriculum trace (rows on change plus the initial state).
class CurriculumTraceWriter {
 public:
  explicit CurriculumTraceWriter(const std::filesystem::path& path);
  void write(int worker, long iteration, int curriculum, bool normal_mode);

 private:
  std::ofstream out_;
};

struct ParsedMetrics {
  std::vector<MetricsRow> rows;
};

// Strict CSV reader for files produced by MetricsWriter.
ParsedMetrics read_metrics(const std::filesystem::path& path);

std::string format_double(double v);

}  // namespace aced

#endif  // ACED_HARNESS_METRICS_HPP_
