#ifndef ACED_HARNESS_PLOT_HPP_
#define ACED_HARNESS_PLOT_HPP_

#include <filesystem>
#include <string>
#include <vector>

namespace aced {

struct GroupStat {
  std::string label;
  int runs = 0;         // metrics files in the group
  int converged = 0;    // runs that reached the convergence rule
  double mean_steps = 0.0;  // over converged runs
  double ci_lo = 0.0;       // 90% t-interval
  double ci_hi = 0.0;
};

// Mean and 90% confidence t-interval of the per-run convergence env steps.
GroupStat convergence_stat(const std::string& label, const std::vector<double>& steps);

// Two-sided 90% Student-t critical value (t_{0.95, df}).
double t_critical_90(int df);

// Run label for grouping seeds: the file stem with a trailing -s<k>/_s<k>/
// -seed<k>/_seed<k> suffix stripped.
std::string run_group(const std::filesystem::path& metrics_file);

// Renders curves.svg (success rate vs env steps, one polyline per file),
// convergence_bars.svg (per-group mean convergence steps with 90% CI
// whiskers) and summary.txt under out_dir. Malformed files are skipped with
// a warning; an empty file list is an error.
void emit_plots(const std::vector<std::filesystem::path>& metrics_files,
                const std::filesystem::path& out_dir, double success_threshold = 0.9,
                int sustain_checks = 5);

}  // namespace aced

#endif  // ACED_HARNESS_PLOT_HPP_
