#include "aced/harness/plot.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <regex>
#include <sstream>

#include "aced/harness/metrics.hpp"
#include "aced/types.hpp"

namespace aced {

double t_critical_90(int df) {
  // Two-sided 90%: upper 5% point of Student's t.
  static const double table[] = {6.3138, 2.9200, 2.3534, 2.1318, 2.0150, 1.9432, 1.8946,
                                 1.8595, 1.8331, 1.8125, 1.7959, 1.7823, 1.7709, 1.7613,
                                 1.7531, 1.7459, 1.7396, 1.7341, 1.7291, 1.7247, 1.7207,
                                 1.7171, 1.7139, 1.7109, 1.7081, 1.7056, 1.7033, 1.7011,
                                 1.6991, 1.6973};
  if (df < 1) throw ContractError("t_critical_90: df must be >= 1");
  if (df <= 30) return table[df - 1];
  return 1.6449;
}

GroupStat convergence_stat(const std::string& label, const std::vector<double>& steps) {
  GroupStat g;
  g.label = label;
  g.converged = static_cast<int>(steps.size());
  if (steps.empty()) return g;
  const double n = static_cast<double>(steps.size());
  double mean = 0.0;
  for (double s : steps) mean += s;
  mean /= n;
  g.mean_steps = mean;
  if (steps.size() == 1) {
    g.ci_lo = g.ci_hi = mean;
    return g;
  }
  double var = 0.0;
  for (double s : steps) var += (s - mean) * (s - mean);
  var /= (n - 1.0);
  const double half = t_critical_90(static_cast<int>(n) - 1) * std::sqrt(var / n);
  g.ci_lo = mean - half;
  g.ci_hi = mean + half;
  return g;
}

std::string run_group(const std::filesystem::path& metrics_file) {
  std::string stem = metrics_file.stem().string();
  static const std::regex seed_suffix("([-_](s|seed)[0-9]+)$");
  return std::regex_replace(stem, seed_suffix, "");
}

namespace {

struct Curve {
  std::string label;
  std::vector<double> x;  // env steps
  std::vector<double> y;  // success rate
  long convergence_steps = -1;
};

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                          "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string svg_header(int w, int h) {
  std::ostringstream ss;
  ss << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
     << "\" viewBox=\"0 0 " << w << " " << h << "\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  return ss.str();
}

std::string nice_steps(double v) {
  std::ostringstream ss;
  if (v >= 1e6) ss << v / 1e6 << "M";
  else if (v >= 1e3) ss << v / 1e3 << "k";
  else ss << v;
  return ss.str();
}

void write_curves_svg(const std::vector<Curve>& curves, const std::filesystem::path& path) {
  const int W = 860, H = 520, ml = 70, mr = 180, mt = 30, mb = 60;
  const int pw = W - ml - mr, ph = H - mt - mb;

  double xmax = 1.0;
  for (const Curve& c : curves)
    if (!c.x.empty()) xmax = std::max(xmax, c.x.back());

  const auto px = [&](double x) { return ml + x / xmax * pw; };
  const auto py = [&](double y) { return mt + (1.0 - y) * ph; };

  std::ofstream out(path);
  if (!out) throw std::runtime_error("emit_plots: cannot open " + path.string());
  out << svg_header(W, H);

  // axes
  out << "<line x1=\"" << ml << "\" y1=\"" << mt + ph << "\" x2=\"" << ml + pw << "\" y2=\""
      << mt + ph << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << mt + ph
      << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double xv = xmax * i / 5.0, yv = i / 5.0;
    out << "<line x1=\"" << px(xv) << "\" y1=\"" << mt + ph << "\" x2=\"" << px(xv) << "\" y2=\""
        << mt + ph + 5 << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << px(xv) << "\" y=\"" << mt + ph + 20
        << "\" font-size=\"12\" text-anchor=\"middle\">" << nice_steps(xv) << "</text>\n";
    out << "<line x1=\"" << ml - 5 << "\" y1=\"" << py(yv) << "\" x2=\"" << ml << "\" y2=\""
        << py(yv) << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << ml - 10 << "\" y=\"" << py(yv) + 4
        << "\" font-size=\"12\" text-anchor=\"end\">" << yv << "</text>\n";
  }
  out << "<text x=\"" << ml + pw / 2 << "\" y=\"" << H - 15
      << "\" font-size=\"14\" text-anchor=\"middle\">environment steps</text>\n";
  out << "<text x=\"18\" y=\"" << mt + ph / 2
      << "\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 18 " << mt + ph / 2
      << ")\">success rate</text>\n";

  for (std::size_t ci = 0; ci < curves.size(); ++ci) {
    const Curve& c = curves[ci];
    const char* color = kPalette[ci % (sizeof(kPalette) / sizeof(kPalette[0]))];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < c.x.size(); ++i) out << px(c.x[i]) << ',' << py(c.y[i]) << ' ';
    out << "\"/>\n";
    const int ly = mt + 18 + 18 * static_cast<int>(ci);
    out << "<line x1=\"" << ml + pw + 10 << "\" y1=\"" << ly - 4 << "\" x2=\"" << ml + pw + 34
        << "\" y2=\"" << ly - 4 << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n"
        << "<text x=\"" << ml + pw + 40 << "\" y=\"" << ly
        << "\" font-size=\"12\">" << c.label << "</text>\n";
  }
  out << "</svg>\n";
}

void write_bars_svg(const std::vector<GroupStat>& groups, const std::filesystem::path& path) {
  const int W = 860, H = 520, ml = 90, mr = 30, mt = 30, mb = 90;
  const int pw = W - ml - mr, ph = H - mt - mb;

  double ymax = 1.0;
  for (const GroupStat& g : groups) ymax = std::max(ymax, g.ci_hi);
  ymax *= 1.1;

  std::ofstream out(path);
  if (!out) throw std::runtime_error("emit_plots: cannot open " + path.string());
  out << svg_header(W, H);
  out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << mt + ph
      << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << ml << "\" y1=\"" << mt + ph << "\" x2=\"" << ml + pw << "\" y2=\""
      << mt + ph << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double yv = ymax * i / 5.0;
    const double y = mt + ph - yv / ymax * ph;
    out << "<line x1=\"" << ml - 5 << "\" y1=\"" << y << "\" x2=\"" << ml << "\" y2=\"" << y
        << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << ml - 10 << "\" y=\"" << y + 4
        << "\" font-size=\"12\" text-anchor=\"end\">" << nice_steps(yv) << "</text>\n";
  }
  out << "<text x=\"20\" y=\"" << mt + ph / 2
      << "\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 20 " << mt + ph / 2
      << ")\">env steps to convergence</text>\n";

  const int n = static_cast<int>(groups.size());
  const double slot = static_cast<double>(pw) / std::max(1, n);
  for (int i = 0; i < n; ++i) {
    const GroupStat& g = groups[i];
    const double cx = ml + slot * (i + 0.5);
    const double bw = std::min(80.0, slot * 0.6);
    const char* color = kPalette[i % (sizeof(kPalette) / sizeof(kPalette[0]))];
    if (g.converged > 0) {
      const double ytop = mt + ph - g.mean_steps / ymax * ph;
      out << "<rect x=\"" << cx - bw / 2 << "\" y=\"" << ytop << "\" width=\"" << bw
          << "\" height=\"" << mt + ph - ytop << "\" fill=\"" << color << "\" opacity=\"0.75\"/>\n";
      const double ylo = mt + ph - g.ci_lo / ymax * ph;
      const double yhi = mt + ph - g.ci_hi / ymax * ph;
      out << "<line x1=\"" << cx << "\" y1=\"" << ylo << "\" x2=\"" << cx << "\" y2=\"" << yhi
          << "\" stroke=\"black\"/>\n"
          << "<line x1=\"" << cx - 8 << "\" y1=\"" << ylo << "\" x2=\"" << cx + 8 << "\" y2=\""
          << ylo << "\" stroke=\"black\"/>\n"
          << "<line x1=\"" << cx - 8 << "\" y1=\"" << yhi << "\" x2=\"" << cx + 8 << "\" y2=\""
          << yhi << "\" stroke=\"black\"/>\n";
    } else {
      out << "<text x=\"" << cx << "\" y=\"" << mt + ph - 10
          << "\" font-size=\"12\" text-anchor=\"middle\">no convergence</text>\n";
    }
    out << "<text x=\"" << cx << "\" y=\"" << mt + ph + 20
        << "\" font-size=\"12\" text-anchor=\"middle\">" << g.label << "</text>\n"
        << "<text x=\"" << cx << "\" y=\"" << mt + ph + 36
        << "\" font-size=\"11\" text-anchor=\"middle\">" << g.converged << "/" << g.runs
        << " converged</text>\n";
  }
  out << "</svg>\n";
}

long convergence_steps_of(const ParsedMetrics& m, double threshold, int sustain) {
  int streak = 0;
  for (const MetricsRow& row : m.rows) {
    streak = row.success_rate >= threshold ? streak + 1 : 0;
    if (streak >= sustain) return row.env_steps;
  }
  return -1;
}

}  // namespace

void emit_plots(const std::vector<std::filesystem::path>& metrics_files,
                const std::filesystem::path& out_dir, double success_threshold,
                int sustain_checks) {
  if (metrics_files.empty()) throw std::runtime_error("emit_plots: no metrics files given");
  std::filesystem::create_directories(out_dir);

  std::vector<Curve> curves;
  std::map<std::string, std::pair<int, std::vector<double>>> groups;  // label -> (runs, steps)
  for (const auto& file : metrics_files) {
    ParsedMetrics m;
    try {
      m = read_metrics(file);
    } catch (const std::exception& e) {
      std::cerr << "emit_plots: skipping " << file << ": " << e.what() << "\n";
      continue;
    }
    Curve c;
    c.label = file.stem().string();
    for (const MetricsRow& row : m.rows) {
      c.x.push_back(static_cast<double>(row.env_steps));
      c.y.push_back(row.success_rate);
    }
    c.convergence_steps = convergence_steps_of(m, success_threshold, sustain_checks);
    auto& g = groups[run_group(file)];
    ++g.first;
    if (c.convergence_steps >= 0) g.second.push_back(static_cast<double>(c.convergence_steps));
    curves.push_back(std::move(c));
  }
  if (curves.empty()) throw std::runtime_error("emit_plots: no readable metrics files");

  write_curves_svg(curves, out_dir / "curves.svg");

  std::vector<GroupStat> stats;
  for (const auto& [label, data] : groups) {
    GroupStat g = convergence_stat(label, data.second);
    g.runs = data.first;
    stats.push_back(std::move(g));
  }
  write_bars_svg(stats, out_dir / "convergence_bars.svg");

  std::ofstream summary(out_dir / "summary.txt");
  summary << "group  runs  converged  mean_steps  ci90_lo  ci90_hi\n";
  for (const GroupStat& g : stats)
    summary << g.label << "  " << g.runs << "  " << g.converged << "  " << g.mean_steps << "  "
            << g.ci_lo << "  " << g.ci_hi << "\n";
}

}  // namespace aced
