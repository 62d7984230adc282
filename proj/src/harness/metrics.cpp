#include "aced/harness/metrics.hpp"

#include <cinttypes>
#include <cstdio>
#include <sstream>

namespace aced {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

MetricsWriter::MetricsWriter(const std::filesystem::path& path) : out_(path) {
  if (!out_) throw std::runtime_error("MetricsWriter: cannot open " + path.string());
  out_ << kMetricsHeader << "\n";
}

void MetricsWriter::write(const MetricsRow& row) {
  out_ << row.iteration << ',' << row.env_steps << ',' << row.episodes << ','
       << format_double(row.mean_return) << ',' << format_double(row.success_rate) << ','
       << format_double(row.mean_curriculum) << ',' << format_double(row.frac_normal) << "\n";
  out_.flush();
}

CurriculumTraceWriter::CurriculumTraceWriter(const std::filesystem::path& path) : out_(path) {
  if (!out_) throw std::runtime_error("CurriculumTraceWriter: cannot open " + path.string());
  out_ << "worker,iteration,curriculum,mode\n";
}

void CurriculumTraceWriter::write(int worker, long iteration, int curriculum, bool normal_mode) {
  out_ << worker << ',' << iteration << ',' << curriculum << ','
       << (normal_mode ? "normal" : "curriculum") << "\n";
}

ParsedMetrics read_metrics(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_metrics: cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty metrics file", 1);
  if (line != kMetricsHeader) throw ParseError("unexpected metrics header", 1);

  ParsedMetrics out;
  long line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ss(line);
    MetricsRow row;
    char c;
    if (!(ss >> row.iteration >> c >> row.env_steps >> c >> row.episodes >> c >>
          row.mean_return >> c >> row.success_rate >> c >> row.mean_curriculum >> c >>
          row.frac_normal))
      throw ParseError("malformed metrics row", line_no);
    out.rows.push_back(row);
  }
  return out;
}

}  // namespace aced
