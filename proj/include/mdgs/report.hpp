#ifndef MDGS_REPORT_HPP
#define MDGS_REPORT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace mdgs {

// A finished experiment: config echo, summary statistics, and the
// per-sample table. Serialization is bitwise-reproducible for a fixed
// config and seed; wall-clock time is console-only metadata and never
// written to the report files.
struct ExperimentReport {
  std::string name;
  std::string lattice_spec;
  std::uint64_t seed = 0;
  nlohmann::ordered_json config;   // full echo minus execution knobs (--jobs, --out)
  nlohmann::ordered_json summary;
  long tie_events = 0;
  std::size_t samples = 0;
  std::vector<std::string> csv_header;
  std::vector<std::string> csv_rows;  // preformatted, one line per record
  double wall_seconds = 0.0;          // not serialized

  std::string file_stem() const;
  std::string json_text() const;
  std::string csv_text() const;
  // Writes <stem>.json and <stem>.csv under `outdir`; returns the stem path.
  std::string write_files(const std::string& outdir) const;
  // One-screen console summary.
  std::string console_summary() const;
};

// "%.17g" formatting used everywhere a double lands in a report file.
std::string format_double(double x);

}  // namespace mdgs

#endif
