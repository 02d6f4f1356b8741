#include "mdgs/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mdgs {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string ExperimentReport::file_stem() const {
  return name + "_" + lattice_spec + "_seed" + std::to_string(seed);
}

std::string ExperimentReport::json_text() const {
  nlohmann::ordered_json doc;
  doc["experiment"] = name;
  doc["lattice"] = lattice_spec;
  doc["seed"] = seed;
  doc["samples"] = samples;
  doc["config"] = config;
  doc["summary"] = summary;
  doc["tie_events"] = tie_events;
  return doc.dump(2) + "\n";
}

std::string ExperimentReport::csv_text() const {
  std::ostringstream out;
  out << "# experiment=" << name << " lattice=" << lattice_spec << " seed=" << seed
      << " config=" << config.dump() << "\n";
  for (std::size_t i = 0; i < csv_header.size(); ++i) {
    out << (i ? "," : "") << csv_header[i];
  }
  out << "\n";
  for (const auto& row : csv_rows) out << row << "\n";
  return out.str();
}

std::string ExperimentReport::write_files(const std::string& outdir) const {
  std::filesystem::create_directories(outdir);
  const std::string stem = (std::filesystem::path(outdir) / file_stem()).string();
  {
    std::ofstream f(stem + ".json", std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + stem + ".json");
    f << json_text();
  }
  {
    std::ofstream f(stem + ".csv", std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + stem + ".csv");
    f << csv_text();
  }
  return stem;
}

std::string ExperimentReport::console_summary() const {
  std::ostringstream out;
  out << "experiment : " << name << "\n"
      << "lattice    : " << lattice_spec << "\n"
      << "seed       : " << seed << "\n"
      << "samples    : " << samples << "\n"
      << "tie events : " << tie_events << "\n"
      << "wall clock : " << wall_seconds << " s\n"
      << "summary    : " << summary.dump(2) << "\n";
  return out.str();
}

}  // namespace mdgs
