#pragma once

#include <filesystem>
#include <fstream>
#include <limits>
#include <string>

#include "skilldisc/record.hpp"

namespace skilldisc::cli {

/// One JSON object per line: run_id, kind, step, then the record's scalars
/// and series in insertion order, plus a wall-clock timestamp when enabled.
std::string record_to_json(const MetricsRecord& record, const std::string& run_id, bool timestamp);

/// Newline-delimited metrics file. Opening truncates; every record is
/// flushed as it is appended. Steps must not decrease.
class MetricsWriter {
 public:
  MetricsWriter(const std::filesystem::path& path, std::string run_id, bool timestamps);
  void append(const MetricsRecord& record);

 private:
  std::ofstream out_;
  std::string run_id_;
  bool timestamps_;
  long last_step_ = std::numeric_limits<long>::min();
};

/// Stable identifier derived from the command and its resolved configuration.
std::string make_run_id(const std::string& command, const std::string& resolved_config);

}  // namespace skilldisc::cli
