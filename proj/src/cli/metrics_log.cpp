#include "skilldisc/cli/metrics_log.hpp"

#include <chrono>
#include <cstdio>

#include <json.hpp>

#include "skilldisc/common.hpp"

namespace skilldisc::cli {

std::string record_to_json(const MetricsRecord& record, const std::string& run_id, bool timestamp) {
  nlohmann::ordered_json j;
  j["run_id"] = run_id;
  if (timestamp) {
    const auto now = std::chrono::system_clock::now().time_since_epoch();
    j["timestamp"] = std::chrono::duration<double>(now).count();
  }
  j["kind"] = record.kind;
  j["step"] = record.step;
  for (const auto& [name, value] : record.scalars) j[name] = value;
  for (const auto& [name, values] : record.series) j[name] = values;
  return j.dump();
}

MetricsWriter::MetricsWriter(const std::filesystem::path& path, std::string run_id, bool timestamps)
    : run_id_(std::move(run_id)), timestamps_(timestamps) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  out_.open(path, std::ios::binary | std::ios::trunc);
  if (!out_) throw Error("cannot open metrics log " + path.string());
}

void MetricsWriter::append(const MetricsRecord& record) {
  if (record.step < last_step_) throw Error("metrics steps must not decrease within a run");
  last_step_ = record.step;
  out_ << record_to_json(record, run_id_, timestamps_) << '\n';
  out_.flush();
  if (!out_) throw Error("metrics log write failed");
}

std::string make_run_id(const std::string& command, const std::string& resolved_config) {
  std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
  for (unsigned char c : command + "\n" + resolved_config) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s-%016llx", command.c_str(), static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace skilldisc::cli
