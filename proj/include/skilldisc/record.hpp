#pragma once

#include <string>
#include <utility>
#include <vector>

namespace skilldisc {

/// One structured metrics entry. Run id and timestamp are attached by the writer.
struct MetricsRecord {
  std::string kind;
  long step = 0;
  std::vector<std::pair<std::string, double>> scalars;
  std::vector<std::pair<std::string, std::vector<double>>> series;

  MetricsRecord& add(const std::string& name, double value) {
    scalars.emplace_back(name, value);
    return *this;
  }
  MetricsRecord& add(const std::string& name, std::vector<double> values) {
    series.emplace_back(name, std::move(values));
    return *this;
  }
};

}  // namespace skilldisc
