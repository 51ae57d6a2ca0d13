#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "skilldisc/diffnet/mlp.hpp"

namespace skilldisc::diffnet {

/// Named parameter blocks plus run bookkeeping.
///
/// On-disk layout (UTF-8 text, one token group per line):
///
///     skilldisc-checkpoint 1
///     seed <uint64>
///     step <int64>
///     meta <key> <value>                  (zero or more, sorted by key)
///     entry <name> <descriptor|vector> <count>
///     <count lines, one C99 hex-float per line>
///     end
///
/// Entries are written sorted by name. Hex floats make the round trip exact.
struct Checkpoint {
  struct Entry {
    std::optional<MlpSpec> spec;  // empty for raw vectors
    Vector values;
  };

  std::uint64_t seed = 0;
  long step = 0;
  std::map<std::string, std::string> meta;
  std::map<std::string, Entry> entries;

  void put(const std::string& name, const Network& net);
  void put(const std::string& name, const Vector& values);
  Network network(const std::string& name) const;
  const Vector& vector(const std::string& name) const;
  bool has(const std::string& name) const { return entries.count(name) > 0; }

  std::string serialize() const;
  static Checkpoint parse(const std::string& text);

  /// Writes to a temporary sibling and renames it into place.
  void save(const std::filesystem::path& path) const;
  static Checkpoint load(const std::filesystem::path& path);

  bool operator==(const Checkpoint& other) const;
};

}  // namespace skilldisc::diffnet
