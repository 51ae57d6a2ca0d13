#include "skilldisc/diffnet/checkpoint.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

#include "skilldisc/io.hpp"

namespace skilldisc::diffnet {

void Checkpoint::put(const std::string& name, const Network& net) { entries[name] = Entry{net.spec, net.params}; }

void Checkpoint::put(const std::string& name, const Vector& values) { entries[name] = Entry{std::nullopt, values}; }

Network Checkpoint::network(const std::string& name) const {
  auto it = entries.find(name);
  if (it == entries.end()) throw Error("checkpoint has no entry '" + name + "'");
  if (!it->second.spec) throw Error("checkpoint entry '" + name + "' is not a network");
  return Network(*it->second.spec, it->second.values);
}

const Vector& Checkpoint::vector(const std::string& name) const {
  auto it = entries.find(name);
  if (it == entries.end()) throw Error("checkpoint has no entry '" + name + "'");
  return it->second.values;
}

namespace {

std::string hexfloat(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

}  // namespace

std::string Checkpoint::serialize() const {
  std::ostringstream os;
  os << "skilldisc-checkpoint 1\n";
  os << "seed " << seed << "\n";
  os << "step " << step << "\n";
  for (const auto& [k, v] : meta) os << "meta " << k << ' ' << v << "\n";
  for (const auto& [name, e] : entries) {
    os << "entry " << name << ' ' << (e.spec ? e.spec->descriptor() : std::string("vector")) << ' '
       << e.values.size() << "\n";
    for (Index i = 0; i < e.values.size(); ++i) os << hexfloat(e.values[i]) << "\n";
  }
  os << "end\n";
  return os.str();
}

Checkpoint Checkpoint::parse(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& why) -> Error {
    return Error("checkpoint line " + std::to_string(lineno) + ": " + why);
  };
  auto next = [&]() -> bool {
    if (!std::getline(is, line)) return false;
    ++lineno;
    return true;
  };
  if (!next() || line != "skilldisc-checkpoint 1") throw fail("missing header");
  Checkpoint c;
  bool ended = false;
  while (next()) {
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "seed") {
      ls >> c.seed;
    } else if (tag == "step") {
      ls >> c.step;
    } else if (tag == "meta") {
      std::string k, v;
      ls >> k;
      std::getline(ls, v);
      if (!v.empty() && v.front() == ' ') v.erase(0, 1);
      if (k.empty()) throw fail("malformed meta line");
      c.meta[k] = v;
      continue;
    } else if (tag == "entry") {
      std::string name, desc;
      Index count = -1;
      ls >> name >> desc >> count;
      if (name.empty() || desc.empty() || count < 0) throw fail("malformed entry header");
      Entry e;
      if (desc != "vector") e.spec = MlpSpec::from_descriptor(desc);
      e.values.resize(count);
      for (Index i = 0; i < count; ++i) {
        if (!next()) throw fail("truncated entry '" + name + "'");
        char* endp = nullptr;
        e.values[i] = std::strtod(line.c_str(), &endp);
        if (endp == line.c_str()) throw fail("bad value");
      }
      if (e.spec && e.spec->parameter_count() != count) throw fail("entry '" + name + "' size does not match spec");
      c.entries[name] = std::move(e);
    } else if (tag == "end") {
      ended = true;
      break;
    } else {
      throw fail("unknown tag '" + tag + "'");
    }
    if (ls.fail()) throw fail("malformed line");
  }
  if (!ended) throw fail("missing end marker");
  return c;
}

void Checkpoint::save(const std::filesystem::path& path) const { io::write_atomic(path, serialize()); }

Checkpoint Checkpoint::load(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw Error("checkpoint not found: " + path.string());
  return parse(io::read_file(path));
}

bool Checkpoint::operator==(const Checkpoint& o) const {
  if (seed != o.seed || step != o.step || meta != o.meta || entries.size() != o.entries.size()) return false;
  for (const auto& [name, e] : entries) {
    auto it = o.entries.find(name);
    if (it == o.entries.end() || e.spec != it->second.spec || e.values.size() != it->second.values.size())
      return false;
    for (Index i = 0; i < e.values.size(); ++i)
      if (std::memcmp(&e.values[i], &it->second.values[i], sizeof(double)) != 0) return false;
  }
  return true;
}

}  // namespace skilldisc::diffnet
