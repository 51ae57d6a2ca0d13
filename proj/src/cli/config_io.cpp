#include "skilldisc/cli/config_io.hpp"

#include <charconv>
#include <cstdio>
#include <functional>
#include <sstream>
#include <vector>

#include "skilldisc/io.hpp"

namespace skilldisc::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Shortest text that parses back to the same double.
std::string fmt_double(double x) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

double parse_double(const std::string& v) {
  std::size_t pos = 0;
  const double x = std::stod(v, &pos);
  if (pos != v.size()) throw std::invalid_argument(v);
  return x;
}

long long parse_int(const std::string& v) {
  std::size_t pos = 0;
  const long long x = std::stoll(v, &pos);
  if (pos != v.size()) throw std::invalid_argument(v);
  return x;
}

bool parse_bool(const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw std::invalid_argument(v);
}

struct Field {
  std::string section;
  std::string key;
  std::function<std::string(const agent::RunConfig&)> get;
  std::function<void(agent::RunConfig&, const std::string&)> set;
};

Field real_field(const char* section, const char* key, std::function<double&(agent::RunConfig&)> ref) {
  return {section, key, [ref](agent::RunConfig copy) { return fmt_double(ref(copy)); },
          [ref](agent::RunConfig& c, const std::string& v) { ref(c) = parse_double(v); }};
}

template <typename Int>
Field int_field(const char* section, const char* key, std::function<Int&(agent::RunConfig&)> ref) {
  return {section, key,
          [ref](agent::RunConfig copy) { return std::to_string(ref(copy)); },
          [ref](agent::RunConfig& c, const std::string& v) {
            const long long x = parse_int(v);
            if constexpr (std::is_unsigned_v<Int>) {
              if (x < 0) throw std::invalid_argument(v);
            }
            ref(c) = static_cast<Int>(x);
          }};
}

Field bool_field(const char* section, const char* key, std::function<bool&(agent::RunConfig&)> ref) {
  return {section, key,
          [ref](agent::RunConfig copy) { return std::string(ref(copy) ? "true" : "false"); },
          [ref](agent::RunConfig& c, const std::string& v) { ref(c) = parse_bool(v); }};
}

const std::vector<Field>& fields() {
  using C = agent::RunConfig;
  static const std::vector<Field> f = {
      {"run", "maze", [](const C& c) { return c.maze; }, [](C& c, const std::string& v) { c.maze = v; }},
      int_field<int>("run", "n_skills", [](C& c) -> int& { return c.n_skills; }),
      {"run", "seed", [](const C& c) { return std::to_string(c.seed); },
       [](C& c, const std::string& v) {
         std::size_t pos = 0;
         if (!v.empty() && v[0] == '-') throw std::invalid_argument(v);
         c.seed = std::stoull(v, &pos);
         if (pos != v.size()) throw std::invalid_argument(v);
       }},
      {"run", "out_dir", [](const C& c) { return c.out_dir; }, [](C& c, const std::string& v) { c.out_dir = v; }},
      int_field<int>("run", "workers", [](C& c) -> int& { return c.workers; }),
      bool_field("run", "log_timestamps", [](C& c) -> bool& { return c.log_timestamps; }),

      real_field("env", "action_bound", [](C& c) -> double& { return c.env.action_bound; }),
      int_field<int>("env", "episode_length", [](C& c) -> int& { return c.env.episode_length; }),
      {"env", "goal",
       [](const C& c) {
         return c.goal_tile ? std::to_string(c.goal_tile->col) + "," + std::to_string(c.goal_tile->row)
                            : std::string("auto");
       },
       [](C& c, const std::string& v) {
         if (v == "auto") {
           c.goal_tile.reset();
           return;
         }
         const auto comma = v.find(',');
         if (comma == std::string::npos) throw std::invalid_argument(v);
         c.goal_tile = maze::Tile{static_cast<int>(parse_int(trim(v.substr(0, comma)))),
                                  static_cast<int>(parse_int(trim(v.substr(comma + 1))))};
       }},
      real_field("env", "goal_radius", [](C& c) -> double& { return c.goal_radius; }),

      real_field("ppo", "lr", [](C& c) -> double& { return c.ppo.lr; }),
      real_field("ppo", "gamma", [](C& c) -> double& { return c.ppo.gamma; }),
      real_field("ppo", "gae_lambda", [](C& c) -> double& { return c.ppo.gae_lambda; }),
      real_field("ppo", "entropy_coef", [](C& c) -> double& { return c.ppo.entropy_coef; }),
      real_field("ppo", "clip_ratio", [](C& c) -> double& { return c.ppo.clip_ratio; }),
      int_field<int>("ppo", "epochs", [](C& c) -> int& { return c.ppo.epochs_per_update; }),
      int_field<int>("ppo", "rollouts_per_update", [](C& c) -> int& { return c.ppo.rollouts_per_update; }),
      real_field("ppo", "value_coef", [](C& c) -> double& { return c.ppo.value_coef; }),
      bool_field("ppo", "normalize_advantages", [](C& c) -> bool& { return c.ppo.normalize_advantages; }),
      int_field<int>("ppo", "hidden", [](C& c) -> int& { return c.policy_hidden; }),
      int_field<int>("ppo", "depth", [](C& c) -> int& { return c.policy_depth; }),
      real_field("ppo", "init_log_std", [](C& c) -> double& { return c.init_log_std; }),

      real_field("rewards", "alpha", [](C& c) -> double& { return c.rewards.alpha; }),
      real_field("rewards", "beta", [](C& c) -> double& { return c.rewards.beta; }),
      int_field<int>("rewards", "knn_k", [](C& c) -> int& { return c.rewards.k_neighbors; }),
      real_field("rewards", "knn_clip", [](C& c) -> double& { return c.rewards.knn_clip; }),
      bool_field("rewards", "diversity_stream", [](C& c) -> bool& { return c.diversity_stream; }),
      bool_field("rewards", "normalize", [](C& c) -> bool& { return c.encoders.normalize_rewards; }),

      int_field<int>("encoders", "hidden", [](C& c) -> int& { return c.encoders.hidden; }),
      int_field<int>("encoders", "embed_dim", [](C& c) -> int& { return c.encoders.embed_dim; }),
      int_field<int>("encoders", "rnd_dim", [](C& c) -> int& { return c.encoders.rnd_dim; }),
      real_field("encoders", "temperature", [](C& c) -> double& { return c.encoders.temperature; }),
      real_field("encoders", "lr", [](C& c) -> double& { return c.encoders.lr; }),
      int_field<int>("encoders", "batch_size", [](C& c) -> int& { return c.encoders.batch_size; }),
      int_field<int>("encoders", "updates_per_iteration", [](C& c) -> int& { return c.encoders.updates_per_iteration; }),

      bool_field("surgery", "enabled", [](C& c) -> bool& { return c.surgery.enabled; }),
      real_field("surgery", "projection_probability", [](C& c) -> double& { return c.surgery.projection_probability; }),
      bool_field("surgery", "value_only", [](C& c) -> bool& { return c.surgery_value_only; }),

      real_field("selector", "epsilon_start", [](C& c) -> double& { return c.selector.epsilon.start; }),
      real_field("selector", "epsilon_end", [](C& c) -> double& { return c.selector.epsilon.end; }),
      real_field("selector", "epsilon_decay", [](C& c) -> double& { return c.selector.epsilon.decay; }),
      real_field("selector", "lr", [](C& c) -> double& { return c.selector.lr; }),
      int_field<int>("selector", "hidden", [](C& c) -> int& { return c.selector.hidden; }),
      int_field<int>("selector", "depth", [](C& c) -> int& { return c.selector.depth; }),
      real_field("selector", "gamma", [](C& c) -> double& { return c.selector.gamma; }),
      int_field<int>("selector", "batch_size", [](C& c) -> int& { return c.selector.batch_size; }),
      int_field<int>("selector", "updates_per_interval", [](C& c) -> int& { return c.selector.updates_per_interval; }),
      real_field("selector", "target_ema", [](C& c) -> double& { return c.selector.target_ema; }),
      int_field<int>("selector", "decision_interval", [](C& c) -> int& { return c.selector.decision_interval; }),
      int_field<int>("selector", "buffer_capacity", [](C& c) -> int& { return c.selector.buffer_capacity; }),
      real_field("selector", "entropy_coef", [](C& c) -> double& { return c.selector.entropy_coef; }),

      int_field<int>("budget", "pretrain_iterations", [](C& c) -> int& { return c.budget.pretrain_iterations; }),
      int_field<int>("budget", "eval_interval", [](C& c) -> int& { return c.budget.eval_interval; }),
      int_field<int>("budget", "eval_episodes_per_skill", [](C& c) -> int& { return c.budget.eval_episodes_per_skill; }),
      int_field<long>("budget", "finetune_steps", [](C& c) -> long& { return c.budget.finetune_steps; }),
      int_field<int>("budget", "finetune_eval_episodes", [](C& c) -> int& { return c.budget.finetune_eval_episodes; }),
  };
  return f;
}

}  // namespace

agent::RunConfig parse_config(const std::string& text) {
  agent::RunConfig cfg;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = "config line " + std::to_string(lineno) + ": ";
    if (line.front() == '[') {
      if (line.back() != ']') throw Error(where + "malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      bool known = false;
      for (const auto& f : fields()) known = known || f.section == section;
      if (!known) throw Error(where + "unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(where + "expected key = value");
    if (section.empty()) throw Error(where + "key outside of any section");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const Field* field = nullptr;
    for (const auto& f : fields())
      if (f.section == section && f.key == key) field = &f;
    if (!field) throw Error(where + "unknown key " + section + "." + key);
    try {
      field->set(cfg, value);
    } catch (const std::logic_error&) {
      throw Error(where + "invalid value for " + section + "." + key + ": '" + value + "'");
    }
  }
  cfg.validate();
  return cfg;
}

agent::RunConfig load_config(const std::string& path) { return parse_config(io::read_file(path)); }

std::string serialize_config(const agent::RunConfig& config) {
  std::ostringstream out;
  std::string section;
  for (const auto& f : fields()) {
    if (f.section != section) {
      if (!section.empty()) out << "\n";
      section = f.section;
      out << "[" << section << "]\n";
    }
    out << f.key << " = " << f.get(config) << "\n";
  }
  return out.str();
}

}  // namespace skilldisc::cli
