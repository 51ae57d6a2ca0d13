#include "skilldisc/metrics/theorem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

namespace skilldisc::metrics {

namespace {

void require_margin(double margin) {
  if (!(margin > 0.0) || !std::isfinite(margin)) throw Error("insufficiently diversified: margin must be > 0");
}

constexpr long kChunk = 256;

}  // namespace

Index trajectory_space_size(int n_states, int horizon) {
  if (n_states < 1 || horizon < 1) throw Error("n_states and horizon must be positive");
  Index size = 1;
  for (int h = 0; h < horizon; ++h) {
    size *= n_states;
    if (size > (Index(1) << 24)) throw Error("trajectory space too large to enumerate");
  }
  return size;
}

TheoremInstance TheoremInstance::make(int n_states, int horizon, std::vector<CategoricalDistribution> skills,
                                      CategoricalDistribution rho_star) {
  const Index k = trajectory_space_size(n_states, horizon);
  if (skills.empty()) throw Error("theorem instance needs at least one skill");
  for (const auto& s : skills)
    if (s.size() != k) throw DimensionError("skill distribution is not over S^H");
  if (rho_star.size() != k) throw DimensionError("rho_star is not over S^H");

  TheoremInstance inst;
  inst.n_states = n_states;
  inst.horizon = horizon;
  inst.skills = std::move(skills);
  inst.rho_star = std::move(rho_star);
  inst.delta = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < inst.skills.size(); ++a)
    for (std::size_t b = a + 1; b < inst.skills.size(); ++b)
      inst.delta = std::min(inst.delta, tv_distance(inst.skills[a], inst.skills[b]));
  inst.epsilon = std::numeric_limits<double>::infinity();
  for (std::size_t z = 0; z < inst.skills.size(); ++z) {
    const double d = tv_distance(inst.rho_star, inst.skills[z]);
    if (d < inst.epsilon) {
      inst.epsilon = d;
      inst.best_skill = static_cast<Index>(z);
    }
  }
  inst.margin = inst.delta - 2.0 * inst.epsilon;
  return inst;
}

TheoremInstance TheoremInstance::peaked(int n_states, int horizon, int n_skills, double peak, double mix) {
  const Index k = trajectory_space_size(n_states, horizon);
  if (n_skills < 1 || n_skills > k) throw Error("peaked instance needs 1 <= skills <= S^H");
  if (!(peak > 0.0 && peak <= 1.0)) throw Error("peak must lie in (0, 1]");
  if (!(mix >= 0.0 && mix <= 1.0)) throw Error("mix must lie in [0, 1]");
  const auto uni = CategoricalDistribution::uniform(k);
  std::vector<CategoricalDistribution> skills;
  for (int z = 0; z < n_skills; ++z) skills.push_back(uni.mix(CategoricalDistribution::point_mass(k, z), peak));
  CategoricalDistribution star = n_skills > 1 ? skills[0].mix(skills[1], mix) : skills[0];
  return make(n_states, horizon, std::move(skills), std::move(star));
}

BoundValue theorem_bound(int n_states, int horizon, double margin, long n) {
  require_margin(margin);
  if (n < 1) throw Error("theorem_bound: n must be >= 1");
  if (n_states < 1 || horizon < 1) throw Error("n_states and horizon must be positive");
  const double outcomes = std::pow(static_cast<double>(n_states), horizon);
  BoundValue b;
  b.log_value = outcomes * std::log(2.0) - static_cast<double>(n) * margin * margin / 2.0;
  b.value = b.log_value >= 0.0 ? 1.0 : std::exp(b.log_value);
  return b;
}

long sample_complexity(double margin, double eta, int n_states, int horizon) {
  require_margin(margin);
  if (!(eta > 0.0 && eta < 1.0)) throw Error("sample_complexity: eta must lie in (0, 1)");
  if (n_states < 1 || horizon < 1) throw Error("n_states and horizon must be positive");
  const double outcomes = std::pow(static_cast<double>(n_states), horizon);
  const double rhs = 2.0 / (margin * margin) * (outcomes * std::log(2.0) - std::log(eta));
  return static_cast<long>(std::ceil(rhs));
}

MisidEstimate monte_carlo_misid(const TheoremInstance& instance, long n, long trials, Rng& rng, int workers) {
  if (n < 1) throw Error("monte_carlo_misid: n must be >= 1");
  if (trials < 1) throw Error("monte_carlo_misid: trials must be >= 1");
  // A lone skill is always the one selected.
  if (instance.skills.size() == 1) return {0.0, trials, 0.0};
  require_margin(instance.margin);
  const std::uint64_t base = rng();
  const long chunks = (trials + kChunk - 1) / kChunk;
  std::vector<long> misses(static_cast<std::size_t>(chunks), 0);

  auto run_chunk = [&](long c) {
    Rng local(derive_seed(base, static_cast<std::uint64_t>(c)));
    const long begin = c * kChunk;
    const long end = std::min(trials, begin + kChunk);
    long m = 0;
    for (long t = begin; t < end; ++t) {
      const Vector counts = sample_counts(instance.rho_star, n, local);
      const auto empirical = CategoricalDistribution::from_counts(counts);
      if (greedy_select(empirical, instance.skills) != instance.best_skill) ++m;
    }
    misses[static_cast<std::size_t>(c)] = m;
  };

  const int w = std::max(1, std::min<int>(workers, static_cast<int>(chunks)));
  if (w == 1) {
    for (long c = 0; c < chunks; ++c) run_chunk(c);
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < w; ++i)
      pool.emplace_back([&, i] {
        for (long c = i; c < chunks; c += w) run_chunk(c);
      });
    for (auto& t : pool) t.join();
  }

  long total = 0;
  for (long m : misses) total += m;
  MisidEstimate est;
  est.trials = trials;
  est.rate = static_cast<double>(total) / static_cast<double>(trials);
  est.standard_error = std::sqrt(est.rate * (1.0 - est.rate) / static_cast<double>(trials));
  return est;
}

std::vector<TheoremRow> theorem_report(const TheoremInstance& instance, const std::vector<long>& n_grid, long trials,
                                       double eta, Rng& rng, int workers) {
  if (instance.skills.size() < 2)
    throw Error("theorem lab needs at least two skills (pairwise separation is undefined for one)");
  require_margin(instance.margin);
  const long n_star = sample_complexity(instance.margin, eta, instance.n_states, instance.horizon);
  std::vector<long> grid = n_grid;
  if (std::find(grid.begin(), grid.end(), n_star) == grid.end()) grid.push_back(n_star);
  std::sort(grid.begin(), grid.end());

  std::vector<TheoremRow> rows;
  for (long n : grid) {
    const BoundValue b = theorem_bound(instance.n_states, instance.horizon, instance.margin, n);
    const MisidEstimate e = monte_carlo_misid(instance, n, trials, rng, workers);
    TheoremRow r;
    r.n_states = instance.n_states;
    r.horizon = instance.horizon;
    r.margin = instance.margin;
    r.n = n;
    r.bound = b.value;
    r.log_bound = b.log_value;
    r.empirical = e.rate;
    r.trials = e.trials;
    r.half_width = 3.0 * e.standard_error;
    r.at_sample_complexity = n == n_star;
    rows.push_back(r);
  }
  return rows;
}

}  // namespace skilldisc::metrics
