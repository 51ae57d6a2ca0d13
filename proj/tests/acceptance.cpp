// Runs every acceptance criterion and prints one PASS/FAIL line for each.
// Exit status is non-zero when any criterion fails.

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <iostream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "skilldisc/agent/train.hpp"
#include "skilldisc/cli/commands.hpp"
#include "skilldisc/diffnet/gradcheck.hpp"
#include "skilldisc/io.hpp"
#include "skilldisc/metrics/evaluation.hpp"
#include "skilldisc/metrics/theorem.hpp"
#include "skilldisc/rewards/aninfonce.hpp"
#include "skilldisc/rewards/cic.hpp"
#include "skilldisc/rewards/particle_entropy.hpp"
#include "skilldisc/rewards/rnd.hpp"
#include "skilldisc/surgery/surgery.hpp"

using namespace skilldisc;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, const Outcome& o, double secs) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.1fs", secs);
  std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << id << " (" << name << "): " << o.detail << " [" << buf
            << "]\n"
            << std::flush;
  if (!o.pass) ++failures;
}

std::string fmt(double x, const char* f = "%.3g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

Matrix randn(Index r, Index c, Rng& rng) {
  Matrix m(r, c);
  for (Index i = 0; i < m.size(); ++i) m.data()[i] = standard_normal(rng);
  return m;
}

Vector randn(Index n, Rng& rng) { return randn(n, 1, rng).col(0); }

Matrix one_hots(const std::vector<int>& z, int k) {
  Matrix m = Matrix::Zero(k, static_cast<Index>(z.size()));
  for (std::size_t i = 0; i < z.size(); ++i) m(z[i], static_cast<Index>(i)) = 1.0;
  return m;
}

bool same_bits(const Vector& a, const Vector& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), sizeof(double) * a.size()) == 0;
}

// Coordinates whose gradient is exactly zero (the output bias of an encoder
// whose loss only sees embedding differences, for one) would otherwise turn
// central-difference roundoff into a huge ratio, so the denominator is floored.
double fd_error(const diffnet::ScalarFunction& f, const Vector& x, const Vector& analytic, double step) {
  const Vector numeric = diffnet::finite_diff_gradient(f, x, step);
  return ((analytic - numeric).array().abs() / numeric.array().abs().max(1e-6)).maxCoeff();
}

// ---------------------------------------------------------------------------

Outcome gradients() {
  constexpr int kInstances = 5;
  double worst_cic = 0, worst_div = 0, worst_rnd = 0, worst_ppo = 0, worst_td = 0;
  for (int inst = 0; inst < kInstances; ++inst) {
    Rng rng(derive_seed(100, inst));

    const auto cic = rewards::CicEncoders::make(2, 4, 8, 16, 0.5, rng);
    const Matrix pairs = randn(4, 10, rng);
    std::vector<int> z(10);
    for (auto& v : z) v = static_cast<int>(rng() % 4);
    const Matrix skills = one_hots(z, 4);
    const auto cl = rewards::cic_loss(cic, pairs, skills);
    const auto f_pair = [&](const Vector& p) {
      auto e = cic;
      e.pair_encoder.params = p;
      return rewards::cic_loss(e, pairs, skills).loss;
    };
    const auto f_skill = [&](const Vector& p) {
      auto e = cic;
      e.skill_encoder.params = p;
      return rewards::cic_loss(e, pairs, skills).loss;
    };
    worst_cic = std::max({worst_cic, fd_error(f_pair, cic.pair_encoder.params, cl.grad_pair, 1e-5),
                          fd_error(f_skill, cic.skill_encoder.params, cl.grad_skill, 1e-5)});

    auto div = rewards::DiversityEncoder::make(diffnet::MlpSpec::make(5, {16}, 5, diffnet::Activation::tanh), rng);
    div.lambda_raw = Vector::NullaryExpr(5, [&] { return uniform01(rng) * 2 - 1; });
    std::vector<int> dz(8);
    for (auto& v : dz) v = static_cast<int>(rng() % 3);
    const rewards::ContrastiveBatch cb{randn(5, 8, rng), randn(5, 8, rng), dz};
    const auto dl = rewards::aninfonce_batch(div, cb, true);
    const auto f_div = [&](const Vector& flat) {
      auto e = div;
      e.set_flat_params(flat);
      return rewards::aninfonce_batch(e, cb, false).loss;
    };
    worst_div = std::max(worst_div, fd_error(f_div, div.flat_params(), dl.grad, 1e-5));

    const auto rnd = rewards::RndPair::make(diffnet::MlpSpec::make(2, {32, 32}, 8, diffnet::Activation::tanh), rng);
    const Matrix states = randn(2, 16, rng);
    const auto rl = rewards::rnd_loss(rnd, states);
    const auto f_rnd = [&](const Vector& p) {
      auto q = rnd;
      q.predictor.params = p;
      return rewards::rnd_loss(q, states).loss;
    };
    worst_rnd = std::max(worst_rnd, fd_error(f_rnd, rnd.predictor.params, rl.grad, 1e-5));

    // PPO surrogate on a random batch whose ratios stay inside the clip range.
    const auto nets = agent::AgentNets::make(2, Vector2(5, 5), 0.95, 8, 2, -0.5, rng);
    agent::PpoBatch b;
    const Index n = 6;
    b.inputs = Matrix::Zero(nets.input_dim(), n);
    b.latents = Matrix(2, n);
    b.old_log_prob = Vector(n);
    for (Index i = 0; i < n; ++i) {
      b.inputs(0, i) = uniform01(rng) * 2 - 1;
      b.inputs(1, i) = uniform01(rng) * 2 - 1;
      b.inputs(2 + static_cast<Index>(rng() % 2), i) = 1.0;
    }
    const Matrix mean = nets.policy(b.inputs);
    for (Index i = 0; i < n; ++i) {
      b.latents.col(i) = mean.col(i) + 0.5 * Vector2(standard_normal(rng), standard_normal(rng));
      b.old_log_prob[i] =
          agent::gaussian_log_prob(b.latents.col(i), mean.col(i), nets.log_std) + 0.1 * (uniform01(rng) * 2 - 1);
    }
    b.episodes = {{0, n}};
    agent::PpoConfig pc;
    agent::StreamTargets st{randn(n, rng), randn(n, rng), static_cast<int>(inst % 2)};
    const auto pl = agent::ppo_stream_losses(nets, b, {&st}, pc);
    const auto f_ppo = [&](const Vector& flat) {
      auto m = nets;
      m.set_flat(flat);
      return agent::ppo_stream_losses(m, b, {&st}, pc)[0].loss;
    };
    worst_ppo = std::max(worst_ppo, fd_error(f_ppo, nets.flat(), pl[0].grad, 1e-6));

    agent::SelectorConfig sc;
    sc.hidden = 8;
    const auto sel = agent::SkillSelector::make(3, Vector2(5, 5), sc, rng);
    agent::SelectorBatch tb;
    for (int i = 0; i < 12; ++i) {
      tb.states.push_back({uniform01(rng) * 5, uniform01(rng) * 5});
      tb.next_states.push_back({uniform01(rng) * 5, uniform01(rng) * 5});
      tb.skills.push_back(static_cast<int>(rng() % 3));
      tb.rewards.push_back(uniform01(rng) < 0.3 ? 1.0 : 0.0);
      tb.done.push_back(uniform01(rng) < 0.2);
    }
    const Vector target = sel.q.params + 0.1 * randn(sel.q.size(), rng);
    const auto tl = agent::selector_td_loss(sel, sel.q.params, tb, 0.99, target);
    const auto f_td = [&](const Vector& p) { return agent::selector_td_loss(sel, p, tb, 0.99, target).loss; };
    worst_td = std::max(worst_td, fd_error(f_td, sel.q.params, tl.grad, 1e-6));
  }
  const double worst = std::max({worst_cic, worst_div, worst_rnd, worst_ppo, worst_td});
  return {worst < 1e-4, "max relative error over " + std::to_string(kInstances) + " instances: cic " + fmt(worst_cic) +
                            ", aninfonce " + fmt(worst_div) + ", rnd " + fmt(worst_rnd) + ", ppo " + fmt(worst_ppo) +
                            ", selector td " + fmt(worst_td) + " (limit 1e-4, denominators floored at 1e-6)"};
}

Outcome surgery_checks() {
  constexpr int kPairs = 100000;
  Rng rng(200);
  Rng surgery_rng(201);
  surgery::SurgeryConfig cfg;
  cfg.projection_probability = 0.5;
  surgery::ConflictStats stats;
  double worst_ortho = 0.0;
  long div_branch = 0, conflicts = 0;
  bool passthrough = true;
  for (int i = 0; i < kPairs; ++i) {
    const Index d = 2 + static_cast<Index>(rng() % 511);
    const Vector a = randn(d, rng);
    const Vector b = randn(d, rng);
    // Every pair is forced into conflict; one in ten is also checked in agreement.
    const Vector g_div = a;
    const Vector g_expl = a.dot(b) < 0 ? b : Vector(-b);
    if (!(g_div.dot(g_expl) < 0)) continue;
    ++conflicts;
    const auto r = surgery::surgery(g_div, g_expl, cfg, stats, surgery_rng);
    // The projected gradient is recovered from the combined output.
    const double scale = g_div.norm() * g_expl.norm();
    if (r.projected == surgery::Projected::diversity) {
      ++div_branch;
      worst_ortho = std::max(worst_ortho, std::abs((r.g_final - g_expl).dot(g_expl)) / scale);
    } else if (r.projected == surgery::Projected::exploration) {
      worst_ortho = std::max(worst_ortho, std::abs((r.g_final - g_div).dot(g_div)) / scale);
    } else {
      passthrough = false;
    }
    worst_ortho = std::max({worst_ortho, std::abs(surgery::project_out(g_div, g_expl).dot(g_expl)) / scale,
                            std::abs(surgery::project_out(g_expl, g_div).dot(g_div)) / scale});
    if (i % 10 == 0) {
      const Vector agree = -g_expl;
      const Vector sum = g_div + agree;
      const auto q = surgery::surgery(g_div, agree, cfg, stats, surgery_rng);
      passthrough = passthrough && q.projected == surgery::Projected::none && same_bits(q.g_final, sum);
    }
  }
  const double freq = static_cast<double>(div_branch) / static_cast<double>(conflicts);
  const bool ok = worst_ortho < 1e-10 && passthrough && std::abs(freq - 0.5) <= 0.01;
  return {ok, "max |dot|/(|g||onto|) " + fmt(worst_ortho) + " (limit 1e-10), no-conflict pass-through " +
                  (passthrough ? "bit-identical" : "BROKEN or conflict not projected") + ", diversity-branch frequency " + fmt(freq, "%.4f") +
                  " over " + std::to_string(conflicts) + " conflicts"};
}

Outcome theorem_lab() {
  struct Inst {
    int s, h, k;
    double peak, mix;
  };
  const std::vector<Inst> instances = {{2, 1, 2, 0.8, 0.125}, {2, 2, 3, 0.7, 0.2}, {3, 1, 3, 0.6, 0.25},
                                       {4, 1, 4, 0.5, 0.3},   {3, 2, 4, 0.5, 0.4}, {4, 2, 5, 0.6, 0.25}};
  const std::vector<long> grid = {5, 10, 20, 40, 80, 160, 320};
  Rng rng(300);
  bool ok = true;
  int rows = 0;
  double worst_at_star = 0.0;
  std::ostringstream detail;
  for (const auto& in : instances) {
    const auto inst = metrics::TheoremInstance::peaked(in.s, in.h, in.k, in.peak, in.mix);
    if (!(inst.margin >= 0.1 - 1e-12 && inst.margin <= 0.6 + 1e-12)) ok = false;
    const auto table = metrics::theorem_report(inst, grid, 10000, 0.1, rng);
    for (const auto& r : table) {
      ++rows;
      if (r.empirical > r.bound + r.half_width) ok = false;
      if (r.at_sample_complexity) {
        worst_at_star = std::max(worst_at_star, r.empirical);
        if (r.empirical > 0.1) ok = false;
      }
    }
  }
  detail << instances.size() << " instances, " << rows << " rows, every empirical rate within bound + 3 SE: "
         << (ok ? "yes" : "no") << "; worst rate at n = sample_complexity(eta=0.1): " << fmt(worst_at_star, "%.4f");
  return {ok, detail.str()};
}

Outcome toy() {
  Rng rng(400);
  const auto grid = metrics::linspace(0.0, 5.0, 20);
  const auto rows = metrics::gaussian_toy({5, 1000, 4}, grid, rng);
  Vector x(static_cast<Index>(rows.size())), y(static_cast<Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    x[static_cast<Index>(i)] = rows[i].distance;
    y[static_cast<Index>(i)] = rows[i].mean_objective;
  }
  const double rho = metrics::spearman(x, y);
  return {rho >= 0.95, "spearman " + fmt(rho, "%.4f") + " over 20 distances (objective " + fmt(y[0], "%.3f") +
                           " at d=0, " + fmt(y[y.size() - 1], "%.3g") + " at d=5)"};
}

Outcome entropy() {
  Rng rng(500);
  double worst_oracle = 0.0;
  for (int b = 0; b < 100; ++b) {
    const Index n = 2 + static_cast<Index>(rng() % 63);
    const int dim = 1 + static_cast<int>(rng() % 6);
    const int k = 1 + static_cast<int>(rng() % std::min<Index>(16, n - 1));
    const double clip = b % 2 == 0 ? 0.0 : 0.1 * uniform01(rng);
    const Matrix x = randn(dim, n, rng);
    const Vector got = rewards::particle_entropy_rewards(x, k, clip);
    for (Index i = 0; i < n; ++i) {
      std::vector<double> d;
      for (Index j = 0; j < n; ++j)
        if (j != i) d.push_back((x.col(i) - x.col(j)).norm());
      std::sort(d.begin(), d.end());
      double s = 0.0;
      for (int l = 0; l < k; ++l) s += std::max(d[static_cast<std::size_t>(l)] - clip, 0.0);
      worst_oracle = std::max(worst_oracle, std::abs(got[i] - std::log(1.0 + s)));
    }
  }
  double worst_scale = 0.0;
  for (double c : {2.0, 10.0}) {
    const Matrix x = randn(3, 40, rng);
    const Vector r1 = rewards::particle_entropy_rewards(x, 5, 0.0, rewards::EntropyLog::raw);
    const Vector rc = rewards::particle_entropy_rewards(c * x, 5, 0.0, rewards::EntropyLog::raw);
    worst_scale = std::max(worst_scale, ((rc - r1).array() - std::log(c)).abs().maxCoeff());
  }
  const bool ok = worst_oracle < 1e-12 && worst_scale < 1e-9;
  return {ok, "max oracle gap over 100 batches " + fmt(worst_oracle) + ", max scale-equivariance error " +
                  fmt(worst_scale) + " (limit 1e-9)"};
}

Outcome aninfonce_degenerate() {
  Rng rng(600);
  const Vector a = randn(6, rng);
  const Matrix same = a.replicate(1, 4);
  const Vector lambda = Vector::NullaryExpr(6, [&] { return 0.1 + uniform01(rng); });
  const double loss = -rewards::aninfonce_objective(a, a, same, lambda);
  const double gap = std::abs(loss - std::log(5.0));

  const Vector p = randn(6, rng);
  const Matrix negs = randn(6, 4, rng);
  const double base = rewards::aninfonce_objective(a, p, negs, lambda);
  std::vector<int> perm = {0, 1, 2, 3};
  bool exact = true;
  int tried = 0;
  while (std::next_permutation(perm.begin(), perm.end())) {
    Matrix shuffled(6, 4);
    for (int j = 0; j < 4; ++j) shuffled.col(j) = negs.col(perm[static_cast<std::size_t>(j)]);
    const double v = rewards::aninfonce_objective(a, p, shuffled, lambda);
    exact = exact && v == base;
    ++tried;
  }
  return {gap < 1e-12 && exact, "|loss - ln 5| = " + fmt(gap) + ", " + std::to_string(tried) +
                                    " negative permutations " + (exact ? "exactly equal" : "DIFFER")};
}

// ---------------------------------------------------------------------------

struct SeedRun {
  std::uint64_t seed = 0;
  double coverage = 0, mi = 0, random_mi = 0, conflict_ratio = 0;
  double pretrain_secs = 0;
  double success = 0, baseline_success = 0;
  double finetune_secs = 0;
};

std::vector<SeedRun> train_seeds(int seeds, int workers) {
  std::vector<SeedRun> runs;
  const maze::MazeSpec spec = maze::load_maze_named_or_file("tree7");
  for (int s = 1; s <= seeds; ++s) {
    agent::RunConfig cfg;
    cfg.seed = static_cast<std::uint64_t>(s);
    cfg.workers = workers;
    SeedRun run;
    run.seed = cfg.seed;
    auto t0 = Clock::now();
    const auto pre = agent::pretrain(spec, cfg);
    run.pretrain_secs = seconds_since(t0);
    run.coverage = pre.final_eval.coverage;
    run.mi = pre.final_eval.mutual_information;
    run.random_mi = pre.random_baseline.mutual_information;
    run.conflict_ratio = pre.conflicts.steps_total > 0 ? surgery::conflict_ratio(pre.conflicts) : 0.0;
    t0 = Clock::now();
    run.success = agent::finetune(pre.checkpoint, spec, cfg, agent::SkillChoice::selector).success_rate;
    run.finetune_secs = seconds_since(t0);
    run.baseline_success =
        agent::finetune(pre.checkpoint, spec, cfg, agent::SkillChoice::uniform_per_episode).success_rate;
    std::cout << "  seed " << s << ": coverage " << fmt(run.coverage, "%.3f") << ", mi " << fmt(run.mi, "%.3f")
              << " (random " << fmt(run.random_mi, "%.3f") << "), conflict ratio " << fmt(run.conflict_ratio, "%.3f")
              << ", pretrain " << fmt(run.pretrain_secs / 60, "%.1f") << " min; success " << fmt(run.success, "%.2f")
              << " (uniform-skill baseline " << fmt(run.baseline_success, "%.2f") << "), finetune "
              << fmt(run.finetune_secs / 60, "%.1f") << " min\n"
              << std::flush;
    runs.push_back(run);
  }
  return runs;
}

Outcome pretraining(const std::vector<SeedRun>& runs) {
  int good = 0;
  double slowest = 0.0, mean_conflict = 0.0;
  for (const auto& r : runs) {
    if (r.coverage >= 0.9 && r.mi >= 2.0 * r.random_mi) ++good;
    slowest = std::max(slowest, r.pretrain_secs);
    mean_conflict += r.conflict_ratio / static_cast<double>(runs.size());
  }
  const int need = static_cast<int>(std::ceil(0.8 * static_cast<double>(runs.size())));
  const bool ok = good >= need && slowest <= 30 * 60;
  return {ok, std::to_string(good) + "/" + std::to_string(runs.size()) +
                  " seeds with coverage >= 0.9 and MI >= 2x random; slowest seed " + fmt(slowest / 60, "%.1f") +
                  " min (limit 30); mean conflict ratio " + fmt(mean_conflict, "%.3f")};
}

Outcome finetuning(const std::vector<SeedRun>& runs) {
  int good = 0;
  double mean_sel = 0.0, mean_base = 0.0, slowest = 0.0;
  for (const auto& r : runs) {
    if (r.success >= 0.9) ++good;
    mean_sel += r.success / static_cast<double>(runs.size());
    mean_base += r.baseline_success / static_cast<double>(runs.size());
    slowest = std::max(slowest, r.finetune_secs);
  }
  const int need = static_cast<int>(std::ceil(0.8 * static_cast<double>(runs.size())));
  const bool ok = good >= need && mean_sel >= mean_base && slowest <= 15 * 60;
  return {ok, std::to_string(good) + "/" + std::to_string(runs.size()) + " seeds reach >= 90% success; mean " +
                  fmt(mean_sel, "%.3f") + " with selector vs " + fmt(mean_base, "%.3f") +
                  " uniform-skill baseline; slowest fine-tune " + fmt(slowest / 60, "%.1f") + " min (limit 15)"};
}

// ---------------------------------------------------------------------------

int run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv = {"skilldisc"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  if (code != 0) std::cerr << err.str();
  return code;
}

Outcome determinism() {
  const fs::path dir = fs::temp_directory_path() / "skilldisc_acceptance_determinism";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const fs::path cfg = dir / "run.ini";
  io::write_atomic(cfg,
                   "[run]\nworkers = 1\n[ppo]\nrollouts_per_update = 6\nepochs = 5\n"
                   "[budget]\npretrain_iterations = 3\neval_interval = 1\neval_episodes_per_skill = 2\n"
                   "finetune_steps = 1000\nfinetune_eval_episodes = 10\n");
  const std::string c = cfg.string(), out = (dir / "out").string(), ck = (dir / "out" / "checkpoint.ckpt").string();
  const std::vector<std::vector<std::string>> commands = {
      {"pretrain", "--config", c, "--out", out},
      {"finetune", "--config", c, "--checkpoint", ck, "--out", out},
      {"finetune", "--baseline", "--config", c, "--checkpoint", ck, "--out", out},
      {"eval", "--config", c, "--checkpoint", (dir / "out" / "finetune.ckpt").string(), "--out", out},
      {"render", "--config", c, "--checkpoint", ck, "--episodes", "2", "--out", out},
      {"theorem", "--trials", "2000", "--out", out},
      {"toy-aninfonce", "--samples", "200", "--out", out},
  };
  const auto snapshot = [&] {
    std::map<std::string, std::string> files;
    for (const auto& e : fs::recursive_directory_iterator(dir / "out"))
      if (e.is_regular_file()) files[fs::relative(e.path(), dir).string()] = io::read_file(e.path());
    return files;
  };
  std::map<std::string, std::string> first;
  for (int pass = 0; pass < 2; ++pass) {
    fs::remove_all(dir / "out");
    for (const auto& cmd : commands)
      if (run_cli(cmd) != 0) return {false, "command '" + cmd.front() + "' failed"};
    if (pass == 0) first = snapshot();
  }
  const auto second = snapshot();
  std::vector<std::string> differing;
  for (const auto& [name, bytes] : first) {
    const auto it = second.find(name);
    if (it == second.end() || it->second != bytes) differing.push_back(name);
  }
  if (second.size() != first.size()) differing.push_back("(file set)");
  fs::remove_all(dir);
  std::string list;
  for (const auto& d : differing) list += " " + d;
  return {differing.empty(), std::to_string(commands.size()) + " commands, " + std::to_string(first.size()) +
                                 " output files compared byte for byte" +
                                 (differing.empty() ? ", all identical" : "; differing:" + list)};
}

Outcome epsilon() {
  const agent::EpsilonSchedule e;
  const bool at0 = e(0.0) == 1.0;
  const double gap = std::abs(e(20000.0) - (0.01 + 0.99 * std::exp(-1.0)));
  bool monotone = true;
  double prev = e(0.0);
  for (int i = 1; i < 1000000; ++i) {
    const double v = e(static_cast<double>(i) * 0.2);
    monotone = monotone && v <= prev;
    prev = v;
  }
  return {at0 && gap < 1e-12 && monotone, std::string("eps(0) ") + (at0 ? "== 1.0" : "!= 1.0") +
                                              ", |eps(20000) - (0.01 + 0.99/e)| = " + fmt(gap) +
                                              ", monotone on 1e6 points: " + (monotone ? "yes" : "no")};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance checks"};
  int seeds = 5;
  int workers = 1;
  bool skip_training = false;
  app.add_option("--seeds", seeds, "Seeds for the maze pretraining and fine-tuning criteria")->check(CLI::PositiveNumber);
  app.add_option("--workers", workers, "Rollout workers for the training criteria")->check(CLI::PositiveNumber);
  app.add_flag("--skip-training", skip_training, "Report criteria 7 and 8 as skipped (counts as failure)");
  CLI11_PARSE(app, argc, argv);

  const auto timed = [](int id, const std::string& name, Outcome (*fn)()) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    report(id, name, o, seconds_since(t0));
  };

  timed(1, "gradient correctness", gradients);
  timed(2, "gradient surgery", surgery_checks);
  timed(3, "misidentification bound", theorem_lab);
  timed(4, "gaussian toy", toy);
  timed(5, "particle entropy", entropy);
  timed(6, "contrastive degenerate case", aninfonce_degenerate);

  if (skip_training) {
    report(7, "maze pretraining", {false, "skipped"}, 0.0);
    report(8, "fine-tuning", {false, "skipped"}, 0.0);
  } else {
    const auto t0 = Clock::now();
    std::vector<SeedRun> runs;
    std::string error;
    try {
      runs = train_seeds(seeds, workers);
    } catch (const std::exception& e) {
      error = e.what();
    }
    const double secs = seconds_since(t0);
    if (!error.empty()) {
      report(7, "maze pretraining", {false, "threw: " + error}, secs);
      report(8, "fine-tuning", {false, "threw: " + error}, secs);
    } else {
      report(7, "maze pretraining", pretraining(runs), secs);
      report(8, "fine-tuning", finetuning(runs), 0.0);
    }
  }

  timed(9, "determinism", determinism);
  timed(10, "epsilon schedule", epsilon);

  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed") << "\n";
  return failures == 0 ? 0 : 1;
}
