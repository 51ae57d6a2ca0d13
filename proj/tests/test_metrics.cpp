#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "skilldisc/metrics/categorical.hpp"
#include "skilldisc/metrics/evaluation.hpp"
#include "skilldisc/metrics/theorem.hpp"

using namespace skilldisc;
using namespace skilldisc::metrics;
using CD = CategoricalDistribution;

namespace {

CD random_dist(Index k, Rng& rng) {
  Vector p(k);
  for (Index i = 0; i < k; ++i) p[i] = -std::log(uniform01(rng) + 1e-300);
  return CD(p / p.sum());
}

double mi_oracle(const Matrix& c) {
  const double n = c.sum();
  double mi = 0.0;
  for (Index i = 0; i < c.rows(); ++i) {
    for (Index j = 0; j < c.cols(); ++j) {
      if (c(i, j) == 0) continue;
      double ri = 0, cj = 0;
      for (Index k = 0; k < c.cols(); ++k) ri += c(i, k);
      for (Index k = 0; k < c.rows(); ++k) cj += c(k, j);
      const double p = c(i, j) / n;
      mi += p * std::log(p / ((ri / n) * (cj / n)));
    }
  }
  return mi;
}

}  // namespace

TEST_CASE("categorical validation") {
  CHECK_THROWS(CD(Vector((Vector(2) << 0.5, 0.6).finished())));
  CHECK_THROWS(CD(Vector((Vector(2) << -0.1, 1.1).finished())));
  CHECK_THROWS(CD(Vector(0)));
  CHECK_THROWS(CD::from_counts(Vector::Zero(3)));
  CHECK(CD::from_counts(Vector((Vector(2) << 1, 3).finished()))[1] == 0.75);
  CHECK(CD::uniform(4)[2] == 0.25);
}

TEST_CASE("tv_distance examples") {
  const CD p(Vector((Vector(2) << 0.5, 0.5).finished()));
  CHECK(tv_distance(p, p) == 0.0);
  CHECK(tv_distance(p, CD::point_mass(2, 0)) == 0.5);
  CHECK(tv_distance(CD::point_mass(3, 0), CD::point_mass(3, 2)) == 1.0);
  CHECK_THROWS_AS(tv_distance(p, CD::uniform(3)), DimensionError);
}

TEST_CASE("tv_distance is a metric on random triples") {
  Rng rng(1);
  for (int t = 0; t < 500; ++t) {
    const CD a = random_dist(6, rng), b = random_dist(6, rng), c = random_dist(6, rng);
    CHECK(tv_distance(a, b) == tv_distance(b, a));
    CHECK(tv_distance(a, b) > 0.0);
    CHECK(tv_distance(a, b) <= 1.0);
    CHECK(tv_distance(a, c) <= tv_distance(a, b) + tv_distance(b, c) + 1e-15);
  }
}

TEST_CASE("greedy_select: examples, scan oracle and relabel invariance") {
  Rng rng(2);
  std::vector<CD> skills = {random_dist(4, rng), random_dist(4, rng), random_dist(4, rng)};
  CHECK(greedy_select(skills[2], skills) == 2);
  CHECK(greedy_select(random_dist(4, rng), {skills[1]}) == 0);
  CHECK(greedy_select(CD::uniform(2), {CD::point_mass(2, 0), CD::point_mass(2, 1)}) == 0);  // tie
  CHECK_THROWS(greedy_select(CD::uniform(4), {}));
  for (int t = 0; t < 300; ++t) {
    for (auto& s : skills) s = random_dist(5, rng);
    const CD e = random_dist(5, rng);
    Index best = 0;
    for (Index z = 1; z < 3; ++z)
      if (tv_distance(e, skills[z]) < tv_distance(e, skills[best])) best = z;
    CHECK(greedy_select(e, skills) == best);

    std::vector<Index> perm(5);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    const auto relabel = [&](const CD& d) {
      Vector p(5);
      for (Index i = 0; i < 5; ++i) p[perm[i]] = d[i];
      return CD(p);
    };
    std::vector<CD> rs;
    for (const auto& s : skills) rs.push_back(relabel(s));
    CHECK(greedy_select(relabel(e), rs) == best);
  }
}

TEST_CASE("sample_counts is a multinomial draw") {
  Rng rng(3);
  const CD p(Vector((Vector(4) << 0.1, 0.2, 0.3, 0.4).finished()));
  Vector total = Vector::Zero(4);
  for (int t = 0; t < 2000; ++t) {
    const Vector c = sample_counts(p, 50, rng);
    CHECK(c.sum() == 50.0);
    total += c;
  }
  CHECK((total / total.sum() - p.probs()).cwiseAbs().maxCoeff() < 0.01);
  CHECK(sample_counts(CD::point_mass(3, 1), 7, rng) == Eigen::Vector3d(0, 7, 0));
}

TEST_CASE("theorem_bound") {
  const auto b = theorem_bound(2, 1, 0.5, 40);
  CHECK(b.value == doctest::Approx(4.0 * std::exp(-5.0)).epsilon(1e-14));
  CHECK(b.value == doctest::Approx(0.026951787996341868).epsilon(1e-14));
  CHECK(theorem_bound(2, 1, 1e-9, 1).value == 1.0);
  CHECK(theorem_bound(2, 1, 1e-9, 1).log_value > 0.0);
  CHECK_THROWS(theorem_bound(2, 1, 0.5, 0));
  CHECK_THROWS_WITH(theorem_bound(2, 1, 0.0, 10), doctest::Contains("insufficiently diversified"));
  CHECK_THROWS(theorem_bound(2, 1, -0.1, 10));
  // Doubling n squares the exponential factor.
  const double lk = 4 * std::log(2.0);  // S^H log 2 with S = 2, H = 2
  const auto b1 = theorem_bound(2, 2, 0.3, 25), b2 = theorem_bound(2, 2, 0.3, 50);
  CHECK(b2.log_value - lk == doctest::Approx(2 * (b1.log_value - lk)).epsilon(1e-13));
}

TEST_CASE("sample_complexity") {
  CHECK(sample_complexity(0.5, 0.05, 2, 1) == 36);
  // The bound at the returned n is at most eta, and it is not at n - 1.
  for (double m : {0.1, 0.3, 0.55}) {
    for (double eta : {0.01, 0.1, 0.5}) {
      const long n = sample_complexity(m, eta, 3, 2);
      CHECK(theorem_bound(3, 2, m, n).log_value <= std::log(eta) + 1e-12);
      CHECK(theorem_bound(3, 2, m, n - 1).log_value > std::log(eta));
    }
  }
  const double near_one = 1.0 - 1e-12;
  CHECK(sample_complexity(0.4, near_one, 3, 1) == static_cast<long>(std::ceil(2 * 3 * std::log(2.0) / 0.16)));
  const long n1 = sample_complexity(0.4, 0.1, 2, 2), n2 = sample_complexity(0.2, 0.1, 2, 2);
  CHECK(std::abs(n2 - 4 * n1) <= 4);
  CHECK_THROWS(sample_complexity(0.4, 1.0, 2, 1));
  CHECK_THROWS(sample_complexity(0.0, 0.1, 2, 1));
}

TEST_CASE("theorem instances") {
  const auto inst = TheoremInstance::peaked(2, 2, 3, 0.7, 0.2);
  CHECK(inst.outcome_count() == 4);
  CHECK(inst.delta == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(inst.epsilon == doctest::Approx(0.14).epsilon(1e-12));
  CHECK(inst.margin == doctest::Approx(0.42).epsilon(1e-12));
  CHECK(inst.best_skill == 0);
  // Direct pairwise scan.
  double d = 10;
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = a + 1; b < 3; ++b) d = std::min(d, tv_distance(inst.skills[a], inst.skills[b]));
  CHECK(d == doctest::Approx(inst.delta).epsilon(1e-14));
  CHECK_THROWS(trajectory_space_size(5, 20));
  CHECK(trajectory_space_size(4, 2) == 16);
  CHECK_THROWS(TheoremInstance::make(2, 1, {CD::uniform(3)}, CD::uniform(3)));
}

TEST_CASE("monte carlo misidentification") {
  Rng rng(4);
  SUBCASE("rho_star equals a skill, n = 200") {
    const auto inst = TheoremInstance::peaked(2, 1, 2, 0.5, 0.0);
    CHECK(inst.epsilon == 0.0);
    const auto est = monte_carlo_misid(inst, 200, 10000, rng);
    CHECK(est.trials == 10000);
    CHECK(est.rate <= theorem_bound(2, 1, inst.margin, 200).value + 3 * est.standard_error);
    CHECK(est.rate < 0.01);
  }
  SUBCASE("single skill never misidentifies") {
    const auto inst = TheoremInstance::make(2, 1, {CD::uniform(2)}, CD::point_mass(2, 0));
    CHECK(std::isinf(inst.delta));
    CHECK(monte_carlo_misid(inst, 5, 1000, rng).rate == 0.0);
  }
  SUBCASE("rate at the sample complexity") {
    const auto inst = TheoremInstance::peaked(3, 1, 3, 0.6, 0.25);
    const long n = sample_complexity(inst.margin, 0.1, 3, 1);
    CHECK(monte_carlo_misid(inst, n, 10000, rng).rate <= 0.1);
  }
  SUBCASE("worker count does not change the estimate") {
    const auto inst = TheoremInstance::peaked(2, 2, 3, 0.7, 0.2);
    Rng a(9), b(9);
    CHECK(monte_carlo_misid(inst, 10, 3000, a, 1).rate == monte_carlo_misid(inst, 10, 3000, b, 3).rate);
  }
  SUBCASE("invalid instance") {
    const auto bad = TheoremInstance::peaked(2, 1, 2, 0.5, 0.5);  // rho_star halfway between the skills
    CHECK(bad.margin == 0.0);
    CHECK_THROWS(monte_carlo_misid(bad, 10, 10, rng));
  }
}

TEST_CASE("theorem_report rows respect the bound") {
  Rng rng(5);
  const auto inst = TheoremInstance::peaked(2, 1, 2, 0.8, 0.125);
  const auto rows = theorem_report(inst, {5, 10, 20}, 10000, 0.1, rng);
  REQUIRE(rows.size() == 4);
  CHECK(std::count_if(rows.begin(), rows.end(), [](const TheoremRow& r) { return r.at_sample_complexity; }) == 1);
  for (const auto& r : rows) {
    CHECK(r.empirical <= r.bound + r.half_width);
    CHECK(r.half_width == doctest::Approx(3 * std::sqrt(r.empirical * (1 - r.empirical) / r.trials)));
  }
  CHECK_THROWS_WITH(theorem_report(TheoremInstance::make(2, 1, {CD::uniform(2)}, CD::uniform(2)), {5}, 10, 0.1, rng),
                    doctest::Contains("at least two skills"));
}

TEST_CASE("coverage") {
  const auto spec = maze::load_maze("S.#\n...\n#..");  // 7 free tiles
  SkillRunSummary s = SkillRunSummary::for_maze(spec, 2);
  CHECK(coverage(s, spec) == 0.0);
  s.add_visit(spec.cell_index({0, 0}), 0);
  s.add_visit(spec.cell_index({1, 1}), 1);
  CHECK(coverage(s, spec) == doctest::Approx(2.0 / 7.0));
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c)
      if (spec.is_free({c, r})) s.add_visit(spec.cell_index({c, r}), 0);
  CHECK(coverage(s, spec) == 1.0);

  const auto big = maze::load_maze("S......\n.......");  // 14 free tiles
  SkillRunSummary h = SkillRunSummary::for_maze(big, 3);
  for (int c = 0; c < 7; ++c) h.add_visit(big.cell_index({c, 0}), c % 3);
  CHECK(coverage(h, big) == 0.5);
  CHECK_THROWS(h.add_visit(-1, 0));
  CHECK_THROWS(h.add_visit(0, 3));
}

TEST_CASE("coverage never decreases as trajectories are appended") {
  const auto spec = maze::load_maze(maze::bundled_layout("tree7"));
  const maze::EnvConfig env;
  const maze::Policy pol = [](const Vector2&, int, Rng& rng) {
    maze::ActionSample a;
    a.action = {0.95 * (2 * uniform01(rng) - 1), 0.95 * (2 * uniform01(rng) - 1)};
    return a;
  };
  Rng rng(6);
  SkillRunSummary s = SkillRunSummary::for_maze(spec, 3);
  double prev = 0.0;
  for (int e = 0; e < 30; ++e) {
    s.add_trajectory(spec, maze::rollout(spec, env, pol, e % 3, rng));
    const double c = coverage(s, spec);
    CHECK(c >= prev);
    prev = c;
  }
  CHECK(s.total() == 30 * 51);
}

TEST_CASE("plug-in mutual information") {
  Matrix product(3, 2);
  product << 2, 4,
             1, 2,
             3, 6;
  CHECK(std::abs(plugin_mi(product)) < 1e-15);
  CHECK(plugin_mi(Matrix(Matrix::Identity(2, 2) * 5.0)) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  Rng rng(7);
  for (int t = 0; t < 20; ++t) {
    Matrix c(4, 3);
    for (Index i = 0; i < c.size(); ++i) c.data()[i] = std::floor(uniform01(rng) * 10);
    if (c.sum() == 0) continue;
    CHECK(plugin_mi(c) == doctest::Approx(mi_oracle(c)).epsilon(1e-12));
    CHECK(plugin_mi(c) >= 0.0);
  }
  CHECK_THROWS(plugin_mi(Matrix(Matrix::Zero(2, 2))));
}

TEST_CASE("spearman") {
  const Vector x = (Vector(5) << 1, 2, 3, 4, 5).finished();
  CHECK(spearman(x, Vector(x.array().exp())) == doctest::Approx(1.0));
  CHECK(spearman(x, Vector(-x)) == doctest::Approx(-1.0));
  const Vector tied = (Vector(4) << 1, 2, 2, 3).finished();
  const Vector y = (Vector(4) << 10, 20, 30, 40).finished();
  // Ranks (1, 2.5, 2.5, 4) against (1, 2, 3, 4).
  CHECK(spearman(tied, y) == doctest::Approx(4.5 / std::sqrt(4.5 * 5.0)));
}

TEST_CASE("gaussian toy") {
  Rng rng(8);
  const ToyConfig cfg;
  const auto rows = gaussian_toy(cfg, {0.0, 50.0}, rng);
  REQUIRE(rows.size() == 2);
  // d = 0 against an independent baseline where every sample comes from one
  // distribution. The positive's softmax weight then has mean exactly 1/(M+1).
  Rng base_rng(80);
  const int n = 20000;
  Vector obj(n), weight(n);
  for (int i = 0; i < n; ++i) {
    auto draw = [&] {
      Vector v(5);
      for (int c = 0; c < 5; ++c) v[c] = standard_normal(base_rng);
      return v;
    };
    const Vector a = draw(), p = draw();
    double denom = std::exp(-(p - a).squaredNorm());
    const double num = denom;
    for (int k = 0; k < 4; ++k) denom += std::exp(-(draw() - a).squaredNorm());
    obj[i] = std::log(num / denom);
    weight[i] = num / denom;
  }
  CHECK(std::abs(weight.mean() - 0.2) < 4 * std::sqrt((weight.array() - weight.mean()).square().mean() / n));
  const double base_sd = std::sqrt((obj.array() - obj.mean()).square().mean());
  const double se = std::sqrt(base_sd * base_sd / n + rows[0].std_objective * rows[0].std_objective / cfg.samples);
  CHECK(std::abs(rows[0].mean_objective - obj.mean()) < 4 * se);
  CHECK(rows[1].mean_objective <= 0.0);
  CHECK(rows[1].mean_objective > -1e-6);

  const auto grid = linspace(0.0, 6.0, 20);
  CHECK(grid.size() == 20);
  CHECK(grid.back() == 6.0);
  const auto sweep = gaussian_toy(cfg, grid, rng);
  Vector d(20), m(20);
  for (int i = 0; i < 20; ++i) {
    d[i] = sweep[static_cast<std::size_t>(i)].distance;
    m[i] = sweep[static_cast<std::size_t>(i)].mean_objective;
  }
  CHECK(spearman(d, m) >= 0.95);
  CHECK_THROWS(gaussian_toy(cfg, {}, rng));
  CHECK_THROWS(gaussian_toy(cfg, {-1.0}, rng));
}
