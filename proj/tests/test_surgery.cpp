#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>

#include "skilldisc/surgery/surgery.hpp"

using namespace skilldisc;
using surgery::ConflictStats;
using surgery::detect_conflict;
using surgery::ParameterSlice;
using surgery::project_out;
using surgery::Projected;
using surgery::SurgeryConfig;
using surgery::conflict_ratio;


namespace {

Vector v2(double a, double b) { return (Vector(2) << a, b).finished(); }

Vector randn(Index n, Rng& rng) {
  Vector v(n);
  for (Index i = 0; i < n; ++i) v[i] = standard_normal(rng);
  return v;
}

// A random conflicting pair: the second vector is flipped when the dot is non-negative.
std::pair<Vector, Vector> conflicting_pair(Index n, Rng& rng) {
  Vector a = randn(n, rng), b = randn(n, rng);
  if (a.dot(b) >= 0) b = -b;
  if (a.dot(b) >= 0) b = -a + 0.1 * randn(n, rng);
  return {a, b};
}

}  // namespace

TEST_CASE("detect_conflict is a strict sign test") {
  CHECK_FALSE(detect_conflict(v2(1, 0), v2(0, 1)));
  CHECK(detect_conflict(v2(1, 0), v2(-1, 1)));
  CHECK_FALSE(detect_conflict(v2(1, 1), v2(2, 3)));
  CHECK_THROWS_AS(detect_conflict(v2(1, 0), Vector::Zero(3)), DimensionError);
}

TEST_CASE("project_out examples") {
  CHECK(project_out(v2(-1, 1), v2(1, 0)) == v2(0, 1));
  Rng rng(1);
  const Vector g = randn(10, rng);
  CHECK(project_out(g, g).norm() < 1e-14 * g.norm());
  CHECK_THROWS(project_out(g, Vector(Vector::Zero(10))));
}

TEST_CASE("project_out matches a least-squares oracle in 64 dimensions") {
  Rng rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const Vector g = randn(64, rng), onto = randn(64, rng);
    const Vector r = project_out(g, onto);
    CHECK(std::abs(r.dot(onto)) <= 1e-12 * g.norm() * onto.norm());
    // Residual of regressing g on the single column `onto`.
    const Matrix a = onto;
    const Vector coef = a.colPivHouseholderQr().solve(g);
    CHECK((r - (g - a * coef)).norm() < 1e-12 * g.norm());
  }
}

TEST_CASE("surgery examples") {
  Rng rng(3);
  SurgeryConfig cfg;
  ConflictStats stats;
  SUBCASE("no conflict") {
    const auto r = surgery::surgery(v2(1, 0), v2(0, 1), cfg, stats, rng);
    CHECK(r.g_final == v2(1, 1));
    CHECK(r.projected == Projected::none);
    CHECK(stats.steps_conflicting == 0);
    CHECK(stats.steps_total == 1);
  }
  SUBCASE("p = 1 projects the diversity gradient") {
    cfg.projection_probability = 1.0;
    const auto r = surgery::surgery(v2(-1, 1), v2(1, 0), cfg, stats, rng);
    CHECK(r.g_final == v2(1, 1));
    CHECK(r.projected == Projected::diversity);
    CHECK(stats.steps_conflicting == 1);
  }
  SUBCASE("p = 0 projects the exploration gradient") {
    cfg.projection_probability = 0.0;
    const auto r = surgery::surgery(v2(-1, 1), v2(1, 0), cfg, stats, rng);
    CHECK(r.g_final.isApprox(v2(-0.5, 1.5), 1e-15));
    CHECK(r.projected == Projected::exploration);
  }
  SUBCASE("invalid probability") {
    cfg.projection_probability = 1.5;
    CHECK_THROWS(surgery::surgery(v2(-1, 1), v2(1, 0), cfg, stats, rng));
  }
}

TEST_CASE("conflict_ratio") {
  CHECK(conflict_ratio({10, 0, 0.0}) == 0.0);
  CHECK(conflict_ratio({10, 10, 0.0}) == 1.0);
  CHECK(conflict_ratio({1000, 754, 0.0}) == doctest::Approx(0.754).epsilon(1e-15));
  CHECK_THROWS(conflict_ratio({0, 0, 0.0}));
}

TEST_CASE("projected component is orthogonal and both final components agree with the other gradient") {
  Rng rng(4);
  SurgeryConfig cfg;
  ConflictStats stats;
  for (int trial = 0; trial < 2000; ++trial) {
    const Index n = 2 + static_cast<Index>(uniform01(rng) * 100);
    auto [d, e] = conflicting_pair(n, rng);
    const auto r = surgery::surgery(d, e, cfg, stats, rng);
    const Vector adjusted = r.projected == Projected::diversity ? project_out(d, e) : project_out(e, d);
    const Vector& other = r.projected == Projected::diversity ? e : d;
    CHECK(std::abs(adjusted.dot(other)) <= 1e-12 * adjusted.norm() * other.norm() + 1e-300);
    CHECK(adjusted.dot(other) >= -1e-12 * d.norm() * e.norm());
    CHECK((r.g_final - (adjusted + other)).norm() <= 1e-14 * (d.norm() + e.norm()));
  }
  CHECK(stats.steps_conflicting == stats.steps_total);
}

TEST_CASE("no-conflict pairs pass through bit-identically") {
  Rng rng(5);
  SurgeryConfig cfg;
  ConflictStats stats;
  for (int trial = 0; trial < 1000; ++trial) {
    Vector d = randn(32, rng), e = randn(32, rng);
    if (d.dot(e) < 0) e = -e;
    const Vector sum = d + e;
    const auto r = surgery::surgery(d, e, cfg, stats, rng);
    CHECK(std::memcmp(r.g_final.data(), sum.data(), sizeof(double) * 32) == 0);
  }
  CHECK(stats.steps_conflicting == 0);
}

TEST_CASE("forced branches never modify the protected gradient") {
  Rng rng(6);
  ConflictStats stats;
  for (double p : {0.0, 1.0}) {
    SurgeryConfig cfg;
    cfg.projection_probability = p;
    for (int trial = 0; trial < 200; ++trial) {
      auto [d, e] = conflicting_pair(16, rng);
      const auto r = surgery::surgery(d, e, cfg, stats, rng);
      if (p == 1.0) {
        CHECK(r.projected == Projected::diversity);
        CHECK((r.g_final - e).isApprox(project_out(d, e)));
      } else {
        CHECK(r.projected == Projected::exploration);
        CHECK((r.g_final - d).isApprox(project_out(e, d)));
      }
    }
  }
}

TEST_CASE("branch frequency with p = 0.5 over 1e5 conflicts") {
  Rng rng(7);
  SurgeryConfig cfg;
  ConflictStats stats;
  long div = 0;
  const long n = 100000;
  for (long i = 0; i < n; ++i) {
    auto [d, e] = conflicting_pair(4, rng);
    div += surgery::surgery(d, e, cfg, stats, rng).projected == Projected::diversity;
  }
  CHECK(std::abs(static_cast<double>(div) / n - 0.5) <= 0.01);
}

TEST_CASE("surgery commutes with a common orthogonal rotation") {
  Rng rng(8);
  SurgeryConfig cfg;
  for (int trial = 0; trial < 50; ++trial) {
    const Index n = 8;
    Matrix m(n, n);
    for (Index i = 0; i < m.size(); ++i) m.data()[i] = standard_normal(rng);
    const Matrix q = m.householderQr().householderQ();
    auto [d, e] = conflicting_pair(n, rng);
    const std::uint64_t seed = rng();
    Rng r1(seed), r2(seed);
    ConflictStats s1, s2;
    const Vector rotate_after = q * surgery::surgery(d, e, cfg, s1, r1).g_final;
    const Vector rd = q * d, re = q * e;
    const Vector rotate_before = surgery::surgery(rd, re, cfg, s2, r2).g_final;
    CHECK((rotate_after - rotate_before).norm() <= 1e-10 * (d.norm() + e.norm()));
  }
}

TEST_CASE("slice restricts the projection and leaves other coordinates summed") {
  Rng rng(9);
  SurgeryConfig cfg;
  cfg.projection_probability = 1.0;
  cfg.slice = ParameterSlice{2, 2};
  ConflictStats stats;
  Vector d(4), e(4);
  d << 5, -3, -1, 1;
  e << 2, 7, 1, 0;
  const auto r = surgery::surgery(d, e, cfg, stats, rng);
  CHECK(r.dot == doctest::Approx(-1.0));
  CHECK(r.g_final.head(2) == d.head(2) + e.head(2));
  CHECK(r.g_final.tail(2).isApprox(v2(0, 1) + v2(1, 0)));
  cfg.slice = ParameterSlice{3, 2};
  CHECK_THROWS_AS(surgery::surgery(d, e, cfg, stats, rng), DimensionError);
}

TEST_CASE("float instantiation") {
  Rng rng(10);
  SurgeryConfig cfg;
  cfg.projection_probability = 1.0;
  ConflictStats stats;
  const Eigen::Vector2f d(-1.f, 1.f), e(1.f, 0.f);
  const auto r = surgery::surgery(d, e, cfg, stats, rng);
  CHECK(r.g_final.isApprox(Eigen::Vector2f(1.f, 1.f)));
}
