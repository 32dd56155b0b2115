#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"

#include "bhgen/engine.hpp"
#include "bhgen/error.hpp"
#include "bhgen/oracle.hpp"
#include "bhgen/stats.hpp"

using namespace bhgen;

namespace {

ProcessSpec doubling(double p) {
  ProcessSpec s;
  s.lifetime = {LifetimeDistribution::deterministic(1.0)};
  s.offspring_type1 = OffspringDistribution::scalar({2}, {1.0});
  s.p_label_loss = p;
  s.initial = {InitialCells{}};
  return s;
}

ProcessSpec binary_split(double p = 0.01) {
  ProcessSpec s;
  s.lifetime = {LifetimeDistribution::lognormal(9.3, 2.54)};
  s.offspring_type1 = OffspringDistribution::scalar({0, 2}, {0.2, 0.8});
  s.p_label_loss = p;
  s.initial = {InitialCells{}};
  return s;
}

ProcessSpec two_type() {
  ProcessSpec s;
  s.n_types = 2;
  const auto l = LifetimeDistribution::lognormal(9.3, 2.54);
  s.lifetime = {l, l};
  s.offspring_type1 = OffspringDistribution::from_children({2}, {1.0}, 1.0 / 6);
  s.offspring_type2 = OffspringDistribution::scalar({0, 2}, {0.4, 0.6});
  s.p_label_loss = 0.05;
  s.initial = {InitialCells{1, 3, true}};
  return s;
}

std::vector<double> grid(double t_max, int n) {
  std::vector<double> t(n);
  for (int i = 0; i < n; ++i) t[i] = t_max * i / (n - 1);
  return t;
}

}  // namespace

TEST_CASE("synchronous doubling") {
  const std::vector<double> t{2.5};
  const Trajectory tr = simulate(doubling(0.0), RngStream(1, 0), t);
  const auto& c = tr.snapshots.at(0).of(1);
  CHECK(c.Z == 4);
  CHECK(c.G == 8);
  CHECK(c.Zpos == 4);
  CHECK_FALSE(tr.extinct);
}

TEST_CASE("p = 1 loses the label at the first division") {
  const std::vector<double> t{0.5, 1.5};
  const Trajectory tr = simulate(doubling(1.0), RngStream(1, 0), t);
  CHECK(tr.snapshots[0].of(1).Z == 1);
  CHECK(tr.snapshots[0].of(1).Zpos == 1);
  CHECK(tr.snapshots[1].of(1).Z == 2);
  CHECK(tr.snapshots[1].of(1).Zpos == 0);
}

TEST_CASE("Galton-Watson identity G = n Z") {
  std::vector<double> t;
  for (int n = 0; n <= 12; ++n) t.push_back(n + 0.5);
  ProcessSpec s = doubling(0.0);
  s.offspring_type1 = OffspringDistribution::scalar({1, 2, 3}, {0.2, 0.5, 0.3});
  for (std::uint64_t rep = 0; rep < 5; ++rep) {
    const Trajectory tr = simulate(s, RngStream(9, rep), t);
    for (int n = 0; n <= 12; ++n) {
      const auto& c = tr.snapshots[n].of(1);
      CHECK(c.G == n * c.Z);
    }
  }
}

TEST_CASE("determinism and accounting") {
  const auto times = grid(96.0, 49);
  const ProcessSpec s = binary_split();
  for (std::uint64_t rep = 0; rep < 30; ++rep) {
    const Trajectory a = simulate(s, RngStream(123, rep), times);
    const Trajectory b = simulate(s, RngStream(123, rep), times);
    CHECK(a == b);
    TypeCounts prev;
    for (const auto& snap : a.snapshots) {
      const auto& c = snap.of(1);
      CHECK(c.Zpos >= 0);
      CHECK(c.Zpos <= c.Z);
      CHECK(c.G == c.GB - c.GD);
      CHECK(c.GB >= prev.GB);
      CHECK(c.GD >= prev.GD);
      prev = c;
    }
    if (a.extinct) CHECK(a.snapshots.back().total_living() == 0);
  }
}

TEST_CASE("label never regained and children one generation deeper") {
  SimulationOptions opt;
  opt.record_genealogy = true;
  const std::vector<double> t{80.0};
  for (std::uint64_t rep = 0; rep < 10; ++rep) {
    const Trajectory tr = simulate(two_type(), RngStream(5, rep), t, opt);
    for (const auto& cell : tr.genealogy) {
      CHECK(cell.death_time > cell.birth_time);
      if (cell.parent < 0) {
        CHECK(cell.generation == 0);
        continue;
      }
      const Cell& parent = tr.genealogy.at(static_cast<std::size_t>(cell.parent));
      CHECK(cell.generation == parent.generation + 1);
      CHECK(cell.birth_time == parent.death_time);
      if (cell.labeled) CHECK(parent.labeled);
      if (parent.cell_type == 2) CHECK(cell.cell_type == 2);
    }
  }
}

TEST_CASE("label extremes") {
  const auto times = grid(60.0, 13);
  for (std::uint64_t rep = 0; rep < 20; ++rep) {
    const Trajectory zero = simulate(binary_split(0.0), RngStream(8, rep), times);
    for (const auto& s : zero.snapshots) CHECK(s.of(1).Zpos == s.of(1).Z);
    SimulationOptions opt;
    opt.retain_generations = true;
    const Trajectory one = simulate(binary_split(1.0), RngStream(8, rep), times, opt);
    for (const auto& s : one.snapshots) {
      const auto& g = s.generations[0];
      CHECK(s.of(1).Zpos == std::count(g.begin(), g.end(), 0u));
    }
  }
}

TEST_CASE("tree does not depend on p and labels are nested across p") {
  const auto times = grid(72.0, 7);
  for (std::uint64_t rep = 0; rep < 10; ++rep) {
    const Trajectory a = simulate(binary_split(0.1), RngStream(77, rep), times);
    const Trajectory b = simulate(binary_split(0.001), RngStream(77, rep), times);
    for (std::size_t i = 0; i < times.size(); ++i) {
      CHECK(a.snapshots[i].of(1).Z == b.snapshots[i].of(1).Z);
      CHECK(a.snapshots[i].of(1).G == b.snapshots[i].of(1).G);
      CHECK(a.snapshots[i].of(1).Zpos <= b.snapshots[i].of(1).Zpos);
    }
  }
}

TEST_CASE("population cap flags the trajectory") {
  ProcessSpec s = doubling(0.0);
  s.population_cap = 100;
  const std::vector<double> t{3.5, 20.5};
  const Trajectory tr = simulate(s, RngStream(1, 0), t);
  CHECK(tr.capped);
  CHECK_FALSE(tr.extinct);
}

TEST_CASE("spec validation and hashing") {
  ProcessSpec s = binary_split();
  s.p_label_loss = 1.5;
  CHECK_THROWS_AS(s.validate(), Error);
  s = binary_split();
  s.initial.clear();
  CHECK_THROWS_AS(s.validate(), Error);
  s = binary_split();
  s.initial = {InitialCells{1, 0, true}};
  CHECK_THROWS_AS(s.validate(), Error);
  s = two_type();
  s.offspring_type2.reset();
  CHECK_THROWS_AS(s.validate(), Error);

  CHECK(binary_split(0.1).spec_hash() == binary_split(0.001).spec_hash());
  ProcessSpec other = binary_split();
  other.offspring_type1 = OffspringDistribution::scalar({0, 2}, {0.25, 0.75});
  CHECK(other.spec_hash() != binary_split().spec_hash());

  const std::vector<double> unsorted{2.0, 1.0};
  CHECK_THROWS_AS(simulate(binary_split(), RngStream(1, 0), unsorted), Error);
}

TEST_CASE("expected label fraction") {
  Snapshot s;
  s.counts[0].Z = 3;
  s.generations[0] = {3, 3, 2};
  s.has_generations = true;
  CHECK(expected_label_fraction(s, 0.01, 1) == doctest::Approx(0.9735660).epsilon(1e-7));
  CHECK(expected_label_fraction(s, 0.0, 1) == 1.0);
  s.counts[0].Z = 2;
  s.generations[0] = {0, 0};
  CHECK(expected_label_fraction(s, 0.37, 1) == 1.0);
  Snapshot empty;
  empty.has_generations = true;
  CHECK_THROWS_AS(expected_label_fraction(empty, 0.1, 1), Error);
}

TEST_CASE("type-1 marginal of the two-type process") {
  // type-1 cells follow the single-type process with the type-1 child law
  ProcessSpec s = two_type();
  s.initial = {InitialCells{1, 1, true}};
  ProcessSpec marginal;
  marginal.lifetime = {s.lifetime[0]};
  marginal.offspring_type1 = s.offspring_type1->marginal_type1();
  marginal.initial = {InitialCells{}};
  const double t_end = 72.0;
  const auto grids = moment_grids(marginal, 0.05, t_end);
  const std::vector<double> t{t_end};
  std::vector<double> z, g;
  for (std::uint64_t rep = 0; rep < 1000; ++rep) {
    const Trajectory tr = simulate(s, RngStream(31, rep), t);
    z.push_back(static_cast<double>(tr.snapshots[0].of(1).Z));
    g.push_back(static_cast<double>(tr.snapshots[0].of(1).G));
  }
  const auto mz = mean_stderr(z), mg = mean_stderr(g);
  CHECK(std::abs(*mz.mean - grids[0].at(t_end)) <= 3 * *mz.stderr);
  CHECK(std::abs(*mg.mean - grids[1].at(t_end)) <= 3 * *mg.stderr);
}

TEST_CASE("delabelling a fixed tree") {
  SimulationOptions opt;
  opt.record_genealogy = true;
  opt.retain_generations = true;
  const std::vector<double> t{70.0};
  ProcessSpec s = binary_split(0.05);
  s.initial = {InitialCells{1, 3, true}};
  // first stream whose tree has at least 100 living cells
  Trajectory tr;
  for (std::uint64_t stream = 0; tr.snapshots.empty() || tr.snapshots[0].of(1).Z < 100; ++stream) {
    REQUIRE(stream < 50);
    tr = simulate(s, RngStream(4, stream), t, opt);
  }
  RngStream rng(4, 1000);
  std::vector<double> counts;
  for (int m = 0; m < 2000; ++m) {
    counts.push_back(static_cast<double>(redelabel_count(tr.genealogy, 0.05, 70.0, 1, rng)));
  }
  const double z = static_cast<double>(tr.snapshots[0].of(1).Z);
  const double expected = z * expected_label_fraction(tr.snapshots[0], 0.05, 1);
  const auto ms = mean_stderr(counts);
  CHECK(std::abs(*ms.mean - expected) <= 3 * *ms.stderr);
  // p = 0 keeps every label
  CHECK(redelabel_count(tr.genealogy, 0.0, 70.0, 1, rng) == tr.snapshots[0].of(1).Z);
}
