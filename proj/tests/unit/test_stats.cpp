#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"

#include "bhgen/ensemble.hpp"
#include "bhgen/error.hpp"
#include "bhgen/stats.hpp"

using namespace bhgen;

TEST_CASE("ecdf") {
  const Ecdf one({1.0});
  CHECK(one(0.999) == 0.0);
  CHECK(one(1.0) == 1.0);
  const Ecdf four({4, 2, 3, 1});
  CHECK(four(2.5) == 0.5);
  CHECK(four(2.0) == 0.5);
  CHECK_THROWS_AS(Ecdf({}), Error);
}

TEST_CASE("ks two sample") {
  const std::vector<double> a{0.3, 1.2, 5.0, 2.2}, zeros{0, 0}, ones{1, 1};
  CHECK(ks_two_sample(a, a) == 0.0);
  CHECK(ks_two_sample(zeros, ones) == 1.0);
  const std::vector<double> b{0.1, 1.2, 7.0};
  CHECK(ks_two_sample(a, b) == ks_two_sample(b, a));
  const std::vector<double> empty;
  CHECK_THROWS_AS(ks_two_sample(empty, a), Error);
}

TEST_CASE("ks under the null stays below the 5% critical value") {
  std::mt19937_64 gen(2024);
  std::lognormal_distribution<double> law(0.0, 1.0);
  const double critical = 1.36 * std::sqrt(2.0 / 1e4);
  int below = 0;
  const int trials = 100;
  for (int k = 0; k < trials; ++k) {
    std::vector<double> a(10000), b(10000);
    for (auto& x : a) x = law(gen);
    for (auto& x : b) x = law(gen);
    const double d = ks_two_sample(a, b);
    CHECK(d >= 0.0);
    CHECK(d <= 1.0);
    below += d < critical;
  }
  CHECK(below >= 90);
}

TEST_CASE("pearson") {
  const std::vector<double> a{1.0, 2.5, -3.0, 4.0, 0.5};
  std::vector<double> b, c, d, e;
  for (double x : a) {
    b.push_back(2 * x + 3);
    c.push_back(-x);
    d.push_back(x * x);
  }
  CHECK(pearson(a, b) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(pearson(a, c) == doctest::Approx(-1.0).epsilon(1e-15));
  const double r = pearson(a, d);
  for (double x : a) e.push_back(0.1 * x + 40);
  std::vector<double> f;
  for (double x : d) f.push_back(7 * x - 2);
  CHECK(std::abs(pearson(e, f) - r) <= 1e-12);

  const std::vector<double> flat{1, 1, 1, 1, 1};
  CHECK_THROWS_AS(pearson(a, flat), Error);
  const std::vector<double> one{1.0};
  CHECK_THROWS_AS(pearson(one, one), Error);
}

TEST_CASE("mean and standard error") {
  const std::vector<double> one{4.2};
  const auto s = mean_stderr(one);
  CHECK(*s.mean == 4.2);
  CHECK_FALSE(s.stderr.has_value());
  const std::vector<double> x{1, 2, 3, 4};
  const auto m = mean_stderr(x);
  CHECK(*m.mean == 2.5);
  CHECK(*m.stderr == doctest::Approx(std::sqrt(5.0 / 3.0) / 2.0));
  std::vector<double> many(1000, 0.1);
  CHECK(pairwise_sum(many) == doctest::Approx(100.0).epsilon(1e-15));
  CHECK(median({3, 1, 2}) == 2.0);
  CHECK(median({4, 1, 2, 3}) == 2.5);
}

namespace {

ProcessSpec spec_with(OffspringDistribution law, double p) {
  ProcessSpec s;
  s.lifetime = {LifetimeDistribution::lognormal(9.3, 2.54)};
  s.offspring_type1 = std::move(law);
  s.p_label_loss = p;
  s.initial = {InitialCells{}};
  return s;
}

EnsembleSummary summary_of(const ProcessSpec& spec, std::uint64_t n, const std::vector<double>& t) {
  const ProcessConstants k = ProcessConstants::calibrate(spec);
  const auto trajs = run_ensemble(spec, t, n, 17, 2);
  return summarize(tabulate(trajs, k, spec.p_label_loss, t), k);
}

}  // namespace

TEST_CASE("summaries") {
  const std::vector<double> t{0, 24, 48};
  SUBCASE("one surviving replicate") {
    const auto s = summary_of(spec_with(OffspringDistribution::scalar({2}, {1.0}), 0.01), 1, t);
    CHECK(s.n_total == 1);
    CHECK(s.n_surviving == 1);
    const auto* row = s.find(48, 1, "Z", true);
    REQUIRE(row);
    CHECK_FALSE(row->stat.stderr.has_value());
  }
  SUBCASE("p = 0 gives a zero label estimate") {
    const auto s = summary_of(spec_with(OffspringDistribution::scalar({0, 2}, {0.2, 0.8}), 0.0), 50, t);
    for (double tt : {24.0, 48.0}) {
      const auto* row = s.find(tt, 1, "label_est", false);
      REQUIRE(row);
      CHECK(*row->stat.mean == 0.0);
    }
    CHECK(s.n_surviving <= s.n_total);
    CHECK(*s.final_stats[0].ks_wz_wg >= 0.0);
    CHECK(*s.final_stats[0].ks_wz_wg <= 1.0);
    CHECK(std::abs(*s.final_stats[0].pearson_wz_wg) <= 1.0);
  }
  SUBCASE("no extinction means conditioning changes nothing") {
    const auto s = summary_of(spec_with(OffspringDistribution::scalar({1, 2}, {0.3, 0.7}), 0.01), 40, t);
    CHECK(s.n_surviving == s.n_total);
    for (const char* q : {"Z", "G", "w_z", "w_g", "avg_gen"}) {
      const auto* a = s.find(48, 1, q, false);
      const auto* b = s.find(48, 1, q, true);
      CHECK(*a->stat.mean == *b->stat.mean);
    }
  }
  SUBCASE("hash mismatch") {
    const ProcessSpec spec = spec_with(OffspringDistribution::scalar({2}, {1.0}), 0.01);
    const ProcessConstants k = ProcessConstants::calibrate(spec);
    const auto trajs = run_ensemble(spec, t, 2, 1, 1);
    EnsembleTable table = tabulate(trajs, k, 0.01, t);
    table.spec_hash = "ffffffffffffffff";
    CHECK_THROWS_AS(summarize(table, k), Error);
  }
}

TEST_CASE("prefactor correlation at 96h") {
  std::vector<double> t;
  for (int i = 0; i <= 96; i += 24) t.push_back(i);
  const ProcessSpec spec = spec_with(OffspringDistribution::scalar({0, 2}, {0.2, 0.8}), 0.01);
  const ProcessConstants k = ProcessConstants::calibrate(spec);
  const auto trajs = run_ensemble(spec, t, 1000, 20190401, 2);
  const auto s = summarize(tabulate(trajs, k, 0.01, t), k);
  CHECK(*s.final_stats[0].pearson_wz_wg >= 0.95);
  const auto* wz = s.find(96, 1, "w_z", false);
  CHECK(std::abs(*wz->stat.mean - 1.0) <= 3 * *wz->stat.stderr);
}
