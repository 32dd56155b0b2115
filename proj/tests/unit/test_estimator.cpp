#include <cmath>
#include <vector>

#include "doctest.h"

#include "bhgen/ensemble.hpp"
#include "bhgen/error.hpp"
#include "bhgen/estimator.hpp"

using namespace bhgen;

namespace {

TypeCounts counts(std::int64_t z, std::int64_t g, std::int64_t zpos) {
  TypeCounts c;
  c.Z = z;
  c.G = g;
  c.Zpos = zpos;
  c.GB = g;
  return c;
}

ProcessSpec binary_split() {
  ProcessSpec s;
  s.lifetime = {LifetimeDistribution::lognormal(9.3, 2.54)};
  s.offspring_type1 = OffspringDistribution::scalar({0, 2}, {0.2, 0.8});
  s.p_label_loss = 0.01;
  s.initial = {InitialCells{}};
  return s;
}

}  // namespace

TEST_CASE("average generation") {
  CHECK(*average_generation(counts(3, 8, 3)) == doctest::Approx(8.0 / 3));
  CHECK(*average_generation(counts(1, 0, 1)) == 0.0);
  CHECK_FALSE(average_generation(counts(0, 0, 0)).has_value());
}

TEST_CASE("label estimate") {
  CHECK(*label_estimate(counts(17, 40, 17), 0.01, 3.0) == 0.0);
  CHECK_FALSE(label_estimate(counts(0, 0, 0), 0.01, 3.0).has_value());
  CHECK_FALSE(label_estimate(counts(5, 9, 0), 0.01, 3.0).has_value());

  const double f = (2 * std::pow(0.99, 3) + std::pow(0.99, 2)) / 3;
  CHECK(f == doctest::Approx(0.9735660).epsilon(1e-7));
  CHECK(label_estimate_from_fraction(f, 0.01, 1.0) == doctest::Approx(2.6789).epsilon(0.0001 / 2.6789));
  CHECK(label_estimate_from_fraction(f, 0.01, 1.0) == -std::log(f) / (0.01 * 1.0));

  // Zpos = Z e^{-p t x} recovers x
  const double p = 0.02, t = 5.0, x = 1.7;
  CHECK(label_estimate_from_fraction(std::exp(-p * t * x), p, t) == doctest::Approx(x).epsilon(1e-14));

  // ratio only
  const double a = *label_estimate(counts(300, 0, 250), 0.05, 10.0);
  const double b = *label_estimate(counts(3000, 0, 2500), 0.05, 10.0);
  CHECK(a == doctest::Approx(b).epsilon(1e-15));

  CHECK_THROWS_AS(label_estimate(counts(5, 9, 3), 0.0, 3.0), Error);
  CHECK_THROWS_AS(label_estimate(counts(5, 9, 3), 0.1, 0.0), Error);
}

TEST_CASE("normalised points") {
  const ProcessSpec spec = binary_split();
  const ProcessConstants k = ProcessConstants::calibrate(spec);
  const auto& c = k.single;
  const double t = 50.0;
  const double z = c.c * std::exp(c.alpha * t);
  const double g = c.c * c.h * c.alpha_prime * t * std::exp(c.alpha * t);

  // integer counts: compare against the exact scaling of the rounded values
  Snapshot s;
  s.t = t;
  s.counts[0] = counts(std::llround(z), std::llround(g), 0);
  const EstimatorPoint e = normalized_point(s, spec.spec_hash(), k, 1, 0.01);
  CHECK(*e.w_z == doctest::Approx(std::llround(z) / z).epsilon(1e-14));
  CHECK(*e.w_g == doctest::Approx(std::llround(g) / g).epsilon(1e-14));
  CHECK(*e.w_z == doctest::Approx(1.0).epsilon(0.02));
  CHECK(*e.w_g == doctest::Approx(1.0).epsilon(0.02));

  Snapshot zero;
  zero.counts[0] = counts(1, 0, 1);
  const EstimatorPoint e0 = normalized_point(zero, spec.spec_hash(), k, 1, 0.01);
  CHECK(*e0.w_z == doctest::Approx(1.0 / c.c));
  CHECK_FALSE(e0.w_g.has_value());
  // every cell still labeled: log 1 = 0 even at t = 0
  CHECK(e0.label_est == 0.0);

  CHECK_THROWS_AS(normalized_point(s, "0000000000000000", k, 1, 0.01), Error);
}

TEST_CASE("w_z has unit mean at 96h") {
  const ProcessSpec spec = binary_split();
  const ProcessConstants k = ProcessConstants::calibrate(spec);
  std::vector<double> times;
  for (int i = 0; i <= 96; i += 8) times.push_back(i);
  const auto trajs = run_ensemble(spec, times, 1000, 20190401, 2);
  const EnsembleTable table = tabulate(trajs, k, spec.p_label_loss, times);
  const auto wz = column(table, times.size() - 1, 1, &EstimatorPoint::w_z, false);
  const auto ms = mean_stderr(wz);
  CHECK(std::abs(*ms.mean - 1.0) <= 3 * *ms.stderr);

  // difference paths shrink over the last three observation times
  std::vector<double> med;
  for (std::size_t i = times.size() - 3; i < times.size(); ++i) {
    std::vector<double> d;
    for (const auto& rec : table.replicates) {
      if (!rec.survives()) continue;
      const auto& p = rec.estimates[i][0];
      d.push_back(std::abs(*p.w_z - *p.w_g));
    }
    med.push_back(median(d));
  }
  CHECK(med[1] < med[0]);
  CHECK(med[2] < med[1]);
}

TEST_CASE("label estimator bias given the tree is of order p") {
  // E(Zpos/Z | tree) removes label-sampling noise, leaving the deterministic bias
  ProcessSpec spec = binary_split();
  spec.initial = {InitialCells{1, 100, true}};
  SimulationOptions opt;
  opt.retain_generations = true;
  const std::vector<double> t{96.0};
  for (std::uint64_t rep = 0; rep < 5; ++rep) {
    const Trajectory tr = simulate(spec, RngStream(20190405, rep), t, opt);
    const Snapshot& s = tr.snapshots[0];
    const double avg = *average_generation(s, 1);
    std::vector<double> bias;
    for (double p : {0.1, 0.01, 0.001}) {
      const double f = expected_label_fraction(s, p, 1);
      bias.push_back(std::abs(label_estimate_from_fraction(f, p, 96.0) * 96.0 - avg));
    }
    CHECK(bias[1] < bias[0]);
    CHECK(bias[2] < bias[1]);
    CHECK(bias[1] < 0.2 * bias[0]);
  }
}
