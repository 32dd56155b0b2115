#include "bhgen/engine.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "bhgen/error.hpp"

namespace bhgen {
namespace {

constexpr std::uint64_t kLabelSalt = 0x6c6162656cULL;

struct Living {
  double death;
  std::uint64_t id;
  std::uint32_t generation;
  std::uint8_t cell_type;
  bool labeled;
};

// min-heap on (death, id) via std::push_heap's max-heap convention
struct LaterFirst {
  bool operator()(const Living& a, const Living& b) const noexcept {
    if (a.death != b.death) return a.death > b.death;
    return a.id > b.id;
  }
};

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

void append_offspring(std::string& out, const OffspringDistribution& d) {
  out += fmt::format("[arity={};", d.arity());
  for (std::size_t i = 0; i < d.support().size(); ++i) {
    out += fmt::format("({},{}):{:.17g};", d.support()[i].type1, d.support()[i].type2,
                       d.probs()[i]);
  }
  out += "]";
}

}  // namespace

void ProcessSpec::validate() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::invalid_argument, msg); };
  if (n_types != 1 && n_types != 2) fail(fmt::format("n_types must be 1 or 2, got {}", n_types));
  if (lifetime.size() != static_cast<std::size_t>(n_types)) {
    fail(fmt::format("expected {} lifetime distributions, got {}", n_types, lifetime.size()));
  }
  if (!offspring_type1) fail("offspring_type1 is required");
  if (n_types == 1) {
    if (offspring_type1->arity() != 1) fail("single-type offspring law must be scalar");
    if (offspring_type2) fail("offspring_type2 is only allowed with n_types = 2");
  } else {
    if (offspring_type1->arity() != 2) fail("type-1 offspring law must be pair-valued");
    if (!offspring_type2) fail("offspring_type2 is required with n_types = 2");
    if (offspring_type2->arity() != 1) fail("type-2 offspring law must be scalar");
  }
  if (!(p_label_loss >= 0.0 && p_label_loss <= 1.0)) {
    fail(fmt::format("p_label_loss must lie in [0,1], got {}", p_label_loss));
  }
  if (initial.empty()) fail("at least one initial cell group is required");
  for (const auto& g : initial) {
    if (g.type < 1 || g.type > n_types) fail(fmt::format("initial cell type {} out of range", g.type));
    if (g.count == 0) fail("initial cell counts must be positive");
  }
  if (population_cap == 0) fail("population_cap must be positive");
}

std::string ProcessSpec::spec_hash() const {
  std::string canon = fmt::format("bhgen-spec-v1;n_types={};", n_types);
  for (const auto& l : lifetime) {
    canon += fmt::format("L:{}:{:.17g}:{:.17g};", static_cast<int>(l.kind()), l.param1(),
                         l.param2());
  }
  if (offspring_type1) append_offspring(canon, *offspring_type1);
  if (offspring_type2) append_offspring(canon, *offspring_type2);
  for (const auto& g : initial) canon += fmt::format("I:{}x{};", g.type, g.count);
  return fmt::format("{:016x}", fnv1a(canon));
}

std::uint64_t ProcessSpec::initial_count(int type) const {
  std::uint64_t n = 0;
  for (const auto& g : initial) {
    if (g.type == type) n += g.count;
  }
  return n;
}

bool ProcessSpec::has_lattice_lifetime() const {
  return std::any_of(lifetime.begin(), lifetime.end(),
                     [](const LifetimeDistribution& l) { return l.is_lattice(); });
}

Trajectory simulate(const ProcessSpec& spec, const RngStream& rng,
                    std::span<const double> observation_times,
                    const SimulationOptions& options) {
  spec.validate();
  if (observation_times.empty()) {
    throw Error(ErrorCode::invalid_argument, "at least one observation time is required");
  }
  for (std::size_t i = 0; i < observation_times.size(); ++i) {
    const double t = observation_times[i];
    if (!(t >= 0.0) || !std::isfinite(t) || (i > 0 && !(t > observation_times[i - 1]))) {
      throw Error(ErrorCode::invalid_argument,
                  "observation times must be finite, nonnegative and strictly increasing");
    }
  }

  RngStream dynamics = rng;
  RngStream labels = rng.substream(kLabelSalt);

  Trajectory traj;
  traj.spec_hash = spec.spec_hash();
  traj.master_seed = rng.master_seed();
  traj.stream_index = rng.stream_index();
  traj.snapshots.reserve(observation_times.size());

  std::array<TypeCounts, 2> counts{};
  std::vector<Living> heap;
  std::uint64_t next_id = 0;
  std::int64_t living = 0;

  auto birth = [&](int type, std::uint32_t generation, bool labeled, double t0,
                   std::int64_t parent) {
    const double death = t0 + spec.lifetime[type - 1].sample(dynamics);
    const std::uint64_t id = next_id++;
    heap.push_back({death, id, generation, static_cast<std::uint8_t>(type), labeled});
    std::push_heap(heap.begin(), heap.end(), LaterFirst{});
    auto& c = counts[type - 1];
    c.Z += 1;
    c.G += generation;
    c.GB += generation;
    if (labeled) c.Zpos += 1;
    ++living;
    if (options.record_genealogy) {
      traj.genealogy.push_back({id, parent, type, generation, labeled, t0, death, 0});
    }
  };

  for (const auto& g : spec.initial) {
    for (std::uint64_t i = 0; i < g.count; ++i) birth(g.type, 0, g.labeled, 0.0, -1);
  }

  const double p = spec.p_label_loss;
  for (const double t_obs : observation_times) {
    while (!heap.empty() && heap.front().death <= t_obs) {
      std::pop_heap(heap.begin(), heap.end(), LaterFirst{});
      const Living cell = heap.back();
      heap.pop_back();
      auto& c = counts[cell.cell_type - 1];
      c.Z -= 1;
      c.G -= cell.generation;
      c.GD += cell.generation;
      if (cell.labeled) c.Zpos -= 1;
      --living;

      const OffspringDistribution& law =
          cell.cell_type == 1 ? *spec.offspring_type1 : *spec.offspring_type2;
      const Offspring kids = law.sample(dynamics);
      if (kids.total() == 0) continue;

      // one draw per division even for unlabeled parents, so runs that differ
      // only in p see the same uniforms and their labels are nested
      const double u = labels.uniform();
      const bool child_label = cell.labeled && !(u < p);

      std::uint32_t n1 = kids.type1;
      std::uint32_t n2 = kids.type2;
      if (cell.cell_type == 2) {
        n2 = kids.type1;  // scalar law: children share the parent's type
        n1 = 0;
      }
      if (options.record_genealogy) traj.genealogy[cell.id].n_children = n1 + n2;
      const auto parent = static_cast<std::int64_t>(cell.id);
      for (std::uint32_t j = 0; j < n1; ++j) {
        birth(1, cell.generation + 1, child_label, cell.death, parent);
      }
      for (std::uint32_t j = 0; j < n2; ++j) {
        birth(2, cell.generation + 1, child_label, cell.death, parent);
      }
      if (static_cast<std::uint64_t>(living) > spec.population_cap) {
        traj.capped = true;
        break;
      }
    }
    if (traj.capped) break;

    Snapshot snap;
    snap.t = t_obs;
    snap.counts = counts;
    if (options.retain_generations) {
      snap.has_generations = true;
      for (int i = 0; i < 2; ++i) snap.generations[i].reserve(counts[i].Z);
      for (const auto& cell : heap) snap.generations[cell.cell_type - 1].push_back(cell.generation);
      for (auto& g : snap.generations) std::sort(g.begin(), g.end());
    }
    traj.snapshots.push_back(std::move(snap));
  }

  traj.extinct = !traj.capped && living == 0;
  return traj;
}

double expected_label_fraction(const Snapshot& snapshot, double p, int cell_type) {
  if (!snapshot.has_generations) {
    throw Error(ErrorCode::invalid_argument, "snapshot does not retain generations");
  }
  const auto& gens = snapshot.generations.at(cell_type - 1);
  if (gens.empty()) {
    throw Error(ErrorCode::empty_population,
                fmt::format("no living type-{} cells at t={}", cell_type, snapshot.t));
  }
  const double keep = 1.0 - p;
  double sum = 0.0;
  for (auto g : gens) sum += std::pow(keep, static_cast<double>(g));
  return sum / static_cast<double>(gens.size());
}

std::int64_t redelabel_count(std::span<const Cell> genealogy, double p, double t,
                             int cell_type, RngStream& rng) {
  // -1: no division draw yet, 0: label kept, 1: label lost
  std::vector<std::int8_t> lost(genealogy.size(), -1);
  std::vector<char> label(genealogy.size(), 0);
  std::int64_t count = 0;
  for (std::size_t i = 0; i < genealogy.size(); ++i) {
    const Cell& cell = genealogy[i];
    if (cell.parent < 0) {
      label[i] = cell.labeled;
    } else {
      const auto parent = static_cast<std::size_t>(cell.parent);
      if (label[parent]) {
        if (lost[parent] < 0) lost[parent] = rng.uniform() < p ? 1 : 0;
        label[i] = lost[parent] == 0;
      }
    }
    if (label[i] && cell.cell_type == cell_type && cell.birth_time <= t &&
        t < cell.death_time) {
      ++count;
    }
  }
  return count;
}

}  // namespace bhgen
