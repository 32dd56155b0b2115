#include "bhgen/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include <fmt/format.h>

#include "bhgen/error.hpp"

namespace bhgen {

std::vector<Trajectory> run_ensemble(const ProcessSpec& spec,
                                     std::span<const double> observation_times,
                                     std::uint64_t replicates, std::uint64_t master_seed,
                                     unsigned jobs, const SimulationOptions& options) {
  spec.validate();
  std::vector<Trajectory> out(replicates);
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (;;) {
      const std::uint64_t i = next.fetch_add(1);
      if (i >= replicates) return;
      try {
        out[i] = simulate(spec, RngStream(master_seed, i), observation_times, options);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(replicates);
        return;
      }
    }
  };

  const unsigned n_threads = static_cast<unsigned>(
      std::clamp<std::uint64_t>(jobs == 0 ? 1 : jobs, 1, std::max<std::uint64_t>(replicates, 1)));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n_threads);
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

EnsembleTable tabulate(std::span<const Trajectory> trajectories, const ProcessConstants& consts,
                       double p_label_loss, std::span<const double> times) {
  EnsembleTable table;
  table.spec_hash = consts.spec_hash;
  table.n_types = consts.n_types;
  table.p_label_loss = p_label_loss;
  table.times.assign(times.begin(), times.end());
  table.replicates.reserve(trajectories.size());
  for (std::size_t r = 0; r < trajectories.size(); ++r) {
    const auto& traj = trajectories[r];
    if (traj.spec_hash != consts.spec_hash) {
      throw Error(ErrorCode::mismatched_spec,
                  fmt::format("trajectory {} has spec hash {}, expected {}", r, traj.spec_hash,
                              consts.spec_hash));
    }
    ReplicateRecord rec;
    rec.replicate = traj.stream_index;
    rec.extinct = traj.extinct;
    rec.capped = traj.capped;
    rec.snapshots = traj.snapshots;
    for (auto& s : rec.snapshots) {
      s.has_generations = false;
      for (auto& g : s.generations) g.clear();
    }
    table.replicates.push_back(std::move(rec));
  }
  renormalize(table, consts);
  return table;
}

void renormalize(EnsembleTable& table, const ProcessConstants& consts) {
  for (auto& rec : table.replicates) {
    rec.estimates.assign(rec.snapshots.size(), {});
    for (std::size_t i = 0; i < rec.snapshots.size(); ++i) {
      for (int type = 1; type <= table.n_types; ++type) {
        rec.estimates[i][type - 1] = normalized_point(rec.snapshots[i], table.spec_hash, consts,
                                                      type, table.p_label_loss);
      }
    }
  }
}

std::vector<double> column(const EnsembleTable& table, std::size_t index, int cell_type,
                           std::optional<double> EstimatorPoint::*field, bool survivors_only) {
  std::vector<double> out;
  for (const auto& rec : table.replicates) {
    if (rec.capped || index >= rec.estimates.size()) continue;
    if (survivors_only && !rec.survives()) continue;
    const auto& v = rec.estimates[index][cell_type - 1].*field;
    if (v) out.push_back(*v);
  }
  return out;
}

const QuantityStat* EnsembleSummary::find(double t, int cell_type, const std::string& quantity,
                                          bool survivors_only) const {
  for (const auto& r : rows) {
    if (r.t == t && r.cell_type == cell_type && r.quantity == quantity &&
        r.survivors_only == survivors_only) {
      return &r;
    }
  }
  return nullptr;
}

EnsembleSummary summarize(const EnsembleTable& table, const ProcessConstants& consts) {
  if (table.spec_hash != consts.spec_hash) {
    throw Error(ErrorCode::mismatched_spec,
                fmt::format("ensemble spec hash {} does not match constants hash {}",
                            table.spec_hash, consts.spec_hash));
  }
  EnsembleSummary out;
  out.n_total = table.replicates.size();
  for (const auto& rec : table.replicates) {
    if (rec.capped) {
      ++out.n_capped;
    } else if (rec.survives()) {
      ++out.n_surviving;
    }
  }

  using Field = std::optional<double> EstimatorPoint::*;
  for (std::size_t i = 0; i < table.times.size(); ++i) {
    for (int type = 1; type <= table.n_types; ++type) {
      for (bool survivors : {false, true}) {
        auto push = [&](const char* name, std::vector<double> values) {
          out.rows.push_back({table.times[i], type, name, survivors, mean_stderr(values)});
        };
        std::vector<double> z, g;
        for (const auto& rec : table.replicates) {
          if (rec.capped || i >= rec.snapshots.size()) continue;
          if (survivors && !rec.survives()) continue;
          z.push_back(static_cast<double>(rec.snapshots[i].of(type).Z));
          g.push_back(static_cast<double>(rec.snapshots[i].of(type).G));
        }
        push("Z", std::move(z));
        push("G", std::move(g));
        for (auto [name, field] : {std::pair<const char*, Field>{"w_z", &EstimatorPoint::w_z},
                                   {"w_g", &EstimatorPoint::w_g},
                                   {"avg_gen", &EstimatorPoint::avg_gen},
                                   {"label_est", &EstimatorPoint::label_est}}) {
          push(name, column(table, i, type, field, survivors));
        }
      }
    }
  }

  if (table.times.empty()) return out;
  const std::size_t last = table.times.size() - 1;
  // final-time paired samples among survivors
  std::array<std::vector<double>, 2> wz, wg;
  std::vector<double> wz1, wz2, wg1, wg2;
  for (const auto& rec : table.replicates) {
    if (rec.capped || !rec.survives() || last >= rec.estimates.size()) continue;
    const auto& e = rec.estimates[last];
    for (int type = 1; type <= table.n_types; ++type) {
      const auto& p = e[type - 1];
      if (p.w_z && p.w_g) {
        wz[type - 1].push_back(*p.w_z);
        wg[type - 1].push_back(*p.w_g);
      }
    }
    if (table.n_types == 2) {
      if (e[0].w_z && e[1].w_z) {
        wz1.push_back(*e[0].w_z);
        wz2.push_back(*e[1].w_z);
      }
      if (e[0].w_g && e[1].w_g) {
        wg1.push_back(*e[0].w_g);
        wg2.push_back(*e[1].w_g);
      }
    }
  }
  auto safe_pearson = [](const std::vector<double>& a,
                         const std::vector<double>& b) -> std::optional<double> {
    try {
      return pearson(a, b);
    } catch (const Error&) {
      return std::nullopt;
    }
  };
  for (int type = 1; type <= table.n_types; ++type) {
    auto& fs = out.final_stats[type - 1];
    if (!wz[type - 1].empty()) fs.ks_wz_wg = ks_two_sample(wz[type - 1], wg[type - 1]);
    fs.pearson_wz_wg = safe_pearson(wz[type - 1], wg[type - 1]);
  }
  if (table.n_types == 2) {
    out.pearson_wz1_wz2 = safe_pearson(wz1, wz2);
    out.pearson_wg1_wg2 = safe_pearson(wg1, wg2);
  }
  return out;
}

}  // namespace bhgen
