#include "bhgen/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <fmt/format.h>

#include "json.hpp"

#include "bhgen/ensemble.hpp"
#include "bhgen/error.hpp"
#include "bhgen/io.hpp"
#include "bhgen/oracle.hpp"
#include "bhgen/stats.hpp"

namespace bhgen {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string num(double x) { return fmt::format("{:.17g}", x); }

void kv(std::string& out, std::string_view key, double value) {
  out += fmt::format("{}={}\n", key, num(value));
}

std::string run_suffix(std::size_t index, std::size_t n_runs) {
  return n_runs == 1 ? std::string{} : fmt::format("_p{}", index);
}

std::ifstream open_input(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, fmt::format("cannot open {}", path.string()));
  return in;
}

// Observation times closest to 1/4, 1/2, 3/4 and all of `horizon`.
std::vector<std::size_t> checkpoints(const std::vector<double>& times, double horizon) {
  std::vector<std::size_t> idx;
  for (double frac : {0.25, 0.5, 0.75, 1.0}) {
    const double target = frac * horizon;
    std::size_t best = 0;
    for (std::size_t i = 1; i < times.size(); ++i) {
      if (std::abs(times[i] - target) < std::abs(times[best] - target)) best = i;
    }
    if (times[best] > 0.0 && times[best] <= horizon + 1e-9 &&
        std::find(idx.begin(), idx.end(), best) == idx.end()) {
      idx.push_back(best);
    }
  }
  return idx;
}

std::size_t nearest_index(const std::vector<double>& times, double target) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (std::abs(times[i] - target) < std::abs(times[best] - target)) best = i;
  }
  return best;
}

Criterion z_criterion(std::string name, const std::vector<double>& samples, double expected,
                      bool informational = false) {
  const MeanStderr ms = mean_stderr(samples);
  Criterion c{std::move(name), false, 0.0, 3.0, "<=", informational};
  if (!ms.mean) {
    c.value = std::numeric_limits<double>::infinity();
  } else if (!ms.stderr || *ms.stderr == 0.0) {
    const bool same = std::abs(*ms.mean - expected) <= 1e-9 * std::max(1.0, std::abs(expected));
    c.value = same ? 0.0 : std::numeric_limits<double>::infinity();
  } else {
    c.value = std::abs(*ms.mean - expected) / *ms.stderr;
  }
  c.pass = c.value <= c.threshold;
  return c;
}

Criterion bound(std::string name, std::optional<double> value, double threshold,
                std::string comparison, bool informational = false) {
  Criterion c{std::move(name), false, value.value_or(std::numeric_limits<double>::quiet_NaN()),
              threshold, std::move(comparison), informational};
  if (value) {
    if (c.comparison == ">=") c.pass = *value >= threshold;
    else if (c.comparison == "<") c.pass = *value < threshold;
    else c.pass = *value <= threshold;
  }
  return c;
}

std::int64_t accounting_violations(const EnsembleTable& table) {
  std::int64_t bad = 0;
  for (const auto& rec : table.replicates) {
    if (rec.snapshots.size() != table.times.size()) ++bad;
    for (const auto& s : rec.snapshots) {
      for (int type = 1; type <= 2; ++type) {
        const auto& c = s.of(type);
        if (c.Z < 0 || c.G < 0 || c.Zpos < 0 || c.Zpos > c.Z || c.G != c.GB - c.GD ||
            (c.Z == 0 && c.G != 0)) {
          ++bad;
        }
        if (type > table.n_types && (c.Z != 0 || c.GB != 0)) ++bad;
      }
    }
    if (rec.extinct && !rec.snapshots.empty() && rec.snapshots.back().total_living() != 0) ++bad;
  }
  return bad;
}

// |label_est t - avg_gen| over survivors at the final time.
std::optional<double> label_bias_median(const EnsembleTable& table, int type) {
  if (table.times.empty()) return std::nullopt;
  const std::size_t last = table.times.size() - 1;
  std::vector<double> d;
  for (const auto& rec : table.replicates) {
    if (rec.capped || !rec.survives()) continue;
    const auto& e = rec.estimates[last][type - 1];
    if (e.label_est && e.avg_gen) d.push_back(std::abs(*e.label_est * e.t - *e.avg_gen));
  }
  if (d.empty()) return std::nullopt;
  return median(std::move(d));
}

std::optional<double> diff_median(const EnsembleTable& table, std::size_t index, int type) {
  std::vector<double> d;
  for (const auto& rec : table.replicates) {
    if (rec.capped || !rec.survives()) continue;
    const auto& e = rec.estimates[index][type - 1];
    if (e.w_z && e.w_g) d.push_back(std::abs(*e.w_z - *e.w_g));
  }
  if (d.empty()) return std::nullopt;
  return median(std::move(d));
}

}  // namespace

json constants_to_json(const ProcessConstants& c) {
  json j;
  j["n_types"] = c.n_types;
  j["lattice_warning"] = c.lattice_warning();
  if (c.n_types == 1) {
    const auto& s = c.single;
    j["h"] = s.h;
    j["v"] = s.v;
    j["alpha"] = s.alpha;
    j["alpha_prime"] = s.alpha_prime;
    j["c"] = s.c;
    j["k"] = s.k;
    j["var_limit"] = s.var_limit;
    j["generation_slope"] = s.generation_slope();
  } else {
    const auto& t = c.two;
    // NaN entries serialise as null
    for (auto [k, v] : std::initializer_list<std::pair<const char*, double>>{
             {"h1", t.h1}, {"h2", t.h2}, {"mu", t.mu}, {"alpha1", t.alpha1},
             {"alpha2", t.alpha2}, {"alpha1_prime", t.alpha1_prime},
             {"alpha2_prime", t.alpha2_prime}, {"c1", t.c1}, {"c2", t.c2}, {"d1", t.d1},
             {"d2", t.d2}, {"c12", t.c12}, {"d12", t.d12}, {"c21", t.c21}, {"d21", t.d21},
             {"c21_renewal", t.c21_renewal}, {"d21_renewal", t.d21_renewal}}) {
      j[k] = v;
    }
    j["ordering"] = to_string(t.ordering);
    j["type2_generation_slope"] = t.type2_generation_slope();
  }
  return j;
}

std::string cmd_malthus(const RunConfig& config) {
  const ProcessConstants consts = ProcessConstants::calibrate(config.process);
  std::string out = fmt::format("spec_hash={}\n", consts.spec_hash);
  if (consts.n_types == 1) {
    const auto& s = consts.single;
    kv(out, "h", s.h);
    kv(out, "v", s.v);
    kv(out, "alpha", s.alpha);
    kv(out, "alpha_prime", s.alpha_prime);
    kv(out, "c", s.c);
    kv(out, "k", s.k);
    kv(out, "var_limit", s.var_limit);
    kv(out, "generation_slope", s.generation_slope());
  } else {
    const auto& t = consts.two;
    out += fmt::format("ordering={}\n", to_string(t.ordering));
    kv(out, "h1", t.h1);
    kv(out, "h2", t.h2);
    kv(out, "mu", t.mu);
    kv(out, "alpha1", t.alpha1);
    kv(out, "alpha2", t.alpha2);
    kv(out, "alpha1_prime", t.alpha1_prime);
    kv(out, "alpha2_prime", t.alpha2_prime);
    kv(out, "c1", t.c1);
    kv(out, "d1", t.d1);
    kv(out, "c2", t.c2);
    kv(out, "d2", t.d2);
    kv(out, "c12", t.c12);
    kv(out, "d12", t.d12);
    kv(out, "c21", t.c21);
    kv(out, "d21", t.d21);
    kv(out, "c21_renewal", t.c21_renewal);
    kv(out, "d21_renewal", t.d21_renewal);
    kv(out, "type2_generation_slope", t.type2_generation_slope());
  }
  if (consts.lattice_warning()) {
    out += "warning: lattice lifetime law, the non-lattice renewal asymptotics do not apply\n";
  }
  return out;
}

void cmd_ensemble(const RunConfig& config, const fs::path& out_dir, unsigned jobs) {
  ProcessSpec spec = config.process;
  spec.validate();
  const ProcessConstants consts = ProcessConstants::calibrate(spec);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::io, fmt::format("cannot create {}: {}", out_dir.string(), ec.message()));

  const std::vector<double> ps = config.label_probabilities();
  json runs = json::array();
  for (std::size_t i = 0; i < ps.size(); ++i) {
    spec.p_label_loss = ps[i];
    const auto trajs =
        run_ensemble(spec, config.observation_times, config.replicates, config.master_seed, jobs);
    const EnsembleTable table = tabulate(trajs, consts, ps[i], config.observation_times);
    const EnsembleSummary summary = summarize(table, consts);

    const std::string sfx = run_suffix(i, ps.size());
    const std::string traj_name = "trajectories" + sfx + ".csv";
    const std::string est_name = "estimator" + sfx + ".csv";
    const std::string sum_name = "summary" + sfx + ".csv";
    std::ostringstream t, e, s;
    write_trajectory_csv(t, table);
    write_estimator_csv(e, table);
    write_summary_csv(s, summary);
    write_text_file(out_dir / traj_name, t.str());
    write_text_file(out_dir / est_name, e.str());
    write_text_file(out_dir / sum_name, s.str());
    runs.push_back({{"p", ps[i]},
                    {"trajectories", traj_name},
                    {"estimator", est_name},
                    {"summary", sum_name},
                    {"n_surviving", summary.n_surviving},
                    {"n_capped", summary.n_capped}});
  }

  json manifest;
  manifest["version"] = RunConfig::current_version;
  manifest["spec_hash"] = consts.spec_hash;
  manifest["config"] = config.to_json();
  manifest["constants"] = constants_to_json(consts);
  manifest["runs"] = std::move(runs);
  write_text_file(out_dir / "manifest.json", manifest.dump(2) + "\n");
}

void cmd_oracle(const RunConfig& config, const fs::path& out_csv, std::optional<double> dt) {
  const ProcessSpec& spec = config.process;
  spec.validate();
  const double step = dt ? *dt : config.oracle_dt ? *config.oracle_dt : default_dt(spec);
  double t_max = 0.0;
  if (config.oracle_t_max) {
    t_max = *config.oracle_t_max;
  } else if (!config.observation_times.empty()) {
    t_max = config.observation_times.back();
  }
  const auto grids = moment_grids(spec, step, t_max);
  std::ostringstream out;
  write_oracle_csv(out, grids, spec.spec_hash());
  write_text_file(out_csv, out.str());
}

bool Verdict::all_pass() const {
  return std::all_of(criteria.begin(), criteria.end(),
                     [](const Criterion& c) { return c.informational || c.pass; });
}

std::string Verdict::to_json() const {
  json j;
  j["spec_hash"] = spec_hash;
  j["all_pass"] = all_pass();
  json list = json::array();
  for (const auto& c : criteria) {
    list.push_back({{"name", c.name},
                    {"pass", c.pass},
                    {"value", c.value},
                    {"threshold", c.threshold},
                    {"comparison", c.comparison},
                    {"informational", c.informational}});
  }
  j["criteria"] = std::move(list);
  return j.dump(2) + "\n";
}

Verdict cmd_verify(const fs::path& ensemble_dir, const fs::path& oracle_csv,
                   const fs::path& verdict_path) {
  json manifest;
  try {
    manifest = json::parse(read_text_file(ensemble_dir / "manifest.json"));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::io, fmt::format("bad manifest in {}: {}", ensemble_dir.string(), e.what()));
  }
  const RunConfig config = RunConfig::from_json(manifest.at("config"));
  const ProcessSpec& spec = config.process;
  const std::string hash = spec.spec_hash();
  if (manifest.at("spec_hash").get<std::string>() != hash) {
    throw Error(ErrorCode::mismatched_spec, "manifest spec hash does not match its config");
  }
  OracleFile oracle;
  {
    auto in = open_input(oracle_csv);
    oracle = read_oracle_csv(in);
  }
  if (oracle.spec_hash != hash) {
    throw Error(ErrorCode::mismatched_spec,
                fmt::format("oracle spec hash {} does not match ensemble {}", oracle.spec_hash, hash));
  }
  const ProcessConstants consts = ProcessConstants::calibrate(spec);
  const int n_types = spec.n_types;
  const int focus = n_types == 1 ? 1 : 2;
  const bool single_founder = spec.initial_count(1) + spec.initial_count(2) == 1;
  // limit statements need a non-lattice lifetime; finite-time moments do not
  const bool lattice = consts.lattice_warning();

  std::vector<EnsembleTable> tables;
  for (const auto& run : manifest.at("runs")) {
    auto traj = open_input(ensemble_dir / run.at("trajectories").get<std::string>());
    auto est = open_input(ensemble_dir / run.at("estimator").get<std::string>());
    EnsembleTable table = read_ensemble_csv(traj, &est, n_types);
    table.spec_hash = hash;
    table.p_label_loss = run.at("p").get<double>();
    tables.push_back(std::move(table));
  }
  if (tables.empty()) throw Error(ErrorCode::empty_input, "manifest lists no runs");

  Verdict verdict;
  verdict.spec_hash = hash;
  auto& crit = verdict.criteria;

  std::int64_t violations = 0;
  for (const auto& t : tables) violations += accounting_violations(t);
  crit.push_back(bound("accounting", static_cast<double>(violations), 0.0, "<="));

  const EnsembleTable& main = tables.front();
  const auto& times = main.times;
  if (times.empty()) throw Error(ErrorCode::empty_input, "ensemble has no observation times");
  const std::size_t last = times.size() - 1;

  // Monte Carlo moments against the oracle grids
  double horizon = times.back();
  if (!oracle.grids.empty()) horizon = std::min(horizon, oracle.grids.front().t_max() + 1e-9);
  for (std::size_t i : checkpoints(times, horizon)) {
    struct Moment {
      MomentId id;
      const char* label;
      bool informational;
    };
    std::vector<Moment> moments;
    if (n_types == 1) {
      moments = {{MomentId::EZ, "Z", false}, {MomentId::EG, "G", false},
                 {MomentId::EZ2, "Z2", true}, {MomentId::EGZ, "GZ", true},
                 {MomentId::EG2, "G2", true}};
    } else {
      moments = {{MomentId::E1Z2, "Z_type2", false}, {MomentId::E1G2, "G_type2", false}};
    }
    for (const auto& m : moments) {
      const MomentGrid* grid = oracle.find(m.id);
      if (!grid) continue;
      std::vector<double> samples;
      for (const auto& rec : main.replicates) {
        if (rec.capped) continue;
        const auto& c = rec.snapshots[i].of(focus);
        const double z = static_cast<double>(c.Z);
        const double g = static_cast<double>(c.G);
        switch (m.id) {
          case MomentId::EZ: samples.push_back(z); break;
          case MomentId::EG: samples.push_back(g); break;
          case MomentId::EZ2: samples.push_back(z * z); break;
          case MomentId::EGZ: samples.push_back(g * z); break;
          case MomentId::EG2: samples.push_back(g * g); break;
          case MomentId::E1Z2: samples.push_back(z); break;
          case MomentId::E1G2: samples.push_back(g); break;
        }
      }
      crit.push_back(z_criterion(fmt::format("oracle_mean_{}@t={}", m.label, format_value(times[i])),
                                 samples, grid->at(times[i]), m.informational));
    }
  }

  // normalised population: mean against the oracle at the final time, and
  // against its t -> infinity limit of one
  for (int type = 1; type <= n_types; ++type) {
    const auto wz = column(main, last, type, &EstimatorPoint::w_z, false);
    const MomentGrid* grid = oracle.find(n_types == 1 ? MomentId::EZ : MomentId::E1Z2);
    const std::string at = fmt::format("type{}@t={}", type, format_value(times[last]));
    if (grid && type == focus && times[last] <= grid->t_max() + 1e-9) {
      Snapshot unit;
      unit.t = times[last];
      unit.counts[type - 1] = TypeCounts{1, 0, 1, 0, 0};
      const auto scale = normalized_point(unit, hash, consts, type, 0.0).w_z;
      crit.push_back(z_criterion("w_z_mean_" + at, wz, grid->at(times[last]) * *scale));
      crit.push_back(z_criterion("w_z_mean_vs_limit_" + at, wz, 1.0, true));
    } else {
      crit.push_back(z_criterion("w_z_mean_vs_limit_" + at, wz, 1.0, lattice));
    }
  }

  const EnsembleSummary summary = summarize(main, consts);
  for (int type = 1; type <= n_types; ++type) {
    const bool info = type != focus || lattice;
    const auto& fs_ = summary.final_stats[type - 1];
    crit.push_back(bound(fmt::format("pearson_wz_wg_type{}", type), fs_.pearson_wz_wg, 0.95, ">=", info));
    // the KS band is calibrated for one founder cell
    crit.push_back(bound(fmt::format("ks_wz_wg_type{}", type), fs_.ks_wz_wg, 0.08, "<=",
                         info || n_types == 2 || !single_founder));
  }
  if (n_types == 2 && consts.two.ordering == MalthusOrdering::alpha2_less) {
    crit.push_back(bound("pearson_wz1_wz2", summary.pearson_wz1_wz2, 0.85, ">=", lattice));
  }

  // difference paths shrink between half time and the final time
  {
    const std::size_t mid = nearest_index(times, 0.5 * times.back());
    const auto a = diff_median(main, mid, focus);
    const auto b = diff_median(main, last, focus);
    std::optional<double> ratio;
    if (a && b && *a > 0.0) ratio = *b / *a;
    crit.push_back(bound(fmt::format("difference_median_ratio_type{}", focus), ratio, 1.0, "<",
                         n_types == 2 || lattice));
  }

  // label-loss bias shrinks with p
  if (tables.size() > 1) {
    std::vector<std::pair<double, std::optional<double>>> bias;
    for (const auto& t : tables) bias.emplace_back(t.p_label_loss, label_bias_median(t, focus));
    std::sort(bias.begin(), bias.end(), [](auto& x, auto& y) { return x.first > y.first; });
    std::int64_t inversions = 0;
    for (std::size_t i = 0; i < bias.size(); ++i) {
      crit.push_back(bound(fmt::format("label_bias_median@p={}", format_value(bias[i].first)),
                           bias[i].second, 0.0, "<=", true));
      if (i == 0) continue;
      if (!bias[i].second || !bias[i - 1].second || !(*bias[i].second < *bias[i - 1].second)) {
        ++inversions;
      }
    }
    crit.push_back(bound("label_bias_decreasing_in_p", static_cast<double>(inversions), 0.0, "<="));
  }

  // the type-2 prefactor when type-2 grows at the type-1 rate
  if (n_types == 2 && consts.two.ordering == MalthusOrdering::alpha2_less) {
    const double n1 = consts.initial_type1;
    std::vector<double> scaled;
    for (const auto& rec : main.replicates) {
      if (rec.capped) continue;
      scaled.push_back(static_cast<double>(rec.snapshots[last].of(2).Z) *
                       std::exp(-consts.two.alpha1 * times[last]) / n1);
    }
    const MeanStderr ms = mean_stderr(scaled);
    if (ms.mean) {
      crit.push_back(bound("c21_printed_relative_error",
                           std::abs(*ms.mean / consts.two.c21 - 1.0), 0.05, "<=", true));
      crit.push_back(bound("c21_renewal_relative_error",
                           std::abs(*ms.mean / consts.two.c21_renewal - 1.0), 0.05, "<=", true));
    }
  }

  write_text_file(verdict_path, verdict.to_json());
  return verdict;
}

namespace presets {

namespace {
LifetimeDistribution fig_lifetime() { return LifetimeDistribution::lognormal(9.3, 2.54); }
}  // namespace

ProcessSpec lognormal_binary_split() {
  ProcessSpec s;
  s.n_types = 1;
  s.lifetime = {fig_lifetime()};
  s.offspring_type1 = OffspringDistribution::scalar({0, 2}, {0.2, 0.8});
  s.p_label_loss = 0.01;
  s.initial = {InitialCells{1, 1, true}};
  return s;
}

ProcessSpec two_type_alpha1_less(std::uint64_t initial_type1, double p) {
  ProcessSpec s;
  s.n_types = 2;
  s.lifetime = {fig_lifetime(), fig_lifetime()};
  s.offspring_type1 = OffspringDistribution::from_children({2}, {1.0}, 1.0 / 6.0);
  s.offspring_type2 = OffspringDistribution::scalar({2}, {1.0});
  s.p_label_loss = p;
  s.initial = {InitialCells{1, initial_type1, true}};
  return s;
}

ProcessSpec two_type_alpha2_less(std::uint64_t initial_type1, double p) {
  ProcessSpec s = two_type_alpha1_less(initial_type1, p);
  s.offspring_type2 = OffspringDistribution::scalar({0, 2}, {0.4, 0.6});
  return s;
}

}  // namespace presets

namespace {

std::vector<double> hourly(double t_max) {
  std::vector<double> t;
  for (int i = 0; i <= static_cast<int>(t_max); ++i) t.push_back(i);
  return t;
}

std::uint64_t scaled(std::uint64_t n, double scale) {
  return std::max<std::uint64_t>(2, static_cast<std::uint64_t>(std::ceil(static_cast<double>(n) * scale)));
}

struct FigureRun {
  ProcessConstants consts;
  EnsembleTable table;
};

FigureRun run_preset(const ProcessSpec& spec, std::uint64_t replicates, const FigureOptions& o,
                     const std::vector<double>& times) {
  FigureRun r{ProcessConstants::calibrate(spec), {}};
  const auto trajs = run_ensemble(spec, times, replicates, o.master_seed, o.jobs);
  r.table = tabulate(trajs, r.consts, spec.p_label_loss, times);
  return r;
}

std::vector<const ReplicateRecord*> survivors(const EnsembleTable& t, std::size_t limit) {
  std::vector<const ReplicateRecord*> out;
  for (const auto& rec : t.replicates) {
    if (out.size() >= limit) break;
    if (!rec.capped && rec.survives()) out.push_back(&rec);
  }
  return out;
}

void put(std::vector<fs::path>& written, const fs::path& path, const std::string& text) {
  write_text_file(path, text);
  written.push_back(path);
}

std::string opt(const std::optional<double>& v) { return v ? format_value(*v) : std::string{}; }

}  // namespace

std::vector<fs::path> cmd_figures(const fs::path& out_dir, const FigureOptions& o) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::io, fmt::format("cannot create {}: {}", out_dir.string(), ec.message()));
  std::vector<fs::path> written;
  const auto times = hourly(96);
  const std::size_t last = times.size() - 1;

  // single type: 20 surviving paths out of 100
  {
    const FigureRun r = run_preset(presets::lognormal_binary_split(), scaled(100, o.scale), o, times);
    const double alpha = r.consts.single.alpha;
    const auto paths = survivors(r.table, 20);
    std::string a = "path,t,Z_scaled\n", b = "path,t,G_scaled\n", c = "path,t,w_z_minus_w_g\n";
    for (std::size_t k = 0; k < paths.size(); ++k) {
      const auto& rec = *paths[k];
      for (std::size_t i = 0; i < times.size(); ++i) {
        const double decay = std::exp(-alpha * times[i]);
        const auto& cnt = rec.snapshots[i].of(1);
        a += fmt::format("{},{},{}\n", k, format_time(times[i]), format_value(cnt.Z * decay));
        b += fmt::format("{},{},{}\n", k, format_time(times[i]), format_value(cnt.G * decay));
        const auto& e = rec.estimates[i][0];
        if (e.w_z && e.w_g) {
          c += fmt::format("{},{},{}\n", k, format_time(times[i]), format_value(*e.w_z - *e.w_g));
        }
      }
    }
    put(written, out_dir / "fig2a.csv", a);
    put(written, out_dir / "fig2b.csv", b);
    put(written, out_dir / "fig3c.csv", c);

    const auto wz = column(r.table, last, 1, &EstimatorPoint::w_z, true);
    const auto wg = column(r.table, last, 1, &EstimatorPoint::w_g, true);
    std::string ecdf = "series,x,F\n";
    for (auto [name, v] : {std::pair{"w_z", &wz}, std::pair{"w_g", &wg}}) {
      if (v->empty()) continue;
      const Ecdf f(*v);
      for (double x : f.sorted()) ecdf += fmt::format("{},{},{}\n", name, format_value(x), format_value(f(x)));
    }
    put(written, out_dir / "fig3a.csv", ecdf);
    std::string scatter = "replicate,w_z,w_g\n";
    for (const auto& rec : r.table.replicates) {
      if (rec.capped || !rec.survives()) continue;
      const auto& e = rec.estimates[last][0];
      scatter += fmt::format("{},{},{}\n", rec.replicate, opt(e.w_z), opt(e.w_g));
    }
    put(written, out_dir / "fig3b.csv", scatter);
  }

  // two types, both orderings: mean normalised paths and final-time scatter
  {
    const FigureRun runs[2] = {
        run_preset(presets::two_type_alpha1_less(), scaled(1000, o.scale), o, times),
        run_preset(presets::two_type_alpha2_less(), scaled(1000, o.scale), o, times)};
    const char* names[2][2] = {{"fig9a.csv", "fig9b.csv"}, {"fig9c.csv", "fig9d.csv"}};
    for (int k = 0; k < 2; ++k) {
      const auto& table = runs[k].table;
      for (int which = 0; which < 2; ++which) {
        const auto field = which == 0 ? &EstimatorPoint::w_z : &EstimatorPoint::w_g;
        std::string s = "t,type,mean,stderr\n";
        for (std::size_t i = 0; i < times.size(); ++i) {
          for (int type = 1; type <= 2; ++type) {
            const auto ms = mean_stderr(column(table, i, type, field, false));
            s += fmt::format("{},{},{},{}\n", format_time(times[i]), type, opt(ms.mean), opt(ms.stderr));
          }
        }
        put(written, out_dir / names[k][which], s);
      }
    }
    struct Pair {
      const char* file;
      int type_x, type_y;
      std::optional<double> EstimatorPoint::*fx;
      std::optional<double> EstimatorPoint::*fy;
    };
    const Pair pairs[] = {{"fig10a.csv", 2, 2, &EstimatorPoint::w_z, &EstimatorPoint::w_g},
                          {"fig10b.csv", 1, 2, &EstimatorPoint::w_z, &EstimatorPoint::w_z},
                          {"fig10c.csv", 1, 2, &EstimatorPoint::w_g, &EstimatorPoint::w_g}};
    for (const auto& pr : pairs) {
      std::string s = "ordering,replicate,x,y\n";
      for (const auto& run : runs) {
        const char* ord = to_string(run.consts.two.ordering);
        for (const auto& rec : run.table.replicates) {
          if (rec.capped || !rec.survives()) continue;
          const auto& e = rec.estimates[last];
          s += fmt::format("{},{},{},{}\n", ord, rec.replicate, opt(e[pr.type_x - 1].*pr.fx),
                           opt(e[pr.type_y - 1].*pr.fy));
        }
      }
      put(written, out_dir / pr.file, s);
    }
  }

  // estimator paths from 100 labeled type-1 cells
  {
    const std::pair<const char*, ProcessSpec> cases[] = {
        {"fig11a.csv", presets::two_type_alpha1_less(100, 0.01)},
        {"fig11c.csv", presets::two_type_alpha2_less(100, 0.01)}};
    for (const auto& [file, spec] : cases) {
      const FigureRun r = run_preset(spec, scaled(10, o.scale), o, times);
      const double slope = r.consts.two.type2_generation_slope();
      std::string paths = "replicate,t,avg_gen,label_gen,theory\n";
      std::string rates = "replicate,t,avg_gen_rate,label_est,target\n";
      for (const auto& rec : r.table.replicates) {
        if (rec.capped) continue;
        for (std::size_t i = 1; i < times.size(); ++i) {
          const auto& e = rec.estimates[i][1];
          std::optional<double> label_gen, rate;
          if (e.label_est) label_gen = *e.label_est * times[i];
          if (e.avg_gen) rate = *e.avg_gen / times[i];
          paths += fmt::format("{},{},{},{},{}\n", rec.replicate, format_time(times[i]), opt(e.avg_gen),
                               opt(label_gen), format_value(slope * times[i]));
          rates += fmt::format("{},{},{},{},{}\n", rec.replicate, format_time(times[i]), opt(rate),
                               opt(e.label_est), format_value(slope));
        }
      }
      fs::path a = out_dir / file;
      fs::path b = a;
      b.replace_filename(std::string(file) == "fig11a.csv" ? "fig11b.csv" : "fig11d.csv");
      put(written, a, paths);
      put(written, b, rates);
    }
  }
  return written;
}

}  // namespace bhgen
