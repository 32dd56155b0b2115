#include "bhgen/io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "bhgen/error.hpp"

namespace bhgen {
namespace {

[[noreturn]] void parse_error(const std::string& msg) { throw Error(ErrorCode::io, msg); }

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

template <class T>
T parse_number(std::string_view s, const char* what) {
  T value{};
  const auto res = std::from_chars(s.data(), s.data() + s.size(), value);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    parse_error(fmt::format("cannot parse {} from '{}'", what, s));
  }
  return value;
}

std::optional<double> parse_optional(std::string_view s) {
  if (s.empty()) return std::nullopt;
  return parse_number<double>(s, "value");
}

std::string optional_field(const std::optional<double>& v) {
  return v ? format_value(*v) : std::string();
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

}  // namespace

std::string format_time(double t) { return fmt::format("{:.6f}", t); }

std::string format_value(double v) { return fmt::format("{:.12g}", v); }

void write_trajectory_csv(std::ostream& out, const EnsembleTable& table) {
  out << trajectory_csv_header << '\n';
  for (const auto& rec : table.replicates) {
    for (const auto& s : rec.snapshots) {
      for (int type = 1; type <= table.n_types; ++type) {
        const auto& c = s.of(type);
        out << fmt::format("{},{},{},{},{},{},{},{},{},{}\n", rec.replicate, format_time(s.t),
                           type, c.Z, c.G, c.Zpos, c.GB, c.GD, rec.extinct ? 1 : 0,
                           rec.capped ? 1 : 0);
      }
    }
  }
}

void write_estimator_csv(std::ostream& out, const EnsembleTable& table) {
  out << estimator_csv_header << '\n';
  for (const auto& rec : table.replicates) {
    for (std::size_t i = 0; i < rec.estimates.size(); ++i) {
      for (int type = 1; type <= table.n_types; ++type) {
        const auto& e = rec.estimates[i][type - 1];
        out << fmt::format("{},{},{},{},{},{},{}\n", rec.replicate, format_time(e.t), type,
                           optional_field(e.avg_gen), optional_field(e.label_est),
                           optional_field(e.w_z), optional_field(e.w_g));
      }
    }
  }
}

void write_summary_csv(std::ostream& out, const EnsembleSummary& summary) {
  out << "t,type,quantity,conditioning,n,mean,stderr\n";
  for (const auto& r : summary.rows) {
    out << fmt::format("{},{},{},{},{},{},{}\n", format_time(r.t), r.cell_type, r.quantity,
                       r.survivors_only ? "survivors" : "all", r.stat.n,
                       optional_field(r.stat.mean), optional_field(r.stat.stderr));
  }
}

EnsembleTable read_ensemble_csv(std::istream& trajectories, std::istream* estimator,
                                int n_types) {
  EnsembleTable table;
  table.n_types = n_types;
  std::string line;
  if (!std::getline(trajectories, line)) parse_error("trajectory CSV is empty");
  strip_cr(line);
  if (line != trajectory_csv_header) parse_error(fmt::format("unexpected trajectory header '{}'", line));

  std::map<std::uint64_t, std::size_t> index;
  std::map<double, int> time_set;
  while (std::getline(trajectories, line)) {
    strip_cr(line);
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 10) parse_error(fmt::format("trajectory row has {} fields", f.size()));
    const auto rep = parse_number<std::uint64_t>(f[0], "replicate");
    const double t = parse_number<double>(f[1], "t");
    const int type = parse_number<int>(f[2], "type");
    if (type < 1 || type > n_types) parse_error(fmt::format("type {} out of range", type));
    auto [it, inserted] = index.try_emplace(rep, table.replicates.size());
    if (inserted) {
      table.replicates.push_back({});
      table.replicates.back().replicate = rep;
    }
    auto& rec = table.replicates[it->second];
    rec.extinct = f[8] == "1";
    rec.capped = f[9] == "1";
    if (rec.snapshots.empty() || rec.snapshots.back().t != t) {
      rec.snapshots.push_back({});
      rec.snapshots.back().t = t;
    }
    auto& c = rec.snapshots.back().counts[type - 1];
    c.Z = parse_number<std::int64_t>(f[3], "Z");
    c.G = parse_number<std::int64_t>(f[4], "G");
    c.Zpos = parse_number<std::int64_t>(f[5], "Zpos");
    c.GB = parse_number<std::int64_t>(f[6], "GB");
    c.GD = parse_number<std::int64_t>(f[7], "GD");
    time_set.emplace(t, 0);
  }
  for (const auto& [t, unused] : time_set) table.times.push_back(t);

  for (auto& rec : table.replicates) rec.estimates.assign(rec.snapshots.size(), {});
  if (estimator == nullptr) return table;

  if (!std::getline(*estimator, line)) parse_error("estimator CSV is empty");
  strip_cr(line);
  if (line != estimator_csv_header) parse_error(fmt::format("unexpected estimator header '{}'", line));
  std::map<std::uint64_t, std::size_t> cursor;
  while (std::getline(*estimator, line)) {
    strip_cr(line);
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 7) parse_error(fmt::format("estimator row has {} fields", f.size()));
    const auto rep = parse_number<std::uint64_t>(f[0], "replicate");
    const double t = parse_number<double>(f[1], "t");
    const int type = parse_number<int>(f[2], "type");
    const auto it = index.find(rep);
    if (it == index.end() || type < 1 || type > n_types) {
      parse_error(fmt::format("estimator row for unknown replicate {} / type {}", rep, type));
    }
    auto& rec = table.replicates[it->second];
    std::size_t& pos = cursor[rep];
    while (pos < rec.snapshots.size() && rec.snapshots[pos].t < t) ++pos;
    if (pos >= rec.snapshots.size() || rec.snapshots[pos].t != t) {
      parse_error(fmt::format("estimator row at t={} has no trajectory row", f[1]));
    }
    auto& e = rec.estimates[pos][type - 1];
    e.t = t;
    e.avg_gen = parse_optional(f[3]);
    e.label_est = parse_optional(f[4]);
    e.w_z = parse_optional(f[5]);
    e.w_g = parse_optional(f[6]);
  }
  return table;
}

void write_oracle_csv(std::ostream& out, const std::vector<MomentGrid>& grids,
                      const std::string& spec_hash) {
  out << "# spec_hash=" << spec_hash << '\n' << oracle_csv_header << '\n';
  for (const auto& g : grids) {
    for (std::size_t i = 0; i < g.values.size(); ++i) {
      out << fmt::format("{},{},{:.17g}\n", format_time(g.dt * static_cast<double>(i)),
                         to_string(g.id), g.values[i]);
    }
  }
}

const MomentGrid* OracleFile::find(MomentId id) const {
  for (const auto& g : grids) {
    if (g.id == id) return &g;
  }
  return nullptr;
}

OracleFile read_oracle_csv(std::istream& in) {
  OracleFile file;
  std::string line;
  bool header = false;
  std::map<std::string, std::vector<std::pair<double, double>>> series;
  std::vector<std::string> order;
  while (std::getline(in, line)) {
    strip_cr(line);
    if (line.empty()) continue;
    if (line.rfind("# spec_hash=", 0) == 0) {
      file.spec_hash = line.substr(12);
      continue;
    }
    if (line[0] == '#') continue;
    if (!header) {
      if (line != oracle_csv_header) parse_error(fmt::format("unexpected oracle header '{}'", line));
      header = true;
      continue;
    }
    const auto f = split(line);
    if (f.size() != 3) parse_error("oracle row must have 3 fields");
    const std::string id(f[1]);
    if (!series.count(id)) order.push_back(id);
    series[id].emplace_back(parse_number<double>(f[0], "t"), parse_number<double>(f[2], "value"));
  }
  if (!header) parse_error("oracle CSV has no header");
  for (const auto& id : order) {
    const auto& pts = series[id];
    MomentGrid g;
    g.id = moment_id_from_string(id);
    g.dt = pts.size() > 1 ? (pts.back().first - pts.front().first) /
                                static_cast<double>(pts.size() - 1)
                          : 1.0;
    for (const auto& [t, v] : pts) g.values.push_back(v);
    file.grids.push_back(std::move(g));
  }
  return file;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::io, fmt::format("cannot write '{}'", path.string()));
  out << text;
  if (!out) throw Error(ErrorCode::io, fmt::format("write to '{}' failed", path.string()));
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, fmt::format("cannot open '{}'", path.string()));
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace bhgen
