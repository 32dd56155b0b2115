#include "bhgen/config.hpp"

#include <charconv>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include <fmt/format.h>

#include "bhgen/error.hpp"

namespace bhgen {
namespace {

using nlohmann::json;

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorCode::config, msg); }

void require_object(const json& j, const char* where) {
  if (!j.is_object()) config_error(fmt::format("{}: expected a JSON object", where));
}

void reject_unknown(const json& j, const char* where, std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) config_error(fmt::format("{}: unknown key '{}'", where, key));
  }
}

double number(const json& j, const char* key, const char* where) {
  if (!j.contains(key)) config_error(fmt::format("{}: missing '{}'", where, key));
  const auto& v = j.at(key);
  if (!v.is_number()) config_error(fmt::format("{}: '{}' must be a number", where, key));
  return v.get<double>();
}

std::uint64_t unsigned_integer(const json& v, const char* what) {
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
    config_error(fmt::format("{} must be a nonnegative integer", what));
  }
  return v.get<std::uint64_t>();
}

std::vector<double> probabilities(const json& j, const char* where) {
  if (!j.is_array()) config_error(fmt::format("{}: 'probs' must be an array", where));
  std::vector<double> out;
  for (const auto& p : j) out.push_back(parse_probability(p));
  return out;
}

template <class F>
auto wrap_invalid(F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::invalid_argument) config_error(e.what());
    throw;
  }
}

}  // namespace

double parse_probability(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    const auto slash = s.find('/');
    double num = 0.0;
    double den = 1.0;
    auto parse = [&](std::string_view part, double& out) {
      const auto* first = part.data();
      const auto* last = part.data() + part.size();
      const auto res = std::from_chars(first, last, out);
      if (res.ec != std::errc() || res.ptr != last) {
        config_error(fmt::format("cannot parse probability '{}'", s));
      }
    };
    if (slash == std::string::npos) {
      parse(s, num);
    } else {
      parse(std::string_view(s).substr(0, slash), num);
      parse(std::string_view(s).substr(slash + 1), den);
      if (den == 0.0) config_error(fmt::format("zero denominator in '{}'", s));
    }
    return num / den;
  }
  config_error("probabilities must be numbers or \"num/den\" strings");
}

nlohmann::json lifetime_to_json(const LifetimeDistribution& d) {
  switch (d.kind()) {
    case LifetimeKind::exponential:
      return {{"kind", "exponential"}, {"rate", d.param1()}};
    case LifetimeKind::lognormal:
      return {{"kind", "lognormal"}, {"mean", d.param1()}, {"sd", d.param2()}};
    case LifetimeKind::gamma:
      return {{"kind", "gamma"}, {"shape", d.param1()}, {"scale", d.param2()}};
    case LifetimeKind::deterministic:
      return {{"kind", "deterministic"}, {"value", d.param1()}};
  }
  return {};
}

LifetimeDistribution lifetime_from_json(const json& j) {
  const char* where = "lifetime";
  require_object(j, where);
  if (!j.contains("kind") || !j.at("kind").is_string()) config_error("lifetime: missing 'kind'");
  const std::string kind = j.at("kind").get<std::string>();
  return wrap_invalid([&] {
    if (kind == "exponential") {
      reject_unknown(j, where, {"kind", "rate"});
      return LifetimeDistribution::exponential(number(j, "rate", where));
    }
    if (kind == "lognormal") {
      reject_unknown(j, where, {"kind", "mean", "sd"});
      return LifetimeDistribution::lognormal(number(j, "mean", where), number(j, "sd", where));
    }
    if (kind == "gamma") {
      reject_unknown(j, where, {"kind", "shape", "scale"});
      return LifetimeDistribution::gamma(number(j, "shape", where), number(j, "scale", where));
    }
    if (kind == "deterministic") {
      reject_unknown(j, where, {"kind", "value"});
      return LifetimeDistribution::deterministic(number(j, "value", where));
    }
    config_error(fmt::format("lifetime: unknown kind '{}'", kind));
  });
}

nlohmann::json offspring_to_json(const OffspringDistribution& d) {
  json support = json::array();
  for (const auto& o : d.support()) {
    if (d.arity() == 1) {
      support.push_back(o.type1);
    } else {
      support.push_back(json::array({o.type1, o.type2}));
    }
  }
  json probs = json::array();
  for (double p : d.probs()) probs.push_back(p);
  return {{"support", support}, {"probs", probs}};
}

OffspringDistribution offspring_from_json(const json& j) {
  const char* where = "offspring";
  require_object(j, where);
  return wrap_invalid([&] {
    if (j.contains("total")) {
      reject_unknown(j, where, {"total", "p_type2"});
      const auto& total = j.at("total");
      require_object(total, "offspring.total");
      reject_unknown(total, "offspring.total", {"support", "probs"});
      if (!j.contains("p_type2")) config_error("offspring: 'total' needs 'p_type2'");
      std::vector<std::uint32_t> support;
      for (const auto& n : total.at("support")) {
        support.push_back(static_cast<std::uint32_t>(unsigned_integer(n, "offspring count")));
      }
      return OffspringDistribution::from_children(std::move(support),
                                                  probabilities(total.at("probs"), where),
                                                  parse_probability(j.at("p_type2")));
    }
    reject_unknown(j, where, {"support", "probs"});
    if (!j.contains("support") || !j.at("support").is_array() || j.at("support").empty()) {
      config_error("offspring: 'support' must be a nonempty array");
    }
    if (!j.contains("probs")) config_error("offspring: missing 'probs'");
    const auto& support = j.at("support");
    const auto probs = probabilities(j.at("probs"), where);
    if (support.front().is_array()) {
      std::vector<Offspring> s;
      for (const auto& pair : support) {
        if (!pair.is_array() || pair.size() != 2) {
          config_error("offspring: pair support entries must be [type1, type2]");
        }
        s.push_back({static_cast<std::uint32_t>(unsigned_integer(pair[0], "offspring count")),
                     static_cast<std::uint32_t>(unsigned_integer(pair[1], "offspring count"))});
      }
      return OffspringDistribution::pair(std::move(s), probs);
    }
    std::vector<std::uint32_t> s;
    for (const auto& n : support) {
      s.push_back(static_cast<std::uint32_t>(unsigned_integer(n, "offspring count")));
    }
    return OffspringDistribution::scalar(std::move(s), probs);
  });
}

nlohmann::json process_to_json(const ProcessSpec& spec) {
  json lifetimes = json::array();
  for (const auto& l : spec.lifetime) lifetimes.push_back(lifetime_to_json(l));
  json initial = json::array();
  for (const auto& g : spec.initial) {
    initial.push_back({{"type", g.type}, {"count", g.count}, {"labeled", g.labeled}});
  }
  json j = {{"n_types", spec.n_types},
            {"lifetime", lifetimes},
            {"p_label_loss", spec.p_label_loss},
            {"initial", initial},
            {"population_cap", spec.population_cap}};
  if (spec.offspring_type1) j["offspring_type1"] = offspring_to_json(*spec.offspring_type1);
  if (spec.offspring_type2) j["offspring_type2"] = offspring_to_json(*spec.offspring_type2);
  return j;
}

ProcessSpec process_from_json(const json& j) {
  const char* where = "process";
  require_object(j, where);
  reject_unknown(j, where,
                 {"n_types", "lifetime", "offspring_type1", "offspring_type2", "p_label_loss",
                  "initial", "population_cap"});
  ProcessSpec spec;
  spec.n_types = j.contains("n_types") ? static_cast<int>(unsigned_integer(j.at("n_types"), "n_types")) : 1;
  if (!j.contains("lifetime")) config_error("process: missing 'lifetime'");
  const auto& lt = j.at("lifetime");
  if (lt.is_array()) {
    for (const auto& l : lt) spec.lifetime.push_back(lifetime_from_json(l));
  } else {
    // one law shared by every type
    const auto law = lifetime_from_json(lt);
    spec.lifetime.assign(static_cast<std::size_t>(std::max(spec.n_types, 1)), law);
  }
  if (!j.contains("offspring_type1")) config_error("process: missing 'offspring_type1'");
  spec.offspring_type1 = offspring_from_json(j.at("offspring_type1"));
  if (j.contains("offspring_type2")) spec.offspring_type2 = offspring_from_json(j.at("offspring_type2"));
  if (j.contains("p_label_loss")) spec.p_label_loss = parse_probability(j.at("p_label_loss"));
  if (j.contains("population_cap")) {
    spec.population_cap = unsigned_integer(j.at("population_cap"), "population_cap");
  }
  if (j.contains("initial")) {
    if (!j.at("initial").is_array()) config_error("process: 'initial' must be an array");
    for (const auto& g : j.at("initial")) {
      require_object(g, "process.initial");
      reject_unknown(g, "process.initial", {"type", "count", "labeled"});
      InitialCells cells;
      if (g.contains("type")) cells.type = static_cast<int>(unsigned_integer(g.at("type"), "initial type"));
      if (g.contains("count")) cells.count = unsigned_integer(g.at("count"), "initial count");
      if (g.contains("labeled")) {
        if (!g.at("labeled").is_boolean()) config_error("process.initial: 'labeled' must be boolean");
        cells.labeled = g.at("labeled").get<bool>();
      }
      spec.initial.push_back(cells);
    }
  } else {
    spec.initial.push_back({});
  }
  wrap_invalid([&] {
    spec.validate();
    return 0;
  });
  return spec;
}

RunConfig RunConfig::from_json(const json& j) {
  require_object(j, "config");
  reject_unknown(j, "config",
                 {"version", "process", "observation_times", "replicates", "master_seed",
                  "p_sweep", "outputs", "oracle"});
  if (!j.contains("version")) config_error("config: missing 'version'");
  if (!j.at("version").is_number_integer() || j.at("version").get<int>() != current_version) {
    config_error(fmt::format("config: unsupported version (expected {})", current_version));
  }
  RunConfig cfg;
  if (!j.contains("process")) config_error("config: missing 'process'");
  cfg.process = process_from_json(j.at("process"));

  if (j.contains("observation_times")) {
    const auto& ot = j.at("observation_times");
    if (ot.is_array()) {
      for (const auto& t : ot) {
        if (!t.is_number()) config_error("observation_times entries must be numbers");
        cfg.observation_times.push_back(t.get<double>());
      }
    } else if (ot.is_object()) {
      reject_unknown(ot, "observation_times", {"t_max", "n_points"});
      const double t_max = number(ot, "t_max", "observation_times");
      if (!ot.contains("n_points")) config_error("observation_times: missing 'n_points'");
      const auto n = unsigned_integer(ot.at("n_points"), "n_points");
      if (n < 2 || !(t_max > 0.0)) config_error("observation_times: need t_max > 0, n_points >= 2");
      for (std::uint64_t i = 0; i < n; ++i) {
        cfg.observation_times.push_back(t_max * static_cast<double>(i) / static_cast<double>(n - 1));
      }
    } else {
      config_error("observation_times must be an array or {t_max, n_points}");
    }
  }
  if (cfg.observation_times.empty()) config_error("config: 'observation_times' is required");
  for (std::size_t i = 0; i < cfg.observation_times.size(); ++i) {
    const double t = cfg.observation_times[i];
    if (!(t >= 0.0) || (i > 0 && !(t > cfg.observation_times[i - 1]))) {
      config_error("observation_times must be nonnegative and strictly increasing");
    }
  }
  if (j.contains("replicates")) cfg.replicates = unsigned_integer(j.at("replicates"), "replicates");
  if (cfg.replicates < 1) config_error("replicates must be >= 1");
  if (j.contains("master_seed")) cfg.master_seed = unsigned_integer(j.at("master_seed"), "master_seed");
  if (j.contains("p_sweep")) {
    if (!j.at("p_sweep").is_array() || j.at("p_sweep").empty()) {
      config_error("p_sweep must be a nonempty array");
    }
    for (const auto& p : j.at("p_sweep")) {
      const double v = parse_probability(p);
      if (!(v >= 0.0 && v <= 1.0)) config_error("p_sweep entries must lie in [0,1]");
      cfg.p_sweep.push_back(v);
    }
  }
  if (j.contains("outputs")) {
    if (!j.at("outputs").is_string()) config_error("outputs must be a path string");
    cfg.outputs = j.at("outputs").get<std::string>();
  }
  if (j.contains("oracle")) {
    const auto& o = j.at("oracle");
    require_object(o, "oracle");
    reject_unknown(o, "oracle", {"dt", "t_max"});
    if (o.contains("dt")) cfg.oracle_dt = number(o, "dt", "oracle");
    if (o.contains("t_max")) cfg.oracle_t_max = number(o, "t_max", "oracle");
  }
  return cfg;
}

RunConfig RunConfig::parse(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    config_error(fmt::format("malformed JSON: {}", e.what()));
  }
  try {
    return from_json(j);
  } catch (const json::exception& e) {
    config_error(fmt::format("malformed config: {}", e.what()));
  }
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, fmt::format("cannot open config '{}'", path.string()));
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

nlohmann::json RunConfig::to_json() const {
  json j = {{"version", current_version},
            {"process", process_to_json(process)},
            {"observation_times", observation_times},
            {"replicates", replicates},
            {"master_seed", master_seed},
            {"outputs", outputs}};
  if (!p_sweep.empty()) j["p_sweep"] = p_sweep;
  if (oracle_dt || oracle_t_max) {
    json o = json::object();
    if (oracle_dt) o["dt"] = *oracle_dt;
    if (oracle_t_max) o["t_max"] = *oracle_t_max;
    j["oracle"] = o;
  }
  return j;
}

std::vector<double> RunConfig::label_probabilities() const {
  if (!p_sweep.empty()) return p_sweep;
  return {process.p_label_loss};
}

}  // namespace bhgen
