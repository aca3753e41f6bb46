#include "equipart/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>

#include "equipart/error.hpp"

namespace equipart {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string::npos ? std::string::npos : pos - start)));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value, const char* want) {
  throw DomainError("config key '" + key + "': expected " + want + ", got '" + value + "'");
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos) bad_value(key, v, "a non-negative integer");
  try {
    return std::stoull(v);
  } catch (const std::exception&) {
    bad_value(key, v, "a non-negative integer");
  }
}

NoisePrior parse_noise_prior(const std::string& v) {
  if (v == "uniform") return NoisePrior::uniform;
  if (v == "above_chance") return NoisePrior::above_chance;
  bad_value("noise_prior", v, "uniform or above_chance");
}

}  // namespace

bool is_path_key(const std::string& key) {
  return key == "constraints" || key == "rules" || key == "transactions" || key == "stream" || key == "counts";
}

ConfigMap parse_config(std::istream& in, const std::string& base_dir) {
  ConfigMap cfg;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(line_no, "expected 'key = value'");
    const auto key = trim(line.substr(0, eq));
    auto value = trim(line.substr(eq + 1));
    if (key.empty()) throw ParseError(line_no, "missing key");
    if (is_path_key(key) && !value.empty() && !base_dir.empty()) {
      value = (std::filesystem::path(base_dir) / value).lexically_normal().string();
    }
    if (!cfg.emplace(key, value).second) throw ParseError(line_no, "duplicate key '" + key + "'");
  }
  const auto v = cfg.find("version");
  if (v == cfg.end()) throw UnsupportedSpec("config lacks a 'version' field");
  if (v->second != std::to_string(kConfigVersion)) {
    throw UnsupportedSpec("config version " + v->second + " is not supported (expected " +
                          std::to_string(kConfigVersion) + ")");
  }
  return cfg;
}

ConfigMap load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config '" + path + "'");
  const auto dir = std::filesystem::absolute(path).parent_path().string();
  return parse_config(in, dir);
}

void write_config(std::ostream& out, const ConfigMap& cfg) {
  for (const auto& [k, v] : cfg) out << k << " = " << v << '\n';
}

bool ConfigReader::has(const std::string& key) const {
  used_.insert(key);
  return cfg_.count(key) != 0;
}

std::optional<std::string> ConfigReader::text(const std::string& key) const {
  used_.insert(key);
  const auto it = cfg_.find(key);
  if (it == cfg_.end()) return std::nullopt;
  return it->second;
}

std::string ConfigReader::text(const std::string& key, const std::string& fallback) const {
  return text(key).value_or(fallback);
}

std::uint64_t ConfigReader::u64(const std::string& key, std::uint64_t fallback) const {
  const auto v = text(key);
  return v ? parse_u64(key, *v) : fallback;
}

std::size_t ConfigReader::size(const std::string& key, std::size_t fallback) const {
  return static_cast<std::size_t>(u64(key, fallback));
}

double ConfigReader::real(const std::string& key, double fallback) const {
  const auto v = text(key);
  if (!v) return fallback;
  std::size_t pos = 0;
  double x = 0.0;
  try {
    x = std::stod(*v, &pos);
  } catch (const std::exception&) {
    bad_value(key, *v, "a number");
  }
  if (pos != v->size()) bad_value(key, *v, "a number");
  return x;
}

bool ConfigReader::flag(const std::string& key, bool fallback) const {
  const auto v = text(key);
  if (!v) return fallback;
  if (*v == "true" || *v == "1" || *v == "yes") return true;
  if (*v == "false" || *v == "0" || *v == "no") return false;
  bad_value(key, *v, "true or false");
}

std::vector<std::size_t> ConfigReader::sizes(const std::string& key, std::vector<std::size_t> fallback) const {
  const auto v = text(key);
  if (!v) return fallback;
  std::vector<std::size_t> out;
  for (const auto& part : split(*v, ',')) out.push_back(static_cast<std::size_t>(parse_u64(key, part)));
  return out;
}

ConfigMap ConfigReader::with_prefix(const std::string& prefix) const {
  ConfigMap out;
  for (const auto& [k, v] : cfg_) {
    if (k.rfind(prefix, 0) == 0) {
      used_.insert(k);
      out.emplace(k, v);
    }
  }
  return out;
}

void ConfigReader::reject_unused() const {
  for (const auto& [k, v] : cfg_) {
    if (!used_.count(k)) throw DomainError("unknown config key '" + k + "'");
  }
}

Problem problem_from_config(const ConfigReader& r) {
  std::vector<std::size_t> caps = r.sizes("capacities", {});
  const auto objects = r.size("objects", 0);
  const auto parts = r.size("partitions", 0);
  if (caps.empty()) {
    if (objects == 0 || parts == 0) throw DomainError("need objects and partitions, or capacities");
    if (objects % parts != 0) {
      throw DomainError(std::to_string(parts) + " partitions do not divide " + std::to_string(objects) + " objects");
    }
    caps.assign(parts, objects / parts);
  } else if ((objects && objects != std::accumulate(caps.begin(), caps.end(), std::size_t{0})) ||
             (parts && parts != caps.size())) {
    throw DomainError("capacities disagree with objects/partitions");
  }
  PartitionSpec spec(caps);
  ConstraintSet cons;
  if (const auto path = r.text("constraints"); path && !path->empty()) {
    const auto parsed = load_constraint_file(*path, index_names(spec.object_count()),
                                             index_names(spec.partition_count()));
    if (!parsed.capacities.empty()) {
      std::vector<std::size_t> file_caps = parsed.capacities;
      if (file_caps.size() == 1) file_caps.assign(spec.partition_count(), file_caps[0]);
      if (PartitionSpec(file_caps) != spec) throw DomainError("constraint file capacities disagree with the config");
    }
    cons = parsed.constraints;
  }
  return Problem(std::move(spec), std::move(cons));
}

WalkConfig walk_from_config(const ConfigReader& r, WalkConfig w) {
  w.epsilon = r.real("epsilon", w.epsilon);
  w.steps = r.size("steps", w.steps);
  w.init_samples = r.size("init_samples", w.init_samples);
  const auto init = r.text("init", w.init == InitStrategy::prior ? "prior" : "lw");
  if (init == "lw") {
    w.init = InitStrategy::likelihood_weighted;
  } else if (init == "prior") {
    w.init = InitStrategy::prior;
  } else {
    bad_value("init", init, "lw or prior");
  }
  w.reestimate_noise = r.flag("reestimate_noise", w.reestimate_noise);
  w.validate();
  return w;
}

std::uint64_t resolve_seed(const ConfigReader& r) {
  if (r.has("seed")) return r.u64("seed", 1);
  if (const char* env = std::getenv("EQUIPART_SEED"); env && *env) return parse_u64("EQUIPART_SEED", env);
  return 1;
}

ExperimentSpec experiment_from_config(const ConfigReader& r) {
  ExperimentSpec s;
  const auto problem = problem_from_config(r);
  s.spec = problem.spec();
  s.constraints = problem.constraints();
  s.p_true = r.real("p", s.p_true);
  s.trials = r.size("trials", s.trials);
  s.checkpoints = r.sizes("checkpoints", s.checkpoints);
  s.walk = walk_from_config(r, s.walk);
  const auto solver = r.text("solver", "walk");
  if (solver == "walk") {
    s.solver = BnSolver::walk;
  } else if (solver == "exact") {
    s.solver = BnSolver::exact;
  } else {
    bad_value("solver", solver, "walk or exact");
  }
  s.oma_states = r.size("oma_states", s.oma_states);
  s.noise_resolution = r.size("noise_resolution", s.noise_resolution);
  s.noise_prior = parse_noise_prior(r.text("noise_prior", "above_chance"));
  s.seed = resolve_seed(r);
  s.jobs = r.size("jobs", s.jobs);
  s.validate();
  return s;
}

AblationSpec ablation_from_config(const ConfigReader& r) {
  AblationSpec a;
  a.base = experiment_from_config(r);
  a.observations = r.size("observations", a.observations);
  a.steps = r.sizes("walk_lengths", a.steps);
  if (r.has("ablation_samples")) {
    a.arms = {{"random", InitStrategy::prior, 0}};
    for (auto n : r.sizes("ablation_samples", {})) {
      a.arms.push_back({"lw_s" + std::to_string(n), InitStrategy::likelihood_weighted, n});
    }
  }
  return a;
}

WarehouseSpec warehouse_from_config(const ConfigReader& r, const TransactionSet& ts) {
  WarehouseSpec w;
  w.sections = r.size("sections", w.sections);
  w.repetitions = r.size("repetitions", w.repetitions);
  w.folds = r.size("folds", w.folds);
  const auto mode = r.text("pair_mode", "all_pairs");
  if (mode == "all_pairs") {
    w.pair_mode = PairMode::all_pairs;
  } else if (mode == "one_random_pair") {
    w.pair_mode = PairMode::one_random_pair;
  } else {
    bad_value("pair_mode", mode, "all_pairs or one_random_pair");
  }
  w.walk = walk_from_config(r, w.walk);
  w.oma_states = r.size("oma_states", w.oma_states);
  w.noise_resolution = r.size("noise_resolution", w.noise_resolution);
  w.noise_prior = parse_noise_prior(r.text("noise_prior", "above_chance"));
  if (const auto path = r.text("rules"); path && !path->empty()) {
    w.rules = load_constraint_file(*path, ts.items, warehouse_sections(w.sections)).constraints;
  }
  w.seed = resolve_seed(r);
  w.jobs = r.size("jobs", w.jobs);
  return w;
}

}  // namespace equipart
