#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "equipart/bench.hpp"
#include "equipart/core.hpp"

namespace equipart {

inline constexpr int kConfigVersion = 1;

/// Flat `key = value` settings. Keys are lowercase with underscores.
using ConfigMap = std::map<std::string, std::string>;

/// Parses `key = value` lines (`#` comments, blank lines ignored). Relative
/// values of path keys resolve against `base_dir` when given. Throws ParseError
/// for malformed lines or duplicate keys and UnsupportedSpec for a `version`
/// other than kConfigVersion.
ConfigMap parse_config(std::istream& in, const std::string& base_dir = {});
ConfigMap load_config(const std::string& path);
void write_config(std::ostream& out, const ConfigMap& cfg);

/// Keys whose values are file paths.
bool is_path_key(const std::string& key);

/// Typed access that remembers which keys were read, so leftovers can be rejected.
class ConfigReader {
 public:
  explicit ConfigReader(const ConfigMap& cfg) : cfg_(cfg) {}

  bool has(const std::string& key) const;
  std::string text(const std::string& key, const std::string& fallback) const;
  std::optional<std::string> text(const std::string& key) const;
  std::size_t size(const std::string& key, std::size_t fallback) const;
  std::uint64_t u64(const std::string& key, std::uint64_t fallback) const;
  double real(const std::string& key, double fallback) const;
  bool flag(const std::string& key, bool fallback) const;
  std::vector<std::size_t> sizes(const std::string& key, std::vector<std::size_t> fallback) const;

  /// Marks every key starting with `prefix` as read and returns them.
  ConfigMap with_prefix(const std::string& prefix) const;
  void mark(const std::string& key) const { used_.insert(key); }
  /// Throws DomainError naming the first key nobody read.
  void reject_unused() const;

 private:
  const ConfigMap& cfg_;
  mutable std::set<std::string> used_;
};

/// Partition layout and rules from `objects`/`partitions`/`capacities` and an
/// optional `constraints` file (whose `capacity`/`sections` lines also count).
Problem problem_from_config(const ConfigReader& r);

WalkConfig walk_from_config(const ConfigReader& r, WalkConfig base = {});
ExperimentSpec experiment_from_config(const ConfigReader& r);
AblationSpec ablation_from_config(const ConfigReader& r);
WarehouseSpec warehouse_from_config(const ConfigReader& r, const TransactionSet& ts);

/// Seed precedence: explicit key, then the EQUIPART_SEED environment variable, then 1.
std::uint64_t resolve_seed(const ConfigReader& r);

}  // namespace equipart
