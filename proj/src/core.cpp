#include "equipart/core.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "equipart/error.hpp"

namespace equipart {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::uint64_t choose2(std::uint64_t n) { return n < 2 ? 0 : n * (n - 1) / 2; }

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

// Must-link groups with their merged allowed sets, in order of smallest member.
struct Groups {
  std::vector<std::size_t> of;                    // object -> group
  std::vector<std::vector<std::size_t>> members;  // group -> objects
};

Groups close_must_links(std::size_t objects, const ConstraintSet& cons) {
  DisjointSets sets(objects);
  for (const auto& p : cons.must_link()) sets.unite(p.first, p.second);
  Groups g;
  g.of.assign(objects, 0);
  std::vector<std::size_t> root_to_group(objects, std::numeric_limits<std::size_t>::max());
  for (std::size_t i = 0; i < objects; ++i) {
    const auto root = sets.find(i);
    if (root_to_group[root] == std::numeric_limits<std::size_t>::max()) {
      root_to_group[root] = g.members.size();
      g.members.emplace_back();
    }
    g.of[i] = root_to_group[root];
    g.members[g.of[i]].push_back(i);
  }
  return g;
}

void check_well_formed(const PartitionSpec& spec, const ConstraintSet& cons) {
  const auto w = spec.object_count();
  const auto r = spec.partition_count();
  auto check_pair = [&](const ObjectPair& p, const char* kind) {
    if (p.second >= w) {
      throw MalformedConstraint(std::string(kind) + " pair (" + std::to_string(p.first) + "," +
                                std::to_string(p.second) + ") out of range");
    }
    if (p.first == p.second) {
      throw MalformedConstraint(std::string(kind) + " pair links object " + std::to_string(p.first) +
                                " to itself");
    }
  };
  for (const auto& p : cons.must_link()) check_pair(p, "must-link");
  for (const auto& p : cons.cannot_link()) {
    check_pair(p, "cannot-link");
    if (cons.must_link().contains(p)) {
      throw MalformedConstraint("pair (" + std::to_string(p.first) + "," + std::to_string(p.second) +
                                ") is both must-link and cannot-link");
    }
  }
  for (const auto& [object, parts] : cons.allowed()) {
    if (object >= w) throw MalformedConstraint("allowed set for object " + std::to_string(object) + " out of range");
    if (parts.empty()) throw MalformedConstraint("empty allowed set for object " + std::to_string(object));
    for (auto part : parts) {
      if (part >= r) {
        throw MalformedConstraint("allowed partition " + std::to_string(part) + " out of range for object " +
                                  std::to_string(object));
      }
    }
  }
}

// Exact feasibility of placing must-link groups into partitions under
// capacities, allowed sets and group-level cannot-links.
class FeasibilitySearch {
 public:
  FeasibilitySearch(const PartitionSpec& spec, const ConstraintSet& cons, const Groups& groups)
      : parts_(spec.partition_count()), remaining_(spec.capacities().begin(), spec.capacities().end()) {
    const auto ngroups = groups.members.size();
    size_.resize(ngroups);
    allowed_.assign(ngroups * parts_, 1);
    cannot_.resize(ngroups);
    for (std::size_t g = 0; g < ngroups; ++g) size_[g] = groups.members[g].size();
    for (const auto& [object, list] : cons.allowed()) {
      const auto g = groups.of[object];
      std::vector<std::uint8_t> mask(parts_, 0);
      for (auto p : list) mask[p] = 1;
      for (std::size_t p = 0; p < parts_; ++p) allowed_[g * parts_ + p] &= mask[p];
    }
    for (const auto& pair : cons.cannot_link()) {
      const auto a = groups.of[pair.first];
      const auto b = groups.of[pair.second];
      cannot_[a].push_back(b);
      cannot_[b].push_back(a);
    }
    for (auto& c : cannot_) {
      std::sort(c.begin(), c.end());
      c.erase(std::unique(c.begin(), c.end()), c.end());
    }
    // Free singletons (no restriction at all) can fill whatever capacity is left.
    for (std::size_t g = 0; g < ngroups; ++g) {
      const bool restricted = std::any_of(allowed_.begin() + g * parts_, allowed_.begin() + (g + 1) * parts_,
                                          [](auto v) { return v == 0; });
      if (size_[g] > 1 || restricted || !cannot_[g].empty()) order_.push_back(g);
    }
    std::sort(order_.begin(), order_.end(), [&](auto a, auto b) {
      const auto oa = options(a);
      const auto ob = options(b);
      if (oa != ob) return oa < ob;
      if (size_[a] != size_[b]) return size_[a] > size_[b];
      return cannot_[a].size() > cannot_[b].size();
    });
    // Partitions with identical capacity and identical allowed column are interchangeable.
    signature_.resize(parts_);
    for (std::size_t p = 0; p < parts_; ++p) {
      signature_[p] = p;
      for (std::size_t q = 0; q < p; ++q) {
        if (remaining_[p] != remaining_[q]) continue;
        bool same = true;
        for (std::size_t g = 0; g < ngroups && same; ++g) same = allowed_[g * parts_ + p] == allowed_[g * parts_ + q];
        if (same) {
          signature_[p] = signature_[q];
          break;
        }
      }
    }
    placed_.assign(ngroups, -1);
    touched_.assign(parts_, 0);
  }

  bool feasible() {
    for (auto g : order_) {
      if (options(g) == 0) return false;
    }
    return search(0);
  }

 private:
  std::size_t options(std::size_t g) const {
    std::size_t n = 0;
    for (std::size_t p = 0; p < parts_; ++p) n += allowed_[g * parts_ + p] && size_[g] <= remaining_[p];
    return n;
  }

  bool can_place(std::size_t g, std::size_t p) const {
    if (!allowed_[g * parts_ + p] || size_[g] > remaining_[p]) return false;
    for (auto h : cannot_[g]) {
      if (placed_[h] == static_cast<std::int64_t>(p)) return false;
    }
    return true;
  }

  bool search(std::size_t depth) {
    if (depth == order_.size()) return true;
    const auto g = order_[depth];
    std::vector<std::size_t> tried_signatures;
    for (std::size_t p = 0; p < parts_; ++p) {
      if (!can_place(g, p)) continue;
      if (!touched_[p]) {
        if (std::find(tried_signatures.begin(), tried_signatures.end(), signature_[p]) != tried_signatures.end()) {
          continue;
        }
        tried_signatures.push_back(signature_[p]);
      }
      remaining_[p] -= size_[g];
      placed_[g] = static_cast<std::int64_t>(p);
      ++touched_[p];
      if (search(depth + 1)) return true;
      --touched_[p];
      placed_[g] = -1;
      remaining_[p] += size_[g];
    }
    return false;
  }

  std::size_t parts_;
  std::vector<std::size_t> remaining_;
  std::vector<std::size_t> size_;
  std::vector<std::uint8_t> allowed_;
  std::vector<std::vector<std::size_t>> cannot_;
  std::vector<std::size_t> order_;
  std::vector<std::size_t> signature_;
  std::vector<std::int64_t> placed_;
  std::vector<std::size_t> touched_;
};

// Tokens split on whitespace and commas; double quotes group.
std::vector<std::string> tokenize(const std::string& line, std::size_t line_no) {
  std::vector<std::string> tokens;
  std::string cur;
  bool in_quotes = false;
  bool have = false;
  for (char c : line) {
    if (in_quotes) {
      if (c == '"') {
        in_quotes = false;
      } else {
        cur += c;
      }
      continue;
    }
    if (c == '#') break;
    if (c == '"') {
      in_quotes = true;
      have = true;
    } else if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
      if (have) tokens.push_back(cur);
      cur.clear();
      have = false;
    } else {
      cur += c;
      have = true;
    }
  }
  if (in_quotes) throw ParseError(line_no, "unterminated quote");
  if (have) tokens.push_back(cur);
  return tokens;
}

std::string quoted(const std::string& name) {
  if (name.find_first_of(" \t,#\"") == std::string::npos && !name.empty()) return name;
  return '"' + name + '"';
}

}  // namespace

// PartitionSpec

PartitionSpec::PartitionSpec(std::vector<std::size_t> capacities) : capacities_(std::move(capacities)) {
  if (capacities_.empty()) throw DomainError("partition spec needs at least one partition");
  for (auto c : capacities_) {
    if (c == 0) throw DomainError("partition capacities must be positive");
  }
  objects_ = std::accumulate(capacities_.begin(), capacities_.end(), std::size_t{0});
}

PartitionSpec PartitionSpec::equi(std::size_t objects, std::size_t partitions) {
  if (partitions == 0 || objects == 0) throw DomainError("object and partition counts must be positive");
  if (objects % partitions != 0) {
    throw DomainError("equi-partition needs R | W (W=" + std::to_string(objects) +
                      ", R=" + std::to_string(partitions) + ")");
  }
  return PartitionSpec(std::vector<std::size_t>(partitions, objects / partitions));
}

bool PartitionSpec::is_equi() const noexcept {
  return std::all_of(capacities_.begin(), capacities_.end(), [&](auto c) { return c == capacities_.front(); });
}

std::uint64_t PartitionSpec::pair_count() const noexcept { return choose2(objects_); }

std::uint64_t PartitionSpec::same_pair_count() const noexcept {
  std::uint64_t s = 0;
  for (auto c : capacities_) s += choose2(c);
  return s;
}

std::string PartitionSpec::name() const {
  std::string s = "r" + std::to_string(partition_count()) + "w" + std::to_string(objects_);
  if (!is_equi()) {
    s += '[';
    for (std::size_t r = 0; r < capacities_.size(); ++r) {
      if (r) s += ',';
      s += std::to_string(capacities_[r]);
    }
    s += ']';
  }
  return s;
}

// ConstraintSet

void ConstraintSet::allow(std::size_t object, std::vector<std::size_t> partitions) {
  std::sort(partitions.begin(), partitions.end());
  partitions.erase(std::unique(partitions.begin(), partitions.end()), partitions.end());
  auto it = allowed_.find(object);
  if (it == allowed_.end()) {
    allowed_.emplace(object, std::move(partitions));
    return;
  }
  std::vector<std::size_t> both;
  std::set_intersection(it->second.begin(), it->second.end(), partitions.begin(), partitions.end(),
                        std::back_inserter(both));
  it->second = std::move(both);
}

// Assignment

Label Assignment::label(std::size_t i) const {
  if (i >= labels_.size()) throw IndexOutOfRange("object " + std::to_string(i) + " out of range");
  return labels_[i];
}

std::string to_string(const Assignment& a) {
  std::string s = "[";
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(a[i]);
  }
  return s + "]";
}

// Validation

void validate_constraints(const PartitionSpec& spec, const ConstraintSet& cons) {
  check_well_formed(spec, cons);
  const auto groups = close_must_links(spec.object_count(), cons);
  for (const auto& p : cons.cannot_link()) {
    if (groups.of[p.first] == groups.of[p.second]) {
      throw MalformedConstraint("cannot-link pair (" + std::to_string(p.first) + "," + std::to_string(p.second) +
                                ") is joined by the must-link closure");
    }
  }
  FeasibilitySearch search(spec, cons, groups);
  if (!search.feasible()) throw InfeasibleConstraints("no assignment satisfies the constraints and capacities");
}

// Problem

Problem::Problem(PartitionSpec spec, ConstraintSet cons) : spec_(std::move(spec)), cons_(std::move(cons)) {
  validate_constraints(spec_, cons_);
  const auto w = spec_.object_count();
  const auto r = spec_.partition_count();
  group_ = close_must_links(w, cons_).of;
  cannot_adj_.resize(w);
  for (const auto& p : cons_.cannot_link()) {
    cannot_adj_[p.first].push_back(p.second);
    cannot_adj_[p.second].push_back(p.first);
  }
  for (auto& adj : cannot_adj_) std::sort(adj.begin(), adj.end());
  allowed_.assign(w * r, 1);
  for (const auto& [object, list] : cons_.allowed()) {
    std::fill_n(allowed_.begin() + object * r, r, 0);
    for (auto p : list) allowed_[object * r + p] = 1;
  }
  symmetric_ = spec_.is_equi() && cons_.allowed().empty();
}

bool Problem::cannot_link(std::size_t a, std::size_t b) const {
  const auto& adj = cannot_adj_.at(a);
  return std::binary_search(adj.begin(), adj.end(), b);
}

bool Problem::satisfied_by(const Assignment& a) const {
  const auto w = object_count();
  const auto r = partition_count();
  if (a.size() != w) return false;
  std::vector<std::size_t> used(r, 0);
  for (std::size_t i = 0; i < w; ++i) {
    if (a[i] >= r || !allowed(i, a[i])) return false;
    ++used[a[i]];
  }
  for (std::size_t p = 0; p < r; ++p) {
    if (used[p] != spec_.capacity(p)) return false;
  }
  for (const auto& pair : cons_.must_link()) {
    if (a[pair.first] != a[pair.second]) return false;
  }
  // Closure members share the label of their group's first member.
  std::vector<std::int64_t> group_label(w, -1);
  for (std::size_t i = 0; i < w; ++i) {
    auto& gl = group_label[group_[i]];
    if (gl < 0) {
      gl = a[i];
    } else if (gl != static_cast<std::int64_t>(a[i])) {
      return false;
    }
  }
  for (const auto& pair : cons_.cannot_link()) {
    if (a[pair.first] == a[pair.second]) return false;
  }
  return true;
}

// PlacementChain

PlacementChain::PlacementChain(const Problem& problem) : problem_(&problem) { reset(); }

void PlacementChain::reset() {
  const auto& caps = problem_->spec().capacities();
  remaining_.assign(caps.begin(), caps.end());
  labels_.clear();
  labels_.reserve(problem_->object_count());
  group_label_.assign(problem_->object_count(), -1);
  group_first_.assign(problem_->object_count(), 0);
}

std::size_t PlacementChain::weights(std::span<std::size_t> out) const {
  const auto i = labels_.size();
  const auto r = problem_->partition_count();
  std::fill(out.begin(), out.end(), std::size_t{0});
  const auto forced = group_label_[problem_->group_of(i)];
  if (forced >= 0) {
    const auto p = static_cast<std::size_t>(forced);
    if (problem_->allowed(i, p)) out[p] = remaining_[p];
  } else {
    for (std::size_t p = 0; p < r; ++p) {
      if (problem_->allowed(i, p)) out[p] = remaining_[p];
    }
  }
  for (auto k : problem_->cannot_partners(i)) {
    if (k >= i) break;
    out[labels_[k]] = 0;
  }
  std::size_t total = 0;
  for (auto v : out) total += v;
  return total;
}

void PlacementChain::place(Label r) {
  const auto i = labels_.size();
  labels_.push_back(r);
  --remaining_[r];
  auto& gl = group_label_[problem_->group_of(i)];
  if (gl < 0) {
    gl = r;
    group_first_[problem_->group_of(i)] = i;
  }
}

void PlacementChain::truncate(std::size_t objects) {
  while (labels_.size() > objects) {
    const auto i = labels_.size() - 1;
    ++remaining_[labels_.back()];
    const auto g = problem_->group_of(i);
    if (group_first_[g] == i) group_label_[g] = -1;
    labels_.pop_back();
  }
}

std::vector<double> conditional_placement_distribution(const Problem& problem, std::span<const Label> prefix,
                                                       std::size_t object) {
  if (object >= problem.object_count()) throw IndexOutOfRange("object " + std::to_string(object) + " out of range");
  if (prefix.size() != object) throw LengthMismatch("prefix must hold labels for objects 0..object-1");
  PlacementChain chain(problem);
  std::vector<std::size_t> w(problem.partition_count());
  for (std::size_t k = 0; k < prefix.size(); ++k) {
    chain.weights(w);
    if (prefix[k] >= w.size() || w[prefix[k]] == 0) {
      throw DomainError("prefix places object " + std::to_string(k) + " in a forbidden partition");
    }
    chain.place(prefix[k]);
  }
  const auto total = chain.weights(w);
  if (total == 0) throw DeadEnd("object " + std::to_string(object) + " cannot be placed after this prefix");
  std::vector<double> dist(w.size());
  for (std::size_t p = 0; p < w.size(); ++p) dist[p] = static_cast<double>(w[p]) / static_cast<double>(total);
  return dist;
}

double log_prior(const Problem& problem, const Assignment& a) {
  const auto n = problem.object_count();
  if (a.size() != n) throw LengthMismatch("assignment length differs from object count");
  PlacementChain chain(problem);
  std::vector<std::size_t> w(problem.partition_count());
  // Exponents of each integer in the chain product; summing logs by value keeps
  // equal products bit-identical whatever the placement order.
  std::vector<std::int64_t> exponent(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto total = chain.weights(w);
    if (a[i] >= w.size() || w[a[i]] == 0) return kNegInf;
    ++exponent[w[a[i]]];
    --exponent[total];
    chain.place(a[i]);
  }
  double s = 0.0;
  for (std::size_t v = 2; v <= n; ++v) {
    if (exponent[v] != 0) s += static_cast<double>(exponent[v]) * std::log(static_cast<double>(v));
  }
  return s;
}

bool same_partition(const Assignment& a, std::size_t i, std::size_t j) { return a.label(i) == a.label(j); }

Assignment canonical_labels(const Assignment& a) {
  std::vector<Label> map;
  std::vector<Label> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto l = a[i];
    if (l >= map.size()) map.resize(l + 1, std::numeric_limits<Label>::max());
    if (map[l] == std::numeric_limits<Label>::max()) {
      map[l] = static_cast<Label>(std::count_if(map.begin(), map.end(),
                                                [](Label v) { return v != std::numeric_limits<Label>::max(); }));
    }
    out[i] = map[l];
  }
  return Assignment(std::move(out));
}

bool equivalent_up_to_relabeling(const Assignment& a, const Assignment& b) {
  if (a.size() != b.size()) throw LengthMismatch("assignments differ in length");
  return canonical_labels(a) == canonical_labels(b);
}

std::uint64_t for_each_assignment(const Problem& problem, bool canonical,
                                  const std::function<bool(const Assignment&)>& visit) {
  if (canonical && !problem.label_symmetric()) {
    throw UnsupportedSpec("canonical enumeration needs equal capacities and no allowed-set rules");
  }
  const auto n = problem.object_count();
  const auto r = problem.partition_count();
  PlacementChain chain(problem);
  std::vector<std::vector<std::size_t>> w(n, std::vector<std::size_t>(r));
  std::uint64_t visited = 0;
  bool stop = false;
  std::function<void(std::size_t, std::size_t)> descend = [&](std::size_t i, std::size_t used) {
    if (i == n) {
      ++visited;
      if (!visit(Assignment(std::vector<Label>(chain.labels().begin(), chain.labels().end())))) stop = true;
      return;
    }
    chain.weights(w[i]);
    const auto limit = canonical ? std::min(r, used + 1) : r;
    for (std::size_t p = 0; p < limit && !stop; ++p) {
      if (w[i][p] == 0) continue;
      chain.place(static_cast<Label>(p));
      descend(i + 1, std::max(used, p + 1));
      chain.truncate(i);
    }
  };
  descend(0, 0);
  return visited;
}

std::optional<std::uint64_t> unlabeled_partition_count(const PartitionSpec& spec) {
  using u128 = unsigned __int128;
  constexpr u128 kMax = std::numeric_limits<std::uint64_t>::max();
  u128 count = 1;
  std::size_t left = spec.object_count();
  for (auto c : spec.capacities()) {
    // count *= C(left, c), built incrementally so every step stays integral.
    u128 binom = 1;
    for (std::size_t k = 1; k <= c; ++k) {
      binom = binom * (left - c + k) / k;
      if (binom > kMax) return std::nullopt;
    }
    count *= binom;
    if (count > kMax) return std::nullopt;
    left -= c;
  }
  std::map<std::size_t, std::size_t> multiplicity;
  for (auto c : spec.capacities()) ++multiplicity[c];
  for (const auto& [cap, m] : multiplicity) {
    for (std::size_t k = 2; k <= m; ++k) count /= k;
  }
  return static_cast<std::uint64_t>(count);
}

double log_unlabeled_partition_count(const PartitionSpec& spec) {
  double s = std::lgamma(static_cast<double>(spec.object_count()) + 1.0);
  std::map<std::size_t, std::size_t> multiplicity;
  for (auto c : spec.capacities()) {
    s -= std::lgamma(static_cast<double>(c) + 1.0);
    ++multiplicity[c];
  }
  for (const auto& [cap, m] : multiplicity) s -= std::lgamma(static_cast<double>(m) + 1.0);
  return s;
}

// Constraint files

ConstraintFile parse_constraint_file(std::istream& in, std::span<const std::string> items,
                                     std::vector<std::string> default_sections) {
  ConstraintFile file;
  file.sections = std::move(default_sections);
  std::map<std::string, std::size_t> item_index;
  for (std::size_t i = 0; i < items.size(); ++i) item_index.emplace(items[i], i);
  auto item = [&](const std::string& name, std::size_t line_no) {
    auto it = item_index.find(name);
    if (it == item_index.end()) throw UnknownItem("line " + std::to_string(line_no) + ": unknown item '" + name + "'");
    return it->second;
  };
  auto section = [&](const std::string& name, std::size_t line_no) {
    auto it = std::find(file.sections.begin(), file.sections.end(), name);
    if (it == file.sections.end()) {
      throw UnknownSection("line " + std::to_string(line_no) + ": unknown section '" + name + "'");
    }
    return static_cast<std::size_t>(it - file.sections.begin());
  };

  bool sections_used = false;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto tokens = tokenize(line, line_no);
    if (tokens.empty()) continue;
    const auto& keyword = tokens[0];
    if (keyword == "must" || keyword == "cannot") {
      if (tokens.size() != 3) throw ParseError(line_no, keyword + " takes exactly two items");
      const auto a = item(tokens[1], line_no);
      const auto b = item(tokens[2], line_no);
      if (keyword == "must") {
        file.constraints.add_must_link(a, b);
      } else {
        file.constraints.add_cannot_link(a, b);
      }
    } else if (keyword == "allow") {
      if (tokens.size() < 3) throw ParseError(line_no, "allow takes an item and at least one section");
      const auto a = item(tokens[1], line_no);
      std::vector<std::size_t> parts;
      for (std::size_t k = 2; k < tokens.size(); ++k) parts.push_back(section(tokens[k], line_no));
      file.constraints.allow(a, std::move(parts));
      sections_used = true;
    } else if (keyword == "sections") {
      if (sections_used) throw ParseError(line_no, "sections must be declared before they are used");
      if (tokens.size() < 2) throw ParseError(line_no, "sections needs at least one name");
      file.sections.assign(tokens.begin() + 1, tokens.end());
    } else if (keyword == "capacity") {
      if (tokens.size() < 2) throw ParseError(line_no, "capacity needs at least one value");
      file.capacities.clear();
      for (std::size_t k = 1; k < tokens.size(); ++k) {
        std::size_t pos = 0;
        long long v = 0;
        try {
          v = std::stoll(tokens[k], &pos);
        } catch (const std::exception&) {
          pos = 0;
        }
        if (pos != tokens[k].size() || v <= 0) throw ParseError(line_no, "bad capacity '" + tokens[k] + "'");
        file.capacities.push_back(static_cast<std::size_t>(v));
      }
    } else {
      throw ParseError(line_no, "unknown directive '" + keyword + "'");
    }
  }
  if (file.capacities.size() > 1 && file.capacities.size() != file.sections.size()) {
    throw ParseError(line_no, "capacity list length differs from section count");
  }
  return file;
}

ConstraintFile load_constraint_file(const std::string& path, std::span<const std::string> items,
                                    std::vector<std::string> default_sections) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open constraint file '" + path + "'");
  return parse_constraint_file(in, items, std::move(default_sections));
}

void write_constraint_file(std::ostream& out, const ConstraintSet& cons, std::span<const std::string> items,
                           std::span<const std::string> sections) {
  out << "sections";
  for (std::size_t s = 0; s < sections.size(); ++s) out << (s ? "," : " ") << quoted(sections[s]);
  out << '\n';
  for (const auto& p : cons.must_link()) out << "must " << quoted(items[p.first]) << ' ' << quoted(items[p.second]) << '\n';
  for (const auto& p : cons.cannot_link()) {
    out << "cannot " << quoted(items[p.first]) << ' ' << quoted(items[p.second]) << '\n';
  }
  for (const auto& [object, parts] : cons.allowed()) {
    out << "allow " << quoted(items[object]);
    for (std::size_t k = 0; k < parts.size(); ++k) out << (k ? "," : " ") << quoted(sections[parts[k]]);
    out << '\n';
  }
}

std::vector<std::string> index_names(std::size_t n) {
  std::vector<std::string> names(n);
  for (std::size_t i = 0; i < n; ++i) names[i] = std::to_string(i);
  return names;
}

}  // namespace equipart
