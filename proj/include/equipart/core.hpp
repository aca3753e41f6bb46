#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace equipart {

using Label = std::uint32_t;

/// Unordered pair of objects, normalized so that first <= second.
struct ObjectPair {
  std::size_t first = 0;
  std::size_t second = 0;

  ObjectPair() = default;
  ObjectPair(std::size_t a, std::size_t b) : first(a < b ? a : b), second(a < b ? b : a) {}

  auto operator<=>(const ObjectPair&) const = default;
};

/// Object count plus per-partition capacities (the cardinality vector).
class PartitionSpec {
 public:
  explicit PartitionSpec(std::vector<std::size_t> capacities);

  /// W objects split into R partitions of W/R each.
  static PartitionSpec equi(std::size_t objects, std::size_t partitions);

  std::size_t object_count() const noexcept { return objects_; }
  std::size_t partition_count() const noexcept { return capacities_.size(); }
  std::size_t capacity(std::size_t r) const { return capacities_.at(r); }
  std::span<const std::size_t> capacities() const noexcept { return capacities_; }
  bool is_equi() const noexcept;

  std::uint64_t pair_count() const noexcept;
  /// Number of unordered pairs sharing a partition in any capacity-respecting assignment.
  std::uint64_t same_pair_count() const noexcept;
  std::uint64_t diff_pair_count() const noexcept { return pair_count() - same_pair_count(); }

  /// "r3w9" for equi-partitions, "r3w9[2,3,4]" otherwise.
  std::string name() const;

  bool operator==(const PartitionSpec&) const = default;

 private:
  std::vector<std::size_t> capacities_;
  std::size_t objects_ = 0;
};

/// Must-link / cannot-link pairs and per-object allowed partitions. Plain data;
/// checked against a PartitionSpec by validate_constraints or Problem.
class ConstraintSet {
 public:
  void add_must_link(std::size_t a, std::size_t b) { must_.insert(ObjectPair(a, b)); }
  void add_cannot_link(std::size_t a, std::size_t b) { cannot_.insert(ObjectPair(a, b)); }
  /// Restricts `object` to `partitions`; repeated calls intersect.
  void allow(std::size_t object, std::vector<std::size_t> partitions);

  const std::set<ObjectPair>& must_link() const noexcept { return must_; }
  const std::set<ObjectPair>& cannot_link() const noexcept { return cannot_; }
  const std::map<std::size_t, std::vector<std::size_t>>& allowed() const noexcept { return allowed_; }

  bool empty() const noexcept { return must_.empty() && cannot_.empty() && allowed_.empty(); }

 private:
  std::set<ObjectPair> must_;
  std::set<ObjectPair> cannot_;
  std::map<std::size_t, std::vector<std::size_t>> allowed_;
};

/// Labeled mapping object -> partition.
class Assignment {
 public:
  Assignment() = default;
  explicit Assignment(std::vector<Label> labels) : labels_(std::move(labels)) {}

  std::size_t size() const noexcept { return labels_.size(); }
  Label operator[](std::size_t i) const noexcept { return labels_[i]; }
  Label label(std::size_t i) const;
  std::span<const Label> labels() const noexcept { return labels_; }

  void set(std::size_t i, Label r) { labels_.at(i) = r; }
  void swap_labels(std::size_t i, std::size_t j) { std::swap(labels_.at(i), labels_.at(j)); }

  bool operator==(const Assignment&) const = default;

 private:
  std::vector<Label> labels_;
};

std::string to_string(const Assignment& a);

/// Constraint check of (spec, cons). Throws MalformedConstraint for out-of-range
/// or contradictory rules and InfeasibleConstraints when no assignment satisfies them.
void validate_constraints(const PartitionSpec& spec, const ConstraintSet& cons);

/// A validated spec with its constraints resolved into per-object lookups.
/// Must-link rules are closed transitively into groups.
class Problem {
 public:
  explicit Problem(PartitionSpec spec, ConstraintSet cons = {});

  const PartitionSpec& spec() const noexcept { return spec_; }
  const ConstraintSet& constraints() const noexcept { return cons_; }
  std::size_t object_count() const noexcept { return spec_.object_count(); }
  std::size_t partition_count() const noexcept { return spec_.partition_count(); }

  bool unconstrained() const noexcept { return cons_.empty(); }
  /// True when permuting partition labels maps feasible assignments onto feasible
  /// assignments with equal prior (equal capacities, no allowed-set restrictions).
  bool label_symmetric() const noexcept { return symmetric_; }

  std::size_t group_of(std::size_t object) const { return group_.at(object); }
  bool must_link(std::size_t a, std::size_t b) const { return a != b && group_.at(a) == group_.at(b); }
  bool cannot_link(std::size_t a, std::size_t b) const;
  std::span<const std::size_t> cannot_partners(std::size_t object) const { return cannot_adj_.at(object); }
  bool allowed(std::size_t object, std::size_t partition) const {
    return allowed_[object * spec_.partition_count() + partition] != 0;
  }

  /// Capacities, labels in range and every rule.
  bool satisfied_by(const Assignment& a) const;

 private:
  PartitionSpec spec_;
  ConstraintSet cons_;
  std::vector<std::size_t> group_;
  std::vector<std::vector<std::size_t>> cannot_adj_;
  std::vector<std::uint8_t> allowed_;
  bool symmetric_ = true;
};

/// Incremental state of the sequential placement prior. Objects are placed in
/// index order; the next object's weight on partition r is the remaining capacity
/// of r, or zero where capacity, allowed set, cannot-link or must-link forbids it.
class PlacementChain {
 public:
  explicit PlacementChain(const Problem& problem);

  void reset();
  const Problem& problem() const noexcept { return *problem_; }
  std::size_t next_object() const noexcept { return labels_.size(); }
  bool complete() const noexcept { return labels_.size() == problem_->object_count(); }

  /// Fills `out` (size R) with unnormalized weights for the next object; returns their sum.
  std::size_t weights(std::span<std::size_t> out) const;
  void place(Label r);
  /// Drops placements back to `objects` placed objects.
  void truncate(std::size_t objects);

  std::span<const Label> labels() const noexcept { return labels_; }
  std::size_t remaining(std::size_t r) const { return remaining_[r]; }

 private:
  const Problem* problem_;
  std::vector<std::size_t> remaining_;
  std::vector<Label> labels_;
  std::vector<std::int64_t> group_label_;
  std::vector<std::size_t> group_first_;
};

/// Normalized placement distribution of `object` given labels for objects [0, object).
/// Throws DeadEnd when every partition is excluded.
std::vector<double> conditional_placement_distribution(const Problem& problem,
                                                       std::span<const Label> prefix,
                                                       std::size_t object);

/// Log of the chain prior; -inf when `a` breaks any rule or capacity.
double log_prior(const Problem& problem, const Assignment& a);

bool same_partition(const Assignment& a, std::size_t i, std::size_t j);

/// Relabels partitions in order of first appearance.
Assignment canonical_labels(const Assignment& a);

/// True when a partition-label permutation maps a onto b.
bool equivalent_up_to_relabeling(const Assignment& a, const Assignment& b);

/// Visits feasible assignments in lexicographic label order. With `canonical`
/// only first-appearance labelings are produced, one per relabeling class
/// (requires a label-symmetric problem). The visitor returns false to stop.
/// Returns the number of assignments visited.
std::uint64_t for_each_assignment(const Problem& problem, bool canonical,
                                  const std::function<bool(const Assignment&)>& visit);

/// W! / (prod c_r! * prod over equal-capacity groups of multiplicity!), or nullopt on overflow.
std::optional<std::uint64_t> unlabeled_partition_count(const PartitionSpec& spec);
double log_unlabeled_partition_count(const PartitionSpec& spec);

/// Parsed constraint file: `must a b`, `cannot a b`, `allow a s1,s2`,
/// `sections s1,...`, `capacity c[,...]`. Names may be double-quoted.
struct ConstraintFile {
  std::vector<std::string> sections;
  std::vector<std::size_t> capacities;  // empty when not given; one entry applies to all sections
  ConstraintSet constraints;
};

ConstraintFile parse_constraint_file(std::istream& in, std::span<const std::string> items,
                                     std::vector<std::string> default_sections);
ConstraintFile load_constraint_file(const std::string& path, std::span<const std::string> items,
                                    std::vector<std::string> default_sections);
void write_constraint_file(std::ostream& out, const ConstraintSet& cons,
                           std::span<const std::string> items,
                           std::span<const std::string> sections);

/// "0", "1", ... as names for anonymous objects or sections.
std::vector<std::string> index_names(std::size_t n);

}  // namespace equipart
