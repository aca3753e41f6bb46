#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "equipart/core.hpp"

namespace equipart {

/// Item catalog in first-appearance order plus transactions as item-index sets.
struct TransactionSet {
  std::vector<std::string> items;
  std::vector<std::vector<std::size_t>> transactions;

  bool operator==(const TransactionSet&) const = default;
};

/// One transaction per line, comma-separated item names, `#` starts a comment.
/// Names are trimmed; duplicates within a line collapse. Throws ParseError for an
/// empty name and EmptyFile when no transaction is found.
TransactionSet parse_transactions(std::istream& in);
TransactionSet load_transactions(const std::string& path);
void write_transactions(std::ostream& out, const TransactionSet& ts);

struct FoldPlan {
  std::size_t k = 5;
  std::vector<std::size_t> fold_of;
  std::size_t train_fold = 0;

  std::vector<std::size_t> train() const;
  std::vector<std::size_t> test() const;
};

/// Shuffles transactions into k folds whose sizes differ by at most one.
FoldPlan make_fold_plan(std::size_t transactions, std::size_t k, std::size_t train_fold, std::uint64_t seed);

/// CSV with header `transaction_id,fold`.
void write_fold_csv(std::ostream& out, const FoldPlan& plan);

enum class PairMode { all_pairs, one_random_pair };

/// Pairwise requests from the training fold, in seeded shuffled order.
std::vector<ObjectPair> transactions_to_requests(const TransactionSet& ts, const FoldPlan& plan,
                                                 PairMode mode = PairMode::all_pairs,
                                                 std::uint64_t seed = 0);

/// entrance, counter, cooler, aisle_1 ... up to `count` names.
std::vector<std::string> warehouse_sections(std::size_t count = 13);

/// The five placement rules of the grocery warehouse. Throws UnknownItem or
/// UnknownSection when the catalog or section list lacks a name the rules use.
ConstraintSet warehouse_constraints(std::span<const std::string> catalog,
                                    std::span<const std::string> sections);

/// 2^v for v distinct sections among the transaction's items. Throws UnassignedItem.
std::uint64_t trip_cost(const Assignment& a, std::span<const std::size_t> transaction);

double mean_trip_cost(const Assignment& a, const TransactionSet& ts, std::span<const std::size_t> which);

/// Constraint violations of `a` as human-readable lines; empty when sound.
std::vector<std::string> audit_constraints(const Problem& problem, const Assignment& a,
                                           std::span<const std::string> items,
                                           std::span<const std::string> sections);

}  // namespace equipart
