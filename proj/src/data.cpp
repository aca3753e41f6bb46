#include "equipart/data.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <unordered_map>

#include "equipart/error.hpp"
#include "equipart/rng.hpp"

namespace equipart {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

template <class T>
void shuffle(std::vector<T>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[uniform_index(rng, i)]);
}

std::size_t find_name(std::span<const std::string> names, const std::string& name) {
  const auto it = std::find(names.begin(), names.end(), name);
  return it == names.end() ? names.size() : static_cast<std::size_t>(it - names.begin());
}

}  // namespace

TransactionSet parse_transactions(std::istream& in) {
  TransactionSet ts;
  std::unordered_map<std::string, std::size_t> index;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    std::vector<std::size_t> t;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      const auto name = trim(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
      if (name.empty()) throw ParseError(line_no, "empty item name");
      auto [it, fresh] = index.try_emplace(name, ts.items.size());
      if (fresh) ts.items.push_back(name);
      if (std::find(t.begin(), t.end(), it->second) == t.end()) t.push_back(it->second);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    ts.transactions.push_back(std::move(t));
  }
  if (ts.transactions.empty()) throw EmptyFile("no transactions found");
  return ts;
}

TransactionSet load_transactions(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open transactions file '" + path + "'");
  return parse_transactions(in);
}

void write_transactions(std::ostream& out, const TransactionSet& ts) {
  for (const auto& t : ts.transactions) {
    for (std::size_t k = 0; k < t.size(); ++k) out << (k ? "," : "") << ts.items[t[k]];
    out << '\n';
  }
}

std::vector<std::size_t> FoldPlan::train() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < fold_of.size(); ++i) {
    if (fold_of[i] == train_fold) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> FoldPlan::test() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < fold_of.size(); ++i) {
    if (fold_of[i] != train_fold) out.push_back(i);
  }
  return out;
}

FoldPlan make_fold_plan(std::size_t transactions, std::size_t k, std::size_t train_fold, std::uint64_t seed) {
  if (k == 0) throw DomainError("fold count must be positive");
  if (train_fold >= k) throw IndexOutOfRange("training fold out of range");
  std::vector<std::size_t> order(transactions);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  shuffle(order, rng);
  FoldPlan plan;
  plan.k = k;
  plan.train_fold = train_fold;
  plan.fold_of.resize(transactions);
  for (std::size_t pos = 0; pos < transactions; ++pos) plan.fold_of[order[pos]] = pos % k;
  return plan;
}

void write_fold_csv(std::ostream& out, const FoldPlan& plan) {
  out << "transaction_id,fold\n";
  for (std::size_t i = 0; i < plan.fold_of.size(); ++i) out << i << ',' << plan.fold_of[i] << '\n';
}

std::vector<ObjectPair> transactions_to_requests(const TransactionSet& ts, const FoldPlan& plan, PairMode mode,
                                                 std::uint64_t seed) {
  if (plan.fold_of.size() != ts.transactions.size()) throw LengthMismatch("fold plan does not cover the transactions");
  Rng rng(seed);
  std::vector<ObjectPair> out;
  for (auto idx : plan.train()) {
    const auto& t = ts.transactions[idx];
    if (t.size() < 2) continue;
    if (mode == PairMode::all_pairs) {
      for (std::size_t a = 0; a < t.size(); ++a) {
        for (std::size_t b = a + 1; b < t.size(); ++b) out.emplace_back(t[a], t[b]);
      }
    } else {
      const auto a = uniform_index(rng, t.size());
      auto b = uniform_index(rng, t.size() - 1);
      if (b >= a) ++b;
      out.emplace_back(t[a], t[b]);
    }
  }
  shuffle(out, rng);
  return out;
}

std::vector<std::string> warehouse_sections(std::size_t count) {
  std::vector<std::string> names{"entrance", "counter", "cooler"};
  names.resize(std::min(count, names.size()));
  for (std::size_t k = names.size(); k < count; ++k) names.push_back("aisle_" + std::to_string(k - 2));
  return names;
}

ConstraintSet warehouse_constraints(std::span<const std::string> catalog, std::span<const std::string> sections) {
  auto item = [&](const std::string& name) {
    const auto k = find_name(catalog, name);
    if (k == catalog.size()) throw UnknownItem("catalog has no item '" + name + "'");
    return k;
  };
  auto section = [&](const std::string& name) {
    const auto k = find_name(sections, name);
    if (k == sections.size()) throw UnknownSection("no section named '" + name + "'");
    return k;
  };

  ConstraintSet cons;
  cons.allow(item("shopping bags"), {section("entrance"), section("counter")});

  const std::size_t apart[] = {item("whole milk"), item("rolls/buns"), item("tropical fruit")};
  cons.add_cannot_link(apart[0], apart[1]);
  cons.add_cannot_link(apart[0], apart[2]);
  cons.add_cannot_link(apart[1], apart[2]);

  cons.add_must_link(item("white wine"), item("specialty chocolate"));
  cons.allow(item("yogurt"), {section("cooler")});

  const auto cooler = section("cooler");
  std::vector<std::size_t> not_cooler;
  for (std::size_t s = 0; s < sections.size(); ++s) {
    if (s != cooler) not_cooler.push_back(s);
  }
  cons.allow(item("tropical fruit"), std::move(not_cooler));
  return cons;
}

std::uint64_t trip_cost(const Assignment& a, std::span<const std::size_t> transaction) {
  std::vector<Label> seen;
  for (auto i : transaction) {
    if (i >= a.size()) throw UnassignedItem("item " + std::to_string(i) + " has no section");
    if (std::find(seen.begin(), seen.end(), a[i]) == seen.end()) seen.push_back(a[i]);
  }
  return std::uint64_t{1} << seen.size();
}

double mean_trip_cost(const Assignment& a, const TransactionSet& ts, std::span<const std::size_t> which) {
  if (which.empty()) return 0.0;
  double sum = 0.0;
  for (auto idx : which) sum += static_cast<double>(trip_cost(a, ts.transactions.at(idx)));
  return sum / static_cast<double>(which.size());
}

std::vector<std::string> audit_constraints(const Problem& problem, const Assignment& a,
                                           std::span<const std::string> items,
                                           std::span<const std::string> sections) {
  std::vector<std::string> out;
  auto item = [&](std::size_t i) { return i < items.size() ? items[i] : std::to_string(i); };
  auto section = [&](std::size_t s) { return s < sections.size() ? sections[s] : std::to_string(s); };
  const auto& spec = problem.spec();
  if (a.size() != spec.object_count()) {
    out.push_back("assignment covers " + std::to_string(a.size()) + " of " +
                  std::to_string(spec.object_count()) + " items");
    return out;
  }
  std::vector<std::size_t> load(spec.partition_count(), 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] >= spec.partition_count()) {
      out.push_back(item(i) + " placed in unknown section " + std::to_string(a[i]));
      continue;
    }
    ++load[a[i]];
    if (!problem.allowed(i, a[i])) out.push_back(item(i) + " not allowed in " + section(a[i]));
  }
  for (std::size_t r = 0; r < load.size(); ++r) {
    if (load[r] != spec.capacity(r)) {
      out.push_back(section(r) + " holds " + std::to_string(load[r]) + " items, capacity " +
                    std::to_string(spec.capacity(r)));
    }
  }
  const auto& cons = problem.constraints();
  for (const auto& p : cons.must_link()) {
    if (a[p.first] != a[p.second]) out.push_back(item(p.first) + " and " + item(p.second) + " must share a section");
  }
  for (const auto& p : cons.cannot_link()) {
    if (a[p.first] == a[p.second]) out.push_back(item(p.first) + " and " + item(p.second) + " must not share a section");
  }
  return out;
}

}  // namespace equipart
