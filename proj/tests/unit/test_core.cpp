#include <cmath>
#include <map>
#include <memory>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>

#include "doctest.h"
#include "equipart/core.hpp"
#include "equipart/error.hpp"
#include "equipart/rng.hpp"

using namespace equipart;

namespace {

Assignment A(std::vector<Label> v) { return Assignment(std::move(v)); }

std::vector<Assignment> all(const Problem& p, bool canonical) {
  std::vector<Assignment> out;
  for_each_assignment(p, canonical, [&](const Assignment& a) {
    out.push_back(a);
    return true;
  });
  return out;
}

// Every labeling with labels in range, capacity or not.
std::vector<Assignment> every_labeling(std::size_t w, std::size_t r) {
  std::vector<Assignment> out;
  std::vector<Label> v(w, 0);
  while (true) {
    out.emplace_back(v);
    std::size_t k = 0;
    while (k < w && ++v[k] == r) v[k++] = 0;
    if (k == w) break;
  }
  return out;
}

}  // namespace

TEST_CASE("partition spec basics") {
  const auto s = PartitionSpec::equi(9, 3);
  CHECK(s.object_count() == 9);
  CHECK(s.partition_count() == 3);
  CHECK(s.is_equi());
  CHECK(s.pair_count() == 36);
  CHECK(s.same_pair_count() == 9);
  CHECK(s.diff_pair_count() == 27);
  CHECK(s.name() == "r3w9");
  CHECK(PartitionSpec({2, 3, 4}).name() == "r3w9[2,3,4]");
  CHECK_THROWS_AS(PartitionSpec({}), DomainError);
  CHECK_THROWS_AS(PartitionSpec({2, 0}), DomainError);
  CHECK_THROWS_AS(PartitionSpec::equi(7, 3), DomainError);
}

TEST_CASE("validate_constraints examples") {
  const auto s = PartitionSpec::equi(4, 2);
  CHECK_NOTHROW(validate_constraints(s, {}));

  ConstraintSet chain;
  chain.add_must_link(0, 1);
  chain.add_must_link(1, 2);
  CHECK_THROWS_AS(validate_constraints(s, chain), InfeasibleConstraints);

  ConstraintSet contradiction;
  contradiction.add_must_link(0, 1);
  contradiction.add_cannot_link(0, 1);
  CHECK_THROWS_AS(validate_constraints(s, contradiction), MalformedConstraint);

  ConstraintSet closure;  // cannot-link inside a must-link closure
  closure.add_must_link(0, 1);
  closure.add_must_link(1, 2);
  closure.add_cannot_link(0, 2);
  CHECK_THROWS_AS(validate_constraints(PartitionSpec::equi(6, 2), closure), MalformedConstraint);

  ConstraintSet out_of_range;
  out_of_range.add_cannot_link(0, 4);
  CHECK_THROWS_AS(validate_constraints(s, out_of_range), MalformedConstraint);

  ConstraintSet empty_allow;
  empty_allow.allow(0, {});
  CHECK_THROWS_AS(validate_constraints(s, empty_allow), MalformedConstraint);

  ConstraintSet bad_partition;
  bad_partition.allow(0, {5});
  CHECK_THROWS_AS(validate_constraints(s, bad_partition), MalformedConstraint);

  ConstraintSet crowded;  // three objects pinned to one partition of capacity 2
  for (std::size_t i = 0; i < 3; ++i) crowded.allow(i, {0});
  CHECK_THROWS_AS(validate_constraints(s, crowded), InfeasibleConstraints);

  ConstraintSet triangle;  // pairwise apart with only two partitions
  triangle.add_cannot_link(0, 1);
  triangle.add_cannot_link(1, 2);
  triangle.add_cannot_link(0, 2);
  CHECK_THROWS_AS(validate_constraints(s, triangle), InfeasibleConstraints);
  CHECK_NOTHROW(validate_constraints(PartitionSpec::equi(6, 3), triangle));
}

TEST_CASE("allow intersects on repeat") {
  ConstraintSet c;
  c.allow(1, {0, 1, 2});
  c.allow(1, {2, 1});
  CHECK(c.allowed().at(1) == std::vector<std::size_t>{1, 2});
}

TEST_CASE("conditional placement distribution reproduces the CPT of object C") {
  const Problem p(PartitionSpec::equi(4, 2));
  const std::vector<Label> same{0, 0};
  const std::vector<Label> split{0, 1};
  CHECK(conditional_placement_distribution(p, same, 2) == std::vector<double>{0.0, 1.0});
  CHECK(conditional_placement_distribution(p, split, 2) == std::vector<double>{0.5, 0.5});
  CHECK(conditional_placement_distribution(p, {}, 0) == std::vector<double>{0.5, 0.5});
  CHECK_THROWS_AS(conditional_placement_distribution(p, same, 3), LengthMismatch);
  CHECK_THROWS_AS(conditional_placement_distribution(p, {}, 4), IndexOutOfRange);
  const std::vector<Label> overfull{0, 0, 0};
  CHECK_THROWS_AS(conditional_placement_distribution(p, overfull, 3), DomainError);
}

TEST_CASE("full partition gets zero placement mass") {
  const Problem p(PartitionSpec::equi(16, 4));
  const std::vector<Label> prefix{3, 3, 3, 3};
  const auto d = conditional_placement_distribution(p, prefix, 4);
  CHECK(d[3] == 0.0);
  CHECK(d[0] == doctest::Approx(1.0 / 3));
}

TEST_CASE("dead end is reported") {
  // 0 and 1 must differ from 2; with 0,1 in different partitions 2 has nowhere to go
  ConstraintSet c;
  c.add_cannot_link(0, 2);
  c.add_cannot_link(1, 2);
  const Problem p(PartitionSpec::equi(4, 2), c);
  const std::vector<Label> prefix{0, 1};
  CHECK_THROWS_AS(conditional_placement_distribution(p, prefix, 2), DeadEnd);
}

TEST_CASE("distribution sums to one or dead-ends, over random prefixes") {
  Rng rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t r = 2 + uniform_index(rng, 2);
    const std::size_t w = r * (2 + uniform_index(rng, 2));
    ConstraintSet c;
    for (int k = 0; k < 2; ++k) {
      const auto a = uniform_index(rng, w);
      const auto b = uniform_index(rng, w);
      if (a != b) c.add_cannot_link(a, b);
    }
    std::unique_ptr<Problem> p;
    try {
      p = std::make_unique<Problem>(PartitionSpec::equi(w, r), c);
    } catch (const Error&) {
      continue;
    }
    PlacementChain chain(*p);
    std::vector<std::size_t> weights(r);
    while (!chain.complete()) {
      const auto i = chain.next_object();
      try {
        const auto d = conditional_placement_distribution(*p, chain.labels(), i);
        CHECK(std::accumulate(d.begin(), d.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));
      } catch (const DeadEnd&) {
        CHECK(chain.weights(weights) == 0);
        break;
      }
      chain.weights(weights);
      chain.place(static_cast<Label>(sample_weighted(rng, weights, chain.weights(weights))));
    }
  }
}

TEST_CASE("log prior examples") {
  const Problem p(PartitionSpec::equi(4, 2));
  CHECK(log_prior(p, A({0, 0, 1, 1})) == doctest::Approx(std::log(1.0 / 6)).epsilon(1e-12));
  CHECK(log_prior(p, A({0, 0, 0, 1})) == -INFINITY);
  CHECK(log_prior(p, A({0, 0, 2, 1})) == -INFINITY);
  CHECK_THROWS_AS(log_prior(p, A({0, 0, 1})), LengthMismatch);
}

TEST_CASE("chain prior is uniform over valid labelings") {
  for (auto [w, r] : {std::pair<std::size_t, std::size_t>{4, 2}, {6, 2}, {6, 3}, {9, 3}, {8, 4}}) {
    const Problem p(PartitionSpec::equi(w, r));
    const auto labeled = all(p, false);
    const double expected = -std::log(static_cast<double>(labeled.size()));
    const double first = log_prior(p, labeled.front());
    CHECK(first == doctest::Approx(expected).epsilon(1e-12));
    for (const auto& a : labeled) CHECK(log_prior(p, a) == first);  // bit-identical
    if (w <= 8) {
      std::size_t finite = 0;
      for (const auto& a : every_labeling(w, r)) finite += log_prior(p, a) > -INFINITY;
      CHECK(finite == labeled.size());
    }
  }
  const Problem uneven(PartitionSpec({1, 2, 3}));
  const auto labeled = all(uneven, false);
  CHECK(labeled.size() == 60);  // 6! / (1! 2! 3!)
  for (const auto& a : labeled) CHECK(std::exp(log_prior(uneven, a)) == doctest::Approx(1.0 / 60));
}

TEST_CASE("same partition") {
  const auto a = A({0, 1, 0, 1});
  CHECK(same_partition(a, 0, 2));
  CHECK_FALSE(same_partition(a, 0, 1));
  CHECK_THROWS_AS(same_partition(a, 0, 4), IndexOutOfRange);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      if (i != j) CHECK(same_partition(a, i, j) == same_partition(a, j, i));
    }
  }
}

TEST_CASE("relabeling equivalence") {
  CHECK(equivalent_up_to_relabeling(A({1, 1, 2, 2}), A({2, 2, 1, 1})));
  CHECK_FALSE(equivalent_up_to_relabeling(A({1, 1, 2, 2}), A({1, 2, 1, 2})));
  CHECK_THROWS_AS(equivalent_up_to_relabeling(A({0, 1}), A({0, 1, 1})), LengthMismatch);
  CHECK(canonical_labels(A({2, 0, 2, 1})) == A({0, 1, 0, 2}));
}

TEST_CASE("unlabeled class counts") {
  const std::map<std::string, std::uint64_t> expected{{"r2w4", 3}, {"r2w6", 10}, {"r3w6", 15}, {"r3w9", 280}};
  const std::map<std::string, double> table{{"r2w4", -1.09}, {"r2w6", -2.30}, {"r3w6", -2.70}, {"r3w9", -5.63}};
  for (auto [w, r] : {std::pair<std::size_t, std::size_t>{4, 2}, {6, 2}, {6, 3}, {9, 3}}) {
    const auto spec = PartitionSpec::equi(w, r);
    const Problem p(spec);
    const auto classes = all(p, true);
    CHECK(classes.size() == expected.at(spec.name()));
    CHECK(unlabeled_partition_count(spec) == expected.at(spec.name()));
    CHECK(std::abs(-std::log(static_cast<double>(classes.size())) - table.at(spec.name())) < 0.01);
    // canonical representatives are pairwise inequivalent and cover every labeling
    std::set<std::vector<Label>> reps;
    for (const auto& a : classes) reps.insert({a.labels().begin(), a.labels().end()});
    for (const auto& a : all(p, false)) {
      const auto c = canonical_labels(a);
      CHECK(reps.count({c.labels().begin(), c.labels().end()}) == 1);
    }
  }
  CHECK(unlabeled_partition_count(PartitionSpec::equi(16, 4)) == 2'627'625);
  CHECK(-log_unlabeled_partition_count(PartitionSpec::equi(16, 4)) == doctest::Approx(-14.78).epsilon(0.001));
}

TEST_CASE("constraint soundness over random instances") {
  Rng rng(5);
  int checked = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const std::size_t r = 2 + uniform_index(rng, 2);
    const std::size_t w = r * (1 + uniform_index(rng, 3));
    ConstraintSet c;
    const auto rules = uniform_index(rng, 4);
    for (std::size_t k = 0; k < rules; ++k) {
      const auto a = uniform_index(rng, w);
      const auto b = uniform_index(rng, w);
      switch (uniform_index(rng, 3)) {
        case 0:
          if (a != b) c.add_must_link(a, b);
          break;
        case 1:
          if (a != b) c.add_cannot_link(a, b);
          break;
        default:
          c.allow(a, {uniform_index(rng, r), uniform_index(rng, r)});
      }
    }
    std::unique_ptr<Problem> p;
    try {
      p = std::make_unique<Problem>(PartitionSpec::equi(w, r), c);
    } catch (const InfeasibleConstraints&) {
      continue;
    } catch (const MalformedConstraint&) {
      continue;
    }
    for (int k = 0; k < 50; ++k) {
      std::vector<Label> v(w);
      for (auto& x : v) x = static_cast<Label>(uniform_index(rng, r));
      const Assignment a(v);
      const bool finite = log_prior(*p, a) > -INFINITY;
      CHECK(finite == p->satisfied_by(a));
      ++checked;
    }
    // feasible problems enumerate at least one assignment, all satisfying
    std::size_t n = 0;
    for_each_assignment(*p, false, [&](const Assignment& a) {
      CHECK(p->satisfied_by(a));
      return ++n < 200;
    });
    CHECK(n > 0);
  }
  CHECK(checked > 1000);
}

TEST_CASE("swap moves connect all labelings of r2w4") {
  const Problem p(PartitionSpec::equi(4, 2));
  const auto labeled = all(p, false);
  std::set<std::vector<Label>> seen{{labeled[0].labels().begin(), labeled[0].labels().end()}};
  std::queue<std::vector<Label>> todo;
  todo.push(*seen.begin());
  while (!todo.empty()) {
    auto v = todo.front();
    todo.pop();
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = i + 1; j < 4; ++j) {
        if (v[i] == v[j]) continue;
        auto u = v;
        std::swap(u[i], u[j]);
        if (seen.insert(u).second) todo.push(u);
      }
    }
  }
  CHECK(seen.size() == labeled.size());
}

TEST_CASE("placement chain honours must-link groups") {
  ConstraintSet c;
  c.add_must_link(0, 3);
  const Problem p(PartitionSpec::equi(4, 2), c);
  PlacementChain chain(p);
  std::vector<std::size_t> w(2);
  chain.place(1);
  chain.place(0);
  chain.place(0);
  CHECK(chain.weights(w) == 1);
  CHECK(w == std::vector<std::size_t>{0, 1});
  chain.truncate(1);
  CHECK(chain.next_object() == 1);
  CHECK(chain.remaining(1) == 1);
}

TEST_CASE("constraint file round trip") {
  std::istringstream in(R"(# rules
sections front, back, "cold room"
capacity 2
must a b
cannot a "c d"
allow "c d" "cold room",back
)");
  const std::vector<std::string> items{"a", "b", "c d", "e", "f", "g"};
  const auto f = parse_constraint_file(in, items, {});
  CHECK(f.sections == std::vector<std::string>{"front", "back", "cold room"});
  CHECK(f.capacities == std::vector<std::size_t>{2});
  CHECK(f.constraints.must_link().count(ObjectPair(0, 1)) == 1);
  CHECK(f.constraints.cannot_link().count(ObjectPair(0, 2)) == 1);
  CHECK(f.constraints.allowed().at(2) == std::vector<std::size_t>{1, 2});

  std::ostringstream out;
  write_constraint_file(out, f.constraints, items, f.sections);
  std::istringstream again(out.str());
  const auto g = parse_constraint_file(again, items, {});
  CHECK(g.sections == f.sections);
  CHECK(g.constraints.must_link() == f.constraints.must_link());
  CHECK(g.constraints.cannot_link() == f.constraints.cannot_link());
  CHECK(g.constraints.allowed() == f.constraints.allowed());
}

TEST_CASE("constraint file errors") {
  const auto items = index_names(4);
  auto parse = [&](const std::string& text) {
    std::istringstream in(text);
    return parse_constraint_file(in, items, index_names(2));
  };
  CHECK_THROWS_AS(parse("must 0 9\n"), UnknownItem);
  CHECK_THROWS_AS(parse("allow 0 7\n"), UnknownSection);
  CHECK_THROWS_AS(parse("must 0\n"), ParseError);
  CHECK_THROWS_AS(parse("frobnicate 0 1\n"), ParseError);
  CHECK_THROWS_AS(parse("allow 0 1\nsections x,y\n"), ParseError);
  CHECK_THROWS_AS(parse("capacity 0\n"), ParseError);
  CHECK_NOTHROW(parse("allow 0 1\n"));
  try {
    parse("\n\nmust 0\n");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
}
