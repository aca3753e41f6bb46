#include <algorithm>

#include "doctest.h"
#include "equipart/core.hpp"
#include "equipart/error.hpp"
#include "equipart/oma.hpp"
#include "equipart/simulator.hpp"

using namespace equipart;

namespace {

void check_invariants(const OmaState& s, const PartitionSpec& spec) {
  std::vector<std::size_t> sizes(spec.partition_count(), 0);
  for (auto c : s.class_of) ++sizes.at(c);
  for (std::size_t r = 0; r < sizes.size(); ++r) CHECK(sizes[r] == spec.capacity(r));
  for (auto d : s.depth) {
    CHECK(d >= 1);
    CHECK(d <= s.states);
  }
}

}  // namespace

TEST_CASE("init") {
  const auto s = oma_init(PartitionSpec::equi(4, 2));
  CHECK(s.class_of == std::vector<Label>{0, 1, 0, 1});
  CHECK(s.depth == std::vector<std::size_t>(4, 10));
  CHECK(oma_answer(s) == Assignment({0, 1, 0, 1}));
  CHECK(oma_init(PartitionSpec::equi(9, 3), 4).states == 4);
  CHECK_THROWS_AS(oma_init(PartitionSpec({2, 3})), UnsupportedSpec);
  CHECK_THROWS_AS(oma_init(PartitionSpec::equi(4, 2), 0), DomainError);
}

TEST_CASE("rule a: same class moves inward, floored at 1") {
  auto s = oma_init(PartitionSpec::equi(4, 2));
  s.depth = {3, 7, 5, 7};
  oma_step(s, ObjectPair(0, 2));
  CHECK(s.depth[0] == 2);
  CHECK(s.depth[2] == 4);
  s.depth[0] = s.depth[2] = 1;
  oma_step(s, ObjectPair(2, 0));
  CHECK(s.depth[0] == 1);
  CHECK(s.depth[2] == 1);
}

TEST_CASE("rule b: different classes off the boundary move outward") {
  auto s = oma_init(PartitionSpec::equi(4, 2));
  s.depth = {3, 9, 5, 7};
  oma_step(s, ObjectPair(0, 1));
  CHECK(s.class_of == std::vector<Label>{0, 1, 0, 1});
  CHECK(s.depth[0] == 4);
  CHECK(s.depth[1] == 10);
}

TEST_CASE("rule c: the boundary object migrates and the deepest partner swaps back") {
  auto s = oma_init(PartitionSpec::equi(6, 2));  // classes 0 1 0 1 0 1
  // object 2 at the boundary in class 0; object 1 in class 1 at depth 4
  s.depth = {5, 4, 10, 2, 6, 7};
  oma_step(s, ObjectPair(1, 2));
  CHECK(s.class_of[2] == 1);
  CHECK(s.depth[2] == 10);
  CHECK(s.depth[1] == 5);
  // class 1 without object 1 holds {3 (depth 2), 5 (depth 7)}: 5 is the deepest
  CHECK(s.class_of[5] == 0);
  CHECK(s.depth[5] == 10);
  CHECK(s.class_of[3] == 1);
  CHECK(s.depth[3] == 2);
}

TEST_CASE("rule c breaks depth ties by smallest index") {
  auto s = oma_init(PartitionSpec::equi(6, 2));
  s.depth = {10, 1, 3, 6, 3, 6};
  oma_step(s, ObjectPair(0, 1));
  CHECK(s.class_of[0] == 1);
  CHECK(s.class_of[3] == 0);
  CHECK(s.class_of[5] == 1);
}

TEST_CASE("rule d: both at the boundary, the lower index migrates") {
  auto s = oma_init(PartitionSpec::equi(4, 2));
  s.depth = {10, 10, 2, 4};
  oma_step(s, ObjectPair(1, 0));
  CHECK(s.class_of[0] == 1);
  CHECK(s.depth[0] == 10);
  CHECK(s.depth[1] == 10);  // outward from the boundary stays at the cap
  CHECK(s.class_of[3] == 0);
  CHECK(s.depth[3] == 10);
}

TEST_CASE("errors") {
  auto s = oma_init(PartitionSpec::equi(4, 2));
  CHECK_THROWS_AS(oma_step(s, ObjectPair(0, 4)), IndexOutOfRange);
  CHECK_THROWS_AS(oma_step(s, ObjectPair(2, 2)), DomainError);
}

TEST_CASE("invariants under random requests") {
  Rng rng(6);
  for (auto [w, r] : {std::pair<std::size_t, std::size_t>{4, 2}, {9, 3}, {16, 4}}) {
    const auto spec = PartitionSpec::equi(w, r);
    auto s = oma_init(spec, 1 + uniform_index(rng, 10));
    for (int k = 0; k < 10000; ++k) {
      const auto i = uniform_index(rng, w);
      auto j = uniform_index(rng, w - 1);
      if (j >= i) ++j;
      oma_step(s, ObjectPair(i, j));
      if (k % 97 == 0) check_invariants(s, spec);
    }
    check_invariants(s, spec);
  }
}

TEST_CASE("noise-free convergence on r2w4") {
  const Problem p(PartitionSpec::equi(4, 2));
  int converged = 0;
  const int n = 1000;
  for (int trial = 0; trial < n; ++trial) {
    const auto truth = generate_ground_truth(p, trial);
    Environment env(p, truth, 1.0, trial + 5000);
    auto s = oma_init(p.spec());
    for (int k = 0; k < 200; ++k) oma_step(s, env.sample_request());
    converged += equivalent_up_to_relabeling(oma_answer(s), truth);
  }
  CHECK(converged >= 990);
}
