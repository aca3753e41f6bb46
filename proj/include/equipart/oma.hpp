#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "equipart/core.hpp"

namespace equipart {

inline constexpr std::size_t kDefaultOmaStates = 10;

// Object Migration Automaton. Depth 1 is the innermost state of a class,
// depth `states` its boundary.
struct OmaState {
  std::size_t states = kDefaultOmaStates;
  std::vector<Label> class_of;
  std::vector<std::size_t> depth;

  std::size_t object_count() const noexcept { return class_of.size(); }
};

/// Round-robin classes, every object at the boundary. Throws UnsupportedSpec
/// unless all capacities are equal, DomainError for zero states.
OmaState oma_init(const PartitionSpec& spec, std::size_t states = kDefaultOmaStates);

/// Applies one request; every request is treated as convergent.
///  (a) same class: both move one step inward.
///  (b) different classes, neither at the boundary: both move one step outward.
///  (c) exactly one (i) at the boundary: j moves outward, i joins j's class at the
///      boundary, and the deepest other member of j's class (smallest index on
///      ties) takes i's old place at the boundary.
///  (d) both at the boundary: the lower-indexed object migrates as in (c).
void oma_step(OmaState& state, ObjectPair request);

Assignment oma_answer(const OmaState& state);

}  // namespace equipart
