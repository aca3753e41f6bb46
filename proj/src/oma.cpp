#include "equipart/oma.hpp"

#include "equipart/error.hpp"

namespace equipart {

OmaState oma_init(const PartitionSpec& spec, std::size_t states) {
  if (!spec.is_equi()) throw UnsupportedSpec("OMA handles equal-capacity partitions only, got " + spec.name());
  if (states == 0) throw DomainError("OMA needs at least one depth state");
  OmaState s;
  s.states = states;
  const auto n = spec.object_count();
  const auto r = spec.partition_count();
  s.class_of.resize(n);
  s.depth.assign(n, states);
  for (std::size_t i = 0; i < n; ++i) s.class_of[i] = static_cast<Label>(i % r);
  return s;
}

void oma_step(OmaState& s, ObjectPair request) {
  const auto n = s.object_count();
  if (request.first >= n || request.second >= n) throw IndexOutOfRange("request names an unknown object");
  if (request.first == request.second) throw DomainError("request pairs an object with itself");

  const auto boundary = s.states;
  auto inward = [&](std::size_t k) {
    if (s.depth[k] > 1) --s.depth[k];
  };
  auto outward = [&](std::size_t k) {
    if (s.depth[k] < boundary) ++s.depth[k];
  };

  std::size_t i = request.first;
  std::size_t j = request.second;
  if (s.class_of[i] == s.class_of[j]) {
    inward(i);
    inward(j);
    return;
  }
  const bool bi = s.depth[i] == boundary;
  const bool bj = s.depth[j] == boundary;
  if (!bi && !bj) {
    outward(i);
    outward(j);
    return;
  }
  if (!bi) std::swap(i, j);  // i is now the migrant at the boundary

  outward(j);
  const Label from = s.class_of[i];
  const Label to = s.class_of[j];
  std::size_t swap_with = n;
  for (std::size_t k = 0; k < n; ++k) {
    if (k == j || s.class_of[k] != to) continue;
    if (swap_with == n || s.depth[k] > s.depth[swap_with]) swap_with = k;
  }
  s.class_of[i] = to;
  s.depth[i] = boundary;
  if (swap_with == n) return;  // singleton classes: nothing to trade back
  s.class_of[swap_with] = from;
  s.depth[swap_with] = boundary;
}

Assignment oma_answer(const OmaState& s) { return Assignment(s.class_of); }

}  // namespace equipart
