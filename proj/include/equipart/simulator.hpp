#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "equipart/core.hpp"
#include "equipart/evidence.hpp"
#include "equipart/rng.hpp"

namespace equipart {

/// Completes `chain` from its current position by sampling the placement prior.
/// Returns false when a dead end is hit (the chain is left partially filled).
bool complete_from_prior(PlacementChain& chain, Rng& rng);

/// A sample from the chain prior; dead ends restart the draw.
Assignment generate_ground_truth(const Problem& problem, Rng& rng);
Assignment generate_ground_truth(const Problem& problem, std::uint64_t seed);

/// Hidden partitioning plus convergent-request probability. Single-threaded.
class Environment {
 public:
  /// Throws DegenerateEnvironment when either the convergent or the divergent
  /// pair set is empty, DomainError when `truth` breaks the problem's rules.
  Environment(const Problem& problem, Assignment truth, double p, std::uint64_t seed);

  const Assignment& truth() const noexcept { return truth_; }
  double p() const noexcept { return p_; }
  std::uint64_t seed() const noexcept { return seed_; }
  std::size_t object_count() const noexcept { return truth_.size(); }

  /// With probability p a uniformly drawn same-partition pair, else a uniformly
  /// drawn cross-partition pair.
  ObjectPair sample_request();

 private:
  Assignment truth_;
  double p_;
  std::uint64_t seed_;
  Rng rng_;
  std::vector<ObjectPair> convergent_;
  std::vector<ObjectPair> divergent_;
};

struct RequestStream {
  std::vector<ObjectPair> requests;
  PairCounts counts;
};

RequestStream stream(Environment& env, std::size_t requests);

PairCounts counts_from(std::span<const ObjectPair> requests, std::size_t objects);

/// CSV with header `t,i,j`, t counting from 1.
void write_stream_csv(std::ostream& out, std::span<const ObjectPair> requests);
std::vector<ObjectPair> read_stream_csv(std::istream& in);

/// CSV with header `i,j,count`, one row per observed pair.
void write_counts_csv(std::ostream& out, const PairCounts& counts);
/// Repeated pairs accumulate. Throws ParseError, or IndexOutOfRange for objects >= `objects`.
PairCounts read_counts_csv(std::istream& in, std::size_t objects);

/// CSV with header `object,partition`.
void write_assignment_csv(std::ostream& out, const Assignment& a);
Assignment read_assignment_csv(std::istream& in);

/// FNV-1a over the request sequence; equal streams hash equally.
std::uint64_t stream_hash(std::span<const ObjectPair> requests);

}  // namespace equipart
