#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "equipart/core.hpp"
#include "equipart/evidence.hpp"
#include "equipart/model.hpp"
#include "equipart/rng.hpp"

namespace equipart {

enum class InitStrategy {
  likelihood_weighted,  // per-object LW estimate of the posterior placement
  prior                 // one draw from the placement prior
};

struct WalkConfig {
  /// Probability of keeping a swap that lowers the score.
  double epsilon = 0.1;
  std::size_t steps = 1000;
  /// Likelihood-weighted samples per object during initialization.
  std::size_t init_samples = 250;
  std::uint64_t seed = 0;
  InitStrategy init = InitStrategy::likelihood_weighted;
  /// Re-maximize p at every step; when false, p stays at the initial maximizer.
  bool reestimate_noise = true;
  bool record_trace = false;

  /// Throws DomainError for epsilon outside [0, 1] or zero samples.
  void validate() const;
};

/// Acceptance rule of the walk: a worse proposal is reverted when u < 1 - epsilon;
/// ties and improvements are kept, -inf never is.
bool walk_keeps(double previous, double proposed, double u, double epsilon);

struct TraceRecord {
  std::size_t step = 0;
  double score = 0.0;
  bool accepted = false;
  std::size_t swap_i = 0;
  std::size_t swap_j = 0;
};

struct SolveResult {
  Assignment assignment;
  double p_hat = 0.0;
  double score = 0.0;
  std::vector<TraceRecord> trace;
};

inline constexpr std::uint64_t kDefaultOracleCap = 1'000'000;

/// Number of assignments exact_map would enumerate (relabeling classes when the
/// problem is label-symmetric, labeled assignments otherwise), counting stops past `cap`.
std::uint64_t oracle_candidate_count(const Problem& problem, std::uint64_t cap = kDefaultOracleCap);

/// Brute-force MAP over (assignment, p). Ties go to the lexicographically
/// smallest canonical labeling, then to the smaller p. Throws InstanceTooLarge
/// when more than `cap` candidates would be enumerated.
SolveResult exact_map(const Problem& problem, const ObservationModel& om, const PairCounts& counts,
                      const NoiseGrid& grid, std::uint64_t cap = kDefaultOracleCap);

/// Likelihood-weighted estimate of the placement distribution of object
/// `prefix.size()` given the prefix labels and the evidence. Sample weights
/// marginalize the noise grid.
std::vector<double> lw_placement_estimate(const Problem& problem, const EvidenceTable& table,
                                          const PairCounts& counts, std::span<const Label> prefix,
                                          std::size_t samples, Rng& rng);

/// Places objects in chain order, each drawn from its LW placement estimate.
Assignment lw_initialize(const Problem& problem, const ObservationModel& om, const PairCounts& counts,
                         const NoiseGrid& grid, std::size_t samples, Rng& rng);

/// Swap-based random walk from a feasible `init`; returns the best configuration visited.
SolveResult walk(const Problem& problem, const ObservationModel& om, const PairCounts& counts,
                 const NoiseGrid& grid, Assignment init, const WalkConfig& cfg, Rng& rng);

/// Starting point per cfg.init.
Assignment initial_assignment(const Problem& problem, const ObservationModel& om, const PairCounts& counts,
                              const NoiseGrid& grid, const WalkConfig& cfg, Rng& rng);

/// One walk of at.back() steps reporting the best configuration after each step
/// count in `at` (ascending); cfg.steps is ignored. Identical to separate walks of
/// those lengths from the same rng state. The trace, if any, rides on the last entry.
std::vector<SolveResult> walk_snapshots(const Problem& problem, const ObservationModel& om,
                                        const PairCounts& counts, const NoiseGrid& grid, Assignment init,
                                        const WalkConfig& cfg, Rng& rng, std::span<const std::size_t> at);

/// Initialization (per cfg.init) followed by the walk, seeded from cfg.seed.
SolveResult solve(const Problem& problem, const ObservationModel& om, const PairCounts& counts,
                  const NoiseGrid& grid, const WalkConfig& cfg);

/// Folds requests into counts and solves at every checkpoint (request counts, ascending).
std::vector<SolveResult> solve_online(const Problem& problem, const ObservationModel& om, const NoiseGrid& grid,
                                      std::span<const ObjectPair> requests, const WalkConfig& cfg,
                                      std::span<const std::size_t> checkpoints);

/// CSV with header `step,score,accepted,swap_i,swap_j`.
void write_trace_csv(std::ostream& out, std::span<const TraceRecord> trace);

}  // namespace equipart
