#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "equipart/core.hpp"
#include "equipart/evidence.hpp"

namespace equipart {

/// Per-pair request probabilities under uniform pair selection: a convergent
/// request hits one of the S same-partition pairs, a divergent request one of
/// the D cross-partition pairs.
class ObservationModel {
 public:
  explicit ObservationModel(const PartitionSpec& spec);

  double q_same(double p) const;
  double q_diff(double p) const;
  std::uint64_t same_pairs() const noexcept { return same_; }
  std::uint64_t diff_pairs() const noexcept { return diff_; }

 private:
  std::uint64_t same_ = 0;
  std::uint64_t diff_ = 0;
};

/// log Binomial(total, q) mass at n without the binomial coefficient, where q is
/// q_same(p) or q_diff(p). Throws DomainError for n > total or p outside [0, 1].
double pair_log_likelihood(const ObservationModel& om, std::uint64_t n, std::uint64_t total, bool same, double p);

/// Reference joint log-score: chain prior + noise prior + every pair's likelihood term.
double joint_log_score(const Problem& problem, const ObservationModel& om, const Assignment& a,
                       const PairCounts& counts, double p, double log_noise_prior);
double joint_log_score(const Problem& problem, const ObservationModel& om, const Assignment& a,
                       const PairCounts& counts, const NoiseGrid& grid, std::size_t k);

struct NoiseFit {
  double p = 0.0;
  std::size_t index = 0;
  double score = 0.0;
};

/// Requests that landed on pairs `a` places together.
std::uint64_t same_partition_mass(const Assignment& a, const PairCounts& counts);

/// The likelihood depends on an assignment only through its same-partition
/// mass m; this caches, per m, the best grid point and the grid marginal.
/// Not thread-safe (lazy memo); build one per solve.
class EvidenceTable {
 public:
  EvidenceTable(const ObservationModel& om, const NoiseGrid& grid, std::uint64_t total);

  std::uint64_t total() const noexcept { return total_; }
  const NoiseGrid& grid() const noexcept { return grid_; }

  /// Sum of all pair terms at grid point k for same-partition mass m.
  double log_likelihood(std::uint64_t m, std::size_t k) const;
  /// log weight_k + log_likelihood maximized over k; ties go to the smaller p.
  NoiseFit best(std::uint64_t m) const;
  /// log sum_k weight_k * likelihood.
  double marginal(std::uint64_t m) const;

 private:
  struct Memo {
    double best = 0.0;
    double marginal = 0.0;
    std::uint32_t best_k = 0;
    bool filled = false;
  };
  const Memo& memo(std::uint64_t m) const;

  NoiseGrid grid_;
  std::uint64_t total_;
  std::uint64_t same_;
  std::uint64_t diff_;
  std::vector<double> log_qs_, log_1qs_, log_qd_, log_1qd_;
  mutable std::vector<Memo> memo_;
  mutable std::vector<double> scratch_;
};

/// Maximizes the joint score over the grid (grid log weights act as the noise prior).
/// Score is -inf for infeasible assignments.
NoiseFit best_score_over_noise(const Problem& problem, const ObservationModel& om, const Assignment& a,
                               const PairCounts& counts, const NoiseGrid& grid);

/// Grid reweighted by the joint score of `a`; `a` must be feasible.
NoiseGrid noise_posterior(const Problem& problem, const ObservationModel& om, const Assignment& a,
                          const PairCounts& counts, const NoiseGrid& grid);

}  // namespace equipart
