#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "equipart/core.hpp"

namespace equipart {

struct PairObservation {
  ObjectPair pair;
  std::uint32_t count = 0;
};

/// Symmetric per-pair request counts plus the total request count.
class PairCounts {
 public:
  explicit PairCounts(std::size_t objects = 0);

  void add(std::size_t i, std::size_t j, std::uint32_t times = 1);
  void add(ObjectPair p, std::uint32_t times = 1) { add(p.first, p.second, times); }

  std::uint32_t count(std::size_t i, std::size_t j) const;
  std::uint64_t total() const noexcept { return total_; }
  std::size_t object_count() const noexcept { return objects_; }
  /// Row i of the dense matrix (diagonal entry is zero).
  std::span<const std::uint32_t> row(std::size_t i) const {
    return {counts_.data() + i * objects_, objects_};
  }

  /// Observed pairs ordered by (second, first).
  std::vector<PairObservation> nonzero() const;

  bool operator==(const PairCounts&) const = default;

 private:
  std::size_t objects_ = 0;
  std::vector<std::uint32_t> counts_;
  std::uint64_t total_ = 0;
};

inline constexpr std::size_t kDefaultNoiseResolution = 100;

enum class NoisePrior {
  uniform,      // equal weight on every k/N
  above_chance  // equal weight on k/N >= chance level, zero below
};

/// Discretized convergent-request probability: values k/N, k = 0..N, with log weights.
class NoiseGrid {
 public:
  static NoiseGrid uniform(std::size_t resolution = kDefaultNoiseResolution);
  /// Zero mass on values below `floor`.
  static NoiseGrid floored(std::size_t resolution, double floor);
  static NoiseGrid make(std::size_t resolution, NoisePrior prior, const PartitionSpec& spec);

  std::size_t resolution() const noexcept { return resolution_; }
  std::size_t size() const noexcept { return values_.size(); }
  double value(std::size_t k) const { return values_.at(k); }
  std::span<const double> values() const noexcept { return values_; }
  std::span<const double> log_weights() const noexcept { return log_weights_; }

  /// Replaces the weights and normalizes them.
  void set_log_weights(std::vector<double> log_weights);
  void normalize();

  double probability(std::size_t k) const;
  double mean() const;
  std::size_t mode_index() const;
  double mode() const { return values_[mode_index()]; }

 private:
  explicit NoiseGrid(std::size_t resolution);

  std::size_t resolution_ = 0;
  std::vector<double> values_;
  std::vector<double> log_weights_;
};

/// Convergent-request probability at which a request carries no information:
/// same pairs / all pairs.
double chance_level(const PartitionSpec& spec);

double log_sum_exp(std::span<const double> xs);

}  // namespace equipart
