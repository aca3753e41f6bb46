#include "equipart/evidence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "equipart/error.hpp"

namespace equipart {

PairCounts::PairCounts(std::size_t objects) : objects_(objects), counts_(objects * objects, 0) {}

void PairCounts::add(std::size_t i, std::size_t j, std::uint32_t times) {
  if (i >= objects_ || j >= objects_) throw IndexOutOfRange("request pair out of range");
  if (i == j) throw DomainError("a request pairs two distinct objects");
  counts_[i * objects_ + j] += times;
  counts_[j * objects_ + i] += times;
  total_ += times;
}

std::uint32_t PairCounts::count(std::size_t i, std::size_t j) const {
  if (i >= objects_ || j >= objects_) throw IndexOutOfRange("pair out of range");
  return counts_[i * objects_ + j];
}

std::vector<PairObservation> PairCounts::nonzero() const {
  std::vector<PairObservation> out;
  for (std::size_t j = 1; j < objects_; ++j) {
    for (std::size_t i = 0; i < j; ++i) {
      if (const auto n = counts_[i * objects_ + j]; n != 0) out.push_back({ObjectPair(i, j), n});
    }
  }
  return out;
}

NoiseGrid::NoiseGrid(std::size_t resolution) : resolution_(resolution) {
  if (resolution == 0) throw DomainError("noise grid resolution must be positive");
  values_.resize(resolution + 1);
  for (std::size_t k = 0; k <= resolution; ++k) {
    values_[k] = static_cast<double>(k) / static_cast<double>(resolution);
  }
  log_weights_.assign(resolution + 1, -std::log(static_cast<double>(resolution + 1)));
}

NoiseGrid NoiseGrid::uniform(std::size_t resolution) { return NoiseGrid(resolution); }

NoiseGrid NoiseGrid::floored(std::size_t resolution, double floor) {
  NoiseGrid grid(resolution);
  std::vector<double> w(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    w[k] = grid.values_[k] >= floor ? 0.0 : -std::numeric_limits<double>::infinity();
  }
  if (std::all_of(w.begin(), w.end(), [](double x) { return std::isinf(x); })) {
    throw DomainError("noise floor leaves no grid value");
  }
  grid.set_log_weights(std::move(w));
  return grid;
}

NoiseGrid NoiseGrid::make(std::size_t resolution, NoisePrior prior, const PartitionSpec& spec) {
  if (prior == NoisePrior::uniform) return uniform(resolution);
  return floored(resolution, chance_level(spec));
}

void NoiseGrid::set_log_weights(std::vector<double> log_weights) {
  if (log_weights.size() != values_.size()) throw LengthMismatch("noise weights must match grid size");
  log_weights_ = std::move(log_weights);
  normalize();
}

void NoiseGrid::normalize() {
  const double z = log_sum_exp(log_weights_);
  if (!std::isfinite(z)) throw DomainError("noise weights carry no mass");
  for (auto& w : log_weights_) w -= z;
}

double NoiseGrid::probability(std::size_t k) const { return std::exp(log_weights_.at(k)); }

double NoiseGrid::mean() const {
  double m = 0.0;
  for (std::size_t k = 0; k < values_.size(); ++k) m += values_[k] * std::exp(log_weights_[k]);
  return m;
}

std::size_t NoiseGrid::mode_index() const {
  std::size_t best = 0;
  for (std::size_t k = 1; k < log_weights_.size(); ++k) {
    if (log_weights_[k] > log_weights_[best]) best = k;
  }
  return best;
}

double chance_level(const PartitionSpec& spec) {
  const auto all = spec.pair_count();
  if (all == 0) return 0.0;
  return static_cast<double>(spec.same_pair_count()) / static_cast<double>(all);
}

double log_sum_exp(std::span<const double> xs) {
  double hi = -std::numeric_limits<double>::infinity();
  for (double x : xs) hi = std::max(hi, x);
  if (!std::isfinite(hi)) return hi;
  double s = 0.0;
  for (double x : xs) s += std::exp(x - hi);
  return hi + std::log(s);
}

}  // namespace equipart
