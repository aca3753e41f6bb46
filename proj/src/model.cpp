#include "equipart/model.hpp"

#include <cmath>
#include <limits>

#include "equipart/error.hpp"

namespace equipart {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// count * log_value with 0 * log 0 = 0.
double term(double count, double log_value) {
  if (count == 0.0) return 0.0;
  return count * log_value;
}

double safe_log(double x) { return x > 0.0 ? std::log(x) : kNegInf; }
double safe_log1m(double x) { return x < 1.0 ? std::log1p(-x) : kNegInf; }

void check_probability(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("noise probability must lie in [0, 1]");
}

}  // namespace

ObservationModel::ObservationModel(const PartitionSpec& spec)
    : same_(spec.same_pair_count()), diff_(spec.diff_pair_count()) {}

double ObservationModel::q_same(double p) const {
  check_probability(p);
  return same_ == 0 ? 0.0 : p / static_cast<double>(same_);
}

double ObservationModel::q_diff(double p) const {
  check_probability(p);
  return diff_ == 0 ? 0.0 : (1.0 - p) / static_cast<double>(diff_);
}

double pair_log_likelihood(const ObservationModel& om, std::uint64_t n, std::uint64_t total, bool same, double p) {
  check_probability(p);
  if (n > total) throw DomainError("pair count exceeds total requests");
  const double q = same ? om.q_same(p) : om.q_diff(p);
  return term(static_cast<double>(n), safe_log(q)) + term(static_cast<double>(total - n), safe_log1m(q));
}

double joint_log_score(const Problem& problem, const ObservationModel& om, const Assignment& a,
                       const PairCounts& counts, double p, double log_noise_prior) {
  check_probability(p);
  const double prior = log_prior(problem, a);
  if (prior == kNegInf) return kNegInf;
  const auto total = counts.total();
  double likelihood = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto row = counts.row(i);
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      likelihood += pair_log_likelihood(om, row[j], total, a[i] == a[j], p);
    }
  }
  return prior + log_noise_prior + likelihood;
}

double joint_log_score(const Problem& problem, const ObservationModel& om, const Assignment& a,
                       const PairCounts& counts, const NoiseGrid& grid, std::size_t k) {
  return joint_log_score(problem, om, a, counts, grid.value(k), grid.log_weights()[k]);
}

std::uint64_t same_partition_mass(const Assignment& a, const PairCounts& counts) {
  if (a.size() != counts.object_count()) throw LengthMismatch("assignment and counts differ in object count");
  std::uint64_t m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto row = counts.row(i);
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      if (a[i] == a[j]) m += row[j];
    }
  }
  return m;
}

EvidenceTable::EvidenceTable(const ObservationModel& om, const NoiseGrid& grid, std::uint64_t total)
    : grid_(grid), total_(total), same_(om.same_pairs()), diff_(om.diff_pairs()) {
  const auto n = grid.size();
  log_qs_.resize(n);
  log_1qs_.resize(n);
  log_qd_.resize(n);
  log_1qd_.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double qs = om.q_same(grid.value(k));
    const double qd = om.q_diff(grid.value(k));
    log_qs_[k] = safe_log(qs);
    log_1qs_[k] = safe_log1m(qs);
    log_qd_[k] = safe_log(qd);
    log_1qd_[k] = safe_log1m(qd);
  }
  scratch_.resize(n);
}

double EvidenceTable::log_likelihood(std::uint64_t m, std::size_t k) const {
  const double t = static_cast<double>(total_);
  const double md = static_cast<double>(m);
  const double same_rest = static_cast<double>(same_) * t - md;
  const double diff_hits = t - md;
  const double diff_rest = static_cast<double>(diff_) * t - diff_hits;
  return term(md, log_qs_[k]) + term(same_rest, log_1qs_[k]) + term(diff_hits, log_qd_[k]) +
         term(diff_rest, log_1qd_[k]);
}

const EvidenceTable::Memo& EvidenceTable::memo(std::uint64_t m) const {
  if (m > total_) throw DomainError("same-partition mass exceeds total requests");
  if (memo_.empty()) memo_.resize(total_ + 1);
  auto& slot = memo_[m];
  if (slot.filled) return slot;
  const auto weights = grid_.log_weights();
  double best = kNegInf;
  std::uint32_t best_k = 0;
  for (std::size_t k = 0; k < grid_.size(); ++k) {
    const double s = weights[k] + log_likelihood(m, k);
    scratch_[k] = s;
    if (s > best) {
      best = s;
      best_k = static_cast<std::uint32_t>(k);
    }
  }
  slot.best = best;
  slot.best_k = best_k;
  slot.marginal = log_sum_exp(scratch_);
  slot.filled = true;
  return slot;
}

NoiseFit EvidenceTable::best(std::uint64_t m) const {
  const auto& s = memo(m);
  return {grid_.value(s.best_k), s.best_k, s.best};
}

double EvidenceTable::marginal(std::uint64_t m) const { return memo(m).marginal; }

NoiseFit best_score_over_noise(const Problem& problem, const ObservationModel& om, const Assignment& a,
                               const PairCounts& counts, const NoiseGrid& grid) {
  const double prior = log_prior(problem, a);
  if (prior == kNegInf) return {grid.value(0), 0, kNegInf};
  EvidenceTable table(om, grid, counts.total());
  auto fit = table.best(same_partition_mass(a, counts));
  fit.score = prior + fit.score;
  return fit;
}

NoiseGrid noise_posterior(const Problem& problem, const ObservationModel& om, const Assignment& a,
                          const PairCounts& counts, const NoiseGrid& grid) {
  const double prior = log_prior(problem, a);
  if (prior == kNegInf) throw DomainError("noise posterior needs a feasible assignment");
  EvidenceTable table(om, grid, counts.total());
  const auto m = same_partition_mass(a, counts);
  std::vector<double> w(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) w[k] = prior + grid.log_weights()[k] + table.log_likelihood(m, k);
  NoiseGrid posterior = grid;
  posterior.set_log_weights(std::move(w));
  return posterior;
}

}  // namespace equipart
