#include "equipart/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "equipart/error.hpp"
#include "equipart/format.hpp"
#include "equipart/simulator.hpp"

namespace equipart {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr std::size_t kEstimateRounds = 10;
constexpr std::size_t kInitRestarts = 100;
constexpr std::size_t kMaxPairDraws = 10'000;

std::size_t draw_from(std::span<const double> probs, Rng& rng) {
  const double u = uniform01(rng);
  double cum = 0.0;
  std::size_t last = 0;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    if (probs[k] <= 0.0) continue;
    cum += probs[k];
    last = k;
    if (u < cum) return k;
  }
  return last;
}

// Forward sampler behind likelihood weighting. Observed pairs are kept sorted
// by their larger index, so pairs lying wholly inside the fixed prefix
// contribute a constant mass that is summed once per object.
class LwSampler {
 public:
  LwSampler(const Problem& problem, const EvidenceTable& table, const PairCounts& counts)
      : table_(table), chain_(problem), pairs_(counts.nonzero()), start_(problem.object_count() + 1) {
    std::size_t k = 0;
    for (std::size_t i = 0; i <= problem.object_count(); ++i) {
      while (k < pairs_.size() && pairs_[k].pair.second < i) ++k;
      start_[i] = k;
    }
  }

  PlacementChain& chain() { return chain_; }

  bool set_prefix(std::span<const Label> prefix) {
    chain_.reset();
    std::vector<std::size_t> w(chain_.problem().partition_count());
    for (auto label : prefix) {
      if (label >= w.size() || chain_.weights(w) == 0 || w[label] == 0) return false;
      chain_.place(label);
    }
    return true;
  }

  // Placement estimate for the chain's next object; empty when no sample completed.
  std::vector<double> estimate(std::size_t samples, Rng& rng) {
    const auto i = chain_.next_object();
    const auto labels = chain_.labels();
    std::uint64_t fixed = 0;
    for (std::size_t k = 0; k < start_[i]; ++k) {
      if (labels[pairs_[k].pair.first] == labels[pairs_[k].pair.second]) fixed += pairs_[k].count;
    }
    const auto parts = chain_.problem().partition_count();
    std::vector<double> log_w;
    std::vector<Label> first;
    for (std::size_t round = 0; round < kEstimateRounds && log_w.empty(); ++round) {
      for (std::size_t s = 0; s < samples; ++s) {
        chain_.truncate(i);
        if (!complete_from_prior(chain_, rng)) continue;
        const auto full = chain_.labels();
        std::uint64_t m = fixed;
        for (std::size_t k = start_[i]; k < pairs_.size(); ++k) {
          if (full[pairs_[k].pair.first] == full[pairs_[k].pair.second]) m += pairs_[k].count;
        }
        log_w.push_back(table_.marginal(m));
        first.push_back(full[i]);
      }
      chain_.truncate(i);
    }
    if (log_w.empty()) return {};
    double hi = *std::max_element(log_w.begin(), log_w.end());
    if (!std::isfinite(hi)) {
      std::fill(log_w.begin(), log_w.end(), 0.0);
      hi = 0.0;
    }
    std::vector<double> probs(parts, 0.0);
    double z = 0.0;
    for (std::size_t s = 0; s < log_w.size(); ++s) {
      const double v = std::exp(log_w[s] - hi);
      probs[first[s]] += v;
      z += v;
    }
    for (auto& p : probs) p /= z;
    return probs;
  }

 private:
  const EvidenceTable& table_;
  PlacementChain chain_;
  std::vector<PairObservation> pairs_;
  std::vector<std::size_t> start_;
};

// Same-partition mass change when objects i and j (in different partitions) swap labels.
std::int64_t swap_delta(const Assignment& a, const PairCounts& counts, std::size_t i, std::size_t j) {
  const auto li = a[i];
  const auto lj = a[j];
  const auto ri = counts.row(i);
  const auto rj = counts.row(j);
  std::int64_t delta = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (k == i || k == j) continue;
    const auto lk = a[k];
    if (lk == lj) {
      delta += static_cast<std::int64_t>(ri[k]) - static_cast<std::int64_t>(rj[k]);
    } else if (lk == li) {
      delta += static_cast<std::int64_t>(rj[k]) - static_cast<std::int64_t>(ri[k]);
    }
  }
  return delta;
}

}  // namespace

bool walk_keeps(double previous, double proposed, double u, double epsilon) {
  if (proposed == kNegInf) return false;
  return !(proposed < previous && u < 1.0 - epsilon);
}

void WalkConfig::validate() const {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw DomainError("epsilon must lie in [0, 1]");
  if (init_samples == 0) throw DomainError("init_samples must be at least 1");
}

std::uint64_t oracle_candidate_count(const Problem& problem, std::uint64_t cap) {
  if (problem.unconstrained() && problem.label_symmetric()) {
    const auto n = unlabeled_partition_count(problem.spec());
    return n ? std::min(*n, cap + 1) : cap + 1;
  }
  std::uint64_t seen = 0;
  for_each_assignment(problem, problem.label_symmetric(), [&](const Assignment&) { return ++seen <= cap; });
  return seen;
}

SolveResult exact_map(const Problem& problem, const ObservationModel& om, const PairCounts& counts,
                      const NoiseGrid& grid, std::uint64_t cap) {
  const auto candidates = oracle_candidate_count(problem, cap);
  if (candidates > cap) {
    throw InstanceTooLarge(problem.spec().name() + " has more than " + std::to_string(cap) +
                           " candidate partitionings");
  }
  EvidenceTable table(om, grid, counts.total());
  SolveResult best;
  best.score = kNegInf;
  bool found = false;
  for_each_assignment(problem, problem.label_symmetric(), [&](const Assignment& a) {
    const double prior = log_prior(problem, a);
    const auto fit = table.best(same_partition_mass(a, counts));
    const double score = prior + fit.score;
    if (!found || score > best.score) {
      found = true;
      best.assignment = a;
      best.p_hat = fit.p;
      best.score = score;
    }
    return true;
  });
  if (!found) throw InfeasibleConstraints("no feasible assignment to enumerate");
  return best;
}

std::vector<double> lw_placement_estimate(const Problem& problem, const EvidenceTable& table,
                                          const PairCounts& counts, std::span<const Label> prefix,
                                          std::size_t samples, Rng& rng) {
  if (prefix.size() >= problem.object_count()) throw IndexOutOfRange("prefix already places every object");
  LwSampler sampler(problem, table, counts);
  if (!sampler.set_prefix(prefix)) throw DomainError("prefix breaks the problem's rules");
  auto probs = sampler.estimate(samples, rng);
  if (probs.empty()) throw DeadEnd("no completion of this prefix satisfies the constraints");
  return probs;
}

Assignment lw_initialize(const Problem& problem, const ObservationModel& om, const PairCounts& counts,
                         const NoiseGrid& grid, std::size_t samples, Rng& rng) {
  if (samples == 0) throw DomainError("init_samples must be at least 1");
  EvidenceTable table(om, grid, counts.total());
  LwSampler sampler(problem, table, counts);
  const auto n = problem.object_count();
  std::vector<std::size_t> w(problem.partition_count());
  std::vector<double> prior(problem.partition_count());
  for (std::size_t attempt = 0; attempt < kInitRestarts; ++attempt) {
    auto& chain = sampler.chain();
    chain.reset();
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) {
      auto probs = sampler.estimate(samples, rng);
      if (probs.empty()) {
        const auto total = chain.weights(w);
        if (total == 0) {
          ok = false;
          break;
        }
        for (std::size_t r = 0; r < w.size(); ++r) prior[r] = static_cast<double>(w[r]) / static_cast<double>(total);
        probs = prior;
      }
      chain.place(static_cast<Label>(draw_from(probs, rng)));
    }
    if (ok) return Assignment(std::vector<Label>(chain.labels().begin(), chain.labels().end()));
  }
  return generate_ground_truth(problem, rng);
}

std::vector<SolveResult> walk_snapshots(const Problem& problem, const ObservationModel& om,
                                        const PairCounts& counts, const NoiseGrid& grid, Assignment init,
                                        const WalkConfig& cfg, Rng& rng, std::span<const std::size_t> at) {
  cfg.validate();
  if (!std::is_sorted(at.begin(), at.end())) throw DomainError("snapshot steps must be ascending");
  const auto n = problem.object_count();
  if (init.size() != n || counts.object_count() != n) throw LengthMismatch("init and counts must cover every object");
  double prior = log_prior(problem, init);
  if (prior == kNegInf) throw DomainError("walk needs a feasible initial assignment");

  EvidenceTable table(om, grid, counts.total());
  std::uint64_t mass = same_partition_mass(init, counts);
  const std::size_t fixed_k = table.best(mass).index;
  const double fixed_weight = grid.log_weights()[fixed_k];
  auto score_of = [&](double pr, std::uint64_t m) {
    if (pr == kNegInf) return kNegInf;
    if (cfg.reestimate_noise) return pr + table.best(m).score;
    return pr + (fixed_weight + table.log_likelihood(m, fixed_k));
  };

  Assignment current = std::move(init);
  double current_score = score_of(prior, mass);
  Assignment best = current;
  double best_score = current_score;
  std::uint64_t best_mass = mass;

  const bool prior_constant = problem.unconstrained();
  std::vector<TraceRecord> trace;
  if (cfg.record_trace) trace.reserve(cfg.steps);

  std::vector<SolveResult> out;
  out.reserve(at.size());
  auto snapshot = [&] {
    const auto fit = table.best(best_mass);
    SolveResult r;
    r.assignment = best;
    r.p_hat = fit.p;
    r.score = log_prior(problem, best) + fit.score;
    out.push_back(std::move(r));
  };
  std::size_t next = 0;
  while (next < at.size() && at[next] == 0) {
    snapshot();
    ++next;
  }

  const std::size_t last = at.empty() ? 0 : at.back();
  const bool movable = problem.partition_count() > 1;
  for (std::size_t step = 1; step <= last && movable; ++step) {
    std::size_t i = 0;
    std::size_t j = 0;
    for (std::size_t draw = 0; draw < kMaxPairDraws; ++draw) {
      i = uniform_index(rng, n);
      j = uniform_index(rng, n);
      if (current[i] != current[j]) break;
    }
    if (current[i] == current[j]) break;

    const auto delta = swap_delta(current, counts, i, j);
    current.swap_labels(i, j);
    const std::uint64_t new_mass = static_cast<std::uint64_t>(static_cast<std::int64_t>(mass) + delta);
    const double new_prior = prior_constant ? prior : log_prior(problem, current);
    const double score = score_of(new_prior, new_mass);

    if (score > best_score) {
      best = current;
      best_score = score;
      best_mass = new_mass;
    }
    // the uniform is drawn only for finite, worse proposals
    const bool keep = score != kNegInf &&
                      (score >= current_score || walk_keeps(current_score, score, uniform01(rng), cfg.epsilon));
    if (keep) {
      mass = new_mass;
      prior = new_prior;
      current_score = score;
    } else {
      current.swap_labels(i, j);
    }
    if (cfg.record_trace) trace.push_back({step, score, keep, i, j});
    while (next < at.size() && at[next] == step) {
      snapshot();
      ++next;
    }
  }
  // a walk stuck without movable pairs keeps its best for the remaining snapshots
  while (next < at.size()) {
    snapshot();
    ++next;
  }
  if (!out.empty()) out.back().trace = std::move(trace);
  return out;
}

SolveResult walk(const Problem& problem, const ObservationModel& om, const PairCounts& counts,
                 const NoiseGrid& grid, Assignment init, const WalkConfig& cfg, Rng& rng) {
  const std::size_t at[] = {cfg.steps};
  return std::move(walk_snapshots(problem, om, counts, grid, std::move(init), cfg, rng, at).front());
}

Assignment initial_assignment(const Problem& problem, const ObservationModel& om, const PairCounts& counts,
                              const NoiseGrid& grid, const WalkConfig& cfg, Rng& rng) {
  if (cfg.init == InitStrategy::likelihood_weighted) {
    return lw_initialize(problem, om, counts, grid, cfg.init_samples, rng);
  }
  return generate_ground_truth(problem, rng);
}

SolveResult solve(const Problem& problem, const ObservationModel& om, const PairCounts& counts,
                  const NoiseGrid& grid, const WalkConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);
  auto init = initial_assignment(problem, om, counts, grid, cfg, rng);
  return walk(problem, om, counts, grid, std::move(init), cfg, rng);
}

std::vector<SolveResult> solve_online(const Problem& problem, const ObservationModel& om, const NoiseGrid& grid,
                                      std::span<const ObjectPair> requests, const WalkConfig& cfg,
                                      std::span<const std::size_t> checkpoints) {
  if (!std::is_sorted(checkpoints.begin(), checkpoints.end())) throw DomainError("checkpoints must be ascending");
  if (!checkpoints.empty() && checkpoints.back() > requests.size()) {
    throw DomainError("checkpoint beyond the end of the request stream");
  }
  PairCounts counts(problem.object_count());
  std::vector<SolveResult> results;
  results.reserve(checkpoints.size());
  std::size_t consumed = 0;
  for (auto t : checkpoints) {
    for (; consumed < t; ++consumed) counts.add(requests[consumed]);
    WalkConfig at = cfg;
    at.seed = derive_seed(cfg.seed, t);
    results.push_back(solve(problem, om, counts, grid, at));
  }
  return results;
}

void write_trace_csv(std::ostream& out, std::span<const TraceRecord> trace) {
  out << "step,score,accepted,swap_i,swap_j\n";
  for (const auto& r : trace) {
    out << r.step << ',' << format_double(r.score) << ',' << (r.accepted ? 1 : 0) << ',' << r.swap_i << ','
        << r.swap_j << '\n';
  }
}

}  // namespace equipart
