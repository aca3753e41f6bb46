#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "equipart/core.hpp"
#include "equipart/data.hpp"
#include "equipart/evidence.hpp"
#include "equipart/inference.hpp"
#include "equipart/oma.hpp"

namespace equipart {

enum class BnSolver { walk, exact };

struct ExperimentSpec {
  PartitionSpec spec = PartitionSpec::equi(4, 2);
  ConstraintSet constraints;
  double p_true = 0.6;
  std::size_t trials = 1000;
  std::vector<std::size_t> checkpoints{10, 50};
  WalkConfig walk;
  BnSolver solver = BnSolver::walk;
  std::size_t oma_states = kDefaultOmaStates;
  std::size_t noise_resolution = kDefaultNoiseResolution;
  NoisePrior noise_prior = NoisePrior::above_chance;
  std::uint64_t seed = 1;
  /// Worker threads; 0 means one per available core.
  std::size_t jobs = 0;

  /// Throws DomainError for zero trials, unsorted checkpoints or a bad p.
  void validate() const;
  Problem problem() const { return Problem(spec, constraints); }
  NoiseGrid grid() const { return NoiseGrid::make(noise_resolution, noise_prior, spec); }
};

/// 1.96 * sqrt(q (1 - q) / trials).
double ci_half_width(double q, std::size_t trials);

/// Runs fn(0) ... fn(n-1) on up to `jobs` threads (0 = hardware concurrency).
/// The first exception thrown by any call is rethrown after all workers stop.
void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& fn);

struct CurvePoint {
  std::string solver;
  std::size_t t = 0;
  std::size_t successes = 0;
  std::size_t trials = 0;
  double success_rate = 0.0;
  double ci_half_width = 0.0;
};

struct AccuracyCurve {
  std::string problem;
  double p_true = 0.0;
  std::vector<CurvePoint> points;  // BN-EPP rows first, then OMA rows, each by ascending t

  const CurvePoint& at(const std::string& solver, std::size_t t) const;
};

/// Per trial: draw a truth, stream requests, feed the identical stream to BN-EPP
/// and (for unconstrained equi-partitions) OMA, and score relabeling-equivalent
/// recovery at each checkpoint.
AccuracyCurve run_accuracy_experiment(const ExperimentSpec& spec);

/// CSV with header `solver,t,p_true,problem,success_rate,ci_half_width`.
void write_curve_csv(std::ostream& out, const AccuracyCurve& curve);

struct NoiseRow {
  std::size_t trial = 0;
  std::size_t t = 0;
  double mean = 0.0;
  double mode = 0.0;
  std::vector<double> posterior;
};

struct NoiseTracking {
  std::vector<double> grid;
  std::vector<NoiseRow> rows;  // trial-major, checkpoint-minor

  /// Fraction of trials whose posterior mode at t lies within tol of p.
  double mode_hit_rate(std::size_t t, double p, double tol) const;
  /// Largest |sum(row) - 1| over all rows.
  double max_normalization_error() const;
};

/// Noise posterior at the MAP estimate (per spec.solver) after each checkpoint.
NoiseTracking run_noise_tracking(const ExperimentSpec& spec);

/// CSV with header `trial,t,mean,mode,p=0,p=0.01,...`.
void write_noise_csv(std::ostream& out, const NoiseTracking& tracking);

struct AblationArm {
  std::string name;
  InitStrategy init = InitStrategy::likelihood_weighted;
  std::size_t samples = 250;
};

struct AblationSpec {
  ExperimentSpec base;  // spec, p_true, trials, walk.epsilon, noise settings, seed, jobs
  std::size_t observations = 100;
  std::vector<AblationArm> arms{{"random", InitStrategy::prior, 0},
                                {"lw_s50", InitStrategy::likelihood_weighted, 50},
                                {"lw_s250", InitStrategy::likelihood_weighted, 250}};
  std::vector<std::size_t> steps{50, 100, 500, 1000, 2000, 4000};
};

struct AblationCell {
  std::string arm;
  std::size_t steps = 0;
  std::size_t successes = 0;
  std::size_t trials = 0;
  double success_rate = 0.0;
  double ci_half_width = 0.0;
};

struct AblationTable {
  std::string problem;
  std::vector<AblationCell> cells;  // arm-major

  const AblationCell& at(const std::string& arm, std::size_t steps) const;
};

/// Each trial draws one truth and one observation set shared by every arm; each
/// arm runs a single walk and is scored at every step count.
AblationTable run_walk_ablation(const AblationSpec& spec);

/// CSV with header `arm,steps,problem,success_rate,ci_half_width`.
void write_ablation_csv(std::ostream& out, const AblationTable& table);

struct WarehouseSpec {
  std::size_t sections = 13;
  std::size_t repetitions = 1000;
  std::size_t folds = 5;
  PairMode pair_mode = PairMode::all_pairs;
  WalkConfig walk = [] {
    WalkConfig w;
    w.init_samples = 100;
    w.steps = 1000;
    return w;
  }();
  std::size_t oma_states = kDefaultOmaStates;
  std::size_t noise_resolution = kDefaultNoiseResolution;
  NoisePrior noise_prior = NoisePrior::above_chance;
  /// Rules for the constrained run; the five grocery rules when unset.
  std::optional<ConstraintSet> rules;
  std::uint64_t seed = 1;
  std::size_t jobs = 0;
};

struct WarehouseRep {
  std::size_t rep = 0;
  double bn_rules = 0.0;
  double bn_plain = 0.0;
  double oma = 0.0;
  std::vector<std::string> violations;  // audit of the constrained BN-EPP output
};

struct WarehouseResult {
  std::vector<std::string> sections;
  std::vector<WarehouseRep> reps;

  struct Summary {
    double mean = 0.0;
    double std = 0.0;
  };
  Summary summary(double WarehouseRep::*field) const;
  std::size_t violation_count() const;
  /// Repetitions where BN-EPP without rules beats OMA, and the one-sided sign-test p-value.
  std::size_t plain_wins() const;
  double sign_test_p() const;
};

/// Repeated k-fold evaluation of mean trip cost on the test folds for BN-EPP
/// with rules, BN-EPP without rules and OMA. Throws DegenerateEnvironment for
/// fewer than two sections and DomainError when sections do not divide the catalog.
WarehouseResult run_warehouse(const WarehouseSpec& spec, const TransactionSet& ts);

/// CSV with header `rep,bn_rules,bn_plain,oma,violations`.
void write_warehouse_csv(std::ostream& out, const WarehouseResult& result);

/// P(X >= wins) for X ~ Binomial(n, 1/2).
double sign_test_p(std::size_t wins, std::size_t n);

}  // namespace equipart
