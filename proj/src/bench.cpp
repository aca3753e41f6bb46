#include "equipart/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

#include "equipart/error.hpp"
#include "equipart/format.hpp"
#include "equipart/model.hpp"
#include "equipart/rng.hpp"
#include "equipart/simulator.hpp"

namespace equipart {

namespace {

// Seed streams inside one trial.
enum Stream : std::uint64_t { kTruth = 0, kRequests = 1, kSolver = 2, kFolds = 3, kPairs = 4, kPlain = 5 };

std::size_t worker_count(std::size_t jobs, std::size_t n) {
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  return std::max<std::size_t>(1, std::min(jobs, n));
}

std::vector<SolveResult> bn_checkpoints(const ExperimentSpec& spec, const Problem& problem, const ObservationModel& om,
                                        const NoiseGrid& grid, std::span<const ObjectPair> requests,
                                        std::uint64_t seed) {
  if (spec.solver == BnSolver::walk) {
    WalkConfig cfg = spec.walk;
    cfg.seed = seed;
    return solve_online(problem, om, grid, requests, cfg, spec.checkpoints);
  }
  std::vector<SolveResult> out;
  PairCounts counts(problem.object_count());
  std::size_t consumed = 0;
  for (auto t : spec.checkpoints) {
    for (; consumed < t; ++consumed) counts.add(requests[consumed]);
    out.push_back(exact_map(problem, om, counts, grid));
  }
  return out;
}

bool oma_applicable(const Problem& problem) { return problem.unconstrained() && problem.spec().is_equi(); }

}  // namespace

void ExperimentSpec::validate() const {
  if (trials == 0) throw DomainError("trials must be at least 1");
  if (!std::is_sorted(checkpoints.begin(), checkpoints.end())) throw DomainError("checkpoints must be ascending");
  if (!(p_true >= 0.0 && p_true <= 1.0)) throw DomainError("p_true must lie in [0, 1]");
  if (oma_states == 0) throw DomainError("OMA needs at least one depth state");
  if (noise_resolution == 0) throw DomainError("noise resolution must be positive");
  walk.validate();
}

double ci_half_width(double q, std::size_t trials) {
  if (trials == 0) return 0.0;
  return 1.96 * std::sqrt(q * (1.0 - q) / static_cast<double>(trials));
}

void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& fn) {
  if (n == 0) return;
  const auto workers = worker_count(jobs, n);
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      while (!failed.load()) {
        const auto i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          failed = true;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

const CurvePoint& AccuracyCurve::at(const std::string& solver, std::size_t t) const {
  for (const auto& p : points) {
    if (p.solver == solver && p.t == t) return p;
  }
  throw IndexOutOfRange("no curve point for " + solver + " at t=" + std::to_string(t));
}

AccuracyCurve run_accuracy_experiment(const ExperimentSpec& spec) {
  spec.validate();
  const Problem problem = spec.problem();
  const ObservationModel om(spec.spec);
  const NoiseGrid grid = spec.grid();
  const bool with_oma = oma_applicable(problem);
  const auto nc = spec.checkpoints.size();
  const std::size_t horizon = nc ? spec.checkpoints.back() : 0;

  // hits[trial][solver * nc + checkpoint]
  std::vector<std::vector<std::uint8_t>> hits(spec.trials);
  parallel_for(spec.trials, spec.jobs, [&](std::size_t trial) {
    const auto seed = derive_seed(spec.seed, trial);
    const auto truth = generate_ground_truth(problem, derive_seed(seed, kTruth));
    Environment env(problem, truth, spec.p_true, derive_seed(seed, kRequests));
    const auto requests = stream(env, horizon).requests;
    const auto hash = stream_hash(requests);

    auto& row = hits[trial];
    row.assign(2 * nc, 0);
    const auto bn = bn_checkpoints(spec, problem, om, grid, requests, derive_seed(seed, kSolver));
    for (std::size_t c = 0; c < nc; ++c) row[c] = equivalent_up_to_relabeling(bn[c].assignment, truth);

    if (!with_oma) return;
    auto state = oma_init(spec.spec, spec.oma_states);
    std::vector<ObjectPair> seen;
    seen.reserve(horizon);
    std::size_t c = 0;
    while (c < nc && spec.checkpoints[c] == 0) row[nc + c++] = equivalent_up_to_relabeling(oma_answer(state), truth);
    for (std::size_t t = 1; t <= horizon; ++t) {
      oma_step(state, requests[t - 1]);
      seen.push_back(requests[t - 1]);
      while (c < nc && spec.checkpoints[c] == t) row[nc + c++] = equivalent_up_to_relabeling(oma_answer(state), truth);
    }
    if (stream_hash(seen) != hash) throw Error("solvers consumed different request streams");
  });

  AccuracyCurve curve;
  curve.problem = spec.spec.name();
  curve.p_true = spec.p_true;
  const std::vector<std::string> names = with_oma ? std::vector<std::string>{"bn-epp", "oma"}
                                                  : std::vector<std::string>{"bn-epp"};
  for (std::size_t s = 0; s < names.size(); ++s) {
    for (std::size_t c = 0; c < nc; ++c) {
      CurvePoint p;
      p.solver = names[s];
      p.t = spec.checkpoints[c];
      p.trials = spec.trials;
      for (const auto& row : hits) p.successes += row[s * nc + c];
      p.success_rate = static_cast<double>(p.successes) / static_cast<double>(p.trials);
      p.ci_half_width = ci_half_width(p.success_rate, p.trials);
      curve.points.push_back(p);
    }
  }
  return curve;
}

void write_curve_csv(std::ostream& out, const AccuracyCurve& curve) {
  out << "solver,t,p_true,problem,success_rate,ci_half_width\n";
  for (const auto& p : curve.points) {
    out << p.solver << ',' << p.t << ',' << format_double(curve.p_true) << ',' << curve.problem << ','
        << format_double(p.success_rate) << ',' << format_double(p.ci_half_width) << '\n';
  }
}

double NoiseTracking::mode_hit_rate(std::size_t t, double p, double tol) const {
  std::size_t hits = 0;
  std::size_t n = 0;
  for (const auto& r : rows) {
    if (r.t != t) continue;
    ++n;
    if (std::abs(r.mode - p) <= tol + 1e-12) ++hits;
  }
  if (n == 0) throw IndexOutOfRange("no noise rows at t=" + std::to_string(t));
  return static_cast<double>(hits) / static_cast<double>(n);
}

double NoiseTracking::max_normalization_error() const {
  double worst = 0.0;
  for (const auto& r : rows) {
    double sum = 0.0;
    for (auto v : r.posterior) sum += v;
    worst = std::max(worst, std::abs(sum - 1.0));
  }
  return worst;
}

NoiseTracking run_noise_tracking(const ExperimentSpec& spec) {
  spec.validate();
  const Problem problem = spec.problem();
  const ObservationModel om(spec.spec);
  const NoiseGrid grid = spec.grid();
  const auto nc = spec.checkpoints.size();
  const std::size_t horizon = nc ? spec.checkpoints.back() : 0;

  std::vector<std::vector<NoiseRow>> per_trial(spec.trials);
  parallel_for(spec.trials, spec.jobs, [&](std::size_t trial) {
    const auto seed = derive_seed(spec.seed, trial);
    const auto truth = generate_ground_truth(problem, derive_seed(seed, kTruth));
    Environment env(problem, truth, spec.p_true, derive_seed(seed, kRequests));
    const auto requests = stream(env, horizon).requests;
    const auto bn = bn_checkpoints(spec, problem, om, grid, requests, derive_seed(seed, kSolver));

    PairCounts counts(problem.object_count());
    std::size_t consumed = 0;
    for (std::size_t c = 0; c < nc; ++c) {
      for (; consumed < spec.checkpoints[c]; ++consumed) counts.add(requests[consumed]);
      const auto post = noise_posterior(problem, om, bn[c].assignment, counts, grid);
      NoiseRow row;
      row.trial = trial;
      row.t = spec.checkpoints[c];
      row.mean = post.mean();
      row.mode = post.mode();
      row.posterior.resize(post.size());
      for (std::size_t k = 0; k < post.size(); ++k) row.posterior[k] = post.probability(k);
      per_trial[trial].push_back(std::move(row));
    }
  });

  NoiseTracking out;
  out.grid.assign(grid.values().begin(), grid.values().end());
  for (auto& rows : per_trial) {
    for (auto& r : rows) out.rows.push_back(std::move(r));
  }
  return out;
}

void write_noise_csv(std::ostream& out, const NoiseTracking& tracking) {
  out << "trial,t,mean,mode";
  for (auto v : tracking.grid) out << ",p=" << format_double(v);
  out << '\n';
  for (const auto& r : tracking.rows) {
    out << r.trial << ',' << r.t << ',' << format_double(r.mean) << ',' << format_double(r.mode);
    for (auto v : r.posterior) out << ',' << format_double(v);
    out << '\n';
  }
}

const AblationCell& AblationTable::at(const std::string& arm, std::size_t steps) const {
  for (const auto& c : cells) {
    if (c.arm == arm && c.steps == steps) return c;
  }
  throw IndexOutOfRange("no ablation cell for " + arm + " at " + std::to_string(steps) + " steps");
}

AblationTable run_walk_ablation(const AblationSpec& spec) {
  spec.base.validate();
  if (!std::is_sorted(spec.steps.begin(), spec.steps.end())) throw DomainError("walk lengths must be ascending");
  const Problem problem = spec.base.problem();
  const ObservationModel om(spec.base.spec);
  const NoiseGrid grid = spec.base.grid();
  const auto na = spec.arms.size();
  const auto ns = spec.steps.size();

  std::vector<std::vector<std::uint8_t>> hits(spec.base.trials);
  parallel_for(spec.base.trials, spec.base.jobs, [&](std::size_t trial) {
    const auto seed = derive_seed(spec.base.seed, trial);
    const auto truth = generate_ground_truth(problem, derive_seed(seed, kTruth));
    Environment env(problem, truth, spec.base.p_true, derive_seed(seed, kRequests));
    const auto counts = stream(env, spec.observations).counts;
    auto& row = hits[trial];
    row.assign(na * ns, 0);
    for (std::size_t a = 0; a < na; ++a) {
      WalkConfig cfg = spec.base.walk;
      cfg.init = spec.arms[a].init;
      if (cfg.init == InitStrategy::likelihood_weighted) cfg.init_samples = spec.arms[a].samples;
      cfg.seed = derive_seed(derive_seed(seed, kSolver), a);
      Rng rng(cfg.seed);
      auto init = initial_assignment(problem, om, counts, grid, cfg, rng);
      const auto snaps = walk_snapshots(problem, om, counts, grid, std::move(init), cfg, rng, spec.steps);
      for (std::size_t s = 0; s < ns; ++s) row[a * ns + s] = equivalent_up_to_relabeling(snaps[s].assignment, truth);
    }
  });

  AblationTable table;
  table.problem = spec.base.spec.name();
  for (std::size_t a = 0; a < na; ++a) {
    for (std::size_t s = 0; s < ns; ++s) {
      AblationCell cell;
      cell.arm = spec.arms[a].name;
      cell.steps = spec.steps[s];
      cell.trials = spec.base.trials;
      for (const auto& row : hits) cell.successes += row[a * ns + s];
      cell.success_rate = static_cast<double>(cell.successes) / static_cast<double>(cell.trials);
      cell.ci_half_width = ci_half_width(cell.success_rate, cell.trials);
      table.cells.push_back(cell);
    }
  }
  return table;
}

void write_ablation_csv(std::ostream& out, const AblationTable& table) {
  out << "arm,steps,problem,success_rate,ci_half_width\n";
  for (const auto& c : table.cells) {
    out << c.arm << ',' << c.steps << ',' << table.problem << ',' << format_double(c.success_rate) << ','
        << format_double(c.ci_half_width) << '\n';
  }
}

WarehouseResult::Summary WarehouseResult::summary(double WarehouseRep::*field) const {
  Summary s;
  if (reps.empty()) return s;
  for (const auto& r : reps) s.mean += r.*field;
  s.mean /= static_cast<double>(reps.size());
  double ss = 0.0;
  for (const auto& r : reps) ss += (r.*field - s.mean) * (r.*field - s.mean);
  s.std = reps.size() > 1 ? std::sqrt(ss / static_cast<double>(reps.size() - 1)) : 0.0;
  return s;
}

std::size_t WarehouseResult::violation_count() const {
  std::size_t n = 0;
  for (const auto& r : reps) n += r.violations.size();
  return n;
}

std::size_t WarehouseResult::plain_wins() const {
  return static_cast<std::size_t>(
      std::count_if(reps.begin(), reps.end(), [](const WarehouseRep& r) { return r.bn_plain < r.oma; }));
}

double WarehouseResult::sign_test_p() const {
  const auto decided = static_cast<std::size_t>(
      std::count_if(reps.begin(), reps.end(), [](const WarehouseRep& r) { return r.bn_plain != r.oma; }));
  return equipart::sign_test_p(plain_wins(), decided);
}

double sign_test_p(std::size_t wins, std::size_t n) {
  if (wins > n) throw DomainError("more wins than decided repetitions");
  if (wins == 0) return 1.0;
  // log C(n, k) - n log 2, summed from k = wins to n
  std::vector<double> terms;
  for (std::size_t k = wins; k <= n; ++k) {
    terms.push_back(std::lgamma(static_cast<double>(n) + 1) - std::lgamma(static_cast<double>(k) + 1) -
                    std::lgamma(static_cast<double>(n - k) + 1) - static_cast<double>(n) * std::log(2.0));
  }
  return std::min(1.0, std::exp(log_sum_exp(terms)));
}

WarehouseResult run_warehouse(const WarehouseSpec& spec, const TransactionSet& ts) {
  if (spec.sections < 2) throw DegenerateEnvironment("warehouse needs at least two sections");
  const auto items = ts.items.size();
  if (items % spec.sections != 0) {
    throw DomainError(std::to_string(items) + " items do not split evenly into " + std::to_string(spec.sections) +
                      " sections");
  }
  if (spec.repetitions == 0) throw DomainError("repetitions must be at least 1");
  spec.walk.validate();

  WarehouseResult result;
  result.sections = warehouse_sections(spec.sections);
  const auto layout = PartitionSpec::equi(items, spec.sections);
  const Problem plain(layout);
  const Problem ruled(layout, spec.rules ? *spec.rules : warehouse_constraints(ts.items, result.sections));
  const ObservationModel om(layout);
  const auto grid = NoiseGrid::make(spec.noise_resolution, spec.noise_prior, layout);

  result.reps.resize(spec.repetitions);
  parallel_for(spec.repetitions, spec.jobs, [&](std::size_t rep) {
    const auto seed = derive_seed(spec.seed, rep);
    const auto plan = make_fold_plan(ts.transactions.size(), spec.folds, 0, derive_seed(seed, kFolds));
    const auto requests = transactions_to_requests(ts, plan, spec.pair_mode, derive_seed(seed, kPairs));
    const auto counts = counts_from(requests, items);
    const auto test = plan.test();

    WarehouseRep& r = result.reps[rep];
    r.rep = rep;

    WalkConfig cfg = spec.walk;
    cfg.seed = derive_seed(seed, kSolver);
    const auto with_rules = solve(ruled, om, counts, grid, cfg).assignment;
    r.bn_rules = mean_trip_cost(with_rules, ts, test);
    r.violations = audit_constraints(ruled, with_rules, ts.items, result.sections);

    cfg.seed = derive_seed(seed, kPlain);
    r.bn_plain = mean_trip_cost(solve(plain, om, counts, grid, cfg).assignment, ts, test);

    auto state = oma_init(layout, spec.oma_states);
    for (const auto& q : requests) oma_step(state, q);
    r.oma = mean_trip_cost(oma_answer(state), ts, test);
  });
  return result;
}

void write_warehouse_csv(std::ostream& out, const WarehouseResult& result) {
  out << "rep,bn_rules,bn_plain,oma,violations\n";
  for (const auto& r : result.reps) {
    out << r.rep << ',' << format_double(r.bn_rules) << ',' << format_double(r.bn_plain) << ','
        << format_double(r.oma) << ',' << r.violations.size() << '\n';
  }
}

}  // namespace equipart
