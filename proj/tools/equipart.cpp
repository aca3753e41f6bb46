// equipart command-line tool: simulate, solve, oracle, bench, warehouse.
//
// Exit codes: 0 ok, 1 runtime failure, 2 bad flags or config, 3 infeasible or
// malformed constraints, 4 oracle candidate cap exceeded, 5 failed --assert.

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "equipart/bench.hpp"
#include "equipart/config.hpp"
#include "equipart/data.hpp"
#include "equipart/error.hpp"
#include "equipart/format.hpp"
#include "equipart/inference.hpp"
#include "equipart/model.hpp"
#include "equipart/simulator.hpp"

#ifndef EQUIPART_GIT_DESCRIBE
#define EQUIPART_GIT_DESCRIBE "unknown"
#endif

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace equipart;

namespace {

enum Exit { kOk = 0, kFailure = 1, kUsage = 2, kInfeasible = 3, kTooLarge = 4, kAssertFailed = 5 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Flag {
  const char* name;  // long flag without dashes; config key is the same with '_' for '-'
  const char* help;
  bool boolean = false;
};

std::string key_of(const std::string& flag) {
  std::string k = flag;
  for (auto& c : k) {
    if (c == '-') c = '_';
  }
  return k;
}

const std::vector<Flag> kProblemFlags = {
    {"objects", "number of objects W"},
    {"partitions", "number of partitions R"},
    {"capacities", "comma-separated capacities (overrides objects/partitions)"},
    {"constraints", "constraint file (must/cannot/allow/sections/capacity lines)"},
};

const std::vector<Flag> kWalkFlags = {
    {"epsilon", "probability of keeping a worse swap"},
    {"steps", "walk iterations"},
    {"init", "initialization: lw or prior"},
    {"init-samples", "likelihood-weighted samples per object"},
    {"reestimate-noise", "re-maximize p every step (true/false)"},
};

const std::vector<Flag> kNoiseFlags = {
    {"noise-resolution", "noise grid resolution N (values k/N)"},
    {"noise-prior", "uniform or above_chance"},
};

struct Command {
  std::string name;
  std::string about;
  std::vector<Flag> flags;
};

std::vector<Command> commands() {
  auto join = [](std::initializer_list<std::vector<Flag>> parts) {
    std::vector<Flag> out;
    for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
    return out;
  };
  return {
      {"simulate", "draw a hidden partitioning and a request stream",
       join({kProblemFlags, {{"p", "convergent-request probability"}, {"requests", "stream length"}}})},
      {"solve", "Walk-BN-EPP (or the exact oracle) on a stream or counts file",
       join({kProblemFlags, kWalkFlags, kNoiseFlags,
             {{"stream", "request stream CSV (t,i,j)"},
              {"counts", "pair counts CSV (i,j,count)"},
              {"oracle", "use exact enumeration instead of the walk", true},
              {"cap", "oracle candidate cap"},
              {"trace", "write trace.csv", true}}})},
      {"oracle", "exact MAP by enumeration",
       join({kProblemFlags, kNoiseFlags,
             {{"stream", "request stream CSV (t,i,j)"},
              {"counts", "pair counts CSV (i,j,count)"},
              {"cap", "oracle candidate cap"}}})},
      {"bench", "ensemble experiments: accuracy, noise or ablation",
       join({kProblemFlags, kWalkFlags, kNoiseFlags,
             {{"experiment", "accuracy, noise or ablation"},
              {"p", "convergent-request probability"},
              {"trials", "independent trials"},
              {"checkpoints", "comma-separated request counts"},
              {"solver", "walk or exact"},
              {"oma-states", "OMA depth states"},
              {"observations", "ablation: requests per trial"},
              {"walk-lengths", "ablation: comma-separated walk lengths"},
              {"ablation-samples", "ablation: comma-separated LW sample sizes"},
              {"jobs", "worker threads (0 = all cores)"},
              {"assert", "exit 5 when a configured expectation fails", true}}})},
      {"warehouse", "grocery warehouse trip-cost experiment",
       join({kWalkFlags, kNoiseFlags,
             {{"transactions", "transactions file"},
              {"sections", "number of warehouse sections"},
              {"repetitions", "fold repetitions"},
              {"folds", "folds per repetition"},
              {"pair-mode", "all_pairs or one_random_pair"},
              {"rules", "constraint file naming items and sections (default: built-in rules)"},
              {"oma-states", "OMA depth states"},
              {"jobs", "worker threads (0 = all cores)"},
              {"assert", "exit 5 on rule violations or if BN-EPP does not beat OMA", true}}})},
  };
}

std::string utc_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << content;
}

struct Run {
  std::string command;
  ConfigMap cfg;
  fs::path out;
  std::vector<std::string> outputs;

  void emit(const std::string& name, const std::string& content) {
    write_file(out / name, content);
    outputs.push_back(name);
  }
};

PairCounts load_evidence(const ConfigReader& r, std::size_t objects) {
  const auto stream_path = r.text("stream");
  const auto counts_path = r.text("counts");
  if (stream_path.has_value() == counts_path.has_value()) throw UsageError("give exactly one of --stream or --counts");
  std::ifstream in(stream_path ? *stream_path : *counts_path);
  if (!in) throw Error("cannot open '" + (stream_path ? *stream_path : *counts_path) + "'");
  if (counts_path) return read_counts_csv(in, objects);
  return counts_from(read_stream_csv(in), objects);
}

NoiseGrid grid_from(const ConfigReader& r, const PartitionSpec& spec) {
  const auto prior = r.text("noise_prior", "above_chance");
  if (prior != "uniform" && prior != "above_chance") throw UsageError("noise-prior must be uniform or above_chance");
  return NoiseGrid::make(r.size("noise_resolution", kDefaultNoiseResolution),
                         prior == "uniform" ? NoisePrior::uniform : NoisePrior::above_chance, spec);
}

json result_json(const Problem& problem, const SolveResult& res, const std::string& solver) {
  return {{"problem", problem.spec().name()},
          {"solver", solver},
          {"assignment", std::vector<Label>(res.assignment.labels().begin(), res.assignment.labels().end())},
          {"p_hat", res.p_hat},
          {"score", res.score}};
}

int cmd_simulate(Run& run) {
  ConfigReader r(run.cfg);
  if (!r.has("p")) throw UsageError("simulate needs --p");
  if (!r.has("requests")) throw UsageError("simulate needs --requests");
  const auto problem = problem_from_config(r);
  const double p = r.real("p", 0.0);
  const auto requests = r.size("requests", 0);
  const auto seed = r.u64("seed", 1);
  r.mark("version");
  r.reject_unused();

  const auto truth = generate_ground_truth(problem, derive_seed(seed, 0));
  Environment env(problem, truth, p, derive_seed(seed, 1));
  const auto s = stream(env, requests);
  std::ostringstream stream_csv, truth_csv;
  write_stream_csv(stream_csv, s.requests);
  write_assignment_csv(truth_csv, truth);
  run.emit("stream.csv", stream_csv.str());
  run.emit("truth.csv", truth_csv.str());
  std::cout << "simulated " << requests << " requests on " << problem.spec().name() << " (p=" << format_double(p)
            << "), truth " << to_string(truth) << "\n";
  return kOk;
}

int cmd_solve(Run& run, bool oracle_only) {
  ConfigReader r(run.cfg);
  const auto problem = problem_from_config(r);
  const auto counts = load_evidence(r, problem.object_count());
  const auto grid = grid_from(r, problem.spec());
  const auto cap = r.u64("cap", kDefaultOracleCap);
  const bool exact = oracle_only || r.flag("oracle", false);
  WalkConfig cfg;
  if (!oracle_only) {
    cfg = walk_from_config(r);
    cfg.seed = r.u64("seed", 1);
    cfg.record_trace = r.flag("trace", false);
  } else {
    r.mark("seed");
  }
  r.mark("version");
  r.reject_unused();

  const ObservationModel om(problem.spec());
  const auto res = exact ? exact_map(problem, om, counts, grid, cap) : solve(problem, om, counts, grid, cfg);
  auto j = result_json(problem, res, exact ? "exact" : "walk");
  if (exact) j["candidates"] = oracle_candidate_count(problem, cap);
  run.emit(oracle_only ? "oracle.json" : "solve.json", j.dump(2) + "\n");
  if (cfg.record_trace && !exact) {
    std::ostringstream trace;
    write_trace_csv(trace, res.trace);
    run.emit("trace.csv", trace.str());
  }
  std::cout << (exact ? "exact MAP " : "walk estimate ") << to_string(res.assignment)
            << "  p_hat=" << format_double(res.p_hat) << "  score=" << format_double(res.score) << "\n";
  return kOk;
}

// Expectations are `expect.<name>@<t> = lo:hi` config lines.
struct Expectation {
  std::string name;
  std::size_t t = 0;
  double lo = 0.0;
  double hi = 1.0;
};

std::vector<Expectation> expectations(const ConfigReader& r) {
  std::vector<Expectation> out;
  for (const auto& [key, value] : r.with_prefix("expect.")) {
    const auto body = key.substr(7);
    const auto at = body.find('@');
    const auto colon = value.find(':');
    if (at == std::string::npos || colon == std::string::npos) {
      throw UsageError("expectation '" + key + " = " + value + "' must read expect.<name>@<t> = lo:hi");
    }
    Expectation e;
    e.name = body.substr(0, at);
    try {
      e.t = std::stoul(body.substr(at + 1));
      e.lo = std::stod(value.substr(0, colon));
      e.hi = std::stod(value.substr(colon + 1));
    } catch (const std::exception&) {
      throw UsageError("cannot read expectation '" + key + "'");
    }
    out.push_back(e);
  }
  return out;
}

bool check(const Expectation& e, double got) {
  const bool ok = got >= e.lo && got <= e.hi;
  std::cout << (ok ? "PASS " : "FAIL ") << e.name << "@" << e.t << ": " << format_fixed(got, 4) << " in ["
            << format_double(e.lo) << ", " << format_double(e.hi) << "]\n";
  return ok;
}

int cmd_bench(Run& run) {
  ConfigReader r(run.cfg);
  const auto kind = r.text("experiment", "accuracy");
  const bool want_assert = r.flag("assert", false);
  const auto expects = expectations(r);
  r.mark("version");
  bool ok = true;

  if (kind == "accuracy") {
    const auto spec = experiment_from_config(r);
    r.reject_unused();
    const auto curve = run_accuracy_experiment(spec);
    std::ostringstream csv;
    write_curve_csv(csv, curve);
    run.emit("results.csv", csv.str());
    std::cout << curve.problem << " p=" << format_double(curve.p_true) << " trials=" << spec.trials << "\n";
    for (const auto& p : curve.points) {
      std::cout << "  " << p.solver << " t=" << p.t << "  " << format_fixed(p.success_rate, 3) << " +- "
                << format_fixed(p.ci_half_width, 3) << "\n";
    }
    if (want_assert) {
      for (const auto& e : expects) ok &= check(e, curve.at(e.name, e.t).success_rate);
    }
  } else if (kind == "noise") {
    const auto spec = experiment_from_config(r);
    const double tol = r.real("mode_tolerance", 0.05);
    r.reject_unused();
    const auto tracking = run_noise_tracking(spec);
    std::ostringstream csv, summary;
    write_noise_csv(csv, tracking);
    summary << "t,mode_hit_rate,tolerance\n";
    std::cout << spec.spec.name() << " p=" << format_double(spec.p_true) << " trials=" << spec.trials << "\n";
    for (auto t : spec.checkpoints) {
      const double hit = tracking.mode_hit_rate(t, spec.p_true, tol);
      summary << t << ',' << format_double(hit) << ',' << format_double(tol) << '\n';
      std::cout << "  t=" << t << "  mode within " << format_double(tol) << ": " << format_fixed(hit, 3) << "\n";
    }
    run.emit("noise.csv", csv.str());
    run.emit("noise_summary.csv", summary.str());
    std::cout << "  max row normalization error " << format_double(tracking.max_normalization_error()) << "\n";
    if (want_assert) {
      for (const auto& e : expects) {
        if (e.name != "mode_hit") throw UsageError("noise experiments only know expect.mode_hit@<t>");
        ok &= check(e, tracking.mode_hit_rate(e.t, spec.p_true, tol));
      }
    }
  } else if (kind == "ablation") {
    const auto spec = ablation_from_config(r);
    r.reject_unused();
    const auto table = run_walk_ablation(spec);
    std::ostringstream csv;
    write_ablation_csv(csv, table);
    run.emit("ablation.csv", csv.str());
    std::cout << table.problem << " p=" << format_double(spec.base.p_true) << " observations=" << spec.observations
              << " trials=" << spec.base.trials << "\n";
    for (const auto& c : table.cells) {
      std::cout << "  " << c.arm << " steps=" << c.steps << "  " << format_fixed(c.success_rate, 3) << " +- "
                << format_fixed(c.ci_half_width, 3) << "\n";
    }
    if (want_assert) {
      for (const auto& e : expects) ok &= check(e, table.at(e.name, e.t).success_rate);
    }
  } else {
    throw UsageError("experiment must be accuracy, noise or ablation");
  }
  return ok ? kOk : kAssertFailed;
}

int cmd_warehouse(Run& run) {
  ConfigReader r(run.cfg);
  const auto path = r.text("transactions");
  if (!path) throw UsageError("warehouse needs --transactions");
  const bool want_assert = r.flag("assert", false);
  const auto ts = load_transactions(*path);
  const auto spec = warehouse_from_config(r, ts);
  r.mark("version");
  r.reject_unused();

  const auto result = run_warehouse(spec, ts);
  std::ostringstream csv, audit, summary;
  write_warehouse_csv(csv, result);
  for (const auto& rep : result.reps) {
    for (const auto& v : rep.violations) audit << "rep " << rep.rep << ": " << v << '\n';
  }
  audit << result.violation_count() << " violations in " << result.reps.size() << " repetitions\n";
  summary << "solver,mean,std\n";
  const std::pair<const char*, double WarehouseRep::*> rows[] = {
      {"bn-epp-rules", &WarehouseRep::bn_rules}, {"bn-epp", &WarehouseRep::bn_plain}, {"oma", &WarehouseRep::oma}};
  std::cout << "warehouse: " << ts.items.size() << " items, " << spec.sections << " sections, "
            << result.reps.size() << " repetitions\n";
  for (const auto& [name, field] : rows) {
    const auto s = result.summary(field);
    summary << name << ',' << format_double(s.mean) << ',' << format_double(s.std) << '\n';
    std::cout << "  " << name << "  mean " << format_fixed(s.mean, 2) << "  std " << format_fixed(s.std, 2) << "\n";
  }
  const double p = result.sign_test_p();
  std::cout << "  bn-epp beats oma in " << result.plain_wins() << "/" << result.reps.size()
            << " repetitions (sign test p=" << format_double(p) << ")\n";
  std::cout << "  " << result.violation_count() << " rule violations\n";
  run.emit("warehouse.csv", csv.str());
  run.emit("warehouse_summary.csv", summary.str());
  run.emit("audit.txt", audit.str());

  if (!want_assert) return kOk;
  bool ok = true;
  if (result.violation_count() != 0) {
    std::cout << "FAIL rule violations present\n";
    ok = false;
  }
  if (!(p < 0.01)) {
    std::cout << "FAIL bn-epp does not beat oma (sign test p=" << format_double(p) << ")\n";
    ok = false;
  }
  if (ok) std::cout << "PASS no violations; bn-epp beats oma\n";
  return ok ? kOk : kAssertFailed;
}

int dispatch(Run& run) {
  if (run.command == "simulate") return cmd_simulate(run);
  if (run.command == "solve") return cmd_solve(run, false);
  if (run.command == "oracle") return cmd_solve(run, true);
  if (run.command == "bench") return cmd_bench(run);
  if (run.command == "warehouse") return cmd_warehouse(run);
  throw UsageError("unknown command '" + run.command + "'");
}

int execute(Run& run, const std::vector<std::string>& argv) {
  fs::create_directories(run.out);
  const auto started = utc_now();
  const auto t0 = std::chrono::steady_clock::now();
  const int code = dispatch(run);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  json manifest = {{"tool", "equipart"},
                   {"git_describe", EQUIPART_GIT_DESCRIBE},
                   {"command", run.command},
                   {"config", run.cfg},
                   {"argv", argv},
                   {"outputs", run.outputs},
                   {"exit_code", code},
                   {"started_utc", started},
                   {"wall_clock_seconds", secs}};
  write_file(run.out / "manifest.json", manifest.dump(2) + "\n");
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  CLI::App app{"Learn hidden equi-partitions from noisy paired requests."};
  app.set_help_all_flag("--help-all", "show help for every subcommand");
  app.require_subcommand(0, 1);
  std::string replay;
  std::string replay_out;
  app.add_option("--replay", replay, "rerun the command recorded in a manifest.json");
  app.add_option("--replay-out", replay_out, "output directory for --replay (default: the recorded one)");

  const auto cmds = commands();
  std::map<std::string, std::map<std::string, std::string>> values;
  std::map<std::string, std::map<std::string, bool>> switches;
  std::map<std::string, std::string> config_path, out_dir, seed;
  std::map<std::string, CLI::App*> subs;
  for (const auto& c : cmds) {
    auto* sub = app.add_subcommand(c.name, c.about);
    subs[c.name] = sub;
    out_dir[c.name] = "equipart-out";
    sub->add_option("--config", config_path[c.name], "key = value config file (version = 1)");
    sub->add_option("--out", out_dir[c.name], "output directory")->capture_default_str();
    sub->add_option("--seed", seed[c.name], "master seed (default: config, then EQUIPART_SEED, then 1)");
    for (const auto& f : c.flags) {
      const std::string name = std::string("--") + f.name;
      if (f.boolean) {
        sub->add_flag(name, switches[c.name][key_of(f.name)], f.help);
      } else {
        sub->add_option(name, values[c.name][key_of(f.name)], f.help);
      }
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return kUsage;
  }

  Run run;
  try {
    if (!replay.empty()) {
      if (!app.get_subcommands().empty()) throw UsageError("--replay takes no subcommand");
      std::ifstream in(replay);
      if (!in) throw UsageError("cannot open manifest '" + replay + "'");
      const auto m = json::parse(in);
      run.command = m.at("command").get<std::string>();
      run.cfg = m.at("config").get<ConfigMap>();
      run.out = replay_out.empty() ? fs::path(replay).parent_path() : fs::path(replay_out);
      if (run.out.empty()) run.out = ".";
    } else {
      if (app.get_subcommands().empty()) throw UsageError("choose a subcommand");
      auto* sub = app.get_subcommands().front();
      run.command = sub->get_name();
      const auto& cmd = *std::find_if(cmds.begin(), cmds.end(), [&](const Command& c) { return c.name == run.command; });
      run.cfg = config_path[run.command].empty() ? ConfigMap{{"version", std::to_string(kConfigVersion)}}
                                                 : load_config(config_path[run.command]);
      for (const auto& f : cmd.flags) {
        const auto key = key_of(f.name);
        if (sub->count(std::string("--") + f.name) == 0) continue;
        std::string v = f.boolean ? "true" : values[run.command][key];
        if (is_path_key(key) && !v.empty()) v = fs::absolute(v).lexically_normal().string();
        run.cfg[key] = v;
      }
      if (sub->count("--seed")) run.cfg["seed"] = seed[run.command];
      // Pin the seed so the manifest replays without the environment.
      run.cfg["seed"] = std::to_string(resolve_seed(ConfigReader(run.cfg)));
      run.out = out_dir[run.command];
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n" << app.help();
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    return execute(run, args);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n" << subs[run.command]->help();
    return kUsage;
  } catch (const InfeasibleConstraints& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kInfeasible;
  } catch (const MalformedConstraint& e) {
    std::cerr << "malformed constraint: " << e.what() << "\n";
    return kInfeasible;
  } catch (const InstanceTooLarge& e) {
    std::cerr << "oracle: " << e.what() << "\n";
    return kTooLarge;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
}
