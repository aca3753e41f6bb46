#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "equipart/bench.hpp"
#include "equipart/core.hpp"
#include "equipart/data.hpp"
#include "equipart/error.hpp"
#include "equipart/evidence.hpp"
#include "equipart/inference.hpp"
#include "equipart/model.hpp"
#include "equipart/oma.hpp"
#include "equipart/simulator.hpp"

namespace py = pybind11;
using namespace equipart;

namespace {

Assignment to_assignment(const std::vector<Label>& labels) { return Assignment(labels); }

std::vector<Label> to_list(const Assignment& a) { return {a.labels().begin(), a.labels().end()}; }

PairCounts counts_of(const std::vector<std::pair<std::size_t, std::size_t>>& requests, std::size_t objects) {
  PairCounts c(objects);
  for (const auto& [i, j] : requests) c.add(i, j);
  return c;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Bayesian-network equi-partitioning from noisy paired requests.";

  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InfeasibleConstraints>(m, "InfeasibleConstraints", error.ptr());
  py::register_exception<MalformedConstraint>(m, "MalformedConstraint", error.ptr());
  py::register_exception<DeadEnd>(m, "DeadEnd", error.ptr());
  py::register_exception<IndexOutOfRange>(m, "IndexOutOfRange", error.ptr());
  py::register_exception<LengthMismatch>(m, "LengthMismatch", error.ptr());
  py::register_exception<DomainError>(m, "DomainError", error.ptr());
  py::register_exception<DegenerateEnvironment>(m, "DegenerateEnvironment", error.ptr());
  py::register_exception<InstanceTooLarge>(m, "InstanceTooLarge", error.ptr());
  py::register_exception<UnsupportedSpec>(m, "UnsupportedSpec", error.ptr());
  py::register_exception<ParseError>(m, "ParseError", error.ptr());
  py::register_exception<EmptyFile>(m, "EmptyFile", error.ptr());
  py::register_exception<UnknownItem>(m, "UnknownItem", error.ptr());
  py::register_exception<UnknownSection>(m, "UnknownSection", error.ptr());
  py::register_exception<UnassignedItem>(m, "UnassignedItem", error.ptr());

  py::class_<PartitionSpec>(m, "PartitionSpec")
      .def(py::init<std::vector<std::size_t>>(), py::arg("capacities"))
      .def_static("equi", &PartitionSpec::equi, py::arg("objects"), py::arg("partitions"))
      .def_property_readonly("object_count", &PartitionSpec::object_count)
      .def_property_readonly("partition_count", &PartitionSpec::partition_count)
      .def_property_readonly("capacities",
                             [](const PartitionSpec& s) {
                               return std::vector<std::size_t>(s.capacities().begin(), s.capacities().end());
                             })
      .def_property_readonly("same_pair_count", &PartitionSpec::same_pair_count)
      .def_property_readonly("diff_pair_count", &PartitionSpec::diff_pair_count)
      .def_property_readonly("name", &PartitionSpec::name)
      .def("__repr__", [](const PartitionSpec& s) { return "PartitionSpec(" + s.name() + ")"; });

  py::class_<ConstraintSet>(m, "ConstraintSet")
      .def(py::init<>())
      .def("must_link", &ConstraintSet::add_must_link)
      .def("cannot_link", &ConstraintSet::add_cannot_link)
      .def("allow", &ConstraintSet::allow, py::arg("object"), py::arg("partitions"))
      .def_property_readonly("empty", &ConstraintSet::empty);

  py::class_<Problem>(m, "Problem")
      .def(py::init<PartitionSpec, ConstraintSet>(), py::arg("spec"), py::arg("constraints") = ConstraintSet{})
      .def_property_readonly("spec", &Problem::spec)
      .def_property_readonly("object_count", &Problem::object_count)
      .def_property_readonly("partition_count", &Problem::partition_count)
      .def("satisfied_by", [](const Problem& p, const std::vector<Label>& a) { return p.satisfied_by(to_assignment(a)); });

  m.def("log_prior", [](const Problem& p, const std::vector<Label>& a) { return log_prior(p, to_assignment(a)); });
  m.def("conditional_placement_distribution", &conditional_placement_distribution, py::arg("problem"),
        py::arg("prefix"), py::arg("object"));
  m.def("equivalent_up_to_relabeling", [](const std::vector<Label>& a, const std::vector<Label>& b) {
    return equivalent_up_to_relabeling(to_assignment(a), to_assignment(b));
  });
  m.def("canonical_labels", [](const std::vector<Label>& a) { return to_list(canonical_labels(to_assignment(a))); });
  m.def("unlabeled_partition_count", &unlabeled_partition_count);
  m.def("enumerate_assignments", [](const Problem& p, bool canonical) {
    std::vector<std::vector<Label>> out;
    for_each_assignment(p, canonical, [&](const Assignment& a) {
      out.push_back(to_list(a));
      return true;
    });
    return out;
  }, py::arg("problem"), py::arg("canonical") = true);

  py::enum_<NoisePrior>(m, "NoisePrior")
      .value("uniform", NoisePrior::uniform)
      .value("above_chance", NoisePrior::above_chance);

  py::class_<NoiseGrid>(m, "NoiseGrid")
      .def_static("uniform", &NoiseGrid::uniform, py::arg("resolution") = kDefaultNoiseResolution)
      .def_static("make", &NoiseGrid::make, py::arg("resolution"), py::arg("prior"), py::arg("spec"))
      .def_property_readonly("values",
                             [](const NoiseGrid& g) { return std::vector<double>(g.values().begin(), g.values().end()); })
      .def_property_readonly("probabilities",
                             [](const NoiseGrid& g) {
                               std::vector<double> out(g.size());
                               for (std::size_t k = 0; k < g.size(); ++k) out[k] = g.probability(k);
                               return out;
                             })
      .def("mean", &NoiseGrid::mean)
      .def("mode", &NoiseGrid::mode);

  py::class_<ObservationModel>(m, "ObservationModel")
      .def(py::init<const PartitionSpec&>())
      .def("q_same", &ObservationModel::q_same)
      .def("q_diff", &ObservationModel::q_diff);

  m.def(
      "simulate",
      [](const Problem& problem, double p, std::size_t requests, std::uint64_t seed) {
        const auto truth = generate_ground_truth(problem, derive_seed(seed, 0));
        Environment env(problem, truth, p, derive_seed(seed, 1));
        std::vector<std::pair<std::size_t, std::size_t>> out;
        for (const auto& r : stream(env, requests).requests) out.emplace_back(r.first, r.second);
        return py::make_tuple(to_list(truth), out);
      },
      py::arg("problem"), py::arg("p"), py::arg("requests"), py::arg("seed") = 1,
      "Returns (truth labels, list of (i, j) requests).");

  py::enum_<InitStrategy>(m, "InitStrategy")
      .value("likelihood_weighted", InitStrategy::likelihood_weighted)
      .value("prior", InitStrategy::prior);

  py::class_<WalkConfig>(m, "WalkConfig")
      .def(py::init<>())
      .def_readwrite("epsilon", &WalkConfig::epsilon)
      .def_readwrite("steps", &WalkConfig::steps)
      .def_readwrite("init_samples", &WalkConfig::init_samples)
      .def_readwrite("seed", &WalkConfig::seed)
      .def_readwrite("init", &WalkConfig::init)
      .def_readwrite("reestimate_noise", &WalkConfig::reestimate_noise)
      .def_readwrite("record_trace", &WalkConfig::record_trace);

  py::class_<SolveResult>(m, "SolveResult")
      .def_property_readonly("assignment", [](const SolveResult& r) { return to_list(r.assignment); })
      .def_readonly("p_hat", &SolveResult::p_hat)
      .def_readonly("score", &SolveResult::score)
      .def_property_readonly("trace", [](const SolveResult& r) {
        std::vector<py::tuple> out;
        for (const auto& t : r.trace) out.push_back(py::make_tuple(t.step, t.score, t.accepted, t.swap_i, t.swap_j));
        return out;
      });

  m.def(
      "solve",
      [](const Problem& problem, const std::vector<std::pair<std::size_t, std::size_t>>& requests,
         const WalkConfig& cfg, const NoiseGrid* grid) {
        const auto g = grid ? *grid : NoiseGrid::make(kDefaultNoiseResolution, NoisePrior::above_chance, problem.spec());
        py::gil_scoped_release release;
        return solve(problem, ObservationModel(problem.spec()), counts_of(requests, problem.object_count()), g, cfg);
      },
      py::arg("problem"), py::arg("requests"), py::arg("config") = WalkConfig{}, py::arg("grid") = nullptr,
      "Walk-BN-EPP estimate from a list of (i, j) requests.");

  m.def(
      "exact_map",
      [](const Problem& problem, const std::vector<std::pair<std::size_t, std::size_t>>& requests,
         const NoiseGrid* grid, std::uint64_t cap) {
        const auto g = grid ? *grid : NoiseGrid::make(kDefaultNoiseResolution, NoisePrior::above_chance, problem.spec());
        py::gil_scoped_release release;
        return exact_map(problem, ObservationModel(problem.spec()), counts_of(requests, problem.object_count()), g,
                         cap);
      },
      py::arg("problem"), py::arg("requests"), py::arg("grid") = nullptr, py::arg("cap") = kDefaultOracleCap);

  m.def(
      "noise_posterior",
      [](const Problem& problem, const std::vector<Label>& a,
         const std::vector<std::pair<std::size_t, std::size_t>>& requests, const NoiseGrid& grid) {
        return noise_posterior(problem, ObservationModel(problem.spec()), to_assignment(a),
                               counts_of(requests, problem.object_count()), grid);
      },
      py::arg("problem"), py::arg("assignment"), py::arg("requests"), py::arg("grid"));

  py::class_<OmaState>(m, "OmaState")
      .def_readonly("states", &OmaState::states)
      .def_readonly("class_of", &OmaState::class_of)
      .def_readonly("depth", &OmaState::depth);
  m.def("oma_init", &oma_init, py::arg("spec"), py::arg("states") = kDefaultOmaStates);
  m.def("oma_step", [](OmaState& s, std::size_t i, std::size_t j) { oma_step(s, ObjectPair(i, j)); });
  m.def("oma_answer", [](const OmaState& s) { return to_list(oma_answer(s)); });

  py::class_<TransactionSet>(m, "TransactionSet")
      .def_readonly("items", &TransactionSet::items)
      .def_readonly("transactions", &TransactionSet::transactions);
  m.def("load_transactions", &load_transactions, py::arg("path"));
  m.def("warehouse_sections", &warehouse_sections, py::arg("count") = 13);
  m.def("warehouse_constraints", [](const std::vector<std::string>& catalog, const std::vector<std::string>& sections) {
    return warehouse_constraints(catalog, sections);
  });
  m.def("trip_cost", [](const std::vector<Label>& a, const std::vector<std::size_t>& t) {
    return trip_cost(to_assignment(a), t);
  });

  py::enum_<BnSolver>(m, "BnSolver").value("walk", BnSolver::walk).value("exact", BnSolver::exact);

  py::class_<ExperimentSpec>(m, "ExperimentSpec")
      .def(py::init<>())
      .def_readwrite("spec", &ExperimentSpec::spec)
      .def_readwrite("constraints", &ExperimentSpec::constraints)
      .def_readwrite("p_true", &ExperimentSpec::p_true)
      .def_readwrite("trials", &ExperimentSpec::trials)
      .def_readwrite("checkpoints", &ExperimentSpec::checkpoints)
      .def_readwrite("walk", &ExperimentSpec::walk)
      .def_readwrite("solver", &ExperimentSpec::solver)
      .def_readwrite("oma_states", &ExperimentSpec::oma_states)
      .def_readwrite("noise_resolution", &ExperimentSpec::noise_resolution)
      .def_readwrite("noise_prior", &ExperimentSpec::noise_prior)
      .def_readwrite("seed", &ExperimentSpec::seed)
      .def_readwrite("jobs", &ExperimentSpec::jobs);

  m.def(
      "run_accuracy_experiment",
      [](const ExperimentSpec& spec) {
        AccuracyCurve curve;
        {
          py::gil_scoped_release release;
          curve = run_accuracy_experiment(spec);
        }
        py::list rows;
        for (const auto& p : curve.points) {
          py::dict d;
          d["solver"] = p.solver;
          d["t"] = p.t;
          d["success_rate"] = p.success_rate;
          d["ci_half_width"] = p.ci_half_width;
          rows.append(d);
        }
        return rows;
      },
      py::arg("spec"), "Per-checkpoint success rates as a list of dicts.");
}
