#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "modcash/pipelines.hpp"

namespace py = pybind11;
using namespace modcash;

PYBIND11_MODULE(modcash, m) {
  m.doc() = "CASH tuning for a modular CMA-ES";

  py::class_<ModuleConfiguration>(m, "ModuleConfiguration")
      .def(py::init<>())
      .def("__getitem__",
           [](const ModuleConfiguration& c, int i) {
             if (i < 0 || i >= kNumModules) throw py::index_error();
             return c[i];
           })
      .def("__setitem__",
           [](ModuleConfiguration& c, int i, int v) {
             if (i < 0 || i >= kNumModules) throw py::index_error();
             c[i] = v;
           })
      .def("valid", &ModuleConfiguration::valid)
      .def("__str__", &ModuleConfiguration::to_string)
      .def_static("from_string", &ModuleConfiguration::from_string)
      .def("__eq__", [](const ModuleConfiguration& a,
                        const ModuleConfiguration& b) { return a == b; });

  py::class_<Hyperparameters>(m, "Hyperparameters")
      .def(py::init<>())
      .def_readwrite("c1", &Hyperparameters::c1)
      .def_readwrite("cc", &Hyperparameters::cc)
      .def_readwrite("cmu", &Hyperparameters::c_mu)
      .def("valid", &Hyperparameters::valid);

  py::class_<CandidatePair>(m, "CandidatePair")
      .def(py::init<>())
      .def_readwrite("config", &CandidatePair::config)
      .def_readwrite("hyper", &CandidatePair::hyper);

  m.attr("NUM_CONFIGS") = kNumConfigs;
  m.def("encode_config", &encode_config);
  m.def("decode_config", &decode_config);
  m.def("default_hyperparameters", &default_hyperparameters, py::arg("dim"),
        py::arg("mu_eff"));
  m.def("repair_hyperparameters", &repair_hyperparameters);
  m.def("default_pair_for", &default_pair_for, py::arg("config"),
        py::arg("dim"));

  py::class_<Problem>(m, "Problem")
      .def_readonly("fid", &Problem::fid)
      .def_readonly("instance", &Problem::instance)
      .def_readonly("dim", &Problem::dim)
      .def("name", &Problem::name)
      .def("target_for", &Problem::target_for)
      .def("evaluate", [](const Problem& p, const std::vector<double>& x) {
        return p.evaluate(Eigen::Map<const Eigen::VectorXd>(
            x.data(), static_cast<Eigen::Index>(x.size())));
      });
  m.def("make_problem", &make_problem, py::arg("fid"), py::arg("instance"),
        py::arg("dim"));

  py::class_<RunRecord>(m, "RunRecord")
      .def_readonly("fid", &RunRecord::fid)
      .def_readonly("instance", &RunRecord::instance)
      .def_readonly("seed", &RunRecord::seed)
      .def_readonly("target", &RunRecord::target)
      .def_readonly("budget", &RunRecord::budget)
      .def_readonly("hitting_time", &RunRecord::hitting_time)
      .def_readonly("best_f", &RunRecord::best_f)
      .def_readonly("evaluations", &RunRecord::evaluations)
      .def_readonly("pair", &RunRecord::pair)
      .def("success", &RunRecord::success)
      .def("to_jsonl", &RunRecord::to_jsonl);

  m.def("run", &run, py::arg("pair"), py::arg("problem"), py::arg("target"),
        py::arg("budget"), py::arg("seed"));
  m.def("switch_run", &switch_run, py::arg("first"), py::arg("second"),
        py::arg("splitpoint"), py::arg("problem"), py::arg("target"),
        py::arg("budget"), py::arg("seed"));

  py::class_<ErtSummary>(m, "ErtSummary")
      .def_readonly("n_runs", &ErtSummary::n_runs)
      .def_readonly("n_success", &ErtSummary::n_success)
      .def_readonly("ert", &ErtSummary::ert)
      .def_readonly("aht", &ErtSummary::aht)
      .def_readonly("penalty", &ErtSummary::penalty);

  m.def("ert", &ert, py::arg("times"), py::arg("budget"));
  m.def("aht", &aht, py::arg("times"), py::arg("penalty"));
  m.def("summarize", &summarize, py::arg("times"), py::arg("budget"),
        py::arg("penalty"));
  m.def("kendall_tau", &kendall_tau);
  m.def("prediction_error", &prediction_error);
  m.def("expected_improvement", &expected_improvement, py::arg("mean"),
        py::arg("spread"), py::arg("best"));
  m.def("welch_p_value", &welch_p_value);
  m.def(
      "ecdf",
      [](const std::vector<RunRecord>& records,
         const std::vector<double>& targets,
         const std::vector<double>& budgets) {
        std::vector<std::pair<double, double>> out;
        for (const auto& p : ecdf(records, targets, budgets))
          out.emplace_back(p.budget, p.fraction);
        return out;
      },
      py::arg("records"), py::arg("targets"), py::arg("budgets"));
  m.def("ecdf_budget_grid", &ecdf_budget_grid);

  py::class_<SearchSpace>(m, "SearchSpace")
      .def_static("cash", &SearchSpace::cash)
      .def_static("hyper_only", &SearchSpace::hyper_only)
      .def("num_dims", &SearchSpace::num_dims);

  py::class_<RacingSettings>(m, "RacingSettings").def(py::init<>());
  py::class_<EgoSettings>(m, "EgoSettings")
      .def(py::init<>())
      .def_readwrite("runs_per_eval", &EgoSettings::runs_per_eval)
      .def_readwrite("run_budget", &EgoSettings::run_budget);

  py::class_<RacingResult>(m, "RacingResult")
      .def_readonly("best", &RacingResult::best)
      .def_readonly("predicted_cost", &RacingResult::predicted_cost)
      .def_readonly("runs_spent", &RacingResult::runs_spent);
  py::class_<EgoResult>(m, "EgoResult")
      .def_readonly("best", &EgoResult::best)
      .def_readonly("predicted_ert", &EgoResult::predicted_ert)
      .def_readonly("runs_spent", &EgoResult::runs_spent);

  m.def(
      "tune_racing",
      [](const SearchSpace& space, const std::function<double(
             const CandidatePair&, int, std::uint64_t)>& cost_fn,
         long budget, const RacingSettings& settings, std::uint64_t seed) {
        return tune_racing(space, cost_fn, budget, settings, seed);
      },
      py::arg("space"), py::arg("cost_fn"), py::arg("budget"),
      py::arg("settings") = RacingSettings{}, py::arg("seed") = 1);
  m.def(
      "tune_ego",
      [](const SearchSpace& space,
         const std::function<std::optional<long>(const CandidatePair&, int,
                                                 int)>& run_fn,
         long budget, const EgoSettings& settings, std::uint64_t seed) {
        return tune_ego(space, run_fn, budget, settings, seed);
      },
      py::arg("space"), py::arg("run_fn"), py::arg("budget"),
      py::arg("settings") = EgoSettings{}, py::arg("seed") = 1);
}
