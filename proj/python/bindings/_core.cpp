#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "invopt/api.hpp"
#include "invopt/learn.hpp"
#include "invopt/oracle.hpp"

namespace py = pybind11;

namespace {

invopt::OptSense sense_of(const std::string& s) {
  if (s == "max") return invopt::OptSense::Max;
  if (s == "min") return invopt::OptSense::Min;
  throw py::value_error("sense must be 'max' or 'min'");
}

invopt::QpSettings settings_of(double tol, int max_iters) {
  invopt::QpSettings qs;
  qs.eps_abs = tol;
  qs.eps_rel = tol;
  qs.max_iterations = max_iters;
  return qs;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "delta-margin inverse combinatorial optimization";

  m.def(
      "solve",
      [](const std::string& instance_json, const std::string& sense,
         double qp_tol, int qp_max_iters) {
        invopt::Instance inst = invopt::load_instance(instance_json);
        invopt::InverseResult res = invopt::solve_instance(
            inst, sense_of(sense), settings_of(qp_tol, qp_max_iters));
        return invopt::save_solution(inst, res);
      },
      py::arg("instance_json"), py::arg("sense") = "max",
      py::arg("qp_tol") = 1e-8, py::arg("qp_max_iters") = 200000,
      "Solve an inverse instance; returns the solution document (JSON).");

  m.def(
      "verify",
      [](const std::string& instance_json, const std::vector<double>& weights,
         double tol, const std::string& sense) {
        invopt::Instance inst = invopt::load_instance(instance_json);
        invopt::VerifyReport rep =
            invopt::verify_delta_optimal(inst, weights, tol, sense_of(sense));
        return py::make_tuple(rep.ok, rep.margin, rep.worst_competitor);
      },
      py::arg("instance_json"), py::arg("weights"), py::arg("tol") = 1e-5,
      py::arg("sense") = "max",
      "Exhaustively check delta-optimality; returns (ok, margin, worst).");

  m.def(
      "oracle_objective",
      [](const std::string& instance_json, const std::string& sense) {
        invopt::Instance inst = invopt::load_instance(instance_json);
        return invopt::oracle_objective(inst, sense_of(sense));
      },
      py::arg("instance_json"), py::arg("sense") = "max",
      "Reference objective from exhaustive competitor enumeration.");

  m.def(
      "train",
      [](const std::vector<std::string>& example_lines,
         const std::string& loss) {
        std::vector<invopt::FeaturizedExample> examples;
        for (const std::string& line : example_lines)
          examples.push_back(invopt::parse_example(line));
        invopt::LossFn fn = loss == "zeroone"
                                ? invopt::LossFn(invopt::zero_one_loss)
                                : invopt::LossFn(invopt::hamming_loss);
        int dim = examples.empty() || examples.front().features.empty()
                      ? 0
                      : static_cast<int>(examples.front().features[0].size());
        invopt::TrainResult res =
            invopt::train_online(examples, fn, dim);
        std::vector<std::string> log;
        for (const auto& rec : res.records)
          log.push_back(invopt::serialize_record(rec));
        return py::make_tuple(res.model.theta, log);
      },
      py::arg("example_lines"), py::arg("loss") = "hamming",
      "Run the online learner over JSON-line examples; returns (theta, log).");
}
