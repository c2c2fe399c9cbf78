#include "invopt/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "invopt/api.hpp"
#include "invopt/errors.hpp"
#include "invopt/learn.hpp"
#include "invopt/oracle.hpp"
#include "json.hpp"

namespace invopt {
namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write file: " + path);
  out << bytes;
}

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

OptSense parse_sense(const std::string& s) {
  if (s == "max") return OptSense::Max;
  if (s == "min") return OptSense::Min;
  throw ParseError("sense must be max or min");
}

// The weights document may be a bare array, {"weights": [...]}, or a
// solution document carrying "weights_perturbed".
std::vector<double> parse_weights_doc(const std::string& bytes) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(bytes);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid weights JSON: ") + e.what());
  }
  try {
    if (j.is_array()) return j.get<std::vector<double>>();
    if (j.contains("weights_perturbed"))
      return j.at("weights_perturbed").get<std::vector<double>>();
    if (j.contains("weights"))
      return j.at("weights").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad weights document: ") + e.what());
  }
  throw ParseError("weights document has no usable weights field");
}

struct GoldenCase {
  std::string name;
  std::string instance;
  double objective;
};

std::vector<GoldenCase> golden_cases();

int run_selftest(const QpSettings& qs, std::ostream& out) {
  bool all_ok = true;
  for (const GoldenCase& g : golden_cases()) {
    Instance inst = load_instance(g.instance);
    InverseResult res = solve_instance(inst, OptSense::Max, qs);
    bool ok = res.status() == SolveStatus::Optimal &&
              std::abs(res.objective() - g.objective) <= 1e-6;
    out << (ok ? "PASS" : "FAIL") << " " << g.name
        << " objective=" << fmt17(res.objective())
        << " expected=" << fmt17(g.objective) << "\n";
    all_ok = all_ok && ok;
  }
  return all_ok ? 0 : 2;
}

}  // namespace

int cli_run(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"delta-margin inverse combinatorial optimization"};
  app.require_subcommand(1);

  double qp_tol = 1e-8;
  int qp_max_iters = 200000;
  double qp_rho_min = 1e-6, qp_rho_max = 1e6;
  int seed = 0;  // reserved for randomized generators; solvers stay exact
  app.add_option("--qp-tol", qp_tol, "QP absolute/relative tolerance");
  app.add_option("--qp-max-iters", qp_max_iters, "QP iteration limit");
  app.add_option("--qp-rho-min", qp_rho_min, "ADMM penalty lower bound");
  app.add_option("--qp-rho-max", qp_rho_max, "ADMM penalty upper bound");
  app.add_option("--seed", seed, "seed for randomized generators");

  auto* inverse = app.add_subcommand("inverse", "solve an inverse instance");
  std::string kind_str, input, output, sense_str = "max";
  double delta_override = -1.0;
  inverse->add_option("kind", kind_str, "instance kind")->required();
  inverse->add_option("--input", input, "instance JSON file")->required();
  auto* delta_opt =
      inverse->add_option("--delta", delta_override, "margin override");
  inverse->add_option("--sense", sense_str, "max or min (arborescence)");
  inverse->add_option("--output", output, "solution file (default stdout)");

  auto* verify = app.add_subcommand("verify", "check delta-optimality");
  std::string v_input, v_weights, v_sense = "max";
  double v_tol = 1e-5;
  verify->add_option("--input", v_input, "instance JSON file")->required();
  verify->add_option("--weights", v_weights, "weights JSON file")->required();
  verify->add_option("--tol", v_tol, "margin tolerance");
  verify->add_option("--sense", v_sense, "max or min (arborescence)");

  auto* oracle = app.add_subcommand("oracle", "print the reference objective");
  std::string o_input, o_sense = "max";
  oracle->add_option("--input", o_input, "instance JSON file")->required();
  oracle->add_option("--sense", o_sense, "max or min (arborescence)");

  auto* train = app.add_subcommand("train", "online structured learning");
  std::string t_stream, t_loss = "hamming", t_log;
  train->add_option("--stream", t_stream, "JSON-lines examples")->required();
  train->add_option("--loss", t_loss, "hamming or zeroone");
  train->add_option("--log", t_log, "round log output (JSON-lines)");

  auto* selftest =
      app.add_subcommand("selftest", "run the closed-form golden cases");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      out << app.help();
      return 0;
    }
    err << e.what() << "\n" << app.help();
    return 1;
  }

  QpSettings qs;
  qs.eps_abs = qp_tol;
  qs.eps_rel = qp_tol;
  qs.max_iterations = qp_max_iters;
  qs.rho_min = qp_rho_min;
  qs.rho_max = qp_rho_max;

  try {
    if (inverse->parsed()) {
      Kind kind = kind_from_string(kind_str);
      Instance inst = load_instance(read_file(input));
      if (inst.kind != kind)
        throw ValidationError("instance kind does not match subcommand");
      if (delta_opt->count() > 0) {
        inst.delta = delta_override;
        validate_instance(inst);
      }
      InverseResult res = solve_instance(inst, parse_sense(sense_str), qs);
      for (const std::string& w : res.warnings) err << "warning: " << w << "\n";
      std::string doc = save_solution(inst, res);
      if (output.empty())
        out << doc;
      else
        write_file(output, doc);
      return res.status() == SolveStatus::Optimal ? 0 : 2;
    }
    if (verify->parsed()) {
      Instance inst = load_instance(read_file(v_input));
      std::vector<double> w = parse_weights_doc(read_file(v_weights));
      VerifyReport report =
          verify_delta_optimal(inst, w, v_tol, parse_sense(v_sense));
      nlohmann::json j;
      j["ok"] = report.ok;
      if (std::isinf(report.margin))
        j["margin"] = "infinity";  // sole feasible solution, no competitor
      else
        j["margin"] = report.margin;
      j["worst_competitor"] = report.worst_competitor;
      out << j.dump(2) << "\n";
      return report.ok ? 0 : 3;
    }
    if (oracle->parsed()) {
      Instance inst = load_instance(read_file(o_input));
      out << fmt17(oracle_objective(inst, parse_sense(o_sense), qs)) << "\n";
      return 0;
    }
    if (train->parsed()) {
      LossFn loss;
      if (t_loss == "hamming")
        loss = hamming_loss;
      else if (t_loss == "zeroone")
        loss = zero_one_loss;
      else
        throw ParseError("loss must be hamming or zeroone");
      std::istringstream stream(read_file(t_stream));
      std::vector<FeaturizedExample> examples;
      std::string line;
      while (std::getline(stream, line)) {
        if (line.empty()) continue;
        examples.push_back(parse_example(line));
      }
      if (examples.empty()) throw ParseError("empty training stream");
      int feature_dim = static_cast<int>(examples.front().features.empty()
                                             ? 0
                                             : examples.front().features[0]
                                                   .size());
      TrainResult res = train_online(examples, loss, feature_dim, {}, qs);
      std::string log;
      for (const RoundRecord& rec : res.records)
        log += serialize_record(rec) + "\n";
      if (t_log.empty())
        err << log;
      else
        write_file(t_log, log);
      nlohmann::json j;
      j["theta"] = res.model.theta;
      int updates = 0;
      double total_hinge = 0.0;
      for (const RoundRecord& rec : res.records) {
        updates += !rec.skipped;
        total_hinge += rec.hinge;
      }
      j["rounds"] = static_cast<int>(res.records.size());
      j["updates"] = updates;
      j["cumulative_hinge"] = total_hinge;
      out << j.dump(2) << "\n";
      return 0;
    }
    if (selftest->parsed()) return run_selftest(qs, out);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const GuardError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "solver error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}

namespace {

std::vector<GoldenCase> golden_cases() {
  // Each case is a single-halfspace projection with a hand-derivable optimum.
  std::vector<GoldenCase> cases;
  cases.push_back({"matroid-two-edge", R"({
    "kind": "matroid", "delta": 1.0,
    "digraph": {"nodes": 2, "arcs": [[0,1],[0,1]]},
    "weights": [1.0, 2.0], "designated": [0]})",
                   2.0});
  cases.push_back({"matroid-triangle", R"({
    "kind": "matroid", "delta": 2.0,
    "digraph": {"nodes": 3, "arcs": [[0,1],[1,2],[2,0]]},
    "weights": [3.0, 2.0, 1.0], "designated": [0, 1]})",
                   0.5});
  cases.push_back({"matching-2x2", R"({
    "kind": "perfect-matching", "delta": 3.0,
    "bipartite": {"left": 2, "right": 2,
                  "edges": [[0,0],[0,1],[1,0],[1,1]]},
    "weights": [2.0, 1.0, 1.0, 2.0], "designated": [0, 3]})",
                   0.25});
  // Saturated feeder arc keeps the flow maximum while the three parallel
  // arcs carry the interesting costs.
  cases.push_back({"flow-three-parallel", R"({
    "kind": "min-cost-flow", "delta": 0.0,
    "digraph": {"nodes": 3, "arcs": [[0,1],[1,2],[1,2],[1,2]]},
    "weights": [0.0, 1.0, 3.0, 2.0],
    "capacities": [2.0, 1.0, 1.0, 1.0], "flow": [2.0, 1.0, 1.0, 0.0],
    "source": 0, "sink": 2, "designated": []})",
                   0.5});
  cases.push_back({"sp-tree-chain-shortcut", R"({
    "kind": "sp-tree", "delta": 1.0,
    "digraph": {"nodes": 3, "arcs": [[0,1],[1,2],[0,2]]},
    "weights": [1.0, 1.0, 1.5], "designated": [0, 1], "root": 0})",
                   0.75});
  cases.push_back({"st-path-diamond", R"({
    "kind": "st-path", "delta": 1.0,
    "digraph": {"nodes": 4, "arcs": [[0,1],[1,3],[0,2],[2,3]]},
    "weights": [1.0, 1.0, 1.0, 1.0], "designated": [0, 1],
    "source": 0, "sink": 3})",
                   0.25});
  return cases;
}

}  // namespace
}  // namespace invopt
