#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "setopt/bench.hpp"
#include "setopt/errors.hpp"
#include "setopt/io.hpp"
#include "setopt/registry.hpp"
#include "setopt/solvers.hpp"

using namespace setopt;

namespace {

Cone cone_for(const std::string& source, const SetValuedProblem& problem)
{
  return source.empty() ? Cone::orthant(problem.m()) : load_cone(source);
}

Eigen::VectorXd point_for(const std::string& text, const SetValuedProblem& problem)
{
  const Eigen::VectorXd x = parse_point(text);
  if (x.size() != problem.n())
    throw Error("point has " + std::to_string(x.size()) + " components, problem needs " + std::to_string(problem.n()));
  return x;
}

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Trust-region solvers and benchmark harness for set optimization"};
  app.require_subcommand(1);

  auto* list = app.add_subcommand("list-problems", "List the registered benchmark instances as JSON lines");

  std::string problem_id, point, cone_arg;
  auto* inspect = app.add_subcommand("inspect", "Minimal structure of F(x): omega, groups, |P_x|");
  inspect->add_option("--problem", problem_id)->required();
  inspect->add_option("--point", point, "comma-separated x")->required();
  inspect->add_option("--cone", cone_arg, "preset (orthant:m, k2prime) or JSON file");

  double radius = 1.0;
  auto* crit = app.add_subcommand("criticality", "theta(x) with its minimizing (a, s)");
  crit->add_option("--problem", problem_id)->required();
  crit->add_option("--point", point)->required();
  crit->add_option("--cone", cone_arg);
  crit->add_option("--radius", radius, "trust-region radius")->check(CLI::PositiveNumber);

  std::string algo = "trm", config_path;
  bool trace = false;
  auto* solve_cmd = app.add_subcommand("solve", "Run one algorithm from one initial point");
  solve_cmd->add_option("--problem", problem_id)->required();
  solve_cmd->add_option("--algo", algo)->check(CLI::IsMember({"trm", "max", "avg", "sd", "cg"}));
  solve_cmd->add_option("--x0", point, "comma-separated initial point")->required();
  solve_cmd->add_option("--config", config_path, "solver config JSON");
  solve_cmd->add_option("--cone", cone_arg);
  solve_cmd->add_flag("--trace", trace, "stream per-iteration records as JSON lines before the result");

  std::string out_path;
  auto* run_cmd = app.add_subcommand("run", "Run (or resume) an experiment matrix into a JSON-lines store");
  run_cmd->add_option("--config", config_path, "experiment config JSON")->required();
  run_cmd->add_option("--out", out_path, "record store")->required();

  std::string store, csv_path, metric = "iterations", svg_path, json_path;
  std::vector<std::string> algorithms;
  auto* table = app.add_subcommand("table", "Metrics table over the common-convergent points");
  table->add_option("--store", store)->required();
  table->add_option("--csv", csv_path, "write CSV here (default: stdout)");
  table->add_option("--algorithms", algorithms, "algorithm subset");

  auto* prof = app.add_subcommand("profile", "Performance profile of one metric");
  prof->add_option("--store", store)->required();
  prof->add_option("--metric", metric)->check(CLI::IsMember({"nonconv", "iterations", "cpu_time", "inv_step_size"}));
  prof->add_option("--svg", svg_path, "write the staircase plot here");
  prof->add_option("--json", json_path, "write ratios and curves here (default: stdout)");
  prof->add_option("--algorithms", algorithms, "algorithm subset");

  std::vector<std::string> cones{"orthant:2", "k2prime"};
  problem_id = "ex53_n2_m2";
  auto* cone_cmd = app.add_subcommand("cone-experiment", "Max/Avg-NTRM from one point under several cones");
  cone_cmd->add_option("--problem", problem_id);
  cone_cmd->add_option("--x0", point)->required();
  cone_cmd->add_option("--cones", cones, "cone presets or files");
  cone_cmd->add_option("--config", config_path, "solver config JSON");
  cone_cmd->add_option("--out", out_path, "write JSON here (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (list->parsed()) {
      for (const auto& id : problem_ids()) std::cout << problem_metadata(registry(id)).dump() << '\n';
    } else if (inspect->parsed()) {
      const SetValuedProblem problem = registry(problem_id);
      const Cone cone = cone_for(cone_arg, problem);
      Json out = structure_to_json(minimal_structure(problem, cone, point_for(point, problem)));
      out["problem"] = problem.name();
      std::cout << out.dump(2) << '\n';
    } else if (crit->parsed()) {
      const SetValuedProblem problem = registry(problem_id);
      const Cone cone = cone_for(cone_arg, problem);
      const SubproblemSolution sol = theta_and_step(problem, cone, point_for(point, problem), radius);
      std::cout << solution_to_json(sol).dump(2) << '\n';
    } else if (solve_cmd->parsed()) {
      const SetValuedProblem problem = registry(problem_id);
      const Cone cone = cone_for(cone_arg, problem);
      SolverConfig config;
      if (!config_path.empty()) config = config_from_json(read_json_file(config_path));
      config.variant = variant_from_string(algo);
      const RunResult result = solve(problem, cone, point_for(point, problem), config);
      if (trace)
        for (const auto& rec : result.trace) std::cout << record_to_json(rec).dump() << '\n';
      std::cout << result_to_json(result).dump() << '\n';
    } else if (run_cmd->parsed()) {
      const ExperimentConfig config = experiment_from_json(read_json_file(config_path));
      const std::size_t done = run_matrix(config, out_path);
      std::cerr << done << " runs written to " << out_path << '\n';
    } else if (table->parsed()) {
      const MetricsTable t = build_table(load_store(store), algorithms);
      if (csv_path.empty()) std::cout << table_csv(t);
      else write_table_csv(t, csv_path);
    } else if (prof->parsed()) {
      const MetricsTable t = build_table(load_store(store), algorithms);
      const ProfileSet p = profile(t.metric(metric_from_string(metric)), t.problems, t.algorithms);
      if (!svg_path.empty()) write_file(svg_path, profile_svg(p, "Performance profile: " + metric));
      if (!json_path.empty()) write_file(json_path, profile_to_json(p).dump(2) + "\n");
      else if (svg_path.empty()) std::cout << profile_to_json(p).dump(2) << '\n';
    } else if (cone_cmd->parsed()) {
      SolverConfig config;
      if (!config_path.empty()) config = config_from_json(read_json_file(config_path));
      const SetValuedProblem problem = registry(problem_id);
      const Json out = cone_experiment_to_json(cone_experiment(problem_id, point_for(point, problem), cones, config));
      if (out_path.empty()) std::cout << out.dump(2) << '\n';
      else write_file(out_path, out.dump(2) + "\n");
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
