#pragma once

#include <string>

#include <json.hpp>

#include "setopt/cone.hpp"
#include "setopt/partition.hpp"
#include "setopt/problem.hpp"
#include "setopt/solvers.hpp"
#include "setopt/subproblem.hpp"

namespace setopt {

using Json = nlohmann::json;

Json to_json(const Eigen::VectorXd& v);
Json to_json(const Eigen::MatrixXd& m);
Eigen::VectorXd vector_from_json(const Json& j);
Eigen::MatrixXd matrix_from_json(const Json& j);

/// {"dual_normals": [[...], ...]}
Json cone_to_json(const Cone& cone);
Cone cone_from_json(const Json& j);
/// A preset name ("orthant:m", "k2prime") or a path to a cone JSON file.
Cone load_cone(const std::string& source);

/// Unknown keys are rejected; missing keys keep their defaults.
SolverConfig config_from_json(const Json& j, SolverConfig base = {});
Json config_to_json(const SolverConfig& config);

Json problem_metadata(const SetValuedProblem& problem);
Json structure_to_json(const MinimalStructure& structure);
Json solution_to_json(const SubproblemSolution& solution);
Json record_to_json(const IterationRecord& record);
/// Without the trace unless `with_trace`.
Json result_to_json(const RunResult& result, bool with_trace = false);

/// "1,2.5,-3" -> vector
Eigen::VectorXd parse_point(const std::string& text);

Json read_json_file(const std::string& path);

}  // namespace setopt
