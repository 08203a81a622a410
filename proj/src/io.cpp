#include "setopt/io.hpp"

#include <fstream>
#include <sstream>

#include "setopt/errors.hpp"

namespace setopt {

Json to_json(const Eigen::VectorXd& v)
{
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Json to_json(const Eigen::MatrixXd& m)
{
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) out.push_back(to_json(Eigen::VectorXd(m.row(r).transpose())));
  return out;
}

Eigen::VectorXd vector_from_json(const Json& j)
{
  if (!j.is_array()) throw IoError("expected a JSON array of numbers");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  return v;
}

Eigen::MatrixXd matrix_from_json(const Json& j)
{
  if (!j.is_array() || j.empty()) throw IoError("expected a nonempty JSON array of rows");
  const std::size_t cols = j[0].size();
  Eigen::MatrixXd m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < j.size(); ++r) {
    if (j[r].size() != cols) throw IoError("ragged matrix rows");
    m.row(static_cast<Eigen::Index>(r)) = vector_from_json(j[r]).transpose();
  }
  return m;
}

Json cone_to_json(const Cone& cone) { return Json{{"dual_normals", to_json(cone.normals())}}; }

Cone cone_from_json(const Json& j)
{
  if (!j.contains("dual_normals")) throw IoError("cone JSON needs \"dual_normals\"");
  const double tol = j.value("tolerance", Cone::default_tolerance);
  return Cone(matrix_from_json(j.at("dual_normals")), tol);
}

Cone cone_from_preset(const std::string& name)
{
  if (name == "k2prime") return Cone::k2prime();
  const std::string prefix = "orthant:";
  if (name.rfind(prefix, 0) == 0) {
    int m = 0;
    try {
      m = std::stoi(name.substr(prefix.size()));
    } catch (const std::exception&) {
      throw InvalidConeError("bad cone preset: " + name);
    }
    if (m < 1) throw InvalidConeError("bad cone preset: " + name);
    return Cone::orthant(m);
  }
  throw InvalidConeError("unknown cone preset: " + name);
}

Cone load_cone(const std::string& source)
{
  if (source == "k2prime" || source.rfind("orthant:", 0) == 0) return cone_from_preset(source);
  return cone_from_json(read_json_file(source));
}

SolverConfig config_from_json(const Json& j, SolverConfig c)
{
  if (!j.is_object()) throw IoError("solver config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key == "variant") c.variant = variant_from_string(value.get<std::string>());
    else if (key == "omega0") c.omega0 = value.get<double>();
    else if (key == "omega_max") c.omega_max = value.get<double>();
    else if (key == "epsilon") c.epsilon = value.get<double>();
    else if (key == "eta1") c.eta1 = value.get<double>();
    else if (key == "eta2") c.eta2 = value.get<double>();
    else if (key == "gamma1") c.gamma1 = value.get<double>();
    else if (key == "gamma2") c.gamma2 = value.get<double>();
    else if (key == "memory_depth") c.memory_depth = value.get<int>();
    else if (key == "mu") c.mu = value.get<double>();
    else if (key == "mu_min") c.mu_min = value.get<double>();
    else if (key == "mu_max") c.mu_max = value.get<double>();
    else if (key == "it_max") c.it_max = value.get<int>();
    else if (key == "cg_armijo") c.cg_armijo = value.get<double>();
    else if (key == "sd_armijo") c.sd_armijo = value.get<double>();
    else if (key == "backtrack") c.backtrack = value.get<double>();
    else if (key == "cg_sigma") c.cg_sigma = value.get<double>();
    else if (key == "partition_cap") c.partition_cap = value.get<std::size_t>();
    else if (key == "record_matrices") c.record_matrices = value.get<bool>();
    else throw IoError("unknown solver config key: " + key);
  }
  c.validate();
  return c;
}

Json config_to_json(const SolverConfig& c)
{
  return Json{{"variant", to_string(c.variant)},
              {"omega0", c.omega0},
              {"omega_max", c.omega_max},
              {"epsilon", c.epsilon},
              {"eta1", c.eta1},
              {"eta2", c.eta2},
              {"gamma1", c.gamma1},
              {"gamma2", c.gamma2},
              {"memory_depth", c.memory_depth},
              {"mu", c.mu},
              {"mu_min", c.mu_min},
              {"mu_max", c.mu_max},
              {"it_max", c.it_max},
              {"cg_armijo", c.cg_armijo},
              {"sd_armijo", c.sd_armijo},
              {"backtrack", c.backtrack},
              {"cg_sigma", c.cg_sigma},
              {"partition_cap", c.partition_cap},
              {"record_matrices", c.record_matrices}};
}

Json problem_metadata(const SetValuedProblem& problem)
{
  Json out{{"name", problem.name()},
           {"n", problem.n()},
           {"m", problem.m()},
           {"p", problem.p()},
           {"box", {{"lower", to_json(problem.box().lower)}, {"upper", to_json(problem.box().upper)}}}};
  if (!problem.notes.empty()) out["notes"] = problem.notes;
  if (problem.clamp_events) out["clamp_events"] = problem.clamp_events;
  return out;
}

Json structure_to_json(const MinimalStructure& s)
{
  Json groups = Json::array();
  for (const auto& g : s.groups) groups.push_back(g);
  Json values = Json::array();
  for (const auto& v : s.values) values.push_back(to_json(v));
  return Json{{"omega", s.omega},
              {"groups", groups},
              {"values", values},
              {"partition_size", s.partition_size()},
              {"is_regular_hint", s.is_regular_hint}};
}

Json solution_to_json(const SubproblemSolution& s)
{
  return Json{{"t_star", s.t_star},
              {"a_star", s.a_star},
              {"s_star", to_json(s.s_star)},
              {"inner_iterations", s.inner_iterations},
              {"feasible", s.feasible}};
}

Json record_to_json(const IterationRecord& r)
{
  Json out{{"k", r.k},
           {"x", to_json(r.x)},
           {"radius", r.radius},
           {"t", r.t},
           {"rho", to_json(r.rho)},
           {"accepted", r.accepted},
           {"step_norm", r.step_norm},
           {"a", r.a}};
  if (r.reference.size()) out["reference"] = to_json(r.reference);
  return out;
}

Json result_to_json(const RunResult& r, bool with_trace)
{
  Json out{{"converged", r.converged},
           {"iterations", r.iterations},
           {"wall_time", r.wall_time},
           {"final_point", to_json(r.final_point)},
           {"final_t", r.final_t},
           {"final_radius", r.final_radius},
           {"mean_step_size", r.mean_step_size},
           {"diagnostic", r.diagnostic}};
  if (with_trace) {
    Json trace = Json::array();
    for (const auto& rec : r.trace) trace.push_back(record_to_json(rec));
    out["trace"] = trace;
  }
  return out;
}

Eigen::VectorXd parse_point(const std::string& text)
{
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw IoError("cannot parse point component: '" + item + "'");
    }
  }
  if (values.empty()) throw IoError("empty point");
  return Eigen::Map<Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
}

Json read_json_file(const std::string& path)
{
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw IoError(path + ": " + e.what());
  }
}

}  // namespace setopt
