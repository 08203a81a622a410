#include "setopt/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>

#include "setopt/errors.hpp"
#include "setopt/io.hpp"
#include "setopt/registry.hpp"

namespace setopt {

std::uint64_t splitmix64(std::uint64_t x)
{
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(const std::string& text)
{
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (const unsigned char c : text) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

std::vector<Eigen::VectorXd> sample_points(const Box& box, std::size_t n_points, std::uint64_t seed)
{
  const auto n = static_cast<std::size_t>(box.dim());
  const std::uint64_t key = splitmix64(seed);
  std::vector<Eigen::VectorXd> points;
  points.reserve(n_points);
  for (std::size_t i = 0; i < n_points; ++i) {
    Eigen::VectorXd x(box.dim());
    for (std::size_t k = 0; k < n; ++k) {
      const std::uint64_t bits = splitmix64(key + 0x9E3779B97F4A7C15ULL * (i * n + k + 1));
      const double u = static_cast<double>(bits >> 11) * 0x1.0p-53;
      const auto kk = static_cast<Eigen::Index>(k);
      x(kk) = std::min(box.lower(kk) + u * (box.upper(kk) - box.lower(kk)), box.upper(kk));
    }
    points.push_back(std::move(x));
  }
  return points;
}

std::string to_string(Metric metric)
{
  switch (metric) {
    case Metric::Nonconv: return "nonconv";
    case Metric::Iterations: return "iterations";
    case Metric::CpuTime: return "cpu_time";
    case Metric::InvStepSize: return "inv_step_size";
  }
  return "nonconv";
}

Metric metric_from_string(const std::string& name)
{
  if (name == "nonconv") return Metric::Nonconv;
  if (name == "iterations") return Metric::Iterations;
  if (name == "cpu_time") return Metric::CpuTime;
  if (name == "inv_step_size") return Metric::InvStepSize;
  throw Error("unknown metric: " + name + " (expected nonconv, iterations, cpu_time or inv_step_size)");
}

ExperimentConfig experiment_from_json(const Json& j)
{
  ExperimentConfig c;
  if (!j.is_object()) throw IoError("experiment config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key == "problem_ids") {
      if (value.is_string() && value.get<std::string>() == "all") c.problem_ids = problem_ids();
      else c.problem_ids = value.get<std::vector<std::string>>();
    } else if (key == "algorithms") {
      c.algorithms = value.get<std::vector<std::string>>();
      for (const auto& a : c.algorithms) variant_from_string(a);
    } else if (key == "points_per_problem") {
      c.points_per_problem = value.get<std::size_t>();
    } else if (key == "it_max") {
      c.it_max = value.get<int>();
    } else if (key == "rng_seed") {
      c.rng_seed = value.get<std::uint64_t>();
    } else if (key == "metrics") {
      c.metrics.clear();
      for (const auto& m : value) c.metrics.push_back(metric_from_string(m.get<std::string>()));
    } else if (key == "solver") {
      c.solver = config_from_json(value);
    } else if (key == "cone") {
      c.cone = value.get<std::string>();
    } else {
      throw IoError("unknown experiment config key: " + key);
    }
  }
  if (c.points_per_problem < 1) throw IoError("points_per_problem must be at least 1");
  if (c.problem_ids.empty()) c.problem_ids = problem_ids();
  return c;
}

Json experiment_to_json(const ExperimentConfig& c)
{
  Json metrics = Json::array();
  for (const auto m : c.metrics) metrics.push_back(to_string(m));
  return Json{{"problem_ids", c.problem_ids},
              {"algorithms", c.algorithms},
              {"points_per_problem", c.points_per_problem},
              {"it_max", c.it_max},
              {"rng_seed", c.rng_seed},
              {"metrics", metrics},
              {"solver", config_to_json(c.solver)},
              {"cone", c.cone}};
}

Json summary_to_json(const RunSummary& s)
{
  return Json{{"problem", s.problem},
              {"algorithm", s.algorithm},
              {"point_index", s.point_index},
              {"converged", s.converged},
              {"iterations", s.iterations},
              {"wall_time", s.wall_time},
              {"mean_step_size", s.mean_step_size},
              {"final_t", s.final_t},
              {"diagnostic", s.diagnostic},
              {"x0", to_json(s.x0)},
              {"final_point", to_json(s.final_point)}};
}

RunSummary summary_from_json(const Json& j)
{
  RunSummary s;
  s.problem = j.at("problem").get<std::string>();
  s.algorithm = j.at("algorithm").get<std::string>();
  s.point_index = j.at("point_index").get<std::size_t>();
  s.converged = j.at("converged").get<bool>();
  s.iterations = j.at("iterations").get<int>();
  s.wall_time = j.at("wall_time").get<double>();
  s.mean_step_size = j.at("mean_step_size").get<double>();
  s.final_t = j.at("final_t").get<double>();
  s.diagnostic = j.value("diagnostic", "");
  s.x0 = vector_from_json(j.at("x0"));
  s.final_point = vector_from_json(j.at("final_point"));
  return s;
}

std::vector<RunSummary> load_store(const std::string& path)
{
  std::vector<RunSummary> out;
  std::ifstream in(path);
  if (!in) return out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(summary_from_json(Json::parse(line)));
    } catch (const std::exception& e) {
      // A run killed mid-write leaves a truncated final line; it is recomputed.
      if (in.peek() == std::char_traits<char>::eof()) break;
      throw IoError(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

namespace {

using RunKey = std::tuple<std::string, std::string, std::size_t>;

struct Job
{
  std::size_t problem;
  std::string algorithm;
  std::size_t point_index;
};

std::size_t worker_count()
{
  if (const char* env = std::getenv("SETOPT_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Cuts a trailing line without newline (a run killed mid-write) so appends start clean.
void drop_partial_line(const std::string& path)
{
  std::error_code ec;
  const auto size = std::filesystem::file_size(path, ec);
  if (ec || size == 0) return;
  std::ifstream in(path, std::ios::binary);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  in.close();
  if (text.back() == '\n') return;
  const auto cut = text.find_last_of('\n');
  std::filesystem::resize_file(path, cut == std::string::npos ? 0 : cut + 1);
}

}  // namespace

std::size_t run_matrix(const ExperimentConfig& config, const std::string& store_path)
{
  std::set<RunKey> done;
  for (const auto& r : load_store(store_path)) done.emplace(r.problem, r.algorithm, r.point_index);

  std::vector<SetValuedProblem> problems;
  std::vector<Cone> cones;
  std::vector<std::vector<Eigen::VectorXd>> starts;
  for (const auto& id : config.problem_ids) {
    problems.push_back(registry(id));
    const SetValuedProblem& p = problems.back();
    cones.push_back(config.cone.empty() ? Cone::orthant(p.m()) : load_cone(config.cone));
    starts.push_back(sample_points(p.box(), config.points_per_problem, config.rng_seed ^ fnv1a(id)));
  }

  std::vector<Job> jobs;
  for (std::size_t pi = 0; pi < problems.size(); ++pi)
    for (std::size_t i = 0; i < config.points_per_problem; ++i)
      for (const auto& algo : config.algorithms)
        if (!done.count({config.problem_ids[pi], algo, i})) jobs.push_back({pi, algo, i});
  if (jobs.empty()) return 0;

  drop_partial_line(store_path);
  std::ofstream out(store_path, std::ios::app);
  if (!out) throw IoError("cannot open " + store_path + " for appending");
  std::mutex write_mutex;
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t idx = next++; idx < jobs.size(); idx = next++) {
      const Job& job = jobs[idx];
      const SetValuedProblem& problem = problems[job.problem];
      RunSummary s;
      s.problem = config.problem_ids[job.problem];
      s.algorithm = job.algorithm;
      s.point_index = job.point_index;
      s.x0 = starts[job.problem][job.point_index];
      s.final_point = s.x0;
      try {
        SolverConfig sc = config.solver;
        sc.variant = variant_from_string(job.algorithm);
        sc.it_max = config.it_max;
        sc.record_matrices = false;
        const RunResult r = solve(problem, cones[job.problem], s.x0, sc);
        s.converged = r.converged;
        s.iterations = r.iterations;
        s.wall_time = r.wall_time;
        s.mean_step_size = r.mean_step_size;
        s.final_t = r.final_t;
        s.diagnostic = r.diagnostic;
        s.final_point = r.final_point;
      } catch (const std::exception& e) {
        s.converged = false;
        s.diagnostic = std::string("error: ") + e.what();
      }
      const std::string line = summary_to_json(s).dump();
      std::lock_guard<std::mutex> lock(write_mutex);
      out << line << '\n';
      out.flush();
    }
  };

  const std::size_t count = std::min(worker_count(), jobs.size());
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < count; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (!out) throw IoError("write failed: " + store_path);
  return jobs.size();
}

MetricsTable build_table(const std::vector<RunSummary>& records, std::vector<std::string> algorithms)
{
  MetricsTable table;
  if (algorithms.empty()) {
    for (const auto& r : records)
      if (std::find(algorithms.begin(), algorithms.end(), r.algorithm) == algorithms.end())
        algorithms.push_back(r.algorithm);
  }
  table.algorithms = algorithms;
  for (const auto& r : records)
    if (std::find(table.problems.begin(), table.problems.end(), r.problem) == table.problems.end())
      table.problems.push_back(r.problem);

  std::map<std::pair<std::string, std::string>, std::map<std::size_t, const RunSummary*>> by_cell;
  for (const auto& r : records) by_cell[{r.problem, r.algorithm}][r.point_index] = &r;

  for (const auto& problem : table.problems) {
    // Points where every selected algorithm has a converged record.
    std::set<std::size_t> common;
    bool first = true;
    for (const auto& algo : algorithms) {
      std::set<std::size_t> ok;
      for (const auto& [idx, r] : by_cell[{problem, algo}])
        if (r->converged) ok.insert(idx);
      if (first) common = std::move(ok);
      else {
        std::set<std::size_t> both;
        std::set_intersection(common.begin(), common.end(), ok.begin(), ok.end(), std::inserter(both, both.end()));
        common = std::move(both);
      }
      first = false;
    }
    table.common_points.push_back(common.size());

    std::vector<MetricsCell> row;
    for (const auto& algo : algorithms) {
      MetricsCell cell;
      const auto& runs = by_cell[{problem, algo}];
      cell.runs = static_cast<int>(runs.size());
      for (const auto& [idx, r] : runs)
        if (!r->converged) ++cell.nonconv;
      if (!common.empty()) {
        double iters = 0, cpu = 0, step = 0;
        std::size_t moving = 0;
        for (const std::size_t idx : common) {
          const RunSummary* r = runs.at(idx);
          iters += r->iterations;
          cpu += r->wall_time;
          if (r->iterations > 0) {
            step += r->mean_step_size;
            ++moving;
          }
        }
        const double count = static_cast<double>(common.size());
        cell.iterations = iters / count;
        cell.cpu_time = cpu / count;
        if (moving > 0) cell.step_size = step / static_cast<double>(moving);
      }
      row.push_back(cell);
    }
    table.cells.push_back(std::move(row));
  }
  return table;
}

Eigen::MatrixXd MetricsTable::metric(Metric metric) const
{
  const double nan = std::numeric_limits<double>::quiet_NaN();
  Eigen::MatrixXd out(static_cast<Eigen::Index>(problems.size()), static_cast<Eigen::Index>(algorithms.size()));
  for (std::size_t p = 0; p < problems.size(); ++p) {
    for (std::size_t s = 0; s < algorithms.size(); ++s) {
      const MetricsCell& c = cells[p][s];
      double v = nan;
      switch (metric) {
        case Metric::Nonconv: v = c.nonconv; break;
        case Metric::Iterations: v = c.iterations; break;
        case Metric::CpuTime: v = c.cpu_time; break;
        case Metric::InvStepSize: v = c.step_size > 0 ? 1.0 / c.step_size : nan; break;
      }
      out(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(s)) = v;
    }
  }
  return out;
}

double ProfileCurve::at(double tau) const
{
  double value = 0.0;
  for (const auto& [t, rho] : steps) {
    if (t > tau) break;
    value = rho;
  }
  return value;
}

ProfileSet profile(const Eigen::MatrixXd& values, const std::vector<std::string>& problems,
                   const std::vector<std::string>& algorithms)
{
  const double inf = std::numeric_limits<double>::infinity();
  ProfileSet out;
  out.algorithms = algorithms;
  std::vector<Eigen::VectorXd> rows;
  for (Eigen::Index p = 0; p < values.rows(); ++p) {
    double best = inf;
    for (Eigen::Index s = 0; s < values.cols(); ++s)
      if (std::isfinite(values(p, s))) best = std::min(best, values(p, s));
    if (!std::isfinite(best)) continue;
    const double shift = best == 0.0 ? 1.0 : 0.0;
    Eigen::VectorXd r(values.cols());
    for (Eigen::Index s = 0; s < values.cols(); ++s)
      r(s) = std::isfinite(values(p, s)) ? (values(p, s) + shift) / (best + shift) : inf;
    rows.push_back(r);
    out.problems.push_back(p < static_cast<Eigen::Index>(problems.size()) ? problems[p] : std::to_string(p));
  }
  if (rows.empty()) throw Error("performance profile: no problem has a defined metric value");

  out.ratios.resize(static_cast<Eigen::Index>(rows.size()), values.cols());
  for (std::size_t p = 0; p < rows.size(); ++p) out.ratios.row(static_cast<Eigen::Index>(p)) = rows[p].transpose();

  const double total = static_cast<double>(rows.size());
  for (Eigen::Index s = 0; s < values.cols(); ++s) {
    std::vector<double> finite;
    for (Eigen::Index p = 0; p < out.ratios.rows(); ++p)
      if (std::isfinite(out.ratios(p, s))) finite.push_back(out.ratios(p, s));
    std::sort(finite.begin(), finite.end());
    ProfileCurve curve;
    curve.algorithm = s < static_cast<Eigen::Index>(algorithms.size()) ? algorithms[s] : std::to_string(s);
    for (std::size_t i = 0; i < finite.size(); ++i) {
      if (i + 1 < finite.size() && finite[i + 1] == finite[i]) continue;
      curve.steps.emplace_back(finite[i], static_cast<double>(i + 1) / total);
    }
    out.curves.push_back(std::move(curve));
  }
  return out;
}

namespace {

std::string csv_number(double v)
{
  if (std::isnan(v)) return "";
  std::ostringstream ss;
  ss.precision(17);
  ss << v;
  return ss.str();
}

}  // namespace

std::string table_csv(const MetricsTable& table)
{
  std::ostringstream out;
  out << "problem,algorithm,runs,nonconv,common_points,mean_iterations,mean_cpu_time,mean_step_size\n";
  for (std::size_t p = 0; p < table.problems.size(); ++p)
    for (std::size_t s = 0; s < table.algorithms.size(); ++s) {
      const MetricsCell& c = table.cells[p][s];
      out << table.problems[p] << ',' << table.algorithms[s] << ',' << c.runs << ',' << c.nonconv << ','
          << table.common_points[p] << ',' << csv_number(c.iterations) << ',' << csv_number(c.cpu_time) << ','
          << csv_number(c.step_size) << '\n';
    }
  return out.str();
}

void write_table_csv(const MetricsTable& table, const std::string& path) { write_file(path, table_csv(table)); }

void write_file(const std::string& path, const std::string& contents)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << contents;
  if (!out) throw IoError("write failed: " + path);
}

Json profile_to_json(const ProfileSet& p)
{
  Json ratios = Json::array();
  for (Eigen::Index i = 0; i < p.ratios.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index s = 0; s < p.ratios.cols(); ++s) {
      if (std::isfinite(p.ratios(i, s))) row.push_back(p.ratios(i, s));
      else row.push_back(nullptr);
    }
    ratios.push_back(row);
  }
  Json curves = Json::array();
  for (const auto& c : p.curves) {
    Json steps = Json::array();
    for (const auto& [tau, rho] : c.steps) steps.push_back({tau, rho});
    curves.push_back({{"algorithm", c.algorithm}, {"steps", steps}});
  }
  return Json{{"algorithms", p.algorithms}, {"problems", p.problems}, {"ratios", ratios}, {"curves", curves}};
}

std::vector<ConeRun> cone_experiment(const std::string& problem_id, const Eigen::VectorXd& x0,
                                     const std::vector<std::string>& cones, SolverConfig config)
{
  const SetValuedProblem problem = registry(problem_id);
  std::vector<ConeRun> out;
  for (const auto& name : cones) {
    const Cone cone = load_cone(name);
    for (const Variant v : {Variant::MaxNTRM, Variant::AvgNTRM}) {
      config.variant = v;
      ConeRun run{name, to_string(v), setopt::run(problem, cone, x0, config), {}};
      const auto& trace = run.result.trace;
      if (trace.empty()) {
        run.clouds.push_back(eval_F(problem, run.result.final_point));
      } else {
        run.clouds.push_back(eval_F(problem, trace.front().x));
        if (trace.size() > 2) run.clouds.push_back(eval_F(problem, trace[trace.size() / 2].x));
        if (trace.size() > 1) run.clouds.push_back(eval_F(problem, run.result.final_point));
      }
      out.push_back(std::move(run));
    }
  }
  return out;
}

Json cone_experiment_to_json(const std::vector<ConeRun>& runs)
{
  Json out = Json::array();
  for (const auto& r : runs) {
    Json trajectory = Json::array();
    for (const auto& rec : r.result.trace) trajectory.push_back(to_json(rec.x));
    Json clouds = Json::array();
    for (const auto& c : r.clouds) clouds.push_back(to_json(c));
    out.push_back({{"cone", r.cone},
                   {"algorithm", r.algorithm},
                   {"result", result_to_json(r.result)},
                   {"trajectory", trajectory},
                   {"clouds", clouds}});
  }
  return out;
}

}  // namespace setopt
