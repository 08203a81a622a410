#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "setopt/cone.hpp"
#include "setopt/problem.hpp"
#include "setopt/solvers.hpp"

namespace setopt {

/// SplitMix64 finalizer; the sampler evaluates it on a counter, so draws are random-access.
std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t fnv1a(const std::string& text);

/// Uniform points in the box; coordinate k of point i depends only on (seed, i, k).
std::vector<Eigen::VectorXd> sample_points(const Box& box, std::size_t n_points, std::uint64_t seed);

enum class Metric
{
  Nonconv,
  Iterations,
  CpuTime,
  InvStepSize,
};

std::string to_string(Metric metric);
Metric metric_from_string(const std::string& name);

struct ExperimentConfig
{
  std::vector<std::string> problem_ids;
  std::vector<std::string> algorithms{"sd", "cg", "trm", "max", "avg"};
  std::size_t points_per_problem = 100;
  int it_max = 100;
  std::uint64_t rng_seed = 20240601;
  std::vector<Metric> metrics{Metric::Nonconv, Metric::Iterations, Metric::CpuTime, Metric::InvStepSize};
  /// Parameters shared by every algorithm; variant and it_max are overridden per run.
  SolverConfig solver;
  /// Cone preset or file; empty means the nonnegative orthant of each problem.
  std::string cone;
};

ExperimentConfig experiment_from_json(const nlohmann::json& j);
nlohmann::json experiment_to_json(const ExperimentConfig& config);

/// One line of the record store.
struct RunSummary
{
  std::string problem;
  std::string algorithm;
  std::size_t point_index = 0;
  bool converged = false;
  int iterations = 0;
  double wall_time = 0.0;
  double mean_step_size = 0.0;
  double final_t = 0.0;
  std::string diagnostic;
  Eigen::VectorXd x0;
  Eigen::VectorXd final_point;
};

nlohmann::json summary_to_json(const RunSummary& s);
RunSummary summary_from_json(const nlohmann::json& j);

/// Every line of a JSON-lines store (missing file: empty).
std::vector<RunSummary> load_store(const std::string& path);

/**
 * Runs every (problem, algorithm, point) not yet present in the store and
 * appends one line per run. Per-run errors become nonconvergent records.
 * Worker count: SETOPT_THREADS, else the hardware concurrency. Returns the
 * number of runs performed.
 */
std::size_t run_matrix(const ExperimentConfig& config, const std::string& store_path);

/// Per (problem, algorithm) statistics.
struct MetricsCell
{
  int runs = 0;
  int nonconv = 0;
  /// Means over the common-convergent points; NaN when that set is empty.
  double iterations = std::numeric_limits<double>::quiet_NaN();
  double cpu_time = std::numeric_limits<double>::quiet_NaN();
  double step_size = std::numeric_limits<double>::quiet_NaN();
};

struct MetricsTable
{
  std::vector<std::string> problems;
  std::vector<std::string> algorithms;
  std::vector<std::vector<MetricsCell>> cells;  ///< [problem][algorithm]
  std::vector<std::size_t> common_points;       ///< size of the common-convergent subset per problem

  /// t_{p,s} for the profile; NaN where undefined.
  Eigen::MatrixXd metric(Metric metric) const;
};

MetricsTable build_table(const std::vector<RunSummary>& records, std::vector<std::string> algorithms = {});

struct ProfileCurve
{
  std::string algorithm;
  /// Staircase breakpoints (tau, rho(tau)), tau ascending; rho is constant until the next tau.
  std::vector<std::pair<double, double>> steps;
  double at(double tau) const;
};

struct ProfileSet
{
  std::vector<std::string> algorithms;
  std::vector<std::string> problems;  ///< problems with at least one defined value
  Eigen::MatrixXd ratios;             ///< r_{p,s}, +inf where undefined
  std::vector<ProfileCurve> curves;
};

/**
 * Dolan-More profile of a problems x algorithms matrix (NaN = undefined).
 * A problem whose best value is 0 is shifted by +1 before taking ratios.
 * Throws Error when no problem has a defined value.
 */
ProfileSet profile(const Eigen::MatrixXd& values, const std::vector<std::string>& problems,
                   const std::vector<std::string>& algorithms);

void write_table_csv(const MetricsTable& table, const std::string& path);
std::string table_csv(const MetricsTable& table);
nlohmann::json profile_to_json(const ProfileSet& profile);

/// Staircase plot with a log2 tau axis. Output is a pure function of the input.
std::string profile_svg(const ProfileSet& profile, const std::string& title);
void write_file(const std::string& path, const std::string& contents);

struct ConeRun
{
  std::string cone;
  std::string algorithm;
  RunResult result;
  std::vector<Eigen::MatrixXd> clouds;  ///< F at the initial, middle and final iterate
};

/// Runs Max-NTRM and Avg-NTRM from x0 under each named cone.
std::vector<ConeRun> cone_experiment(const std::string& problem_id, const Eigen::VectorXd& x0,
                                     const std::vector<std::string>& cones, SolverConfig config = {});
nlohmann::json cone_experiment_to_json(const std::vector<ConeRun>& runs);

}  // namespace setopt
