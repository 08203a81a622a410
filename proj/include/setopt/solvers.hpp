#pragma once

#include <deque>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "setopt/cone.hpp"
#include "setopt/partition.hpp"
#include "setopt/problem.hpp"
#include "setopt/subproblem.hpp"

namespace setopt {

enum class Variant
{
  TRM,
  MaxNTRM,
  AvgNTRM,
  SD,
  CG,
};

/// "trm", "max", "avg", "sd", "cg"
std::string to_string(Variant v);
Variant variant_from_string(const std::string& name);

struct SolverConfig
{
  Variant variant = Variant::TRM;
  double omega0 = 1.0;
  double omega_max = 20.0;
  double epsilon = 1e-3;
  double eta1 = 0.001;
  double eta2 = 0.75;
  double gamma1 = 0.4;
  double gamma2 = 0.9;
  int memory_depth = 10;  ///< N-hat; 4 is a cheaper preset
  double mu = 0.5;        ///< constant mu_k
  double mu_min = 0.0;
  double mu_max = 1.0;    ///< mu_k must stay strictly below 1
  int it_max = 100;
  double cg_armijo = 1e-4;  ///< rho
  double sd_armijo = 1e-4;  ///< beta_SD
  double backtrack = 0.5;   ///< nu
  double cg_sigma = 0.1;
  std::size_t partition_cap = kDefaultPartitionCap;
  /// Keep F(x_k) and the reference matrix in every trace record.
  bool record_matrices = false;

  /// Throws Error when the parameter relations do not hold.
  void validate() const;
};

/// Radius below which a rejection streak counts as a precision failure.
constexpr double kRadiusUnderflow = 1e-14;

struct IterationRecord
{
  int k = 0;
  Eigen::VectorXd x;
  double radius = 0.0;
  double t = 0.0;
  Eigen::VectorXd rho;
  bool accepted = false;
  double step_norm = 0.0;  ///< |s_k| of the trial step (0 at the stopping iteration)
  PartitionElement a;
  Eigen::MatrixXd values;     ///< F(x_k), p x m (only with record_matrices)
  Eigen::MatrixXd reference;  ///< reference matrix used by the ratios
  Eigen::MatrixXd trial;      ///< rows f^{a_j}(x_k + s_k), omega x m
};

struct RunResult
{
  bool converged = false;
  int iterations = 0;
  double wall_time = 0.0;
  Eigen::VectorXd final_point;
  double final_t = 0.0;
  double final_radius = 0.0;
  /// Mean |x_{k+1} - x_k| over the iterations performed (rejections count as 0).
  double mean_step_size = 0.0;
  /// Empty on a clean run; otherwise a short code such as "radius_underflow".
  std::string diagnostic;
  std::vector<IterationRecord> trace;
};

/**
 * Non-monotone reference state.
 *
 * Max: a window of accepted iterates (F, a), newest last, holding at most
 * N-hat + 1 entries. The newest entry's a tracks the current a^k; the
 * reference is the componentwise max over the longest trailing run of
 * entries whose a equals a^k.
 *
 * Avg: C_k and q_k, advanced at every iteration. The recursion continues
 * while a^k = a^{k-1}; otherwise C restarts at F(x_k) with q = 1.
 */
class NonMonotoneMemory
{
public:
  NonMonotoneMemory(int depth, double mu) : depth_(depth), mu_(mu) {}

  /// Max: register the iterate of iteration k (accepted = x changed since the last call).
  void push_max(const Eigen::MatrixXd& values, const PartitionElement& a, bool new_iterate);
  Eigen::MatrixXd max_reference() const;

  /// Avg: one step of the C recursion with F(x_k) and a^k.
  void update_avg(const Eigen::MatrixXd& values, const PartitionElement& a);
  const Eigen::MatrixXd& average() const noexcept { return c_; }
  double q() const noexcept { return q_; }

  int window() const noexcept { return n_k_; }

private:
  struct Entry
  {
    Eigen::MatrixXd values;
    PartitionElement a;
  };
  int depth_;
  double mu_;
  std::deque<Entry> history_;
  int n_k_ = 0;

  Eigen::MatrixXd c_;
  double q_ = 1.0;
  PartitionElement last_a_;
  bool has_avg_ = false;
};

/**
 * rho_j = -scalarize(f^{a_j}(x+s) - ref_j) / predicted_reduction(j, s), where
 * ref_j is row a_j of `reference` and `trial` row j is f^{a_j}(x+s).
 * Throws InternalError if a predicted reduction is not positive.
 */
Eigen::VectorXd reduction_ratios(const Eigen::MatrixXd& reference, const Eigen::MatrixXd& trial,
                                 const PartitionElement& a, const Eigen::VectorXd& s, const ModelSet& models,
                                 const Cone& cone);

struct RadiusUpdate
{
  bool accepted;
  double radius;
};

RadiusUpdate accept_and_update(const Eigen::VectorXd& rho, double radius, const SolverConfig& config);

/// One step of C' = (mu q / q') C + F / q', q' = mu q + 1; returns (C', q').
std::pair<Eigen::MatrixXd, double> avg_reference_update(const Eigen::MatrixXd& c, double q,
                                                        const Eigen::MatrixXd& values, double mu);

/// Trust-region drivers (TRM, Max-NTRM, Avg-NTRM per config.variant).
RunResult run(const SetValuedProblem& problem, const Cone& cone, const Eigen::VectorXd& x0,
              const SolverConfig& config);

/// Steepest-descent and conjugate-gradient baselines with Armijo backtracking.
RunResult run_sd(const SetValuedProblem& problem, const Cone& cone, const Eigen::VectorXd& x0,
                 const SolverConfig& config);
RunResult run_cg(const SetValuedProblem& problem, const Cone& cone, const Eigen::VectorXd& x0,
                 const SolverConfig& config);

/// Dispatches on config.variant.
RunResult solve(const SetValuedProblem& problem, const Cone& cone, const Eigen::VectorXd& x0,
                const SolverConfig& config);

/// Steepest descent direction v(x) = argmin over a in P_x of the proximal linear model.
struct DescentDirection
{
  PartitionElement a;
  Eigen::VectorXd v;
  double value = 0.0;  ///< max_{j,l} w_l' G_j v
  ModelSet models;     ///< gradients only
};

DescentDirection steepest_direction(DerivativeCache& cache, const Cone& cone, const MinimalStructure& structure,
                                    const Box& box, std::size_t cap = kDefaultPartitionCap);

}  // namespace setopt
