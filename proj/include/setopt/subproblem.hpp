#pragma once

#include <map>
#include <vector>

#include <Eigen/Dense>

#include "setopt/cone.hpp"
#include "setopt/partition.hpp"
#include "setopt/problem.hpp"

namespace setopt {

/// Derivatives of the components at one point, computed on first request.
class DerivativeCache
{
public:
  DerivativeCache(const SetValuedProblem& problem, Eigen::VectorXd x, bool with_hessians = true)
      : problem_(&problem), x_(std::move(x)), with_hessians_(with_hessians)
  {}

  const DerivativeBundle& at(Eigen::Index i);
  const Eigen::VectorXd& point() const noexcept { return x_; }

private:
  const SetValuedProblem* problem_;
  Eigen::VectorXd x_;
  bool with_hessians_;
  std::map<Eigen::Index, DerivativeBundle> bundles_;
};

/**
 * Quadratic models m_j(s) = G_j s + 1/2 q_j(s), q_j(s)_r = s' H_{j,r} s, one per
 * position j of a partition element. Pure increments: m_j(0) = 0.
 */
struct ModelSet
{
  std::vector<Eigen::MatrixXd> gradients;              ///< G_j, m x n
  std::vector<std::vector<Eigen::MatrixXd>> hessians;  ///< H_{j,r}, n x n (may be empty: linear model)

  Eigen::Index size() const noexcept { return static_cast<Eigen::Index>(gradients.size()); }
  Eigen::Index dim() const noexcept { return gradients.empty() ? 0 : gradients.front().cols(); }
  Eigen::VectorXd model(Eigen::Index j, const Eigen::VectorXd& s) const;
  bool all_finite() const;
};

ModelSet build_models(DerivativeCache& cache, const PartitionElement& a);

/**
 * The scalarized branches of a ModelSet: for every (j, l), b = G_j' w_l and
 * Q = sum_r w_{l,r} H_{j,r}. Then
 *
 *   phi(s) = max_{j,l} max( b's + 1/2 s'Qs,  b's ).
 */
struct ScalarizedModels
{
  Eigen::MatrixXd linear;               ///< one row b' per (j, l), j-major
  std::vector<Eigen::MatrixXd> curvature;  ///< Q per row; empty when the models are linear

  ScalarizedModels(const ModelSet& models, const Cone& cone);

  double value(const Eigen::VectorXd& s) const;
  /// An element of the subdifferential of phi at s.
  Eigen::VectorXd subgradient(const Eigen::VectorXd& s) const;
  /// Values and gradients of every smooth piece (quadratic pieces first, then linear).
  void pieces(const Eigen::VectorXd& s, Eigen::VectorXd& values, Eigen::MatrixXd& gradients) const;
};

/// phi(s) for the given models and cone.
double model_max(const ModelSet& models, const Cone& cone, const Eigen::VectorXd& s);

struct InnerResult
{
  Eigen::VectorXd s;
  double t = 0.0;
  int iterations = 0;
  bool feasible = true;
};

/**
 * Approximately minimizes phi over { |s| <= radius, lo <= s <= hi }
 * (lo <= 0 <= hi is assumed). Deterministic multistart: s = 0, a steepest
 * linear-branch point per model, and eight directions on the sphere, each
 * improved by projected normalized subgradient steps; the best few are then
 * polished by prox-linear steps and a coordinatewise golden-section pass.
 * Always returns t = phi(s) <= 0. Non-finite models give feasible = false,
 * s = 0, t = 0.
 */
InnerResult inner_minimax(const ModelSet& models, const Cone& cone, double radius, const Eigen::VectorXd& lo,
                          const Eigen::VectorXd& hi);

struct SubproblemSolution
{
  PartitionElement a_star;
  Eigen::VectorXd s_star;
  double t_star = 0.0;
  int inner_iterations = 0;
  bool feasible = false;
  /// Models of a_star at x, for predicted reductions.
  ModelSet models;
};

/// Two solutions are tied when their t differ by at most this much; the first a wins.
constexpr double kTieTolerance = 1e-12;

/**
 * theta(x) with the current radius: the best (a, s, t) over P_x. The box rows
 * are x_L - x <= s <= x_U - x. When every inner solve fails the result has
 * feasible = false, s = 0, t = 0.
 */
SubproblemSolution theta_and_step(DerivativeCache& cache, const Cone& cone, const MinimalStructure& structure,
                                  double radius, const Box& box, std::size_t cap = kDefaultPartitionCap);

SubproblemSolution theta_and_step(const SetValuedProblem& problem, const Cone& cone, const Eigen::VectorXd& x,
                                  double radius);

/// Delta(m_j(0) - m_j(s)) = scalarize(-m_j(s)).
double predicted_reduction(const ModelSet& models, const Cone& cone, Eigen::Index j, const Eigen::VectorXd& s);

}  // namespace setopt
