#include <chrono>
#include <cmath>
#include <limits>

#include "setopt/errors.hpp"
#include "setopt/minmax_qp.hpp"
#include "setopt/solvers.hpp"

namespace setopt {

DescentDirection steepest_direction(DerivativeCache& cache, const Cone& cone, const MinimalStructure& structure,
                                    const Box& box, std::size_t cap)
{
  const Eigen::VectorXd& x = cache.point();
  const Eigen::VectorXd lo = (box.lower - x).cwiseMin(0.0);
  const Eigen::VectorXd hi = (box.upper - x).cwiseMax(0.0);

  DescentDirection best;
  double best_objective = std::numeric_limits<double>::infinity();
  PartitionIterator it(structure, cap);
  PartitionElement a;
  while (it.next(a)) {
    ModelSet models = build_models(cache, a);
    models.hessians.clear();
    if (!models.all_finite()) continue;
    const ScalarizedModels phi(models, cone);
    const auto qp = solve_linear_minmax<double>(phi.linear, Eigen::VectorXd::Zero(phi.linear.rows()), lo, hi);
    if (qp.value < best_objective - kTieTolerance) {
      best_objective = qp.value;
      best.a = a;
      best.v = qp.s;
      best.value = (phi.linear * qp.s).maxCoeff();
      best.models = std::move(models);
    }
  }
  if (!std::isfinite(best_objective)) throw DomainError("no finite gradient model at the current point");
  return best;
}

namespace {

/// max_{j,l} w_l' G_j d
double linear_slope(const ModelSet& models, const Cone& cone, const Eigen::VectorXd& d)
{
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& g : models.gradients) best = std::max(best, cone.scalarize(g * d));
  return best;
}

/// Largest alpha in (0, 1] with x + alpha d inside the box.
double max_feasible_step(const Box& box, const Eigen::VectorXd& x, const Eigen::VectorXd& d)
{
  double alpha = 1.0;
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    if (d(k) > 0) alpha = std::min(alpha, (box.upper(k) - x(k)) / d(k));
    else if (d(k) < 0) alpha = std::min(alpha, (box.lower(k) - x(k)) / d(k));
  }
  return std::max(alpha, 0.0);
}

/**
 * Backtracking from alpha0 by factor nu until every f^{a_j} satisfies
 * Delta(f^{a_j}(x + alpha d) - f^{a_j}(x)) <= beta alpha slope. Returns 0 on failure.
 */
double armijo(const SetValuedProblem& problem, const Cone& cone, const Eigen::MatrixXd& values,
              const PartitionElement& a, const Eigen::VectorXd& x, const Eigen::VectorXd& d, double slope,
              double alpha0, double beta, double nu)
{
  constexpr int kMaxBacktracks = 60;
  double alpha = alpha0;
  for (int it = 0; it < kMaxBacktracks; ++it, alpha *= nu) {
    const Eigen::VectorXd trial = problem.box().clamp(x + alpha * d);
    bool ok = true;
    for (const Eigen::Index i : a) {
      const Eigen::VectorXd diff = problem.eval(i, trial) - values.row(i).transpose();
      if (cone.scalarize(diff) > beta * alpha * slope) {
        ok = false;
        break;
      }
    }
    if (ok) return alpha;
  }
  return 0.0;
}

RunResult descent_run(const SetValuedProblem& problem, const Cone& cone, const Eigen::VectorXd& x0,
                      const SolverConfig& config, bool conjugate)
{
  config.validate();
  if (x0.size() != problem.n()) throw Error("initial point has wrong dimension");
  if (cone.dim() != problem.m()) throw Error("cone dimension does not match the image dimension");
  const Box& box = problem.box();
  if (!box.contains(x0)) throw Error("initial point outside the box");
  const auto start = std::chrono::steady_clock::now();

  RunResult result;
  Eigen::VectorXd x = x0;
  double moved = 0.0;
  Eigen::VectorXd d_prev;
  double slope_prev = 0.0;
  const double beta = conjugate ? config.cg_armijo : config.sd_armijo;

  try {
    Eigen::MatrixXd values = eval_F(problem, x);
    for (int k = 0;; ++k) {
      result.iterations = k;
      const MinimalStructure structure = minimal_structure(values, cone);
      DerivativeCache cache(problem, x, false);
      const DescentDirection dir = steepest_direction(cache, cone, structure, box, config.partition_cap);

      IterationRecord rec;
      rec.k = k;
      rec.x = x;
      rec.a = dir.a;
      rec.t = dir.v.norm();
      result.final_t = rec.t;
      if (rec.t < config.epsilon) {
        result.converged = true;
        result.trace.push_back(std::move(rec));
        break;
      }
      if (k >= config.it_max) {
        result.trace.push_back(std::move(rec));
        break;
      }

      Eigen::VectorXd d = dir.v;
      double slope = dir.value;
      double alpha0 = 1.0;
      if (conjugate && d_prev.size() == x.size() && slope_prev < 0) {
        const double beta_cd = dir.value / slope_prev;
        const Eigen::VectorXd candidate = dir.v + 0.99 * (1.0 - config.cg_sigma) * beta_cd * d_prev;
        const double candidate_slope = linear_slope(dir.models, cone, candidate);
        const double candidate_alpha = max_feasible_step(box, x, candidate);
        // The conjugate-descent rule guarantees this bound only under a Wolfe search; enforce it.
        if (candidate_slope <= (1.0 - config.cg_sigma) * dir.value && candidate_alpha > 1e-8) {
          d = candidate;
          slope = candidate_slope;
          alpha0 = candidate_alpha;
        }
      }

      const double alpha = armijo(problem, cone, values, dir.a, x, d, slope, alpha0, beta, config.backtrack);
      rec.step_norm = alpha * d.norm();
      rec.accepted = alpha > 0;
      result.trace.push_back(std::move(rec));
      if (!(alpha > 0)) {
        result.iterations = k + 1;
        result.diagnostic = "line_search_failure";
        break;
      }
      const Eigen::VectorXd next = box.clamp(x + alpha * d);
      moved += (next - x).norm();
      x = next;
      values = eval_F(problem, x);
      d_prev = d;
      slope_prev = slope;
    }
  } catch (const DomainError&) {
    result.diagnostic = "domain_error";
  } catch (const PartitionCapError&) {
    result.diagnostic = "partition_cap";
  }
  if (!result.diagnostic.empty()) result.converged = false;
  result.final_point = x;
  result.mean_step_size = result.iterations > 0 ? moved / result.iterations : 0.0;
  result.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace

RunResult run_sd(const SetValuedProblem& problem, const Cone& cone, const Eigen::VectorXd& x0,
                 const SolverConfig& config)
{
  return descent_run(problem, cone, x0, config, false);
}

RunResult run_cg(const SetValuedProblem& problem, const Cone& cone, const Eigen::VectorXd& x0,
                 const SolverConfig& config)
{
  return descent_run(problem, cone, x0, config, true);
}

}  // namespace setopt
