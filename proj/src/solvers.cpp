#include "setopt/solvers.hpp"

#include <chrono>
#include <cmath>

#include "setopt/errors.hpp"

namespace setopt {

std::string to_string(Variant v)
{
  switch (v) {
    case Variant::TRM: return "trm";
    case Variant::MaxNTRM: return "max";
    case Variant::AvgNTRM: return "avg";
    case Variant::SD: return "sd";
    case Variant::CG: return "cg";
  }
  return "trm";
}

Variant variant_from_string(const std::string& name)
{
  if (name == "trm") return Variant::TRM;
  if (name == "max") return Variant::MaxNTRM;
  if (name == "avg") return Variant::AvgNTRM;
  if (name == "sd") return Variant::SD;
  if (name == "cg") return Variant::CG;
  throw Error("unknown algorithm: " + name + " (expected trm, max, avg, sd or cg)");
}

void SolverConfig::validate() const
{
  auto require = [](bool ok, const char* what) {
    if (!ok) throw Error(std::string("invalid solver config: ") + what);
  };
  require(0 < eta1 && eta1 < eta2 && eta2 < 1, "need 0 < eta1 < eta2 < 1");
  require(0 < gamma1 && gamma1 < gamma2 && gamma2 < 1, "need 0 < gamma1 < gamma2 < 1");
  require(0 < omega0 && omega0 <= omega_max, "need 0 < omega0 <= omega_max");
  require(epsilon > 0, "need epsilon > 0");
  require(memory_depth >= 0, "need memory_depth >= 0");
  require(0 <= mu_min && mu_min <= mu && mu <= mu_max, "need mu_min <= mu <= mu_max");
  require(mu < 1, "need mu < 1");
  require(it_max >= 0, "need it_max >= 0");
  require(0 < backtrack && backtrack < 1, "need 0 < nu < 1");
  require(0 < sd_armijo && sd_armijo < 1 && 0 < cg_armijo && cg_armijo < 1, "Armijo constants must lie in (0, 1)");
  require(0 <= cg_sigma && cg_sigma < 1, "need 0 <= sigma < 1");
}

void NonMonotoneMemory::push_max(const Eigen::MatrixXd& values, const PartitionElement& a, bool new_iterate)
{
  if (new_iterate || history_.empty()) {
    if (!history_.empty()) n_k_ = std::min(n_k_ + 1, depth_);
    history_.push_back({values, a});
    while (static_cast<int>(history_.size()) > depth_ + 1) history_.pop_front();
  } else {
    history_.back().a = a;
  }
}

Eigen::MatrixXd NonMonotoneMemory::max_reference() const
{
  Eigen::MatrixXd ref = history_.back().values;
  const PartitionElement& current = history_.back().a;
  int used = 0;
  for (auto it = std::next(history_.rbegin()); it != history_.rend() && used < n_k_; ++it, ++used) {
    if (it->a != current) break;
    ref = ref.cwiseMax(it->values);
  }
  return ref;
}

void NonMonotoneMemory::update_avg(const Eigen::MatrixXd& values, const PartitionElement& a)
{
  if (has_avg_ && a == last_a_) {
    auto [c, q] = avg_reference_update(c_, q_, values, mu_);
    c_ = std::move(c);
    q_ = q;
  } else {
    c_ = values;
    q_ = 1.0;
  }
  last_a_ = a;
  has_avg_ = true;
}

std::pair<Eigen::MatrixXd, double> avg_reference_update(const Eigen::MatrixXd& c, double q,
                                                        const Eigen::MatrixXd& values, double mu)
{
  const double next_q = mu * q + 1.0;
  return {(mu * q / next_q) * c + (1.0 / next_q) * values, next_q};
}

Eigen::VectorXd reduction_ratios(const Eigen::MatrixXd& reference, const Eigen::MatrixXd& trial,
                                 const PartitionElement& a, const Eigen::VectorXd& s, const ModelSet& models,
                                 const Cone& cone)
{
  Eigen::VectorXd rho(static_cast<Eigen::Index>(a.size()));
  for (std::size_t j = 0; j < a.size(); ++j) {
    const auto jj = static_cast<Eigen::Index>(j);
    const double pred = predicted_reduction(models, cone, jj, s);
    if (!(pred > 0)) throw InternalError("predicted reduction is not positive");
    rho(jj) = -cone.scalarize((trial.row(jj) - reference.row(a[j])).transpose()) / pred;
  }
  return rho;
}

RadiusUpdate accept_and_update(const Eigen::VectorXd& rho, double radius, const SolverConfig& config)
{
  const double lowest = rho.size() ? rho.minCoeff() : 0.0;
  if (lowest >= config.eta2) return {true, std::min(2.0 * radius, config.omega_max)};
  if (lowest >= config.eta1) return {true, radius};
  return {false, 0.5 * (config.gamma1 + config.gamma2) * radius};
}

namespace {

double seconds_since(std::chrono::steady_clock::time_point start)
{
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void finish(RunResult& result, const Eigen::VectorXd& x, double moved, std::chrono::steady_clock::time_point start)
{
  result.final_point = x;
  result.mean_step_size = result.iterations > 0 ? moved / result.iterations : 0.0;
  result.wall_time = seconds_since(start);
}

}  // namespace

RunResult run(const SetValuedProblem& problem, const Cone& cone, const Eigen::VectorXd& x0,
              const SolverConfig& config)
{
  config.validate();
  if (x0.size() != problem.n()) throw Error("initial point has wrong dimension");
  if (cone.dim() != problem.m()) throw Error("cone dimension does not match the image dimension");
  const auto start = std::chrono::steady_clock::now();
  const Box& box = problem.box();

  RunResult result;
  Eigen::VectorXd x = x0;
  double radius = config.omega0;
  double moved = 0.0;
  NonMonotoneMemory memory(config.variant == Variant::MaxNTRM ? config.memory_depth : 0, config.mu);
  bool new_iterate = true;

  if (!box.contains(x)) throw Error("initial point outside the box");
  try {
    Eigen::MatrixXd values = eval_F(problem, x);
    for (int k = 0;; ++k) {
      result.iterations = k;
      result.final_radius = radius;
      const MinimalStructure structure = minimal_structure(values, cone);
      DerivativeCache cache(problem, x);
      const SubproblemSolution sol = theta_and_step(cache, cone, structure, radius, box, config.partition_cap);

      IterationRecord rec;
      rec.k = k;
      rec.x = x;
      rec.radius = radius;
      if (!sol.feasible) {
        result.diagnostic = "inner_solver_failure";
        break;
      }
      const double t = std::min(sol.t_star, 0.0);
      rec.t = t;
      rec.a = sol.a_star;
      result.final_t = t;
      if (std::abs(t) < config.epsilon) {
        result.converged = true;
        result.trace.push_back(std::move(rec));
        break;
      }
      if (k >= config.it_max) {
        result.trace.push_back(std::move(rec));
        break;
      }

      Eigen::MatrixXd reference;
      switch (config.variant) {
        case Variant::MaxNTRM:
          memory.push_max(values, sol.a_star, new_iterate);
          reference = memory.max_reference();
          break;
        case Variant::AvgNTRM:
          memory.update_avg(values, sol.a_star);
          reference = memory.average();
          break;
        default:
          reference = values;
      }

      const Eigen::VectorXd trial_x = box.clamp(x + sol.s_star);
      const Eigen::MatrixXd trial_values = eval_F(problem, trial_x);
      Eigen::MatrixXd trial(sol.a_star.size(), problem.m());
      for (std::size_t j = 0; j < sol.a_star.size(); ++j) trial.row(j) = trial_values.row(sol.a_star[j]);

      const Eigen::VectorXd rho = reduction_ratios(reference, trial, sol.a_star, sol.s_star, sol.models, cone);
      const RadiusUpdate update = accept_and_update(rho, radius, config);

      rec.rho = rho;
      rec.accepted = update.accepted;
      rec.step_norm = sol.s_star.norm();
      if (config.record_matrices) {
        rec.values = values;
        rec.reference = reference;
        rec.trial = trial;
      }
      result.trace.push_back(std::move(rec));

      new_iterate = update.accepted;
      if (update.accepted) {
        moved += (trial_x - x).norm();
        x = trial_x;
        values = trial_values;
      }
      radius = update.radius;
      if (radius < kRadiusUnderflow) {
        result.iterations = k + 1;
        result.final_radius = radius;
        result.diagnostic = "radius_underflow";
        break;
      }
    }
  } catch (const DomainError&) {
    result.diagnostic = "domain_error";
  } catch (const PartitionCapError&) {
    result.diagnostic = "partition_cap";
  } catch (const InternalError&) {
    result.diagnostic = "internal_error";
  }
  if (!result.diagnostic.empty()) result.converged = false;
  finish(result, x, moved, start);
  return result;
}

RunResult solve(const SetValuedProblem& problem, const Cone& cone, const Eigen::VectorXd& x0,
                const SolverConfig& config)
{
  switch (config.variant) {
    case Variant::SD: return run_sd(problem, cone, x0, config);
    case Variant::CG: return run_cg(problem, cone, x0, config);
    default: return run(problem, cone, x0, config);
  }
}

}  // namespace setopt
