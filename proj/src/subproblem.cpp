#include "setopt/subproblem.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "setopt/minmax_qp.hpp"

namespace setopt {

const DerivativeBundle& DerivativeCache::at(Eigen::Index i)
{
  auto it = bundles_.find(i);
  if (it == bundles_.end()) it = bundles_.emplace(i, derivatives(*problem_, i, x_, with_hessians_)).first;
  return it->second;
}

Eigen::VectorXd ModelSet::model(Eigen::Index j, const Eigen::VectorXd& s) const
{
  Eigen::VectorXd out = gradients[j] * s;
  if (!hessians.empty())
    for (std::size_t r = 0; r < hessians[j].size(); ++r) out(r) += 0.5 * s.dot(hessians[j][r] * s);
  return out;
}

bool ModelSet::all_finite() const
{
  for (const auto& g : gradients)
    if (!g.allFinite()) return false;
  for (const auto& hs : hessians)
    for (const auto& h : hs)
      if (!h.allFinite()) return false;
  return true;
}

ModelSet build_models(DerivativeCache& cache, const PartitionElement& a)
{
  ModelSet models;
  for (const Eigen::Index i : a) {
    const DerivativeBundle& d = cache.at(i);
    models.gradients.push_back(d.jacobian);
    if (!d.hessians.empty()) models.hessians.push_back(d.hessians);
  }
  if (models.hessians.size() != models.gradients.size()) models.hessians.clear();
  return models;
}

ScalarizedModels::ScalarizedModels(const ModelSet& models, const Cone& cone)
{
  const Eigen::Index q = cone.num_normals();
  const Eigen::Index n = models.dim();
  linear.resize(models.size() * q, n);
  const bool quadratic = !models.hessians.empty();
  for (Eigen::Index j = 0; j < models.size(); ++j) {
    for (Eigen::Index l = 0; l < q; ++l) {
      const Eigen::VectorXd w = cone.normals().row(l).transpose();
      linear.row(j * q + l) = (models.gradients[j].transpose() * w).transpose();
      if (quadratic) {
        Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(n, n);
        for (Eigen::Index r = 0; r < w.size(); ++r) Q += w(r) * models.hessians[j][r];
        curvature.push_back(std::move(Q));
      }
    }
  }
}

double ScalarizedModels::value(const Eigen::VectorXd& s) const
{
  const Eigen::VectorXd lin = linear * s;
  double best = -std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < lin.size(); ++k) {
    double v = lin(k);
    if (!curvature.empty()) v += std::max(0.0, 0.5 * s.dot(curvature[k] * s));
    best = std::max(best, v);
  }
  return best;
}

Eigen::VectorXd ScalarizedModels::subgradient(const Eigen::VectorXd& s) const
{
  const Eigen::VectorXd lin = linear * s;
  double best = -std::numeric_limits<double>::infinity();
  Eigen::VectorXd g = Eigen::VectorXd::Zero(s.size());
  for (Eigen::Index k = 0; k < lin.size(); ++k) {
    double v = lin(k);
    Eigen::VectorXd grad = linear.row(k).transpose();
    if (!curvature.empty()) {
      const Eigen::VectorXd qs = curvature[k] * s;
      const double quad = 0.5 * s.dot(qs);
      if (quad > 0) {
        v += quad;
        grad += qs;
      }
    }
    if (v > best) {
      best = v;
      g = grad;
    }
  }
  return g;
}

void ScalarizedModels::pieces(const Eigen::VectorXd& s, Eigen::VectorXd& values, Eigen::MatrixXd& gradients) const
{
  const Eigen::Index rows = linear.rows();
  const Eigen::Index count = curvature.empty() ? rows : 2 * rows;
  values.resize(count);
  gradients.resize(count, s.size());
  const Eigen::VectorXd lin = linear * s;
  Eigen::Index offset = 0;
  if (!curvature.empty()) {
    for (Eigen::Index k = 0; k < rows; ++k) {
      const Eigen::VectorXd qs = curvature[k] * s;
      values(k) = lin(k) + 0.5 * s.dot(qs);
      gradients.row(k) = linear.row(k) + qs.transpose();
    }
    offset = rows;
  }
  values.segment(offset, rows) = lin;
  gradients.middleRows(offset, rows) = linear;
}

double model_max(const ModelSet& models, const Cone& cone, const Eigen::VectorXd& s)
{
  return ScalarizedModels(models, cone).value(s);
}

namespace {

/// Box clip, then radial scaling into the ball. Feasible whenever lo <= 0 <= hi.
struct FeasibleMap
{
  double radius;
  const Eigen::VectorXd& lo;
  const Eigen::VectorXd& hi;

  Eigen::VectorXd operator()(const Eigen::VectorXd& s) const
  {
    Eigen::VectorXd out = s.cwiseMax(lo).cwiseMin(hi);
    const double norm = out.norm();
    if (norm > radius) out *= radius / norm;
    return out;
  }
};

struct Candidate
{
  Eigen::VectorXd s;
  double value;
};

Candidate subgradient_descent(const ScalarizedModels& phi, const FeasibleMap& feasible, Eigen::VectorXd s,
                              int& iterations)
{
  constexpr int kSteps = 200;
  constexpr double kFactor = 0.7;
  Candidate best{s, phi.value(s)};
  double step = feasible.radius / 4.0;
  for (int it = 0; it < kSteps && step > 1e-12 * feasible.radius; ++it, step *= kFactor) {
    ++iterations;
    const Eigen::VectorXd g = phi.subgradient(s);
    const double gn = g.norm();
    if (!(gn > 0)) break;
    s = feasible(s - (step / gn) * g);
    const double v = phi.value(s);
    if (v < best.value) best = {s, v};
  }
  return best;
}

/**
 * Prox-linear steps: linearize every smooth piece at s and minimize
 * max_i(c_i + g_i'd) + |d|^2/(2 tau) over the box, then search along d on
 * the true phi (after the feasible map).
 */
Candidate prox_linear(const ScalarizedModels& phi, const FeasibleMap& feasible, Candidate start, int& iterations)
{
  constexpr int kRounds = 40;
  double tau = feasible.radius;
  Candidate cur = std::move(start);
  Eigen::VectorXd values;
  Eigen::MatrixXd grads;
  for (int round = 0; round < kRounds && tau > 1e-12 * feasible.radius; ++round) {
    ++iterations;
    phi.pieces(cur.s, values, grads);
    const Eigen::VectorXd c = (values.array() - cur.value).matrix() / tau;
    const Eigen::VectorXd lo = (feasible.lo - cur.s) / tau;
    const Eigen::VectorXd hi = (feasible.hi - cur.s) / tau;
    const auto qp = solve_linear_minmax<double>(grads, c, lo, hi, 2000, 1e-12);
    const Eigen::VectorXd d = tau * qp.s;
    if (!(d.norm() > 1e-14 * feasible.radius)) break;
    // Predicted decrease of the linearized max (negative when d descends).
    const double predicted = tau * (c + grads * qp.s).maxCoeff();
    bool accepted = false;
    double alpha = 1.0;
    for (int ls = 0; ls < 8; ++ls, alpha *= 0.5) {
      const Eigen::VectorXd trial = feasible(cur.s + alpha * d);
      const double v = phi.value(trial);
      if (v < cur.value - 1e-4 * alpha * std::max(0.0, -predicted) || (v < cur.value && ls == 7)) {
        cur = {trial, v};
        accepted = true;
        break;
      }
    }
    tau = accepted ? std::min(2.0 * tau, feasible.radius) : tau / 4.0;
  }
  return cur;
}

/// Golden-section search on each coordinate in turn over its feasible segment.
Candidate coordinate_refine(const ScalarizedModels& phi, const FeasibleMap& feasible, Candidate cur, int& iterations)
{
  constexpr int kSweeps = 2;
  constexpr int kSectionSteps = 40;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  const Eigen::Index n = cur.s.size();
  for (int sweep = 0; sweep < kSweeps; ++sweep) {
    for (Eigen::Index k = 0; k < n; ++k) {
      ++iterations;
      const double others = cur.s.squaredNorm() - cur.s(k) * cur.s(k);
      const double reach = std::sqrt(std::max(0.0, feasible.radius * feasible.radius - others));
      double a = std::max(feasible.lo(k), -reach);
      double b = std::min(feasible.hi(k), reach);
      if (!(b > a)) continue;
      Eigen::VectorXd probe = cur.s;
      auto f = [&](double v) {
        probe(k) = v;
        return phi.value(probe);
      };
      double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
      double f1 = f(x1), f2 = f(x2);
      for (int it = 0; it < kSectionSteps; ++it) {
        if (f1 <= f2) {
          b = x2;
          x2 = x1;
          f2 = f1;
          x1 = b - inv_phi * (b - a);
          f1 = f(x1);
        } else {
          a = x1;
          x1 = x2;
          f1 = f2;
          x2 = a + inv_phi * (b - a);
          f2 = f(x2);
        }
      }
      const double xm = f1 <= f2 ? x1 : x2;
      probe = cur.s;
      probe(k) = xm;
      probe = feasible(probe);
      const double v = phi.value(probe);
      if (v < cur.value) cur = {probe, v};
    }
  }
  return cur;
}

}  // namespace

InnerResult inner_minimax(const ModelSet& models, const Cone& cone, double radius, const Eigen::VectorXd& lo,
                          const Eigen::VectorXd& hi)
{
  const Eigen::Index n = models.dim();
  InnerResult result;
  result.s = Eigen::VectorXd::Zero(n);
  if (!models.all_finite()) {
    result.feasible = false;
    return result;
  }
  if (!(radius > 0) || models.size() == 0) return result;

  const ScalarizedModels phi(models, cone);
  const FeasibleMap feasible{radius, lo, hi};
  const Eigen::Index q = cone.num_normals();

  std::vector<Eigen::VectorXd> starts;
  starts.push_back(Eigen::VectorXd::Zero(n));
  auto push_direction = [&](const Eigen::VectorXd& d) {
    const double norm = d.norm();
    if (norm > 0 && std::isfinite(norm)) starts.push_back(feasible((radius / norm) * d));
  };
  // Steepest point of every linear branch, and of all of them jointly.
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(q);
  for (Eigen::Index j = 0; j < models.size(); ++j)
    push_direction(solve_linear_minmax<double>(phi.linear.middleRows(j * q, q), zero, lo, hi).s);
  if (models.size() > 1)
    push_direction(solve_linear_minmax<double>(phi.linear, Eigen::VectorXd::Zero(phi.linear.rows()), lo, hi).s);
  const Eigen::Index second = std::min<Eigen::Index>(1, n - 1);
  for (int k = 0; k < 8; ++k) {
    const double angle = 2.0 * std::numbers::pi * k / 8.0;
    Eigen::VectorXd d = Eigen::VectorXd::Zero(n);
    d(0) += std::cos(angle);
    d(second) += std::sin(angle);
    push_direction(d);
  }

  std::vector<Candidate> candidates;
  for (const auto& s0 : starts) candidates.push_back(subgradient_descent(phi, feasible, s0, result.iterations));
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& x, const Candidate& y) { return x.value < y.value; });

  constexpr std::size_t kPolished = 3;
  Candidate best{Eigen::VectorXd::Zero(n), 0.0};
  for (std::size_t c = 0; c < std::min(kPolished, candidates.size()); ++c) {
    Candidate polished = prox_linear(phi, feasible, candidates[c], result.iterations);
    if (polished.value < best.value) best = std::move(polished);
  }
  best = coordinate_refine(phi, feasible, std::move(best), result.iterations);

  const double t = phi.value(best.s);
  if (!std::isfinite(t)) {
    result.feasible = false;
    return result;
  }
  if (t < 0) {
    result.s = best.s;
    result.t = t;
  }
  return result;
}

SubproblemSolution theta_and_step(DerivativeCache& cache, const Cone& cone, const MinimalStructure& structure,
                                  double radius, const Box& box, std::size_t cap)
{
  const Eigen::VectorXd& x = cache.point();
  const Eigen::VectorXd lo = (box.lower - x).cwiseMin(0.0);
  const Eigen::VectorXd hi = (box.upper - x).cwiseMax(0.0);

  SubproblemSolution best;
  best.s_star = Eigen::VectorXd::Zero(x.size());
  PartitionIterator it(structure, cap);
  PartitionElement a;
  while (it.next(a)) {
    ModelSet models = build_models(cache, a);
    const InnerResult inner = inner_minimax(models, cone, radius, lo, hi);
    best.inner_iterations += inner.iterations;
    if (!inner.feasible) continue;
    if (!best.feasible || inner.t < best.t_star - kTieTolerance) {
      best.a_star = a;
      best.s_star = inner.s;
      best.t_star = inner.t;
      best.models = std::move(models);
      best.feasible = true;
    }
  }
  return best;
}

SubproblemSolution theta_and_step(const SetValuedProblem& problem, const Cone& cone, const Eigen::VectorXd& x,
                                  double radius)
{
  DerivativeCache cache(problem, x);
  const MinimalStructure structure = minimal_structure(problem, cone, x);
  return theta_and_step(cache, cone, structure, radius, problem.box());
}

double predicted_reduction(const ModelSet& models, const Cone& cone, Eigen::Index j, const Eigen::VectorXd& s)
{
  return cone.scalarize(-models.model(j, s));
}

}  // namespace setopt
