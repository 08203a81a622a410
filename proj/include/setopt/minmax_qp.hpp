#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>

namespace setopt {

/// Euclidean projection of v onto the probability simplex.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> project_to_simplex(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& v)
{
  const Eigen::Index k = v.size();
  std::vector<Scalar> u(v.data(), v.data() + k);
  std::sort(u.begin(), u.end(), std::greater<Scalar>());
  Scalar cumsum = 0;
  Scalar tau = 0;
  for (Eigen::Index i = 0; i < k; ++i) {
    cumsum += u[i];
    const Scalar candidate = (cumsum - Scalar(1)) / Scalar(i + 1);
    if (u[i] - candidate > 0) tau = candidate;
  }
  return (v.array() - tau).cwiseMax(Scalar(0)).matrix();
}

template <typename Scalar>
struct LinearMinmaxResult
{
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> s;       ///< primal minimizer
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> weights;  ///< simplex multipliers
  Scalar value{0};                                   ///< max_i(c_i + g_i's) + |s|^2/2 at s
  Scalar gap{0};                                     ///< primal - dual at exit
  int iterations{0};
};

/**
 * Solves  min_{lo <= s <= hi}  max_i (c_i + g_i' s) + 0.5 |s|^2
 *
 * through its concave dual over the simplex. For fixed multipliers the inner
 * minimization separates per coordinate (s = clip(-G' lambda, lo, hi)), so the
 * dual is smooth and is maximized with accelerated projected gradient steps.
 * Bounds may be infinite; lo <= 0 <= hi is not required.
 *
 * With c = 0 and no box this returns the negated minimum-norm element of
 * conv{g_i}.
 */
template <typename Scalar>
LinearMinmaxResult<Scalar> solve_linear_minmax(const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& G,
                                               const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& c,
                                               const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& lo,
                                               const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& hi,
                                               int max_iterations = 4000, Scalar tolerance = Scalar(1e-13))
{
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  const Eigen::Index k = G.rows();
  const Eigen::Index n = G.cols();

  auto primal_at = [&](const Vec& lambda) -> Vec { return (-G.transpose() * lambda).cwiseMax(lo).cwiseMin(hi); };
  auto primal_value = [&](const Vec& s) -> Scalar { return (c + G * s).maxCoeff() + Scalar(0.5) * s.squaredNorm(); };
  auto dual_value = [&](const Vec& lambda, const Vec& s) -> Scalar {
    return c.dot(lambda) + (G.transpose() * lambda).dot(s) + Scalar(0.5) * s.squaredNorm();
  };

  LinearMinmaxResult<Scalar> result;
  if (k == 0) {
    result.s = Vec::Zero(n).cwiseMax(lo).cwiseMin(hi);
    result.value = Scalar(0.5) * result.s.squaredNorm();
    return result;
  }

  const Scalar lipschitz = G.squaredNorm();
  Vec lambda = Vec::Constant(k, Scalar(1) / Scalar(k));
  Vec best_s = primal_at(lambda);
  Scalar best_primal = primal_value(best_s);
  Scalar gap = best_primal - dual_value(lambda, best_s);

  if (lipschitz > 0) {
    Vec y = lambda;
    Scalar momentum = 1;
    int it = 0;
    for (; it < max_iterations; ++it) {
      const Vec sy = primal_at(y);
      const Vec grad = c + G * sy;
      const Vec next = project_to_simplex<Scalar>(y + grad / lipschitz);
      const Scalar next_momentum = (Scalar(1) + std::sqrt(Scalar(1) + Scalar(4) * momentum * momentum)) / Scalar(2);
      y = next + ((momentum - Scalar(1)) / next_momentum) * (next - lambda);
      lambda = next;
      momentum = next_momentum;

      const Vec s = primal_at(lambda);
      const Scalar pv = primal_value(s);
      if (pv < best_primal) {
        best_primal = pv;
        best_s = s;
      }
      gap = best_primal - dual_value(lambda, s);
      if (gap <= tolerance * (Scalar(1) + std::abs(best_primal))) break;
    }
    result.iterations = it;
  }
  result.s = best_s;
  result.weights = lambda;
  result.value = best_primal;
  result.gap = gap;
  return result;
}

}  // namespace setopt
