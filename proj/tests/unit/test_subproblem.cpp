#include <cmath>
#include <limits>
#include <random>

#include <doctest.h>

#include "setopt/subproblem.hpp"

using namespace setopt;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

Eigen::VectorXd unbounded(Eigen::Index n, double sign) { return Eigen::VectorXd::Constant(n, sign * kInf); }

ModelSet single(const Eigen::MatrixXd& g, const std::vector<Eigen::MatrixXd>& h)
{
  ModelSet m;
  m.gradients.push_back(g);
  m.hessians.push_back(h);
  return m;
}

/// Minimum of phi over a uniform grid of the square [lo, hi]^2 intersected with the ball.
double grid_minimum(const ModelSet& models, const Cone& cone, double radius, Eigen::Vector2d lo, Eigen::Vector2d hi,
                    int points)
{
  double best = kInf;
  for (int a = 0; a < points; ++a)
    for (int b = 0; b < points; ++b) {
      const Eigen::Vector2d s(lo(0) + (hi(0) - lo(0)) * a / (points - 1), lo(1) + (hi(1) - lo(1)) * b / (points - 1));
      if (s.norm() > radius) continue;
      best = std::min(best, model_max(models, cone, s));
    }
  return best;
}

}  // namespace

TEST_CASE("zero models give s = 0, t = 0")
{
  const ModelSet m = single(Eigen::MatrixXd::Zero(2, 3), {Eigen::MatrixXd::Zero(3, 3), Eigen::MatrixXd::Zero(3, 3)});
  const InnerResult r = inner_minimax(m, Cone::orthant(2), 1.0, unbounded(3, -1), unbounded(3, 1));
  CHECK(r.t == 0.0);
  CHECK(r.s.isZero());
  CHECK(r.feasible);
}

TEST_CASE("zero radius gives s = 0, t = 0")
{
  const ModelSet m = single(Eigen::MatrixXd::Ones(1, 2), {Eigen::MatrixXd::Identity(2, 2)});
  const InnerResult r = inner_minimax(m, Cone::orthant(1), 0.0, unbounded(2, -1), unbounded(2, 1));
  CHECK(r.t == 0.0);
  CHECK(r.s.isZero());
}

TEST_CASE("linear model over the unit ball")
{
  Eigen::MatrixXd g(1, 2);
  g << 1, 0;
  const ModelSet m = single(g, {Eigen::MatrixXd::Zero(2, 2)});
  const Cone k = Cone::orthant(1);
  const InnerResult r = inner_minimax(m, k, 1.0, unbounded(2, -1), unbounded(2, 1));
  CHECK(r.t == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(r.s(0) == doctest::Approx(-1.0).epsilon(1e-6));
  CHECK(std::abs(r.s(1)) < 1e-4);
  const double grid = grid_minimum(m, k, 1.0, {-1, -1}, {1, 1}, 201);
  CHECK(grid == doctest::Approx(-1.0));
  CHECK(r.t <= grid + 1e-12);
}

TEST_CASE("quadratic branch: oracle value -1")
{
  Eigen::MatrixXd g(1, 2);
  g << 2, 0;
  const ModelSet m = single(g, {2.0 * Eigen::MatrixXd::Identity(2, 2)});
  const Cone k = Cone::orthant(1);
  const InnerResult r = inner_minimax(m, k, 10.0, unbounded(2, -1), unbounded(2, 1));
  const double grid = grid_minimum(m, k, 10.0, {-10, -10}, {10, 10}, 401);
  CHECK(grid == doctest::Approx(-1.0));
  CHECK(r.t == doctest::Approx(-1.0).epsilon(1e-8));
  CHECK(predicted_reduction(m, k, 0, r.s) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(predicted_reduction(m, k, 0, Eigen::Vector2d::Zero()) == 0.0);
}

TEST_CASE("box rows are respected")
{
  Eigen::MatrixXd g(1, 2);
  g << 1, 1;
  const ModelSet m = single(g, {Eigen::MatrixXd::Zero(2, 2)});
  const Eigen::Vector2d lo(-0.1, -5), hi(1, 1);
  const InnerResult r = inner_minimax(m, Cone::orthant(1), 2.0, lo, hi);
  CHECK(r.s(0) >= -0.1 - 1e-12);
  CHECK(r.s.norm() <= 2.0 + 1e-9);
  // Optimum: s1 = -0.1, s2 = -sqrt(4 - 0.01).
  CHECK(r.t == doctest::Approx(-0.1 - std::sqrt(3.99)).epsilon(1e-6));
}

TEST_CASE("non-finite models fail softly")
{
  Eigen::MatrixXd g(1, 2);
  g << std::nan(""), 0;
  const InnerResult r = inner_minimax(single(g, {Eigen::MatrixXd::Zero(2, 2)}), Cone::orthant(1), 1.0,
                                      unbounded(2, -1), unbounded(2, 1));
  CHECK_FALSE(r.feasible);
  CHECK(r.t == 0.0);
  CHECK(r.s.isZero());
}

TEST_CASE("random two-dimensional instances against the grid")
{
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int trial = 0; trial < 10; ++trial) {
    const int m = 1 + trial % 2, omega = 1 + trial % 3;
    const Cone k = Cone::orthant(m);
    ModelSet models;
    for (int j = 0; j < omega; ++j) {
      Eigen::MatrixXd g(m, 2);
      for (Eigen::Index i = 0; i < g.size(); ++i) g.data()[i] = u(rng);
      std::vector<Eigen::MatrixXd> hs;
      for (int r = 0; r < m; ++r) {
        Eigen::Matrix2d h;
        h << u(rng), u(rng), 0, u(rng);
        h(1, 0) = h(0, 1);
        hs.push_back(h);
      }
      models.gradients.push_back(g);
      models.hessians.push_back(hs);
    }
    const double radius = 0.5 + trial * 0.2;
    const Eigen::Vector2d lo(-radius, -0.4 * radius), hi(0.7 * radius, radius);
    const InnerResult r = inner_minimax(models, k, radius, lo, hi);
    CHECK(r.t <= 0.0);
    CHECK(r.s.norm() <= radius + 1e-9);
    CHECK((r.s.array() >= lo.array() - 1e-9).all());
    CHECK((r.s.array() <= hi.array() + 1e-9).all());
    CHECK(std::abs(model_max(models, k, r.s) - r.t) <= 1e-9);
    CHECK(r.t <= grid_minimum(models, k, radius, lo, hi, 201) + 1e-3);
    if (r.t < 0)
      for (Eigen::Index j = 0; j < models.size(); ++j) {
        CHECK(k.scalarize(models.gradients[j] * r.s) <= r.t + 1e-12);
        CHECK(predicted_reduction(models, k, j, r.s) > 0);
      }
  }
}

TEST_CASE("theta at a critical point is zero")
{
  Eigen::Matrix2d a;
  a << 2, 1, 1, 4;
  const SetValuedProblem plant = make_quadratic_plant(a);
  const SubproblemSolution sol = theta_and_step(plant, Cone::orthant(1), Eigen::Vector2d::Zero(), 1.0);
  CHECK(sol.feasible);
  CHECK(sol.t_star == 0.0);
  CHECK(sol.s_star.isZero());
  CHECK(sol.a_star == PartitionElement{0});
}

TEST_CASE("theta picks the best partition element, ties to the first")
{
  // Two components with the same value at x but different slopes.
  const SetValuedProblem p(
      "pair", 1, 1, 3,
      [](Eigen::Index i, const Eigen::VectorXd& x) {
        const double slope[] = {1.0, 3.0, 3.0};
        return Eigen::VectorXd::Constant(1, slope[i] * x(0));
      },
      Box::uniform(1, -1.0, 1.0));
  const SubproblemSolution sol = theta_and_step(p, Cone::orthant(1), Eigen::VectorXd::Zero(1), 0.5);
  CHECK(sol.a_star == PartitionElement{1});
  CHECK(sol.t_star == doctest::Approx(-1.5).epsilon(1e-9));
}
