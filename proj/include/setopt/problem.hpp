#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace setopt {

/// Axis-aligned box [lower, upper].
struct Box
{
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  Eigen::Index dim() const noexcept { return lower.size(); }
  bool contains(const Eigen::VectorXd& x, double slack = 0.0) const;
  Eigen::VectorXd clamp(const Eigen::VectorXd& x) const;
  static Box uniform(Eigen::Index n, double lo, double hi);
  /// The unbounded box R^n.
  static Box unbounded(Eigen::Index n);
};

/// (i, x) -> f^i(x) in R^m, with i zero-based.
using ComponentFunction = std::function<Eigen::VectorXd(Eigen::Index, const Eigen::VectorXd&)>;
/// (i, x) -> m x n Jacobian of f^i at x.
using ComponentJacobian = std::function<Eigen::MatrixXd(Eigen::Index, const Eigen::VectorXd&)>;

/**
 * F = {f^1, ..., f^p} with f^i : R^n -> R^m, plus the domain box used by the
 * experiments. Component indices are zero-based throughout the library.
 */
class SetValuedProblem
{
public:
  SetValuedProblem(std::string name, Eigen::Index n, Eigen::Index m, Eigen::Index p, ComponentFunction f,
                   Box box, ComponentJacobian analytic_jacobian = {});

  const std::string& name() const noexcept { return name_; }
  Eigen::Index n() const noexcept { return n_; }
  Eigen::Index m() const noexcept { return m_; }
  Eigen::Index p() const noexcept { return p_; }
  const Box& box() const noexcept { return box_; }
  bool has_analytic_jacobian() const noexcept { return static_cast<bool>(jacobian_); }

  /// f^i(x). Throws DomainError on non-finite output.
  Eigen::VectorXd eval(Eigen::Index i, const Eigen::VectorXd& x) const;
  Eigen::MatrixXd analytic_jacobian(Eigen::Index i, const Eigen::VectorXd& x) const;

  /// Free-form remarks about how the formulas were read (shown by list-problems).
  std::string notes;
  /// Number of perturbation constants whose tan/log argument had to be clamped.
  int clamp_events = 0;

private:
  std::string name_;
  Eigen::Index n_, m_, p_;
  ComponentFunction f_;
  Box box_;
  ComponentJacobian jacobian_;
};

/// p x m matrix whose row i is f^i(x).
Eigen::MatrixXd eval_F(const SetValuedProblem& problem, const Eigen::VectorXd& x);

struct DerivativeBundle
{
  Eigen::MatrixXd jacobian;               ///< m x n, row r is grad f^{i,r}(x)'
  std::vector<Eigen::MatrixXd> hessians;  ///< m symmetric n x n matrices
};

/**
 * Finite-difference derivatives of f^i at x.
 *
 * Jacobian: central differences with h_j = cbrt(eps) * max(1, |x_j|), or the
 * analytic Jacobian when the problem supplies one. Hessians: central
 * differences of that Jacobian with the wider step h_j^(2/3), then
 * symmetrized. Near the box boundary a coordinate switches to the one-sided
 * second-order stencil pointing into the box, so no evaluation leaves it.
 */
DerivativeBundle derivatives(const SetValuedProblem& problem, Eigen::Index i, const Eigen::VectorXd& x,
                             bool with_hessians = true);

/// Smoke-test plants with analytic Jacobians (p = 1, m = 1).
SetValuedProblem make_linear_plant(const Eigen::VectorXd& c);
SetValuedProblem make_quadratic_plant(const Eigen::MatrixXd& a);
/// g(x) = (x_3 - 1/2)^2 on R^3, the Sphere problem's helper.
SetValuedProblem make_sphere_helper_plant();

}  // namespace setopt
