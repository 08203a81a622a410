#include "setopt/problem.hpp"

#include <cmath>
#include <limits>

#include "setopt/errors.hpp"

namespace setopt {

bool Box::contains(const Eigen::VectorXd& x, double slack) const
{
  return x.size() == lower.size() && (x.array() >= lower.array() - slack).all() &&
         (x.array() <= upper.array() + slack).all();
}

Eigen::VectorXd Box::clamp(const Eigen::VectorXd& x) const { return x.cwiseMax(lower).cwiseMin(upper); }

Box Box::uniform(Eigen::Index n, double lo, double hi)
{
  return Box{Eigen::VectorXd::Constant(n, lo), Eigen::VectorXd::Constant(n, hi)};
}

Box Box::unbounded(Eigen::Index n)
{
  const double inf = std::numeric_limits<double>::infinity();
  return Box{Eigen::VectorXd::Constant(n, -inf), Eigen::VectorXd::Constant(n, inf)};
}

SetValuedProblem::SetValuedProblem(std::string name, Eigen::Index n, Eigen::Index m, Eigen::Index p,
                                   ComponentFunction f, Box box, ComponentJacobian analytic_jacobian)
    : name_(std::move(name)), n_(n), m_(m), p_(p), f_(std::move(f)), box_(std::move(box)),
      jacobian_(std::move(analytic_jacobian))
{
  if (n_ < 1 || m_ < 1 || p_ < 1) throw Error("problem " + name_ + ": dimensions must be positive");
  if (box_.dim() != n_ || box_.upper.size() != n_) throw Error("problem " + name_ + ": box dimension mismatch");
  if (!(box_.lower.array() < box_.upper.array()).all()) throw Error("problem " + name_ + ": empty box");
}

Eigen::VectorXd SetValuedProblem::eval(Eigen::Index i, const Eigen::VectorXd& x) const
{
  Eigen::VectorXd y = f_(i, x);
  if (y.size() != m_) throw Error("problem " + name_ + ": component returned wrong dimension");
  if (!y.allFinite())
    throw DomainError("problem " + name_ + ": f^" + std::to_string(i) + " is not finite at the given point");
  return y;
}

Eigen::MatrixXd SetValuedProblem::analytic_jacobian(Eigen::Index i, const Eigen::VectorXd& x) const
{
  return jacobian_(i, x);
}

Eigen::MatrixXd eval_F(const SetValuedProblem& problem, const Eigen::VectorXd& x)
{
  Eigen::MatrixXd values(problem.p(), problem.m());
  for (Eigen::Index i = 0; i < problem.p(); ++i) values.row(i) = problem.eval(i, x).transpose();
  return values;
}

namespace {

enum class Stencil
{
  Central,
  Forward,
  Backward,
};

Stencil choose_stencil(double xk, double lo, double hi, double h)
{
  if (xk - h >= lo && xk + h <= hi) return Stencil::Central;
  if (xk + 2 * h <= hi) return Stencil::Forward;
  return Stencil::Backward;
}

/// Derivative along coordinate k of a vector/matrix-valued map, second-order accurate.
template <typename Fn>
auto directional_difference(const Fn& fn, const Eigen::VectorXd& x, Eigen::Index k, double h, Stencil stencil)
{
  Eigen::VectorXd xp = x, xm = x;
  switch (stencil) {
    case Stencil::Central: {
      xp(k) += h;
      xm(k) -= h;
      const double width = xp(k) - xm(k);
      return ((fn(xp) - fn(xm)) / width).eval();
    }
    case Stencil::Forward: {
      Eigen::VectorXd x2 = x;
      xp(k) += h;
      x2(k) += 2 * h;
      const double step = xp(k) - x(k);
      return ((-3.0 * fn(x) + 4.0 * fn(xp) - fn(x2)) / (2.0 * step)).eval();
    }
    case Stencil::Backward:
    default: {
      Eigen::VectorXd x2 = x;
      xm(k) -= h;
      x2(k) -= 2 * h;
      const double step = x(k) - xm(k);
      return ((3.0 * fn(x) - 4.0 * fn(xm) + fn(x2)) / (2.0 * step)).eval();
    }
  }
}

const double kJacobianStep = std::cbrt(std::numeric_limits<double>::epsilon());
const double kHessianStep = std::pow(kJacobianStep, 2.0 / 3.0);

Eigen::MatrixXd fd_jacobian(const SetValuedProblem& problem, Eigen::Index i, const Eigen::VectorXd& x)
{
  if (problem.has_analytic_jacobian()) return problem.analytic_jacobian(i, x);
  const Box& box = problem.box();
  auto f = [&](const Eigen::VectorXd& z) { return problem.eval(i, z); };
  Eigen::MatrixXd jac(problem.m(), problem.n());
  for (Eigen::Index k = 0; k < problem.n(); ++k) {
    const double h = kJacobianStep * std::max(1.0, std::abs(x(k)));
    jac.col(k) = directional_difference(f, x, k, h, choose_stencil(x(k), box.lower(k), box.upper(k), h));
  }
  return jac;
}

}  // namespace

DerivativeBundle derivatives(const SetValuedProblem& problem, Eigen::Index i, const Eigen::VectorXd& x,
                             bool with_hessians)
{
  DerivativeBundle bundle;
  bundle.jacobian = fd_jacobian(problem, i, x);
  if (!with_hessians) return bundle;

  const Eigen::Index n = problem.n(), m = problem.m();
  const Box& box = problem.box();
  bundle.hessians.assign(m, Eigen::MatrixXd::Zero(n, n));
  auto jac = [&](const Eigen::VectorXd& z) { return fd_jacobian(problem, i, z); };
  for (Eigen::Index k = 0; k < n; ++k) {
    const double h = kHessianStep * std::max(1.0, std::abs(x(k)));
    const Eigen::MatrixXd dj = directional_difference(jac, x, k, h, choose_stencil(x(k), box.lower(k), box.upper(k), h));
    for (Eigen::Index r = 0; r < m; ++r) bundle.hessians[r].row(k) = dj.row(r);
  }
  for (auto& hess : bundle.hessians) hess = (0.5 * (hess + hess.transpose())).eval();
  return bundle;
}

SetValuedProblem make_linear_plant(const Eigen::VectorXd& c)
{
  const Eigen::Index n = c.size();
  return SetValuedProblem(
      "linear_plant", n, 1, 1, [c](Eigen::Index, const Eigen::VectorXd& x) { return Eigen::VectorXd::Constant(1, c.dot(x)); },
      Box::uniform(n, -10.0, 10.0), [c](Eigen::Index, const Eigen::VectorXd&) { return Eigen::MatrixXd(c.transpose()); });
}

SetValuedProblem make_quadratic_plant(const Eigen::MatrixXd& a)
{
  const Eigen::Index n = a.rows();
  return SetValuedProblem(
      "quadratic_plant", n, 1, 1,
      [a](Eigen::Index, const Eigen::VectorXd& x) { return Eigen::VectorXd::Constant(1, 0.5 * x.dot(a * x)); },
      Box::uniform(n, -10.0, 10.0),
      [a](Eigen::Index, const Eigen::VectorXd& x) { return Eigen::MatrixXd((0.5 * (a + a.transpose()) * x).transpose()); });
}

SetValuedProblem make_sphere_helper_plant()
{
  return SetValuedProblem(
      "sphere_helper_plant", 3, 1, 1,
      [](Eigen::Index, const Eigen::VectorXd& x) { return Eigen::VectorXd::Constant(1, (x(2) - 0.5) * (x(2) - 0.5)); },
      Box::uniform(3, -10.0, 10.0), [](Eigen::Index, const Eigen::VectorXd& x) {
        Eigen::MatrixXd j = Eigen::MatrixXd::Zero(1, 3);
        j(0, 2) = 2.0 * (x(2) - 0.5);
        return j;
      });
}

}  // namespace setopt
