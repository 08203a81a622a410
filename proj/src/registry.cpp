#include "setopt/registry.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <numbers>

#include "setopt/errors.hpp"

namespace setopt {

namespace {

constexpr double kPi = std::numbers::pi;

using BaseFunction = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

/// f^i(x) = base(x) + offsets.row(i)
SetValuedProblem additive(std::string name, Eigen::Index n, Eigen::Index m, BaseFunction base, Eigen::MatrixXd offsets,
                          Box box)
{
  const Eigen::Index p = offsets.rows();
  return SetValuedProblem(
      std::move(name), n, m, p,
      [base = std::move(base), offsets = std::move(offsets)](Eigen::Index i, const Eigen::VectorXd& x) {
        return (base(x) + offsets.row(i).transpose()).eval();
      },
      std::move(box));
}

struct GridPoint
{
  double phi;
  double psi;
};

/// Zero-based i enumerates {phi0 + dphi*j} x {psi0 + dpsi*l}, j, l = 0..9, phi-major.
GridPoint grid_point(Eigen::Index i, double dphi, double dpsi, double psi0 = 0.0)
{
  const auto j = static_cast<double>(i / 10);
  const auto l = static_cast<double>(i % 10);
  return {dphi * j, psi0 + dpsi * l};
}

/// log(tan(psi/2)) with psi clamped into (delta, pi - delta).
double log_tan_half(double psi, int& clamp_events)
{
  constexpr double delta = 1e-9;
  if (psi < delta) {
    psi = delta;
    ++clamp_events;
  } else if (psi > kPi - delta) {
    psi = kPi - delta;
    ++clamp_events;
  }
  return std::log(std::tan(psi / 2.0));
}

Box box_with_first(Eigen::Index n, double lo0, double hi0, double lo, double hi)
{
  Box box = Box::uniform(n, lo, hi);
  box.lower(0) = lo0;
  box.upper(0) = hi0;
  return box;
}

/// Tail x_m: the last n - m + 1 variables.
double dtlz_multimodal_g(const Eigen::VectorXd& x, Eigen::Index m)
{
  const Eigen::Index tail = x.size() - m + 1;
  double sum = 0.0;
  for (Eigen::Index k = x.size() - tail; k < x.size(); ++k)
    sum += (x(k) - 0.5) * (x(k) - 0.5) - std::cos(20.0 * kPi * (x(k) - 0.5));
  return 100.0 * (static_cast<double>(tail) + sum);
}

SetValuedProblem zdt1(Eigen::Index n)
{
  Eigen::MatrixXd offsets(100, 2);
  for (int i = 1; i <= 100; ++i) {
    const double c16 = std::pow(std::cos(4.0 * kPi * i / 100.0), 16);
    offsets(i - 1, 0) = (0.02 + 0.02 * c16) * std::cos(2.0 * kPi * i / 100.0);
    offsets(i - 1, 1) = 0.15 + 0.15 * c16 * std::sin(2.0 * kPi * i / 100.0);
  }
  auto base = [](const Eigen::VectorXd& x) {
    const double g = 1.0 + 9.0 * x.tail(x.size() - 1).sum();
    Eigen::VectorXd y(2);
    y << x(0), g * (1.0 - std::sqrt(x(0) / g));
    return y;
  };
  return additive("zdt1_n" + std::to_string(n) + "_m2", n, 2, base, offsets, Box::uniform(n, 0.0, 1.0));
}

SetValuedProblem zdt4(Eigen::Index n)
{
  Eigen::MatrixXd offsets(100, 2);
  for (int i = 1; i <= 100; ++i) {
    const double c16 = std::pow(std::cos(4.0 * kPi * i / 100.0), 16);
    offsets(i - 1, 0) = 1.0 + c16 * std::cos(2.0 * kPi * i / 100.0);
    offsets(i - 1, 1) = 1.0 + c16 * std::sin(2.0 * kPi * i / 100.0);
  }
  auto base = [](const Eigen::VectorXd& x) {
    const Eigen::Index n = x.size();
    double g = 1.0 + 10.0 * static_cast<double>(n - 1);
    for (Eigen::Index k = 1; k < n; ++k) g += x(k) * x(k) - 10.0 * std::cos(4.0 * kPi * x(k));
    Eigen::VectorXd y(2);
    y << x(0), g * (1.0 - std::sqrt(x(0) / g));
    return y;
  };
  return additive("zdt4_n" + std::to_string(n) + "_m2", n, 2, base, offsets, box_with_first(n, 0.01, 1.0, -5.0, 5.0));
}

// Row coefficients: 1, 1, ..., 1/4, 1/2 (the last two rows carry an extra factor).
SetValuedProblem dtlz1(Eigen::Index n, Eigen::Index m)
{
  int clamps = 0;
  Eigen::MatrixXd offsets = Eigen::MatrixXd::Zero(100, m);
  for (Eigen::Index i = 0; i < 100; ++i) {
    const auto [phi, psi] = grid_point(i, kPi / 5.0, kPi / 5.0);
    offsets(i, 0) = std::cos(phi) * std::sin(psi);
    if (m > 1) offsets(i, 1) = std::sin(phi) * std::sin(psi);
    if (m > 2) offsets(i, 2) = std::cos(psi) + log_tan_half(psi, clamps) + 0.2 * phi;
  }
  auto base = [m](const Eigen::VectorXd& x) {
    const double scale = 1.0 + dtlz_multimodal_g(x, m);
    Eigen::VectorXd y(m);
    for (Eigen::Index r = 0; r < m; ++r) {
      double v = scale;
      for (Eigen::Index k = 0; k < m - 1 - r; ++k) v *= x(k);
      if (r > 0) v *= 1.0 - x(m - 1 - r);
      const double coeff = (r == m - 1) ? 0.5 : (r == m - 2) ? 0.25 : (r <= 1) ? 1.0 : 0.5;
      y(r) = coeff * v;
    }
    return y;
  };
  auto problem = additive("dtlz1_n" + std::to_string(n) + "_m" + std::to_string(m), n, m, base, offsets,
                          Box::uniform(n, 0.0, 1.0));
  problem.clamp_events = clamps;
  problem.notes = "log(tan(psi/2)) clamped to psi in (1e-9, pi-1e-9)";
  return problem;
}

SetValuedProblem dtlz3(Eigen::Index n, Eigen::Index m)
{
  Eigen::MatrixXd offsets = Eigen::MatrixXd::Zero(100, m);
  for (Eigen::Index i = 0; i < 100; ++i) {
    const auto [phi, psi] = grid_point(i, kPi / 5.0, kPi / 5.0);
    const double sech = 1.0 / std::cosh(phi);
    offsets(i, 0) = sech * std::cos(psi);
    if (m > 1) offsets(i, 1) = sech * std::sin(psi);
    if (m > 2) offsets(i, 2) = phi - std::tanh(phi);
  }
  auto base = [m](const Eigen::VectorXd& x) {
    const double scale = 1.0 + dtlz_multimodal_g(x, m);
    Eigen::VectorXd y(m);
    for (Eigen::Index r = 0; r < m; ++r) {
      double v = scale;
      if (m >= 4 && r == 2) {
        // cos(x1 pi/2)^2, not a product over distinct coordinates
        const double c1 = std::cos(x(0) * kPi / 2.0);
        y(r) = v * c1 * c1;
        continue;
      }
      for (Eigen::Index k = 0; k < m - 1 - r; ++k) v *= std::cos(x(k) * kPi / 2.0);
      if (r > 0) v *= std::sin(x(m - 1 - r) * kPi / 2.0);
      y(r) = v;
    }
    return y;
  };
  auto problem = additive("dtlz3_n" + std::to_string(n) + "_m" + std::to_string(m), n, m, base, offsets,
                          Box::uniform(n, 0.0, 1.0));
  problem.notes = "first perturbation row uses sech(phi_i) cos(psi_i); third objective row is cos(x1 pi/2)^2";
  return problem;
}

SetValuedProblem fdsa(Eigen::Index n)
{
  Eigen::MatrixXd offsets(100, 3);
  for (Eigen::Index i = 0; i < 100; ++i) {
    const auto [phi, psi] = grid_point(i, kPi / 5.0, kPi / 5.0);
    offsets(i, 0) = 1.0 + std::cos(phi) * std::cos(psi);
    offsets(i, 1) = 1.0 + std::cos(phi) * std::sin(psi);
    offsets(i, 2) = std::sin(phi);
  }
  auto base = [](const Eigen::VectorXd& x) {
    const auto nn = static_cast<double>(x.size());
    double g1 = 0.0, g3 = 0.0;
    for (Eigen::Index k = 0; k < x.size(); ++k) {
      const double idx = static_cast<double>(k + 1);
      g1 += idx * std::pow(x(k) - idx, 4);
      g3 += idx * (nn - idx + 1.0) * std::exp(-x(k));
    }
    Eigen::VectorXd y(3);
    y << g1 / (nn * nn), std::exp(x.sum() / nn) + x.squaredNorm(), g3 / (nn * (nn + 1.0));
    return y;
  };
  auto problem = additive("fdsa_n" + std::to_string(n) + "_m3", n, 3, base, offsets, Box::uniform(n, -2.0, 2.0));
  problem.notes = "(phi_i, psi_i) on the pi/5 x pi/5 grid";
  return problem;
}

SetValuedProblem dtlz5(Eigen::Index n, Eigen::Index m)
{
  constexpr double lambda = 1.0;
  Eigen::MatrixXd offsets = Eigen::MatrixXd::Zero(100, m);
  for (Eigen::Index i = 0; i < 100; ++i) {
    const auto [phi, psi] = grid_point(i, kPi / 5.0, kPi / 5.0);
    offsets(i, 0) = 5.0 * psi / (2.0 * kPi);
    if (m > 1) offsets(i, 1) = lambda * std::cos(phi) / 10.0;
    if (m > 2) offsets(i, 2) = lambda * std::sin(phi) / 10.0;
  }
  auto base = [m](const Eigen::VectorXd& x) {
    const Eigen::Index n = x.size();
    double g = 0.0;
    for (Eigen::Index k = m - 1; k < n; ++k) g += (x(k) - 0.5) * (x(k) - 0.5);
    Eigen::VectorXd theta(std::max<Eigen::Index>(m - 1, 1));
    theta(0) = x(0);
    for (Eigen::Index k = 1; k < m - 1; ++k) theta(k) = (1.0 + g * x(k)) / (2.0 * (1.0 + g));
    Eigen::VectorXd y(m);
    for (Eigen::Index r = 0; r < m; ++r) {
      double v = 1.0 + g;
      for (Eigen::Index k = 0; k < m - 1 - r; ++k) v *= std::cos(theta(k) * kPi / 2.0);
      if (r > 0) v *= std::sin(theta(m - 1 - r) * kPi / 2.0);
      y(r) = v;
    }
    return y;
  };
  auto problem = additive("dtlz5_n" + std::to_string(n) + "_m" + std::to_string(m), n, m, base, offsets,
                          Box::uniform(n, 0.0, 1.0));
  problem.notes = "perturbation scale lambda = 1";
  return problem;
}

SetValuedProblem dgo1()
{
  Eigen::MatrixXd offsets(100, 2);
  for (int i = 1; i <= 100; ++i) {
    const double a = kPi * i / 50.0;
    offsets(i - 1, 0) = std::sin(a + std::cos(a));
    offsets(i - 1, 1) = std::cos(a + std::sin(a));
  }
  auto base = [](const Eigen::VectorXd& x) {
    Eigen::VectorXd y(2);
    y << std::sin(x(0)), std::sin(x(0) + 0.7);
    return y;
  };
  return additive("dgo1_n1_m2", 1, 2, base, offsets, Box::uniform(1, -10.0, 13.0));
}

SetValuedProblem dgo2()
{
  Eigen::MatrixXd offsets(100, 2);
  for (int i = 1; i <= 100; ++i) {
    const double a = kPi * i / 50.0;
    offsets(i - 1, 0) = std::sin(a + std::cos(a));
    offsets(i - 1, 1) = std::cos(a + std::sin(2.0 * a));
  }
  auto base = [](const Eigen::VectorXd& x) {
    Eigen::VectorXd y(2);
    y << x(0) * x(0), 9.0 - std::sqrt(81.0 - x(0) * x(0));
    return y;
  };
  return additive("dgo2_n1_m2", 1, 2, base, offsets, Box::uniform(1, -9.0, 9.0));
}

SetValuedProblem hil()
{
  Eigen::MatrixXd offsets(100, 2);
  for (int i = 1; i <= 100; ++i) {
    const double a = std::sin(kPi * i / 25.0);
    const double c = std::cos(2.0 * kPi * i / 25.0);
    const double radius = 10.0 * ((9.0 + std::exp(a) - a + 2.0 * c * c) / 128.0);
    offsets(i - 1, 0) = radius * std::cos(kPi * i / 50.0);
    offsets(i - 1, 1) = radius * std::sin(kPi * i / 50.0);
  }
  auto base = [](const Eigen::VectorXd& x) {
    const double angle =
        (kPi / 180.0) * (45.0 + 40.0 * std::sin(2.0 * kPi * x(0)) + 25.0 * std::sin(2.0 * kPi * x(1)));
    const double radius = 1.0 + 0.5 * std::cos(2.0 * kPi * x(0));
    Eigen::VectorXd y(2);
    y << std::cos(angle) * radius, std::sin(angle) * radius;
    return y;
  };
  return additive("hil_n2_m2", 2, 2, base, offsets, Box::uniform(2, 0.0, 5.0));
}

SetValuedProblem jos1a(Eigen::Index n)
{
  Eigen::MatrixXd offsets(100, 2);
  for (int i = 1; i <= 100; ++i) {
    offsets(i - 1, 0) = 0.1 * std::cos(kPi * i / 50.0);
    offsets(i - 1, 1) = 50.0 * std::sin(kPi * i / 50.0);
  }
  auto base = [](const Eigen::VectorXd& x) {
    const auto nn = static_cast<double>(x.size());
    Eigen::VectorXd y(2);
    y << x.squaredNorm() / nn, (x.array() - 2.0).square().sum() / nn;
    return y;
  };
  return additive("jos1a_n" + std::to_string(n) + "_m2", n, 2, base, offsets, Box::uniform(n, -2.0, 2.0));
}

SetValuedProblem rosenbrock()
{
  constexpr double r = 16.0;
  Eigen::MatrixXd offsets(100, 3);
  for (Eigen::Index i = 0; i < 100; ++i) {
    const auto [phi, psi] = grid_point(i, kPi / 5.0, kPi / 5.0);
    offsets(i, 0) = r * r * std::cos(phi) * std::cos(psi) * std::sin(psi);
    offsets(i, 1) = r * r * std::cos(phi) * std::sin(psi) * std::sin(psi);
    offsets(i, 2) = r * r * std::cos(phi) * std::sin(psi) * std::cos(psi) * std::cos(psi);
  }
  auto base = [](const Eigen::VectorXd& x) {
    Eigen::VectorXd y(3);
    for (int k = 0; k < 3; ++k)
      y(k) = 100.0 * std::pow(x(k + 1) - x(k) * x(k), 2) + std::pow(x(k + 1) - 1.0, 2);
    return y;
  };
  return additive("rosenbrock_n4_m3", 4, 3, base, offsets, Box::uniform(4, -2.0, 2.0));
}

SetValuedProblem brown_dennis()
{
  int clamps = 0;
  Eigen::MatrixXd offsets(100, 3);
  for (Eigen::Index i = 0; i < 100; ++i) {
    const auto [phi, psi] = grid_point(i, 2.0 * kPi / 5.0, 0.098, 0.01);
    offsets(i, 0) = std::cos(phi) * std::sin(psi);
    offsets(i, 1) = std::sin(phi) * std::sin(psi);
    offsets(i, 2) = std::cos(psi) + log_tan_half(psi, clamps) + 0.5 * phi;
  }
  auto base = [](const Eigen::VectorXd& x) {
    auto second = [&](double t) { return std::pow(x(2) + x(3) * std::sin(t) - std::cos(t), 2); };
    Eigen::VectorXd y(3);
    y << std::pow(x(0) + 0.2 * x(1) - std::exp(0.2), 2) + second(0.2),
        std::pow(x(0) + 0.4 * x(1) - std::exp(0.4), 2) + second(0.4),
        std::pow(x(0) + 0.6 * x(2) - std::exp(0.6), 2) + second(0.6);
    return y;
  };
  Box box = Box::uniform(4, -5.0, 5.0);
  box.lower(0) = -25.0;
  box.upper(0) = 25.0;
  box.lower(3) = -1.0;
  box.upper(3) = 1.0;
  auto problem = additive("brown_dennis_n4_m3", 4, 3, base, offsets, box);
  problem.clamp_events = clamps;
  problem.notes = "three image rows; alias brown_dennis_n4_m5";
  return problem;
}

SetValuedProblem trigonometric()
{
  int clamps = 0;
  Eigen::MatrixXd offsets = Eigen::MatrixXd::Zero(100, 4);
  for (Eigen::Index i = 0; i < 100; ++i) {
    const auto [phi, psi] = grid_point(i, 2.0 * kPi / 5.0, 0.098, 0.01);
    offsets(i, 0) = std::cos(phi) * std::sin(psi);
    offsets(i, 1) = std::sin(phi) * std::sin(psi);
    offsets(i, 2) = std::cos(psi) + log_tan_half(psi, clamps) + 0.2 * phi;
  }
  auto base = [](const Eigen::VectorXd& x) {
    Eigen::VectorXd y(4);
    double partial = 0.0;
    for (int k = 0; k < 4; ++k) {
      partial += x(k);
      const double kk = k + 1.0;
      const double term = kk - std::cos(partial) + kk * (1.0 - std::cos(x(k))) - std::sin(x(k));
      y(k) = (k < 3) ? term * term : term;
    }
    return y;
  };
  auto problem = additive("trigonometric_n4_m4", 4, 4, base, offsets, Box::uniform(4, -1.0, 1.0));
  problem.clamp_events = clamps;
  problem.notes = "fourth row is not squared";
  return problem;
}

SetValuedProblem das_dennis()
{
  Eigen::MatrixXd offsets(100, 2);
  for (int i = 1; i <= 100; ++i) {
    const double c = std::sin(i * kPi / 50.0) + std::cos(i * kPi / 50.0);
    offsets(i - 1, 0) = c;
    offsets(i - 1, 1) = c;
  }
  auto base = [](const Eigen::VectorXd& x) {
    Eigen::VectorXd y(2);
    y << x.squaredNorm(), 3.0 * x(0) + 2.0 * x(1) - x(2) / 3.0 + 0.01 * std::pow(x(3) - x(4), 3);
    return y;
  };
  return additive("das_dennis_n5_m2", 5, 2, base, offsets, Box::uniform(5, -20.0, 20.0));
}

SetValuedProblem ex51()
{
  auto f = [](Eigen::Index i, const Eigen::VectorXd& x) {
    const double t = static_cast<double>(i) / 4.0;  // (i - 1)/4 with one-based i
    const double c2 = std::cos(x(0)) * std::cos(x(0));
    Eigen::VectorXd y(2);
    y << x(0) + c2 * (t + (1.0 - t)), 0.5 * x(0) * std::sin(x(0)) + c2 * (-t + (1.0 - t));
    return y;
  };
  SetValuedProblem problem("ex51_n1_m2", 1, 2, 5, f, Box::uniform(1, 2.0, 10.0));
  problem.notes = "scalar bracket term (1 - (i-1)/4) is added to both components";
  return problem;
}

SetValuedProblem ex53()
{
  auto f = [](Eigen::Index i, const Eigen::VectorXd& x) {
    const double t = kPi * static_cast<double>(i) / 50.0;  // pi (i - 1)/50 with one-based i
    const double x1 = x(0), x2 = x(1);
    Eigen::VectorXd y(2);
    y << std::exp(x1 / 2.0) * std::cos(x2) + x1 * std::cos(x2) * std::sin(t) - x2 * std::sin(x2) * std::pow(std::cos(t), 3),
        std::exp(x2 / 20.0) * std::sin(x1) + x1 * std::sin(x2) * std::pow(std::sin(t), 3) + x2 * std::cos(x2) * std::cos(t);
    return y;
  };
  return SetValuedProblem("ex53_n2_m2", 2, 2, 100, f, Box::uniform(2, -20.0, 20.0));
}

SetValuedProblem sphere()
{
  Eigen::MatrixXd offsets(100, 3);
  for (Eigen::Index i = 0; i < 100; ++i) {
    const auto [phi, psi] = grid_point(i, kPi / 10.0, kPi / 5.0);
    offsets(i, 0) = std::cos(phi) / 16.0;
    offsets(i, 1) = std::cos(psi) * std::sin(phi) / 16.0;
    offsets(i, 2) = std::sin(psi) * std::sin(phi) / 16.0;
  }
  auto base = [](const Eigen::VectorXd& x) {
    auto g = [](double t) { return (t - 0.5) * (t - 0.5); };
    const double u = kPi * x(0) / 2.0;
    const double v = kPi * (1.0 + 2.0 * g(x(2)) * x(1)) / (4.0 * (1.0 + g(x.norm())));
    const double scale = 1.0 + g(x(2));
    Eigen::VectorXd y(3);
    y << scale * std::cos(u) * std::cos(v), scale * std::cos(u) * std::sin(v), scale * std::sin(u);
    return y;
  };
  return additive("sphere_n3_m3", 3, 3, base, offsets, Box::uniform(3, 0.0, 1.0));
}

using Builder = std::function<SetValuedProblem()>;

const std::vector<std::pair<std::string, Builder>>& builders()
{
  static const std::vector<std::pair<std::string, Builder>> table = {
      {"zdt1_n2_m2", [] { return zdt1(2); }},
      {"zdt1_n5_m2", [] { return zdt1(5); }},
      {"zdt1_n8_m2", [] { return zdt1(8); }},
      {"zdt1_n10_m2", [] { return zdt1(10); }},
      {"zdt4_n10_m2", [] { return zdt4(10); }},
      {"dtlz1_n6_m4", [] { return dtlz1(6, 4); }},
      {"dtlz3_n5_m4", [] { return dtlz3(5, 4); }},
      {"dtlz5_n3_m3", [] { return dtlz5(3, 3); }},
      {"dtlz5_n5_m3", [] { return dtlz5(5, 3); }},
      {"dtlz5_n7_m5", [] { return dtlz5(7, 5); }},
      {"hil_n2_m2", hil},
      {"dgo1_n1_m2", dgo1},
      {"dgo2_n1_m2", dgo2},
      {"jos1a_n5_m2", [] { return jos1a(5); }},
      {"fdsa_n2_m3", [] { return fdsa(2); }},
      {"rosenbrock_n4_m3", rosenbrock},
      {"brown_dennis_n4_m3", brown_dennis},
      {"trigonometric_n4_m4", trigonometric},
      {"das_dennis_n5_m2", das_dennis},
      {"ex51_n1_m2", ex51},
      {"ex53_n2_m2", ex53},
      {"sphere_n3_m3", sphere},
  };
  return table;
}

}  // namespace

const std::vector<std::string>& problem_ids()
{
  static const std::vector<std::string> ids = [] {
    std::vector<std::string> out;
    for (const auto& [id, _] : builders()) out.push_back(id);
    return out;
  }();
  return ids;
}

SetValuedProblem registry(const std::string& id)
{
  static const std::map<std::string, std::string> aliases = {{"brown_dennis_n4_m5", "brown_dennis_n4_m3"}};
  std::string key = id;
  if (auto it = aliases.find(id); it != aliases.end()) key = it->second;
  for (const auto& [name, build] : builders())
    if (name == key) return build();
  throw UnknownProblemError(id);
}

}  // namespace setopt
