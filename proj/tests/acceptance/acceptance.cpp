// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cstdarg>
#include <cstdlib>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>

#include "setopt/bench.hpp"
#include "setopt/partition.hpp"
#include "setopt/registry.hpp"
#include "setopt/solvers.hpp"
#include "setopt/subproblem.hpp"

using namespace setopt;

namespace {

// Pinned tolerances.
constexpr double kSignTol = 1e-10;
constexpr double kAxiomTol = 1e-12;
constexpr double kGridMargin = 1e-3;
constexpr double kInvariantTol = 1e-8;
constexpr double kEpsilon = 1e-3;
constexpr double kTimeCone = 5.0, kTimeDominance = 10.0, kTimeGrid = 60.0, kTimeTrends = 900.0;

using Clock = std::chrono::steady_clock;
double since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

int failures = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail)
{
  std::printf("%s [%d] %s: %s\n", ok ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* pattern, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* pattern, ...)
{
  char buf[512];
  va_list args;
  va_start(args, pattern);
  std::vsnprintf(buf, sizeof buf, pattern, args);
  va_end(args);
  return buf;
}

// -- Independent membership oracles --------------------------------------------------------
// Both work from generators, not from the dual normals the library uses.

/// Coordinates of y in the generator basis of the cone (orthant: identity; K2': rays (1,3), (3,1)).
Eigen::VectorXd generator_coords(const std::string& cone, const Eigen::VectorXd& y)
{
  if (cone != "k2prime") return y;
  Eigen::Matrix2d g;
  g << 1, 3, 3, 1;  // columns are the rays
  return g.fullPivLu().solve(y);
}

/// -1 interior of -K, 0 boundary of -K, +1 outside -K.
int oracle_region(const std::string& cone, const Eigen::VectorXd& y)
{
  const Eigen::VectorXd c = generator_coords(cone, -y);
  if ((c.array() > 0).all()) return -1;
  if ((c.array() >= 0).all()) return 0;
  return 1;
}

Cone make_cone(const std::string& name) { return name == "k2prime" ? Cone::k2prime() : cone_from_preset(name); }

// -- Criterion 1 ----------------------------------------------------------------------------

void cone_axioms()
{
  const auto start = Clock::now();
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> u(-10, 10), pos(0, 5);
  std::uniform_int_distribution<int> pick(0, 3);
  long checks = 0, bad = 0;
  for (const std::string name : {"orthant:2", "orthant:3", "k2prime"}) {
    const Cone k = make_cone(name);
    const int m = static_cast<int>(k.dim());
    for (int trial = 0; trial < 10000; ++trial) {
      Eigen::VectorXd y(m), z(m);
      for (int i = 0; i < m; ++i) y(i) = u(rng), z(i) = u(rng);
      // Place a quarter of the samples exactly on the boundary of -K.
      if (pick(rng) == 0) {
        Eigen::VectorXd c(m);
        for (int i = 0; i < m; ++i) c(i) = pos(rng);
        c(trial % m) = 0.0;
        if (name == "k2prime") y = -(c(0) * Eigen::Vector2d(1, 3) + c(1) * Eigen::Vector2d(3, 1));
        else y = -c;
      }
      const double d = k.scalarize(y);
      const int region = oracle_region(name, y);
      const bool sign_ok = (region == -1 && d < -kSignTol) || (region == 0 && std::abs(d) <= kSignTol) ||
                           (region == 1 && d > kSignTol) ||
                           // generator coordinates within rounding of zero
                           (std::abs(d) <= kSignTol && generator_coords(name, -y).minCoeff() > -1e-9);
      bad += !sign_ok;

      const double lambda = pos(rng);
      Eigen::VectorXd kvec(m);
      for (int i = 0; i < m; ++i) kvec(i) = pos(rng);
      if (name == "k2prime") kvec = kvec(0) * Eigen::Vector2d(1, 3) + kvec(1) * Eigen::Vector2d(3, 1);
      bad += k.scalarize(y + z) > k.scalarize(y) + k.scalarize(z) + kAxiomTol;
      bad += std::abs(k.scalarize(lambda * y) - lambda * d) > kAxiomTol * (1 + std::abs(lambda * d));
      bad += k.scalarize(y) > k.scalarize(y + kvec) + kAxiomTol;  // y <= y + k
      bad += std::abs(k.scalarize(y) - k.scalarize(z)) > (y - z).lpNorm<Eigen::Infinity>() + kAxiomTol;
      checks += 5;
    }
  }
  const double secs = since(start);
  report(1, "cone axioms", bad == 0 && secs < kTimeCone,
         fmt("%ld checks, %ld violations, %.2f s (limit %.0f s)", checks, bad, secs, kTimeCone));
}

// -- Criterion 2 ----------------------------------------------------------------------------

void dominance_oracle()
{
  const auto start = Clock::now();
  std::mt19937_64 rng(202);
  std::uniform_int_distribution<int> size(1, 10), dim(1, 4), grid(-3, 3);
  long mismatches = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const int m = dim(rng);
    const std::string name = (m == 2 && trial % 2) ? "k2prime" : "orthant:" + std::to_string(m);
    const Cone k = make_cone(name);
    Eigen::MatrixXd a(size(rng), m);
    for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = grid(rng);
    IndexSet min_idx, wmin_idx;
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      bool dominated = false, strictly = false;
      for (Eigen::Index j = 0; j < a.rows(); ++j) {
        if (j == i) continue;
        // a_j - a_i in -K: a_j precedes a_i.
        const int r = oracle_region(name, (a.row(j) - a.row(i)).transpose());
        if (r <= 0 && a.row(j) != a.row(i)) dominated = true;
        if (r == -1) strictly = true;
      }
      if (!dominated) min_idx.push_back(i);
      if (!strictly) wmin_idx.push_back(i);
    }
    const MinimalIndices got = minimal_elements(a, k);
    mismatches += got.min_idx != min_idx || got.wmin_idx != wmin_idx;
  }
  const double secs = since(start);
  report(2, "dominance oracle", mismatches == 0 && secs < kTimeDominance,
         fmt("10000 sets, %ld mismatches, %.2f s (limit %.0f s)", mismatches, secs, kTimeDominance));
}

// -- Criterion 3 ----------------------------------------------------------------------------

void grid_oracle()
{
  const auto start = Clock::now();
  std::mt19937_64 rng(303);
  std::uniform_real_distribution<double> u(-2, 2), r01(0, 1);
  std::uniform_int_distribution<int> omega_d(1, 3), m_d(1, 2);
  int over = 0, positive = 0;
  double worst = -std::numeric_limits<double>::infinity();
  for (int trial = 0; trial < 50; ++trial) {
    const int omega = omega_d(rng), m = m_d(rng);
    const Cone k = (m == 2 && trial % 3 == 0) ? Cone::k2prime() : Cone::orthant(m);
    ModelSet models;
    for (int j = 0; j < omega; ++j) {
      Eigen::MatrixXd g(m, 2);
      for (Eigen::Index i = 0; i < g.size(); ++i) g.data()[i] = u(rng);
      std::vector<Eigen::MatrixXd> hs;
      for (int r = 0; r < m; ++r) {
        Eigen::Matrix2d h;
        h(0, 0) = u(rng), h(1, 1) = u(rng), h(0, 1) = h(1, 0) = u(rng);
        hs.push_back(h);
      }
      models.gradients.push_back(g);
      models.hessians.push_back(hs);
    }
    const double radius = 0.25 + 2.0 * r01(rng);
    // Box shift always contains 0; half the cases leave it inactive.
    Eigen::Vector2d lo = -radius * Eigen::Vector2d::Ones(), hi = radius * Eigen::Vector2d::Ones();
    if (trial % 2) {
      lo = -radius * Eigen::Vector2d(r01(rng), r01(rng));
      hi = radius * Eigen::Vector2d(r01(rng), r01(rng));
    }
    const InnerResult res = inner_minimax(models, k, radius, lo, hi);
    const Eigen::Vector2d glo = lo.cwiseMax(-radius), ghi = hi.cwiseMin(radius);
    double best = std::numeric_limits<double>::infinity();
    for (int a = 0; a <= 200; ++a)
      for (int b = 0; b <= 200; ++b) {
        const Eigen::Vector2d s(glo(0) + (ghi(0) - glo(0)) * a / 200.0, glo(1) + (ghi(1) - glo(1)) * b / 200.0);
        if (s.norm() > radius) continue;
        double phi = -std::numeric_limits<double>::infinity();
        for (int j = 0; j < omega; ++j) {
          const Eigen::VectorXd lin = models.gradients[j] * s;
          Eigen::VectorXd quad = lin;
          for (int r = 0; r < m; ++r) quad(r) += 0.5 * s.dot(models.hessians[j][r] * s);
          phi = std::max({phi, k.scalarize(lin), k.scalarize(quad)});
        }
        best = std::min(best, phi);
      }
    worst = std::max(worst, res.t - best);
    over += res.t > best + kGridMargin;
    positive += res.t > 0;
  }
  const double secs = since(start);
  report(3, "subproblem grid oracle", over == 0 && positive == 0 && secs < kTimeGrid,
         fmt("50 instances, %d above grid+%.0e, %d with t > 0, worst t - grid = %.3e, %.1f s (limit %.0f s)", over,
             kGridMargin, positive, worst, secs, kTimeGrid));
}

// -- Criterion 4 ----------------------------------------------------------------------------

bool identical(const RunResult& a, const RunResult& b)
{
  if (a.trace.size() != b.trace.size() || a.iterations != b.iterations || a.converged != b.converged ||
      a.diagnostic != b.diagnostic)
    return false;
  for (std::size_t i = 0; i < a.trace.size(); ++i) {
    const auto &ra = a.trace[i], &rb = b.trace[i];
    if (ra.x != rb.x || ra.radius != rb.radius || ra.t != rb.t || ra.accepted != rb.accepted || ra.a != rb.a)
      return false;
    if (ra.rho.size() != rb.rho.size() || (ra.rho.size() > 0 && ra.rho != rb.rho)) return false;
  }
  return a.final_point == b.final_point;
}

void reduction_equivalence()
{
  const auto start = Clock::now();
  int runs = 0, differ = 0;
  for (const char* id : {"dgo2_n1_m2", "hil_n2_m2", "jos1a_n5_m2", "zdt1_n2_m2", "dtlz5_n3_m3"}) {
    const SetValuedProblem p = registry(id);
    const Cone k = Cone::orthant(p.m());
    for (const auto& x0 : sample_points(p.box(), 5, 404 ^ fnv1a(id))) {
      SolverConfig trm;
      SolverConfig max = trm, avg = trm;
      max.variant = Variant::MaxNTRM;
      max.memory_depth = 0;
      avg.variant = Variant::AvgNTRM;
      avg.mu = 0.0;
      const RunResult base = run(p, k, x0, trm);
      differ += !identical(base, run(p, k, x0, max));
      differ += !identical(base, run(p, k, x0, avg));
      runs += 2;
    }
  }
  report(4, "reduction to monotone TRM", differ == 0,
         fmt("%d comparisons (5 problems x 5 starts x 2 variants), %d differ, %.1f s", runs, differ, since(start)));
}

// -- Criterion 5 ----------------------------------------------------------------------------

/// Delta(lhs - rhs) <= tol for every selected row.
bool rows_leq(const Cone& k, const Eigen::MatrixXd& lhs, const Eigen::MatrixXd& rhs, const PartitionElement& a,
              double tol)
{
  for (const Eigen::Index i : a)
    if (k.scalarize((lhs.row(i) - rhs.row(i)).transpose()) > tol) return false;
  return true;
}

void invariants()
{
  const auto start = Clock::now();
  long acceptance_bad = 0, max_bad = 0, avg_bad = 0, theta_bad = 0, iterations = 0, converged = 0, runs = 0;
  long max_pairs = 0, avg_pairs = 0;
  double worst_theta = 0.0;
  for (const char* id : {"dgo2_n1_m2", "hil_n2_m2", "jos1a_n5_m2", "ex53_n2_m2", "dtlz5_n3_m3"}) {
    const SetValuedProblem p = registry(id);
    const Cone k = Cone::orthant(p.m());
    for (const auto& x0 : sample_points(p.box(), 10, 505 ^ fnv1a(id))) {
      for (const Variant v : {Variant::TRM, Variant::MaxNTRM, Variant::AvgNTRM}) {
        SolverConfig c;
        c.variant = v;
        c.epsilon = kEpsilon;
        c.record_matrices = true;
        const RunResult r = run(p, k, x0, c);
        ++runs;
        for (std::size_t i = 0; i < r.trace.size(); ++i) {
          const IterationRecord& rec = r.trace[i];
          if (rec.rho.size() == 0) continue;
          ++iterations;
          // Acceptance holds exactly when every ratio clears eta1, and then each tested row decreases.
          const bool clears = rec.rho.minCoeff() >= c.eta1;
          bool decrease = true;
          for (std::size_t j = 0; j < rec.a.size(); ++j)
            decrease = decrease && k.scalarize((rec.trial.row(j) - rec.reference.row(rec.a[j])).transpose()) < 0;
          acceptance_bad += rec.accepted != clears || (rec.accepted && !decrease);

          if (i + 1 >= r.trace.size() || r.trace[i + 1].rho.size() == 0) continue;
          const IterationRecord& next = r.trace[i + 1];
          if (next.a != rec.a) continue;  // the reference restarts with a new partition element
          if (v == Variant::MaxNTRM) {
            ++max_pairs;
            max_bad += !rows_leq(k, next.reference, rec.reference, rec.a, kInvariantTol);
          } else if (v == Variant::AvgNTRM) {
            ++avg_pairs;
            avg_bad += !rows_leq(k, next.values, next.reference, rec.a, kInvariantTol) ||
                       !rows_leq(k, next.reference, rec.reference, rec.a, kInvariantTol);
          }
        }
        if (r.converged) {
          ++converged;
          const SubproblemSolution sol = theta_and_step(p, k, r.final_point, r.final_radius);
          worst_theta = std::max(worst_theta, std::abs(sol.t_star));
          theta_bad += !(std::abs(sol.t_star) < 2 * kEpsilon);
        }
      }
    }
  }
  const bool ok = acceptance_bad == 0 && max_bad == 0 && avg_bad == 0 && theta_bad == 0;
  report(5, "in-vivo invariants", ok,
         fmt("%ld runs, %ld iterations: acceptance %ld bad; max reference %ld/%ld bad; average chain %ld/%ld bad; "
             "%ld converged, %ld with |theta| >= 2eps (max %.2e); %.1f s",
             runs, iterations, acceptance_bad, max_bad, max_pairs, avg_bad, avg_pairs, converged, theta_bad,
             worst_theta, since(start)));
}

// -- Criterion 6 ----------------------------------------------------------------------------

void trends()
{
  const auto start = Clock::now();
  const std::string store = (std::filesystem::temp_directory_path() / "setopt_acceptance_trends.jsonl").string();
  std::filesystem::remove(store);
  ExperimentConfig config;
  config.problem_ids = {"zdt1_n10_m2", "zdt4_n10_m2", "dgo2_n1_m2"};
  config.algorithms = {"sd", "cg", "trm", "max", "avg"};
  config.points_per_problem = 20;
  config.it_max = 100;
  config.rng_seed = 20240601;
  run_matrix(config, store);
  const MetricsTable table = build_table(load_store(store), config.algorithms);
  std::filesystem::remove(store);

  auto nonconv = [&](const std::string& problem, const std::string& algo) {
    for (std::size_t p = 0; p < table.problems.size(); ++p)
      if (table.problems[p] == problem)
        for (std::size_t s = 0; s < table.algorithms.size(); ++s)
          if (table.algorithms[s] == algo) return table.cells[p][s].nonconv;
    return -1;
  };
  std::ostringstream detail;
  bool ok = true;
  const int sd = nonconv("zdt1_n10_m2", "sd"), cg = nonconv("zdt1_n10_m2", "cg");
  const int trm = nonconv("zdt1_n10_m2", "trm"), max = nonconv("zdt1_n10_m2", "max");
  ok = ok && sd == 20 && cg == 20 && max <= trm;
  detail << "ZDT1 n10 sd/cg/trm/max " << sd << "/" << cg << "/" << trm << "/" << max;
  for (const char* id : {"zdt4_n10_m2", "dgo2_n1_m2"}) {
    detail << "; " << id << " trm/max/avg";
    char sep = ' ';
    for (const char* algo : {"trm", "max", "avg"}) {
      const int n = nonconv(id, algo);
      ok = ok && n >= 0 && n <= 2;
      detail << sep << n;
      sep = '/';
    }
  }
  const double secs = since(start);
  detail << fmt("; %.1f s (limit %.0f s)", secs, kTimeTrends);
  report(6, "benchmark trends", ok && secs < kTimeTrends, detail.str());
}

// -- Criterion 7 ----------------------------------------------------------------------------

void cone_change()
{
  const auto start = Clock::now();
  const Eigen::Vector2d x0(-16.355461, -2.454201);
  SolverConfig config;
  config.it_max = 100;
  const auto runs = cone_experiment("ex53_n2_m2", x0, {"orthant:2", "k2prime"}, config);
  bool k1_fail = true, k2_converge = true;
  std::ostringstream detail;
  const RunResult* first[2] = {nullptr, nullptr};
  for (const ConeRun& r : runs) {
    const bool k1 = r.cone == "orthant:2";
    if (k1) k1_fail = k1_fail && !r.result.converged && r.result.iterations == config.it_max;
    else k2_converge = k2_converge && r.result.converged && r.result.iterations <= 100;
    if (r.algorithm == "max") first[k1 ? 0 : 1] = &r.result;
    detail << r.cone << "/" << r.algorithm << (r.result.converged ? " converged" : " not converged") << " in "
           << r.result.iterations << " at (" << fmt("%.6g, %.6g", r.result.final_point(0), r.result.final_point(1))
           << "); ";
  }
  const bool differ = first[0] && first[1] && !identical(*first[0], *first[1]);
  detail << "K1 nonconvergent: " << (k1_fail ? "yes" : "no") << ", K2' convergent: " << (k2_converge ? "yes" : "no")
         << ", sequences differ: " << (differ ? "yes" : "no") << fmt(", %.1f s", since(start));
  report(7, "cone change on Ex 5.3", k1_fail && k2_converge && differ, detail.str());
}

// -- Criterion 8 ----------------------------------------------------------------------------

void profile_fixture()
{
  const double nan = std::numeric_limits<double>::quiet_NaN(), inf = std::numeric_limits<double>::infinity();
  Eigen::MatrixXd t(4, 3);
  t << 1, 2, 4,      //
      3, 3, 6,       //
      0, 2, nan,     // best is 0: shifted to 1, 3, undefined
      5, nan, 10;
  const ProfileSet p = profile(t, {"p1", "p2", "p3", "p4"}, {"s1", "s2", "s3"});
  Eigen::MatrixXd r(4, 3);
  r << 1, 2, 4, 1, 1, 2, 1, 3, inf, 1, inf, 2;
  const std::vector<std::vector<std::pair<double, double>>> steps = {
      {{1.0, 1.0}},
      {{1.0, 0.25}, {2.0, 0.5}, {3.0, 0.75}},
      {{2.0, 0.5}, {4.0, 0.75}},
  };
  bool ok = p.ratios.rows() == 4 && p.ratios.cols() == 3 && (p.ratios.array() == r.array()).all();
  for (std::size_t s = 0; s < 3; ++s) ok = ok && p.curves[s].steps == steps[s];
  ok = ok && p.curves[1].at(2.5) == 0.5 && p.curves[2].at(1.0) == 0.0 && p.curves[2].at(100.0) == 0.75;

  const auto dir = std::filesystem::temp_directory_path();
  const std::string a = (dir / "setopt_profile_a.svg").string(), b = (dir / "setopt_profile_b.svg").string();
  write_file(a, profile_svg(p, "fixture"));
  write_file(b, profile_svg(profile(t, {"p1", "p2", "p3", "p4"}, {"s1", "s2", "s3"}), "fixture"));
  auto slurp = [](const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  };
  const std::string sa = slurp(a), sb = slurp(b);
  const bool same = !sa.empty() && sa == sb;
  std::filesystem::remove(a);
  std::filesystem::remove(b);
  report(8, "profile fixture", ok && same,
         fmt("ratios and curves %s, SVG %s (%zu bytes)", ok ? "match" : "differ", same ? "identical" : "differs",
             sa.size()));
}

}  // namespace

/// With arguments, only the listed criterion numbers run.
int main(int argc, char** argv)
{
  const std::vector<std::function<void()>> criteria = {cone_axioms,  dominance_oracle, grid_oracle, reduction_equivalence,
                                                         invariants, trends,           cone_change, profile_fixture};
  std::vector<bool> selected(criteria.size(), argc == 1);
  for (int i = 1; i < argc; ++i) {
    const int id = std::atoi(argv[i]);
    if (id >= 1 && id <= static_cast<int>(criteria.size())) selected[id - 1] = true;
  }
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (!selected[i]) continue;
    try {
      criteria[i]();
    } catch (const std::exception& e) {
      std::printf("FAIL [%zu] exception: %s\n", i + 1, e.what());
      ++failures;
    }
  }
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
