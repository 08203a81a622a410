#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>

#include <doctest.h>

#include "setopt/bench.hpp"
#include "setopt/errors.hpp"

using namespace setopt;

namespace {

std::string temp_path(const std::string& name)
{
  const auto p = std::filesystem::temp_directory_path() / ("setopt_test_" + name);
  std::filesystem::remove(p);
  return p.string();
}

const double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

TEST_CASE("sampling")
{
  const Box box = Box::uniform(3, -2.0, 5.0);
  CHECK(sample_points(box, 0, 1).empty());
  const auto a = sample_points(box, 50, 42), b = sample_points(box, 50, 42), c = sample_points(box, 50, 43);
  REQUIRE(a.size() == 50);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(box.contains(a[i]));
    CHECK(a[i] == b[i]);
  }
  CHECK(a[0] != c[0]);
  // Prefix stability: point i depends only on (seed, i).
  CHECK(sample_points(box, 10, 42)[7] == a[7]);
  CHECK(fnv1a("") == 0xcbf29ce484222325ULL);
}

TEST_CASE("run matrix is resumable")
{
  const std::string store = temp_path("store.jsonl");
  ExperimentConfig config;
  config.problem_ids = {"dgo1_n1_m2"};
  config.algorithms = {"trm", "sd"};
  config.points_per_problem = 3;
  config.it_max = 20;
  CHECK(run_matrix(config, store) == 6);
  CHECK(load_store(store).size() == 6);
  CHECK(run_matrix(config, store) == 0);

  // A truncated final line is dropped and recomputed.
  {
    std::ofstream out(store, std::ios::app);
    out << "{\"problem\": \"dgo1_n1_m2\", \"algo";
  }
  CHECK(load_store(store).size() == 6);

  config.points_per_problem = 4;
  CHECK(run_matrix(config, store) == 2);
  const auto records = load_store(store);
  CHECK(records.size() == 8);

  const MetricsTable table = build_table(records);
  CHECK(table.problems == std::vector<std::string>{"dgo1_n1_m2"});
  CHECK(table.cells[0][0].runs == 4);
  CHECK(!table_csv(table).empty());
  std::filesystem::remove(store);
}

TEST_CASE("summary JSON round trip")
{
  RunSummary s;
  s.problem = "p";
  s.algorithm = "avg";
  s.point_index = 7;
  s.converged = true;
  s.iterations = 12;
  s.wall_time = 0.25;
  s.mean_step_size = 0.5;
  s.final_t = -1e-4;
  s.x0 = Eigen::Vector2d(1, 2);
  s.final_point = Eigen::Vector2d(3, 4);
  const RunSummary back = summary_from_json(summary_to_json(s));
  CHECK(back.problem == s.problem);
  CHECK(back.point_index == 7);
  CHECK(back.iterations == 12);
  CHECK(back.final_t == s.final_t);
  CHECK(back.final_point == s.final_point);
}

TEST_CASE("profile ratios and curves")
{
  Eigen::MatrixXd t(1, 3);
  t << 2, 4, 8;
  ProfileSet p = profile(t, {"p0"}, {"a", "b", "c"});
  CHECK(p.ratios(0, 0) == 1.0);
  CHECK(p.ratios(0, 1) == 2.0);
  CHECK(p.ratios(0, 2) == 4.0);

  Eigen::MatrixXd two(2, 2);
  two << 1, 2, 3, 3;
  p = profile(two, {"p0", "p1"}, {"a", "b"});
  CHECK(p.curves[0].at(1.0) == 1.0);
  CHECK(p.curves[1].at(1.0) == 0.5);
  CHECK(p.curves[1].at(1.99) == 0.5);
  CHECK(p.curves[1].at(2.0) == 1.0);

  // Best value zero: shift by one.
  Eigen::MatrixXd zero(1, 2);
  zero << 0, 3;
  p = profile(zero, {"p"}, {"a", "b"});
  CHECK(p.ratios(0, 1) == 4.0);

  Eigen::MatrixXd undefined(1, 2);
  undefined << 1, kNaN;
  p = profile(undefined, {"p"}, {"a", "b"});
  CHECK(std::isinf(p.ratios(0, 1)));
  CHECK(p.curves[1].at(1e9) == 0.0);

  CHECK_THROWS_AS(profile(Eigen::MatrixXd::Constant(2, 2, kNaN), {"p", "q"}, {"a", "b"}), Error);
}

TEST_CASE("SVG output is deterministic")
{
  Eigen::MatrixXd t(3, 2);
  t << 1, 2, 3, 3, 5, kNaN;
  const ProfileSet p = profile(t, {"x", "y", "z"}, {"a", "b"});
  const std::string s1 = profile_svg(p, "iterations"), s2 = profile_svg(p, "iterations");
  CHECK(s1 == s2);
  CHECK(s1.rfind("<svg", 0) == 0);
  CHECK(s1.find("</svg>") != std::string::npos);
}

TEST_CASE("experiment config")
{
  nlohmann::json j = {{"problem_ids", "all"}, {"points_per_problem", 5}, {"algorithms", {"trm", "max"}}};
  const ExperimentConfig c = experiment_from_json(j);
  CHECK(c.problem_ids.size() == 22);
  CHECK(c.points_per_problem == 5);
  CHECK(experiment_from_json(experiment_to_json(c)).algorithms == c.algorithms);
  CHECK(metric_from_string(to_string(Metric::InvStepSize)) == Metric::InvStepSize);
}
