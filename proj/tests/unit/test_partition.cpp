#include <random>

#include <doctest.h>

#include "setopt/errors.hpp"
#include "setopt/partition.hpp"

using namespace setopt;

namespace {

Eigen::MatrixXd rows(std::initializer_list<std::initializer_list<double>> data)
{
  Eigen::MatrixXd m(data.size(), data.begin()->size());
  Eigen::Index r = 0;
  for (const auto& row : data) {
    Eigen::Index c = 0;
    for (const double v : row) m(r, c++) = v;
    ++r;
  }
  return m;
}

/// Exhaustive pairwise oracle, written directly from the definitions with halfspace tests.
MinimalIndices oracle(const Eigen::MatrixXd& a, const Cone& k)
{
  MinimalIndices out;
  const double tol = k.tolerance();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    bool dominated = false, strictly = false;
    for (Eigen::Index j = 0; j < a.rows(); ++j) {
      const Eigen::VectorXd gap = k.normals() * (a.row(i) - a.row(j)).transpose();
      const bool equal = (a.row(i) - a.row(j)).cwiseAbs().maxCoeff() <= tol;
      if (j != i && (gap.array() >= -tol).all() && !equal) dominated = true;
      if (j != i && (gap.array() > tol).all()) strictly = true;
    }
    if (!dominated) out.min_idx.push_back(i);
    if (!strictly) out.wmin_idx.push_back(i);
  }
  return out;
}

}  // namespace

TEST_CASE("minimal elements: examples")
{
  const Cone k = Cone::orthant(2);
  MinimalIndices r = minimal_elements(rows({{1, 2}, {2, 1}, {3, 3}}), k);
  CHECK(r.min_idx == IndexSet{0, 1});
  CHECK(r.wmin_idx == IndexSet{0, 1});

  r = minimal_elements(rows({{4, 4}}), k);
  CHECK(r.min_idx == IndexSet{0});
  CHECK(r.wmin_idx == IndexSet{0});

  r = minimal_elements(rows({{0, 0}, {0, 0}, {1, 1}}), k);
  CHECK(r.min_idx == IndexSet{0, 1});
  CHECK(r.wmin_idx == IndexSet{0, 1});

  // (0, 1) is weakly but not properly minimal next to (0, 0).
  r = minimal_elements(rows({{0, 0}, {0, 1}, {2, 2}}), k);
  CHECK(r.min_idx == IndexSet{0});
  CHECK(r.wmin_idx == IndexSet{0, 1});
}

TEST_CASE("minimal elements match the pairwise oracle on random sets")
{
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> size(1, 10), grid(0, 4);
  for (int trial = 0; trial < 2000; ++trial) {
    const int m = 2 + trial % 3;
    const Cone k = (m == 2 && trial % 2) ? Cone::k2prime() : Cone::orthant(m);
    Eigen::MatrixXd a(size(rng), m);
    for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = grid(rng);  // coarse grid forces ties
    const MinimalIndices got = minimal_elements(a, k), want = oracle(a, k);
    CHECK(got.min_idx == want.min_idx);
    CHECK(got.wmin_idx == want.wmin_idx);
  }
}

TEST_CASE("minimal structure groups equal values")
{
  const Cone k = Cone::orthant(2);
  MinimalStructure s = minimal_structure(rows({{0, 0}, {0, 0}, {5, 5}}), k);
  CHECK(s.omega == 1);
  REQUIRE(s.groups.size() == 1);
  CHECK(s.groups[0] == IndexSet{0, 1});

  s = minimal_structure(rows({{3, 1}}), k);
  CHECK(s.omega == 1);
  CHECK(s.groups[0] == IndexSet{0});

  s = minimal_structure(rows({{1, 2}, {2, 1}, {1, 2 + 1e-12}, {3, 3}}), k);
  CHECK(s.omega == 2);
  CHECK(s.groups[0] == IndexSet{0, 2});
  CHECK(s.groups[1] == IndexSet{1});
  CHECK(s.partition_size() == 2);
  CHECK(s.is_regular_hint);

  const MinimalStructure again = minimal_structure(rows({{1, 2}, {2, 1}, {1, 2 + 1e-12}, {3, 3}}), k);
  CHECK(again.groups == s.groups);
}

TEST_CASE("partition iteration is lexicographic and capped")
{
  MinimalStructure s;
  s.groups = {{1, 2}, {3}};
  s.omega = 2;
  CHECK(partition_set(s) == std::vector<PartitionElement>{{1, 3}, {2, 3}});

  s.groups = {{1}};
  CHECK(partition_set(s) == std::vector<PartitionElement>{{1}});

  s.groups = {{1, 2}, {3, 4}, {5}};
  const auto all = partition_set(s);
  CHECK(all.size() == 4);
  CHECK(all == std::vector<PartitionElement>{{1, 3, 5}, {1, 4, 5}, {2, 3, 5}, {2, 4, 5}});

  s.groups.assign(13, IndexSet{0, 1});  // 8192 > 4096
  CHECK_THROWS_AS(PartitionIterator{s}, PartitionCapError);
  try {
    PartitionIterator it(s);
  } catch (const PartitionCapError& e) {
    CHECK(e.cardinality() == 8192);
  }
  CHECK(PartitionIterator(s, 10000).size() == 8192);
}
