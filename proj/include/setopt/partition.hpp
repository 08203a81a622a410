#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "setopt/cone.hpp"
#include "setopt/problem.hpp"

namespace setopt {

using IndexSet = std::vector<Eigen::Index>;
/// a = (a_1, ..., a_omega), one component index per group.
using PartitionElement = std::vector<Eigen::Index>;

struct MinimalIndices
{
  IndexSet min_idx;
  IndexSet wmin_idx;
};

/**
 * K-minimal and weakly K-minimal rows of `values` (one vector per row).
 *
 * Row i is minimal when no other row j satisfies values[j] <=_K values[i]
 * with values[j] != values[i]; rows that are equal within the cone tolerance
 * never dominate each other. Row i is weakly minimal when no row is strictly
 * smaller in int K.
 */
template <typename Derived, typename Scalar>
MinimalIndices minimal_elements(const Eigen::MatrixBase<Derived>& values, const BasicCone<Scalar>& cone)
{
  const Eigen::Index count = values.rows();
  // Row j of `scores` holds W * values[j]; comparisons then reduce to coefficient tests.
  const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> scores = values * cone.normals().transpose();
  const Scalar tol = cone.tolerance();

  MinimalIndices out;
  for (Eigen::Index i = 0; i < count; ++i) {
    bool minimal = true, weakly = true;
    for (Eigen::Index j = 0; j < count && weakly; ++j) {
      if (j == i) continue;
      const auto diff = (scores.row(i) - scores.row(j)).eval();
      const Scalar lowest = diff.minCoeff();
      if (lowest > tol) weakly = false;
      if (minimal && lowest >= -tol && (values.row(i) - values.row(j)).cwiseAbs().maxCoeff() > tol) minimal = false;
    }
    if (weakly) out.wmin_idx.push_back(i);
    if (minimal && weakly) out.min_idx.push_back(i);
  }
  return out;
}

struct MinimalStructure
{
  std::vector<Eigen::VectorXd> values;  ///< distinct weakly minimal vectors v_1..v_omega
  std::vector<IndexSet> groups;         ///< active index set of each v_j
  Eigen::Index omega = 0;
  bool is_regular_hint = false;         ///< Min == WMin at this point

  /// |P_x| = product of the group sizes (saturates at SIZE_MAX).
  std::size_t partition_size() const;
};

constexpr double kDefaultValueTolerance = 1e-8;
constexpr std::size_t kDefaultPartitionCap = 4096;

/// Groups the weakly minimal rows of `values` by l-infinity closeness tol * (1 + |v|_inf).
MinimalStructure minimal_structure(const Eigen::MatrixXd& values, const Cone& cone,
                                   double value_tol = kDefaultValueTolerance);

MinimalStructure minimal_structure(const SetValuedProblem& problem, const Cone& cone, const Eigen::VectorXd& x,
                                   double value_tol = kDefaultValueTolerance);

/**
 * Lexicographic enumeration of the Cartesian product of the groups.
 *
 *   PartitionIterator it(structure);
 *   PartitionElement a;
 *   while (it.next(a)) use(a);
 *
 * Construction throws PartitionCapError when the product exceeds `cap`.
 */
class PartitionIterator
{
public:
  explicit PartitionIterator(const MinimalStructure& structure, std::size_t cap = kDefaultPartitionCap);

  std::size_t size() const noexcept { return size_; }
  /// Writes the next tuple into `a`; false once exhausted.
  bool next(PartitionElement& a);

private:
  const std::vector<IndexSet>* groups_;
  std::vector<std::size_t> cursor_;
  std::size_t size_ = 0;
  std::size_t emitted_ = 0;
};

/// All of P_x in lexicographic order.
std::vector<PartitionElement> partition_set(const MinimalStructure& structure, std::size_t cap = kDefaultPartitionCap);

}  // namespace setopt
