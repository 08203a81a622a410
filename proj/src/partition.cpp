#include "setopt/partition.hpp"

#include <limits>

#include "setopt/errors.hpp"

namespace setopt {

std::size_t MinimalStructure::partition_size() const
{
  std::size_t total = 1;
  for (const auto& g : groups) {
    if (g.empty()) return 0;
    if (total > std::numeric_limits<std::size_t>::max() / g.size()) return std::numeric_limits<std::size_t>::max();
    total *= g.size();
  }
  return total;
}

MinimalStructure minimal_structure(const Eigen::MatrixXd& values, const Cone& cone, double value_tol)
{
  const MinimalIndices idx = minimal_elements(values, cone);
  MinimalStructure out;
  for (const Eigen::Index i : idx.wmin_idx) {
    const Eigen::VectorXd v = values.row(i).transpose();
    bool placed = false;
    for (std::size_t g = 0; g < out.values.size(); ++g) {
      const Eigen::VectorXd& rep = out.values[g];
      if ((v - rep).lpNorm<Eigen::Infinity>() <= value_tol * (1.0 + rep.lpNorm<Eigen::Infinity>())) {
        out.groups[g].push_back(i);
        placed = true;
        break;
      }
    }
    if (!placed) {
      out.values.push_back(v);
      out.groups.push_back({i});
    }
  }
  out.omega = static_cast<Eigen::Index>(out.values.size());
  out.is_regular_hint = idx.min_idx == idx.wmin_idx;
  return out;
}

MinimalStructure minimal_structure(const SetValuedProblem& problem, const Cone& cone, const Eigen::VectorXd& x,
                                   double value_tol)
{
  return minimal_structure(eval_F(problem, x), cone, value_tol);
}

PartitionIterator::PartitionIterator(const MinimalStructure& structure, std::size_t cap)
    : groups_(&structure.groups), cursor_(structure.groups.size(), 0), size_(structure.partition_size())
{
  if (size_ > cap) throw PartitionCapError(size_, cap);
}

bool PartitionIterator::next(PartitionElement& a)
{
  if (emitted_ >= size_) return false;
  const auto& groups = *groups_;
  a.resize(groups.size());
  for (std::size_t j = 0; j < groups.size(); ++j) a[j] = groups[j][cursor_[j]];
  ++emitted_;
  // Odometer increment, last position fastest.
  for (std::size_t j = groups.size(); j-- > 0;) {
    if (++cursor_[j] < groups[j].size()) break;
    cursor_[j] = 0;
  }
  return true;
}

std::vector<PartitionElement> partition_set(const MinimalStructure& structure, std::size_t cap)
{
  PartitionIterator it(structure, cap);
  std::vector<PartitionElement> out;
  out.reserve(it.size());
  PartitionElement a;
  while (it.next(a)) out.push_back(a);
  return out;
}

}  // namespace setopt
