#pragma once

#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "setopt/errors.hpp"
#include "setopt/minmax_qp.hpp"

namespace setopt {

enum class ConeRegion
{
  InteriorNegK,
  BoundaryNegK,
  ExteriorNegK,
};

/**
 * Polyhedral ordering cone K = { y : w_j' y >= 0 for all j }.
 *
 * The dual normals are rescaled to unit l1 norm, which fixes the scale of the
 * scalarization  max_j w_j' y . For the nonnegative orthant with w_j = e_j this
 * is the max-coordinate function, i.e. the l-infinity oriented distance to -K.
 *
 * Construction rejects cones that are not solid (0 in conv{w_j}) or not
 * pointed (the normals do not span R^m). Immutable afterwards.
 */
template <typename Scalar>
class BasicCone
{
public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  static constexpr Scalar default_tolerance = Scalar(1e-10);

  /// Each row of `dual_normals` is one halfspace normal.
  explicit BasicCone(Matrix dual_normals, Scalar tolerance = default_tolerance)
      : normals_(std::move(dual_normals)), tolerance_(tolerance)
  {
    if (normals_.rows() == 0 || normals_.cols() == 0) throw InvalidConeError("cone needs at least one dual normal");
    if (!(tolerance_ >= 0)) throw InvalidConeError("cone tolerance must be nonnegative");
    if (!normals_.allFinite()) throw InvalidConeError("cone normals must be finite");
    for (Eigen::Index j = 0; j < normals_.rows(); ++j) {
      const Scalar l1 = normals_.row(j).template lpNorm<1>();
      if (l1 == 0) throw InvalidConeError("dual normal " + std::to_string(j) + " is zero");
      normals_.row(j) /= l1;
    }

    // Gordan: K has interior iff 0 is not in conv{w_j}; the min-norm point is an interior direction.
    const Eigen::Index m = normals_.cols();
    const Vector inf = Vector::Constant(m, std::numeric_limits<Scalar>::infinity());
    const auto hull = solve_linear_minmax<Scalar>(normals_, Vector::Zero(normals_.rows()), -inf, inf);
    interior_point_ = -hull.s;
    if (interior_point_.norm() <= Scalar(1e-9) || (normals_ * interior_point_).minCoeff() <= 0)
      throw InvalidConeError("cone has empty interior");

    Eigen::ColPivHouseholderQR<Matrix> qr(normals_);
    if (qr.rank() < m) throw InvalidConeError("cone is not pointed");
  }

  static BasicCone orthant(Eigen::Index m) { return BasicCone(Matrix::Identity(m, m)); }

  /// {y in R^2_+ : y2 <= 3 y1, y1 <= 3 y2}
  static BasicCone k2prime()
  {
    Matrix w(2, 2);
    w << 3, -1, -1, 3;
    return BasicCone(w);
  }

  Eigen::Index dim() const noexcept { return normals_.cols(); }
  Eigen::Index num_normals() const noexcept { return normals_.rows(); }
  const Matrix& normals() const noexcept { return normals_; }
  Scalar tolerance() const noexcept { return tolerance_; }
  const Vector& interior_point() const noexcept { return interior_point_; }

  template <typename Derived>
  Scalar scalarize(const Eigen::MatrixBase<Derived>& y) const
  {
    return (normals_ * y).maxCoeff();
  }

  template <typename Derived>
  ConeRegion classify(const Eigen::MatrixBase<Derived>& y) const
  {
    const Scalar v = scalarize(y);
    if (v < -tolerance_) return ConeRegion::InteriorNegK;
    if (std::abs(v) <= tolerance_) return ConeRegion::BoundaryNegK;
    return ConeRegion::ExteriorNegK;
  }

  /// y <=_K z
  template <typename D1, typename D2>
  bool leq(const Eigen::MatrixBase<D1>& y, const Eigen::MatrixBase<D2>& z) const
  {
    return (normals_ * (z - y)).minCoeff() >= -tolerance_;
  }

  /// y <_K z  (z - y in int K)
  template <typename D1, typename D2>
  bool lt(const Eigen::MatrixBase<D1>& y, const Eigen::MatrixBase<D2>& z) const
  {
    return (normals_ * (z - y)).minCoeff() > tolerance_;
  }

private:
  Matrix normals_;
  Scalar tolerance_;
  Vector interior_point_;
};

using Cone = BasicCone<double>;

/// Parses a preset name: "orthant:m" or "k2prime".
Cone cone_from_preset(const std::string& name);

}  // namespace setopt
