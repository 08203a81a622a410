#include <random>

#include <doctest.h>

#include "setopt/cone.hpp"
#include "setopt/errors.hpp"
#include "setopt/io.hpp"

using namespace setopt;

namespace {

Eigen::Vector2d v2(double a, double b) { return Eigen::Vector2d(a, b); }

}  // namespace

TEST_CASE("scalarize on the orthant is the max coordinate")
{
  const Cone k2 = Cone::orthant(2);
  CHECK(k2.scalarize(v2(-1, -2)) == -1.0);
  CHECK(k2.scalarize(v2(0, -3)) == 0.0);
  CHECK(Cone::orthant(3).scalarize(Eigen::Vector3d(3, -2, 1)) == 3.0);
}

TEST_CASE("classify")
{
  const Cone k = Cone::orthant(2);
  CHECK(k.classify(v2(0, 0)) == ConeRegion::BoundaryNegK);
  CHECK(k.classify(v2(-1, -1)) == ConeRegion::InteriorNegK);
  CHECK(k.classify(v2(1, -1)) == ConeRegion::ExteriorNegK);
  CHECK(k.classify(v2(-1e-11, 0)) == ConeRegion::BoundaryNegK);
}

TEST_CASE("leq and lt")
{
  const Cone k = Cone::orthant(2);
  CHECK(k.leq(v2(1, 1), v2(2, 3)));
  CHECK(k.lt(v2(1, 1), v2(2, 3)));
  CHECK(k.leq(v2(1, 4), v2(1, 4)));
  CHECK_FALSE(k.lt(v2(1, 4), v2(1, 4)));
  CHECK_FALSE(k.leq(v2(0, 2), v2(1, 1)));
  CHECK_FALSE(k.leq(v2(1, 1), v2(0, 2)));
}

TEST_CASE("normals are l1-normalized")
{
  const Cone k = Cone::k2prime();
  CHECK(k.normals()(0, 0) == doctest::Approx(0.75));
  CHECK(k.normals()(0, 1) == doctest::Approx(-0.25));
  CHECK(k.normals()(1, 0) == doctest::Approx(-0.25));
  CHECK(k.normals()(1, 1) == doctest::Approx(0.75));
  // (1, 1) is interior, (1, 4) lies outside K2' but inside the orthant.
  CHECK(k.lt(v2(0, 0), v2(1, 1)));
  CHECK_FALSE(k.leq(v2(0, 0), v2(1, 4)));
  CHECK(Cone::orthant(2).leq(v2(0, 0), v2(1, 4)));
}

TEST_CASE("invalid cones are rejected")
{
  Eigen::MatrixXd opposite(2, 2);
  opposite << 1, 0, -1, 0;
  CHECK_THROWS_AS(Cone{opposite}, InvalidConeError);
  Eigen::MatrixXd flat(1, 2);
  flat << 1, 0;
  CHECK_THROWS_AS(Cone{flat}, InvalidConeError);  // half-plane: not pointed
  Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(1, 2);
  CHECK_THROWS_AS(Cone{zero}, InvalidConeError);
  // These four normals force K = {0}.
  Eigen::MatrixXd degenerate(4, 2);
  degenerate << 1, 0, 0, 1, 1, -3, -3, 1;
  CHECK_THROWS_AS(Cone{degenerate}, InvalidConeError);
}

TEST_CASE("interior point is strictly inside")
{
  for (const Cone& k : {Cone::orthant(3), Cone::k2prime()})
    CHECK((k.normals() * k.interior_point()).minCoeff() > 0);
}

TEST_CASE("float instantiation")
{
  const BasicCone<float> k = BasicCone<float>::orthant(2);
  CHECK(k.scalarize(Eigen::Vector2f(-1.f, 2.f)) == 2.f);
}

TEST_CASE("presets and JSON round trip")
{
  CHECK(cone_from_preset("orthant:4").dim() == 4);
  CHECK(cone_from_preset("k2prime").num_normals() == 2);
  CHECK_THROWS_AS(cone_from_preset("orthant:x"), InvalidConeError);
  CHECK_THROWS_AS(cone_from_preset("ice-cream"), InvalidConeError);
  const Cone k = Cone::k2prime();
  const Cone back = cone_from_json(cone_to_json(k));
  CHECK((back.normals() - k.normals()).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("scalarization properties on random vectors")
{
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-5, 5);
  for (const Cone& k : {Cone::orthant(2), Cone::k2prime()}) {
    for (int trial = 0; trial < 2000; ++trial) {
      const Eigen::Vector2d y(u(rng), u(rng)), z(u(rng), u(rng));
      CHECK(k.scalarize(y + z) <= k.scalarize(y) + k.scalarize(z) + 1e-12);
      CHECK(std::abs(k.scalarize(y) - k.scalarize(z)) <= (y - z).lpNorm<Eigen::Infinity>() + 1e-12);
      if (k.leq(y, z)) CHECK(k.scalarize(y) <= k.scalarize(z) + 1e-12);
    }
  }
}
