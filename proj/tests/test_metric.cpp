#include <gtest/gtest.h>

#include <cmath>

#include "homog/fixtures.hpp"
#include "homog/intrinsic_map.hpp"
#include "homog/metric.hpp"
#include "homog/random.hpp"
#include "oracles.hpp"

using namespace homog;

namespace
{

/// Hand-written d_inf on H^1 with unit weights.
double h1_dinf(const Eigen::Vector3d & p) { return std::max(std::hypot(p[0], p[1]), std::sqrt(std::abs(p[2]))); }

double h1_ck(const Eigen::Vector3d & p)
{
  const double z2 = p[0] * p[0] + p[1] * p[1];
  return std::pow(z2 * z2 + 16.0 * p[2] * p[2], 0.25);
}

Point random_point(Rng & rng, int q, double r = 1.5)
{
  return rng.uniform_vector(Eigen::VectorXd::Constant(q, -r), Eigen::VectorXd::Constant(q, r));
}

std::vector<DistanceSpec> builtin_distances()
{
  std::vector<DistanceSpec> out;
  for (const GradedAlgebra & g : {heisenberg1(), heisenberg2(), engel()}) {
    out.push_back(DistanceSpec::d_inf(g));
    out.push_back(DistanceSpec::custom(g, std::vector<double>(g.step(), 1.0), 2.0));
    if (is_heisenberg(g)) {
      out.push_back(DistanceSpec::cygan_koranyi(g));
    }
  }
  return out;
}

} // namespace

TEST(HomNorm, UnitHorizontalVector)
{
  const DistanceSpec d = DistanceSpec::d_inf(heisenberg1());
  EXPECT_DOUBLE_EQ(hom_norm(d, Point(Eigen::Vector3d(1, 0, 0))), 1.0);
}

TEST(HomNorm, ZeroHasNormZero)
{
  for (const auto & d : builtin_distances()) {
    EXPECT_EQ(hom_norm(d, Point(Point::Zero(d.algebra.dim()))), 0.0) << d.kind_name();
  }
}

TEST(HomNorm, DilationByThreeOfVerticalVector)
{
  const DistanceSpec d = DistanceSpec::d_inf(heisenberg1());
  const Point e3 = Eigen::Vector3d(0, 0, 1);
  EXPECT_NEAR(hom_norm(d, dilate(heisenberg1(), 3.0, e3)), 3.0 * hom_norm(d, e3), 1e-14);
}

TEST(HomNorm, MatchesHandWrittenFormulasOnH1)
{
  const DistanceSpec dinf = DistanceSpec::d_inf(heisenberg1());
  const DistanceSpec ck = DistanceSpec::cygan_koranyi(heisenberg1());
  Rng rng(3);
  for (int k = 0; k < 200; ++k) {
    const Eigen::Vector3d p = random_point(rng, 3);
    EXPECT_NEAR(hom_norm(dinf, p), h1_dinf(p), 1e-14);
    EXPECT_NEAR(hom_norm(ck, p), h1_ck(p), 1e-14);
  }
}

TEST(HomNorm, WeightsScaleLayers)
{
  const DistanceSpec d = DistanceSpec::d_inf(heisenberg1(), {1.0, 3.0});
  EXPECT_DOUBLE_EQ(hom_norm(d, Point(Eigen::Vector3d(0, 0, 4))), 6.0);
  EXPECT_DOUBLE_EQ(d.layer_bound(2, 6.0), 4.0);
}

TEST(HomNorm, CustomIsLrCombination)
{
  const DistanceSpec d = DistanceSpec::custom(heisenberg1(), {1.0, 2.0}, 2.0);
  const Point p = Eigen::Vector3d(3, 4, 1);
  EXPECT_NEAR(hom_norm(d, p), std::sqrt(25.0 + 4.0), 1e-14);
}

TEST(HomNorm, InverseSymmetry)
{
  Rng rng(11);
  for (const auto & d : builtin_distances()) {
    for (int k = 0; k < 200; ++k) {
      const Point x = random_point(rng, d.algebra.dim());
      EXPECT_NEAR(hom_norm(d, inverse(d.algebra, x)), hom_norm(d, x), 1e-12);
    }
  }
}

TEST(HomNorm, RejectsBadParameters)
{
  EXPECT_THROW(DistanceSpec::cygan_koranyi(engel()), std::invalid_argument);
  EXPECT_THROW(DistanceSpec::d_inf(heisenberg1(), {1.0}), std::invalid_argument);
  EXPECT_THROW(DistanceSpec::d_inf(heisenberg1(), {1.0, -1.0}), std::invalid_argument);
  EXPECT_THROW(DistanceSpec::custom(heisenberg1(), {1.0, 1.0}, 0.5), std::invalid_argument);
  EXPECT_THROW(parse_distance_kind("euclid"), std::invalid_argument);
  EXPECT_EQ(parse_distance_kind("dinf"), DistanceKind::d_inf);
}

TEST(Distance, SelfDistanceIsZero)
{
  Rng rng(5);
  for (const auto & d : builtin_distances()) {
    const Point x = random_point(rng, d.algebra.dim());
    EXPECT_NEAR(distance(d, x, x), 0.0, 1e-15);
  }
}

TEST(Distance, LeftInvariance)
{
  Rng rng(6);
  for (const auto & d : builtin_distances()) {
    for (int k = 0; k < 100; ++k) {
      const int q = d.algebra.dim();
      const Point x = random_point(rng, q);
      const Point y = random_point(rng, q);
      const Point z = random_point(rng, q);
      const GradedAlgebra & g = d.algebra;
      EXPECT_NEAR(distance(d, bch_multiply(g, z, x), bch_multiply(g, z, y)), distance(d, x, y), 1e-9);
    }
  }
}

TEST(Distance, LeftInvarianceAgainstClosedFormProduct)
{
  const DistanceSpec d = DistanceSpec::d_inf(heisenberg1());
  Rng rng(7);
  for (int k = 0; k < 100; ++k) {
    const Eigen::Vector3d x = random_point(rng, 3);
    const Eigen::Vector3d y = random_point(rng, 3);
    EXPECT_NEAR(distance(d, x, y), h1_dinf(oracle::h1_mul(-x, y)), 1e-12);
  }
}

TEST(Distance, Homogeneity)
{
  Rng rng(8);
  for (const auto & d : builtin_distances()) {
    const int q = d.algebra.dim();
    for (double t : {0.1, 0.5, 3.0}) {
      const Point x = random_point(rng, q);
      const Point y = random_point(rng, q);
      EXPECT_NEAR(distance(d, dilate(d.algebra, t, x), dilate(d.algebra, t, y)), t * distance(d, x, y), 1e-9);
    }
  }
}

TEST(Distance, BallNesting)
{
  const DistanceSpec d = DistanceSpec::cygan_koranyi(heisenberg1());
  Rng rng(9);
  const Point c = Eigen::Vector3d(0.3, -0.2, 0.1);
  for (int k = 0; k < 2000; ++k) {
    const Point p = random_point(rng, 3, 2.0);
    if (distance(d, c, p) <= 0.7) {
      EXPECT_LE(distance(d, c, p), 1.1);
    }
  }
}

TEST(Cone, SubgroupPointsAreInsideForEveryOpening)
{
  const GradedAlgebra g = heisenberg1();
  const DistanceSpec d = DistanceSpec::d_inf(g);
  const HomogeneousSubgroup W = vertical_subgroup(g);
  for (double alpha : {0.05, 0.5, 0.95}) {
    const Cone cone = make_cone(Point::Zero(3), W, alpha);
    EXPECT_TRUE(in_cone(Eigen::Vector3d(0, 0.4, -0.7), cone, d));
  }
}

TEST(Cone, VertexIsInside)
{
  const GradedAlgebra g = heisenberg1();
  const DistanceSpec d = DistanceSpec::d_inf(g);
  const Point v = Eigen::Vector3d(1, 2, 3);
  EXPECT_TRUE(in_cone(v, make_cone(v, vertical_subgroup(g), 0.3), d));
}

TEST(Cone, HorizontalPointOutsideVerticalCone)
{
  const GradedAlgebra g = heisenberg1();
  const DistanceSpec d = DistanceSpec::d_inf(g);
  const Cone cone = make_cone(Point::Zero(3), vertical_subgroup(g), 0.5);
  EXPECT_FALSE(in_cone(Eigen::Vector3d(1, 0, 0), cone, d));
  // The closest vertical point to (1,0,0) is the identity: dist = 1.
  EXPECT_NEAR(distance_to_subgroup(d, Eigen::Vector3d(1, 0, 0), vertical_subgroup(g)).value, 1.0, 1e-6);
}

TEST(Cone, OpeningMustBeInUnitInterval)
{
  const GradedAlgebra g = heisenberg1();
  EXPECT_THROW(make_cone(Point::Zero(3), vertical_subgroup(g), 0.0), std::invalid_argument);
  EXPECT_THROW(make_cone(Point::Zero(3), vertical_subgroup(g), 1.0), std::invalid_argument);
}

TEST(C0, AtMostOne)
{
  for (const GradedAlgebra & g : {heisenberg1(), heisenberg2(), engel()}) {
    const C0Estimate c = estimate_c0(vertical_horizontal_couple(g), DistanceSpec::d_inf(g), 4000, 1);
    EXPECT_LE(c.value, 1.0 + 1e-12);
    EXPECT_GT(c.value, 0.0);
  }
}

TEST(C0, DegenerateCoupleRejected)
{
  const GradedAlgebra g = heisenberg1();
  const ComplementaryCouple c =
    ComplementaryCouple::validate(HomogeneousSubgroup::whole(g), HomogeneousSubgroup::trivial(g));
  EXPECT_THROW(estimate_c0(c, DistanceSpec::d_inf(g), 100, 1), std::invalid_argument);
}

TEST(C0, StableAcrossSeedsAndMatchesDenseGrid)
{
  const GradedAlgebra g = heisenberg1();
  const DistanceSpec d = DistanceSpec::d_inf(g);
  const ComplementaryCouple c = vertical_horizontal_couple(g);
  // Dense oracle: w = (0,y,s), v = (x,0,0) on a grid, ratio ||wv|| / (||w|| + ||v||).
  double oracle_min = 1.0;
  const int N = 101;
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) {
      for (int k = 0; k < N; ++k) {
        const Eigen::Vector3d w(0.0, -1.0 + 2.0 * i / (N - 1), -1.0 + 2.0 * j / (N - 1));
        const Eigen::Vector3d v(-1.0 + 2.0 * k / (N - 1), 0.0, 0.0);
        const double den = h1_dinf(w) + h1_dinf(v);
        if (den > 1e-9) {
          oracle_min = std::min(oracle_min, h1_dinf(oracle::h1_mul(w, v)) / den);
        }
      }
    }
  }
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const C0Estimate e = estimate_c0(c, d, 20000, seed);
    EXPECT_NEAR(e.value, oracle_min, 0.05 * oracle_min) << "seed " << seed;
  }
}

TEST(C0, SandwichAndProjectionEstimate)
{
  const GradedAlgebra g = heisenberg1();
  const DistanceSpec d = DistanceSpec::d_inf(g);
  const ComplementaryCouple c = vertical_horizontal_couple(g);
  const double c0 = estimate_c0(c, d, 20000, 4).value;
  Rng rng(12);
  for (int k = 0; k < 100; ++k) {
    const Point w = c.W().point(random_point(rng, 2));
    const Point v = c.V().point(random_point(rng, 1));
    const double n = hom_norm(d, bch_multiply(g, w, v));
    EXPECT_LE(n, hom_norm(d, w) + hom_norm(d, v) + 1e-12);
    EXPECT_GE(n, 0.99 * c0 * (hom_norm(d, w) + hom_norm(d, v)));
  }
  for (int k = 0; k < 20; ++k) {
    const Point x = random_point(rng, 3);
    const double pv = hom_norm(d, c.project_V(x));
    const double dist = distance_to_subgroup(d, x, c.W()).value;
    EXPECT_LE(dist, pv * (1 + 1e-6) + 1e-9);
    EXPECT_GE(dist, 0.99 * c0 * pv);
  }
}

TEST(ValidateDistance, CyganKoranyiIsValid)
{
  const DistanceValidation r = validate_homogeneous_distance(DistanceSpec::cygan_koranyi(heisenberg1()), 20000, 1);
  EXPECT_TRUE(r.ok()) << r.worst_triangle;
}

TEST(ValidateDistance, UnitDinfIsValidOnH1)
{
  EXPECT_TRUE(validate_homogeneous_distance(DistanceSpec::d_inf(heisenberg1()), 20000, 1).ok());
}

TEST(ValidateDistance, HeavyVerticalWeightBreaksTriangle)
{
  const DistanceSpec d = DistanceSpec::custom(heisenberg1(), {1.0, 5.0}, 2.0);
  const DistanceValidation r = validate_homogeneous_distance(d, 20000, 1);
  ASSERT_GT(r.worst_triangle, 0.0);
  // The reported triple really violates the triangle inequality.
  EXPECT_GT(distance(d, r.worst_x, r.worst_z), distance(d, r.worst_x, r.worst_y) + distance(d, r.worst_y, r.worst_z));
  EXPECT_FALSE(r.ok());
}

TEST(ValidateDistance, NoSamplesGivesEmptyReport)
{
  EXPECT_TRUE(validate_homogeneous_distance(DistanceSpec::d_inf(heisenberg1()), 0, 1).empty());
}
