#include <gtest/gtest.h>

#include <random>

#include "homog/algebra.hpp"
#include "homog/fixtures.hpp"
#include "homog/random.hpp"
#include "oracles.hpp"

using namespace homog;

namespace
{

Point random_point(Rng & rng, int q, double r = 2.0)
{
  return rng.uniform_vector(Eigen::VectorXd::Constant(q, -r), Eigen::VectorXd::Constant(q, r));
}

bool has_violation(const ValidationReport & r, const std::string & axiom, std::vector<int> idx)
{
  for (const auto & v : r.violations) {
    if (v.axiom == axiom && v.indices == idx) {
      return true;
    }
  }
  return false;
}

std::vector<GradedAlgebra> fixtures() { return {heisenberg1(), heisenberg2(), engel()}; }

} // namespace

TEST(ValidateSpec, HeisenbergIsValid) { EXPECT_TRUE(validate_spec(heisenberg1_spec()).ok()); }

TEST(ValidateSpec, EngelIsValid) { EXPECT_TRUE(validate_spec(engel_spec()).ok()); }

TEST(ValidateSpec, SymmetricPairIsAntisymmetryViolation)
{
  AlgebraSpec s{{2, 1}, {{1, 2, 3, 1.0}, {2, 1, 3, 1.0}}};
  const ValidationReport r = validate_spec(s);
  ASSERT_FALSE(r.ok());
  EXPECT_TRUE(has_violation(r, "antisymmetry", {1, 2, 3}));
}

TEST(ValidateSpec, ConsistentMirrorEntryIsAccepted)
{
  AlgebraSpec s{{2, 1}, {{1, 2, 3, 1.0}, {2, 1, 3, -1.0}}};
  EXPECT_TRUE(validate_spec(s).ok());
}

TEST(ValidateSpec, GradingViolation)
{
  // [e1,e2] landing back in layer 1.
  AlgebraSpec s{{2, 1}, {{1, 2, 1, 1.0}}};
  const ValidationReport r = validate_spec(s);
  EXPECT_TRUE(has_violation(r, "grading", {1, 2, 1}));
}

TEST(ValidateSpec, JacobiViolation)
{
  // Free step-2 algebra on three generators plus one bracket into layer 3
  // that breaks Jacobi on (e1,e2,e3).
  AlgebraSpec s{{3, 3, 1}, {{1, 2, 4, 1.0}, {2, 3, 5, 1.0}, {3, 1, 6, 1.0}, {1, 5, 7, 1.0}}};
  // Jacobi(e1,e2,e3) = [e1,[e2,e3]] + [e2,[e3,e1]] + [e3,[e1,e2]] = [e1,e5] = e7 != 0.
  const ValidationReport r = validate_spec(s);
  EXPECT_TRUE(has_violation(r, "jacobi", {1, 2, 3}));
}

TEST(ValidateSpec, IndexOutOfRange)
{
  AlgebraSpec s{{2, 1}, {{1, 2, 4, 1.0}}};
  EXPECT_TRUE(has_violation(validate_spec(s), "index", {1, 2, 4}));
}

TEST(ValidateSpec, StepAboveSixRejected)
{
  AlgebraSpec s{{1, 1, 1, 1, 1, 1, 1}, {}};
  const ValidationReport r = validate_spec(s);
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.violations.front().axiom, "step");
  EXPECT_THROW(GradedAlgebra::from_spec(s), std::invalid_argument);
}

TEST(ValidateSpec, ReportIsNotAnException)
{
  AlgebraSpec s{{0}, {}};
  EXPECT_NO_THROW(validate_spec(s));
  EXPECT_FALSE(validate_spec(s).ok());
}

TEST(Algebra, DerivedDimensions)
{
  const GradedAlgebra g = engel();
  EXPECT_EQ(g.dim(), 4);
  EXPECT_EQ(g.step(), 3);
  EXPECT_EQ(g.layer_begin(2), 2);
  EXPECT_EQ(g.layer_begin(4), 4);
  EXPECT_EQ(g.homogeneous_dim(), 1 * 2 + 2 * 1 + 3 * 1);
  EXPECT_EQ(heisenberg2().homogeneous_dim(), 6);
}

TEST(Bracket, HeisenbergDefiningRelation)
{
  const GradedAlgebra g = heisenberg1();
  EXPECT_TRUE(bracket(g, basis_vector(g, 1), basis_vector(g, 2)).isApprox(basis_vector(g, 3)));
  EXPECT_TRUE(bracket(g, basis_vector(g, 2), basis_vector(g, 1)).isApprox(-basis_vector(g, 3)));
}

TEST(Bracket, SelfBracketVanishes)
{
  Rng rng(1);
  for (const auto & g : fixtures()) {
    const Point x = random_point(rng, g.dim());
    EXPECT_LT(bracket(g, x, x).cwiseAbs().maxCoeff(), 1e-15);
  }
}

TEST(Bracket, EngelStructureConstant)
{
  const GradedAlgebra g = engel();
  EXPECT_TRUE(bracket(g, basis_vector(g, 1), basis_vector(g, 3)).isApprox(basis_vector(g, 4)));
}

TEST(Bracket, DimensionMismatchThrows)
{
  const GradedAlgebra g = heisenberg1();
  EXPECT_THROW(bracket(g, Eigen::VectorXd::Zero(2), Eigen::VectorXd::Zero(3)), std::invalid_argument);
}

TEST(Bracket, MatchesHandWrittenEngelBracket)
{
  Rng rng(2);
  const GradedAlgebra g = engel();
  for (int k = 0; k < 100; ++k) {
    const Eigen::Vector4d x = random_point(rng, 4);
    const Eigen::Vector4d y = random_point(rng, 4);
    EXPECT_LT((bracket(g, x, y) - oracle::engel_bracket(x, y)).cwiseAbs().maxCoeff(), 1e-14);
  }
}

TEST(BchMultiply, HeisenbergExample)
{
  const GradedAlgebra g = heisenberg1();
  const Point z = bch_multiply(g, Eigen::Vector3d(1, 0, 0), Eigen::Vector3d(0, 1, 0));
  EXPECT_LT((z - Eigen::Vector3d(1, 1, 0.5)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(BchMultiply, EngelExample)
{
  const GradedAlgebra g = engel();
  const Point z = bch_multiply(g, basis_vector(g, 1), basis_vector(g, 2));
  EXPECT_LT((z - Eigen::Vector4d(1, 1, 0.5, 1.0 / 12.0)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(BchMultiply, RightIdentity)
{
  Rng rng(3);
  for (const auto & g : fixtures()) {
    const Point x = random_point(rng, g.dim());
    EXPECT_EQ(bch_multiply(g, x, Point::Zero(g.dim())), x);
    EXPECT_EQ(bch_multiply(g, Point::Zero(g.dim()), x), x);
  }
}

TEST(BchMultiply, HeisenbergClosedForm)
{
  Rng rng(4);
  const GradedAlgebra g = heisenberg1();
  for (int k = 0; k < 1000; ++k) {
    const Eigen::Vector3d a = random_point(rng, 3);
    const Eigen::Vector3d b = random_point(rng, 3);
    EXPECT_LT((bch_multiply(g, a, b) - oracle::h1_mul(a, b)).cwiseAbs().maxCoeff(), 1e-14);
  }
}

TEST(BchMultiply, EngelClosedForm)
{
  Rng rng(5);
  const GradedAlgebra g = engel();
  for (int k = 0; k < 1000; ++k) {
    const Eigen::Vector4d a = random_point(rng, 4);
    const Eigen::Vector4d b = random_point(rng, 4);
    EXPECT_LT((bch_multiply(g, a, b) - oracle::engel_mul(a, b)).cwiseAbs().maxCoeff(), 1e-13);
  }
}

TEST(BchMultiply, MatchesMatrixExpLogAtStepSix)
{
  // Strictly upper triangular 7x7 matrices: step 6, so every degree of the
  // truncated series is exercised against exp/log of actual matrices.
  const oracle::UpperTriangular ut(7);
  const GradedAlgebra g = GradedAlgebra::from_spec(ut.spec());
  ASSERT_EQ(g.step(), 6);
  Rng rng(6);
  double worst = 0.0;
  for (int k = 0; k < 200; ++k) {
    const Point a = random_point(rng, g.dim(), 1.0);
    const Point b = random_point(rng, g.dim(), 1.0);
    worst = std::max(worst, (bch_multiply(g, a, b) - ut.mul(a, b)).cwiseAbs().maxCoeff());
  }
  EXPECT_LT(worst, 1e-12);
}

TEST(BchMultiply, LowerStepTruncationMatchesMatrixGroups)
{
  for (int n = 2; n <= 6; ++n) {
    const oracle::UpperTriangular ut(n);
    const GradedAlgebra g = GradedAlgebra::from_spec(ut.spec());
    Rng rng(10 + n);
    for (int k = 0; k < 50; ++k) {
      const Point a = random_point(rng, g.dim(), 1.5);
      const Point b = random_point(rng, g.dim(), 1.5);
      EXPECT_LT((bch_multiply(g, a, b) - ut.mul(a, b)).cwiseAbs().maxCoeff(), 1e-11) << "n=" << n;
    }
  }
}

TEST(Inverse, NegatesCoordinates)
{
  const GradedAlgebra g = heisenberg1();
  EXPECT_EQ(inverse(g, Eigen::Vector3d(1, 2, 3)), Point(Eigen::Vector3d(-1, -2, -3)));
  EXPECT_EQ(inverse(g, Point::Zero(3)), Point::Zero(3));
}

TEST(Inverse, EngelRoundTrip)
{
  Rng rng(7);
  const GradedAlgebra g = engel();
  for (int k = 0; k < 100; ++k) {
    const Eigen::Vector4d x = random_point(rng, 4);
    EXPECT_LT(oracle::engel_mul(x, inverse(g, x)).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT(bch_multiply(g, x, inverse(g, x)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(Dilate, HeisenbergExample)
{
  const GradedAlgebra g = heisenberg1();
  EXPECT_EQ(dilate(g, 2.0, Eigen::Vector3d(1, 1, 1)), Point(Eigen::Vector3d(2, 2, 4)));
}

TEST(Dilate, UnitIsIdentity)
{
  Rng rng(8);
  for (const auto & g : fixtures()) {
    const Point x = random_point(rng, g.dim());
    EXPECT_EQ(dilate(g, 1.0, x), x);
  }
}

TEST(Dilate, IsAutomorphism)
{
  Rng rng(9);
  for (const auto & g : fixtures()) {
    for (int k = 0; k < 200; ++k) {
      const Point x = random_point(rng, g.dim());
      const Point y = random_point(rng, g.dim());
      const double t = rng.uniform(0.1, 10.0);
      const Point lhs = dilate(g, t, bch_multiply(g, x, y));
      const Point rhs = bch_multiply(g, dilate(g, t, x), dilate(g, t, y));
      EXPECT_LT((lhs - rhs).cwiseAbs().maxCoeff(), 1e-9);
    }
  }
}

TEST(Dilate, NonPositiveFactorThrows)
{
  const GradedAlgebra g = heisenberg1();
  EXPECT_THROW(dilate(g, 0.0, Point::Zero(3)), std::domain_error);
  EXPECT_THROW(dilate(g, -1.0, Point::Zero(3)), std::domain_error);
}

TEST(LayerProject, Examples)
{
  EXPECT_EQ(layer_project(heisenberg1(), 1, Eigen::Vector3d(1, 2, 3)), Point(Eigen::Vector3d(1, 2, 0)));
  EXPECT_EQ(layer_project(heisenberg1(), 2, Eigen::Vector3d(1, 2, 3)), Point(Eigen::Vector3d(1, 2, 3)));
  EXPECT_EQ(layer_project(engel(), 2, Eigen::Vector4d(1, 1, 1, 1)), Point(Eigen::Vector4d(1, 1, 1, 0)));
}

TEST(LayerProject, OutOfRangeThrows)
{
  EXPECT_THROW(layer_project(engel(), 0, Point::Zero(4)), std::out_of_range);
  EXPECT_THROW(layer_project(engel(), 4, Point::Zero(4)), std::out_of_range);
}

TEST(LeftInvariantField, HeisenbergX2)
{
  const GradedAlgebra g = heisenberg1();
  const TangentVector X = left_invariant_field(g, 2, Eigen::Vector3d(0.7, -1.3, 2.0));
  EXPECT_LT((X.components - Eigen::Vector3d(0, 1, 0.35)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(LeftInvariantField, AtIdentityIsBasisVector)
{
  for (const auto & g : fixtures()) {
    for (int j = 1; j <= g.dim(); ++j) {
      EXPECT_EQ(left_invariant_field(g, j, Point::Zero(g.dim())).components, basis_vector(g, j));
    }
  }
}

TEST(LeftInvariantField, TopLayerIsConstant)
{
  Rng rng(10);
  for (const auto & g : fixtures()) {
    const Point x = random_point(rng, g.dim());
    EXPECT_EQ(left_invariant_field(g, g.dim(), x).components, basis_vector(g, g.dim()));
  }
}

TEST(LeftInvariantField, MatchesCentralDifference)
{
  Rng rng(11);
  for (const auto & g : fixtures()) {
    for (int j = 1; j <= g.dim(); ++j) {
      const Point x = random_point(rng, g.dim());
      const double h = 1e-5;
      const Point fd = (bch_multiply(g, x, h * basis_vector(g, j)) - bch_multiply(g, x, -h * basis_vector(g, j))) /
                       (2 * h);
      EXPECT_LT((left_invariant_field(g, j, x).components - fd).cwiseAbs().maxCoeff(), 1e-6);
    }
  }
}

TEST(GroupAxioms, Associativity)
{
  for (const auto & g : fixtures()) {
    Rng rng(12, g.dim());
    double worst = 0.0;
    for (int k = 0; k < 10000; ++k) {
      const Point x = random_point(rng, g.dim());
      const Point y = random_point(rng, g.dim());
      const Point z = random_point(rng, g.dim());
      const Point lhs = bch_multiply(g, bch_multiply(g, x, y), z);
      const Point rhs = bch_multiply(g, x, bch_multiply(g, y, z));
      worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
    }
    EXPECT_LT(worst, 1e-9);
  }
}

TEST(GroupAxioms, LayerLocality)
{
  // Changing layer >= s of the factors moves layer s of the product only
  // through the linear term.
  Rng rng(13);
  for (const auto & g : fixtures()) {
    for (int s = 1; s <= g.step(); ++s) {
      const Point x = random_point(rng, g.dim());
      const Point y = random_point(rng, g.dim());
      Point dx = Point::Zero(g.dim());
      Point dy = Point::Zero(g.dim());
      const int from = g.layer_begin(s);
      dx.tail(g.dim() - from) = random_point(rng, g.dim() - from);
      dy.tail(g.dim() - from) = random_point(rng, g.dim() - from);
      const Point z0 = bch_multiply(g, x, y);
      const Point z1 = bch_multiply(g, x + dx, y + dy);
      const Eigen::VectorXd expected = (dx + dy).segment(from, g.layer_size(s));
      EXPECT_LT(((z1 - z0).segment(from, g.layer_size(s)) - expected).cwiseAbs().maxCoeff(), 1e-12);
      if (from > 0) {
        EXPECT_LT((z1 - z0).head(from).cwiseAbs().maxCoeff(), 1e-12);
      }
    }
  }
}

TEST(GradedAlgebra, FromSpecRejectsInvalid)
{
  AlgebraSpec s{{2, 1}, {{1, 2, 3, 1.0}, {2, 1, 3, 1.0}}};
  EXPECT_THROW(GradedAlgebra::from_spec(s), std::invalid_argument);
}
