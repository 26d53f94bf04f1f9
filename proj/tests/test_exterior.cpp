#include <gtest/gtest.h>

#include <cmath>

#include "homog/exterior.hpp"
#include "homog/fixtures.hpp"
#include "homog/measure.hpp"
#include "homog/numerics.hpp"
#include "homog/random.hpp"
#include "oracles.hpp"

using namespace homog;

namespace
{

Point vec(std::initializer_list<double> xs)
{
  Point p(static_cast<Eigen::Index>(xs.size()));
  int k = 0;
  for (double x : xs) {
    p[k++] = x;
  }
  return p;
}

/// Coefficient of e_I in the wedge of the columns: the I-rows minor.
double minor_oracle(const Eigen::MatrixXd & cols, const std::vector<int> & rows)
{
  Eigen::MatrixXd m(rows.size(), cols.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    m.row(r) = cols.row(rows[r]);
  }
  return m.determinant();
}

Multivector random_multivector(Rng & rng, int q, int k)
{
  Multivector out(q, k);
  for (const auto & idx : combinations(q, k)) {
    Multivector::Index one;
    for (int i : idx) {
      one.push_back(i + 1);
    }
    out.add(one, rng.normal());
  }
  return out;
}

double max_diff(const Multivector & a, const Multivector & b) { return (a - b).norm(); }

HomogeneousSubgroup horizontal_line_plus_upper(const GradedAlgebra & g, const Eigen::VectorXd & dir)
{
  std::vector<Point> basis;
  Point u = Point::Zero(g.dim());
  u.head(dir.size()) = dir;
  basis.push_back(u);
  for (int k = g.layer_size(1); k < g.dim(); ++k) {
    basis.push_back(Point::Unit(g.dim(), k));
  }
  return HomogeneousSubgroup::from_basis(g, basis);
}

} // namespace

TEST(Wedge, BasisVectors)
{
  const Multivector e1 = Multivector::basis(3, {1});
  const Multivector e2 = Multivector::basis(3, {2});
  const Multivector w = wedge(e1, e2);
  EXPECT_EQ(w.degree(), 2);
  EXPECT_DOUBLE_EQ(w.coefficient({1, 2}), 1.0);
  EXPECT_DOUBLE_EQ(wedge(e2, e1).coefficient({1, 2}), -1.0);
  EXPECT_DOUBLE_EQ(wedge(e1, e1).norm(), 0.0);
}

TEST(Wedge, BilinearExpansion)
{
  const Multivector a = Multivector::from_vector(vec({1, 1, 0}));
  const Multivector e2 = Multivector::basis(3, {2});
  EXPECT_LE(max_diff(wedge(a, e2), Multivector::basis(3, {1, 2})), 1e-15);
}

TEST(Wedge, DegreeOverflowThrows)
{
  EXPECT_THROW(wedge(Multivector::basis(3, {1, 2}), Multivector::basis(3, {1, 3})), std::invalid_argument);
}

TEST(Wedge, ColumnsMatchMinors)
{
  Rng rng(1);
  for (int q = 2; q <= 6; ++q) {
    for (int k = 1; k <= q; ++k) {
      Eigen::MatrixXd cols(q, k);
      for (int c = 0; c < k; ++c) {
        cols.col(c) = rng.normal_vector(q);
      }
      const Multivector w = Multivector::wedge_columns(cols);
      for (const auto & idx : combinations(q, k)) {
        Multivector::Index one;
        for (int i : idx) {
          one.push_back(i + 1);
        }
        EXPECT_NEAR(w.coefficient(one), minor_oracle(cols, idx), 1e-12);
      }
      EXPECT_NEAR(w.norm(), oracle::gram_volume(cols), 1e-10);
      EXPECT_NEAR(wedge_norm_gram(cols), oracle::gram_volume(cols), 1e-10);
    }
  }
}

TEST(Wedge, AssociativeAndMultilinear)
{
  Rng rng(2);
  const int q = 6;
  for (int trial = 0; trial < 20; ++trial) {
    const Multivector a = random_multivector(rng, q, 1);
    const Multivector b = random_multivector(rng, q, 2);
    const Multivector c = random_multivector(rng, q, 2);
    const Multivector b2 = random_multivector(rng, q, 2);
    EXPECT_LE(max_diff(wedge(wedge(a, b), c), wedge(a, wedge(b, c))), 1e-12);
    const double s = rng.normal();
    EXPECT_LE(max_diff(wedge(a, b + b2 * s), wedge(a, b) + wedge(a, b2) * s), 1e-12);
    // Graded commutativity: b ^ c = (-1)^{2*2} c ^ b.
    EXPECT_LE(max_diff(wedge(b, c), wedge(c, b)), 1e-12);
    EXPECT_LE(max_diff(wedge(a, c), wedge(c, a)), 1e-12);
  }
}

TEST(OrientingUnit, HorizontalLine)
{
  const Multivector u = orienting_unit(horizontal_line_plus_upper(heisenberg1(), vec({1, 0})).basis().leftCols(1));
  EXPECT_NEAR(u.coefficient({1}), 1.0, 1e-15);
}

TEST(OrientingUnit, VerticalPlane)
{
  const HomogeneousSubgroup W = HomogeneousSubgroup::from_basis(heisenberg1(), {vec({0, 0, 3}), vec({0, -2, 0})});
  const Multivector u = orienting_unit(W);
  EXPECT_NEAR(u.coefficient({2, 3}), 1.0, 1e-15);
  EXPECT_NEAR(u.norm(), 1.0, 1e-15);
}

TEST(OrientingUnit, DiagonalGraphPlane)
{
  const HomogeneousSubgroup U = HomogeneousSubgroup::from_basis(heisenberg1(), {vec({1, 1, 0}), vec({0, 0, 1})});
  const Multivector u = orienting_unit(U);
  EXPECT_NEAR(u.coefficient({1, 3}), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(u.coefficient({2, 3}), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(u.coefficient({1, 2}), 0.0, 1e-15);
}

TEST(OrientingUnit, UnitNormAndCanonicalSign)
{
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const int q = 5;
    const int k = 1 + trial % 4;
    Eigen::MatrixXd cols(q, k);
    for (int c = 0; c < k; ++c) {
      cols.col(c) = rng.normal_vector(q);
    }
    const Multivector u = orienting_unit(cols);
    EXPECT_NEAR(u.norm(), 1.0, 1e-12);
    EXPECT_GT(u.coefficients().begin()->second, 0.0);
    // Same span with the first column negated: same canonical unit.
    Eigen::MatrixXd flipped = cols;
    flipped.col(0) *= -2.0;
    EXPECT_LE(max_diff(orienting_unit(flipped), u), 1e-12);
  }
}

TEST(OrientingUnit, EmptySpanThrows)
{
  EXPECT_THROW(orienting_unit(HomogeneousSubgroup::trivial(heisenberg1())), std::invalid_argument);
}

TEST(Hodge, StarOfE1)
{
  const Multivector e = Multivector::basis(3, {1, 2, 3});
  const Multivector s = hodge_star(Multivector::basis(3, {1}), e);
  EXPECT_LE(max_diff(s, Multivector::basis(3, {2, 3})), 1e-15);
  EXPECT_LE(max_diff(hodge_star(Multivector::basis(3, {2}), e), Multivector::basis(3, {1, 3}) * -1.0), 1e-15);
}

TEST(Hodge, DefiningIdentityAndInvolution)
{
  Rng rng(4);
  for (int q = 2; q <= 5; ++q) {
    const Multivector e = Multivector::basis(q, [&] {
      Multivector::Index all;
      for (int i = 1; i <= q; ++i) all.push_back(i);
      return all;
    }());
    for (int k = 1; k < q; ++k) {
      const Multivector eta = random_multivector(rng, q, k);
      const Multivector xi = random_multivector(rng, q, k);
      const Multivector star = hodge_star(eta, e);
      EXPECT_NEAR(star.norm(), eta.norm(), 1e-12);
      EXPECT_LE(max_diff(wedge(xi, star), e * xi.dot(eta)), 1e-12);
      const double sign = (k * (q - k)) % 2 == 0 ? 1.0 : -1.0;
      EXPECT_LE(max_diff(hodge_star(star, e), eta * sign), 1e-12);
    }
  }
}

TEST(Hodge, RejectsNonUnitOrientation)
{
  EXPECT_THROW(hodge_star(Multivector::basis(3, {1}), Multivector::basis(3, {1, 2, 3}) * 2.0), std::invalid_argument);
}

TEST(WedgeRatio, SameSubgroupGivesOne)
{
  const GradedAlgebra g = heisenberg1();
  const HomogeneousSubgroup Vh = HomogeneousSubgroup::from_basis(g, {vec({1, 0, 0})});
  const HomogeneousSubgroup W = horizontal_line_plus_upper(g, vec({0, 1}));
  EXPECT_NEAR(wedge_ratio(Vh, W, W), 1.0, 1e-15);
}

TEST(WedgeRatio, LinearGraphClosedForm)
{
  const GradedAlgebra g = heisenberg1();
  const HomogeneousSubgroup V = HomogeneousSubgroup::from_basis(g, {vec({1, 0, 0})});
  const HomogeneousSubgroup W = horizontal_line_plus_upper(g, vec({0, 1}));
  for (double a : {-2.0, 0.0, 0.5, 1.0, 3.0}) {
    const HomogeneousSubgroup U = horizontal_line_plus_upper(g, vec({a, 1}));
    EXPECT_NEAR(wedge_ratio(V, W, U), 1.0 / std::sqrt(1.0 + a * a), 1e-14);
    EXPECT_NEAR(wedge_ratio(V, W, U) * wedge_ratio(V, U, W), 1.0, 1e-14);
  }
}

TEST(WedgeRatio, NonComplementaryThrows)
{
  const GradedAlgebra g = heisenberg1();
  const HomogeneousSubgroup V = HomogeneousSubgroup::from_basis(g, {vec({1, 0, 0})});
  const HomogeneousSubgroup W = horizontal_line_plus_upper(g, vec({1, 0}));
  EXPECT_THROW(wedge_ratio(V, W, W), std::invalid_argument);
}

// Pushforward of a box B in U onto W along V scales H^m by the wedge ratio.
TEST(WedgeRatio, PushforwardMeasureOfBox)
{
  Rng rng(5);
  for (const GradedAlgebra & g : {heisenberg1(), engel()}) {
    for (int trial = 0; trial < 5; ++trial) {
      const double tv = rng.uniform(0, M_PI);
      const double tw = tv + rng.uniform(0.3, M_PI - 0.3);
      const double tu = tv + rng.uniform(0.3, M_PI - 0.3);
      const HomogeneousSubgroup V = HomogeneousSubgroup::from_basis(g, {[&] {
        Point p = Point::Zero(g.dim());
        p[0] = std::cos(tv);
        p[1] = std::sin(tv);
        return p;
      }()});
      const HomogeneousSubgroup W = horizontal_line_plus_upper(g, vec({std::cos(tw), std::sin(tw)}));
      const HomogeneousSubgroup U = horizontal_line_plus_upper(g, vec({std::cos(tu), std::sin(tu)}));
      const ComplementaryCouple WV = ComplementaryCouple::validate(W, V);
      const ComplementaryCouple UV = ComplementaryCouple::validate(U, V);
      const Eigen::VectorXd lo = -0.5 * Eigen::VectorXd::Ones(U.dim());
      const Eigen::VectorXd hi = 0.7 * Eigen::VectorXd::Ones(U.dim());
      const double box = std::pow(1.2, U.dim());
      const MeasureEstimate m = pushforward_volume(WV, UV, lo, hi, 100000, 10 + trial);
      const double expected = wedge_ratio(V, W, U) * box;
      EXPECT_LE(std::abs(m.value - expected), 3.0 * m.std_error + 1e-12) << "trial " << trial;
      EXPECT_LE(std::abs(m.value - expected), 0.02 * expected);
    }
  }
}
