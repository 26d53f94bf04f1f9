#include <gtest/gtest.h>

#include <cmath>

#include "homog/exterior.hpp"
#include "homog/fixtures.hpp"
#include "homog/graph.hpp"
#include "homog/measure.hpp"
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

const ComplementaryCouple & h1_couple()
{
  static const ComplementaryCouple c = vertical_horizontal_couple(heisenberg1());
  return c;
}

Eigen::MatrixXd scalar(double a) { return Eigen::MatrixXd::Constant(1, 1, a); }

/// Random horizontal-orthogonal couple in H^2 with dim V = p.
ComplementaryCouple h2_couple(Rng & rng, int p)
{
  const GradedAlgebra g = heisenberg2();
  std::vector<Point> vb;
  if (p == 1) {
    Point v = Point::Zero(5);
    v.head(4) = rng.normal_vector(4);
    vb.push_back(v);
  } else {
    // span(e1, e2) is abelian; rotate inside the (e1,e3) and (e2,e4) planes
    // by the same angle, which preserves the bracket form.
    const double th = rng.uniform(0, M_PI);
    vb.push_back(vec({std::cos(th), 0, std::sin(th), 0, 0}));
    vb.push_back(vec({0, std::cos(th), 0, std::sin(th), 0}));
  }
  const HomogeneousSubgroup V = HomogeneousSubgroup::from_basis(g, vb);
  return ComplementaryCouple::validate(horizontal_complement(V), V);
}

} // namespace

TEST(IntrinsicLinear, GraphOfLinearMap)
{
  for (double a : {-1.5, 0.0, 1.0, 2.0}) {
    const IntrinsicLinearMap L = IntrinsicLinearMap::from_matrix(h1_couple(), scalar(a));
    const HomogeneousSubgroup expected = HomogeneousSubgroup::from_basis(heisenberg1(), {vec({a, 1, 0}), vec({0, 0, 1})});
    EXPECT_TRUE(graph_subgroup(L).same_span(expected));
    EXPECT_NEAR((L(vec({0, 0.7, -0.3})) - vec({0.7 * a, 0, 0})).norm(), 0.0, 1e-14);
    const IntrinsicLinearMap L2 = IntrinsicLinearMap::from_subgroup(h1_couple(), expected);
    EXPECT_NEAR((*L2.matrix())(0, 0), a, 1e-13);
    EXPECT_NEAR((L2(vec({0, 0.7, -0.3})) - vec({0.7 * a, 0, 0})).norm(), 0.0, 1e-13);
  }
}

TEST(IntrinsicLinear, ZeroMapGraphIsW)
{
  const IntrinsicLinearMap L = IntrinsicLinearMap::zero(h1_couple());
  EXPECT_TRUE(graph_subgroup(L).same_span(h1_couple().W()));
}

TEST(IntrinsicLinear, GraphMapMatchesProduct)
{
  const IntrinsicLinearMap L = IntrinsicLinearMap::from_matrix(h1_couple(), scalar(1.3));
  const Point w = vec({0, 0.4, 0.9});
  EXPECT_NEAR((L.graph_map(w) - bch_multiply(heisenberg1(), w, L(w))).norm(), 0.0, 1e-14);
}

TEST(IntrinsicLinear, FromFunctionAcceptsLinearMap)
{
  const IntrinsicLinearMap L =
    IntrinsicLinearMap::from_function(h1_couple(), [](const Point & w) { return vec({-0.5 * w[1], 0, 0}); });
  EXPECT_TRUE(graph_subgroup(L).same_span(
    HomogeneousSubgroup::from_basis(heisenberg1(), {vec({-0.5, 1, 0}), vec({0, 0, 1})})));
}

TEST(IntrinsicLinear, FromFunctionRejectsDegreeMismatch)
{
  EXPECT_THROW(IntrinsicLinearMap::from_function(h1_couple(), [](const Point & w) { return vec({w[2], 0, 0}); }),
               std::invalid_argument);
}

TEST(IntrinsicDifferential, FixedPointOnLinearInput)
{
  const DistanceSpec d = DistanceSpec::d_inf(heisenberg1());
  for (double a : {-1.0, 0.5, 1.0}) {
    const IntrinsicMap phi = phi_linear(a);
    const IntrinsicDifferential D = estimate_intrinsic_differential(phi, vec({0, 0.3, -0.2}), d);
    ASSERT_TRUE(D.map);
    EXPECT_TRUE(D.converged);
    const IntrinsicLinearMap L = IntrinsicLinearMap::from_matrix(h1_couple(), scalar(a));
    EXPECT_LE(il_distance(*D.map, L, d), 1e-6);
    EXPECT_NEAR((*D.map->matrix())(0, 0), a, 1e-6);
  }
}

TEST(IntrinsicDifferential, ZeroMap)
{
  const DistanceSpec d = DistanceSpec::d_inf(heisenberg1());
  const IntrinsicDifferential D = estimate_intrinsic_differential(phi_zero(h1_couple()), vec({0, 0.5, 0.5}), d);
  ASSERT_TRUE(D.map);
  EXPECT_LE(il_distance(*D.map, IntrinsicLinearMap::zero(h1_couple()), d), 1e-9);
}

TEST(IntrinsicDifferential, ParabolaAtOne)
{
  const DistanceSpec d = DistanceSpec::d_inf(heisenberg1());
  const IntrinsicDifferential D = estimate_intrinsic_differential(phi_parabola(), vec({0, 1, 0}), d);
  ASSERT_TRUE(D.map);
  EXPECT_TRUE(D.converged);
  EXPECT_NEAR((*D.map->matrix())(0, 0), -2.0, 1e-6);
  const PartialDerivative p = intrinsic_partial_derivative(phi_parabola(), 2, Eigen::Vector2d(1, 0));
  EXPECT_NEAR((*D.map->matrix())(0, 0), p.value[0], 1e-6);
}

TEST(IntrinsicDifferential, RejectsIncreasingSchedule)
{
  const DistanceSpec d = DistanceSpec::d_inf(heisenberg1());
  EXPECT_THROW(estimate_intrinsic_differential(phi_parabola(), vec({0, 1, 0}), d, {0.1, 0.2}), std::invalid_argument);
}

TEST(IlDistance, SelfAndSymmetry)
{
  const DistanceSpec d = DistanceSpec::d_inf(heisenberg1());
  const IntrinsicLinearMap L = IntrinsicLinearMap::from_matrix(h1_couple(), scalar(0.7));
  const IntrinsicLinearMap T = IntrinsicLinearMap::from_matrix(h1_couple(), scalar(-1.2));
  EXPECT_EQ(il_distance(L, L, d), 0.0);
  EXPECT_NEAR(il_distance(L, T, d), il_distance(T, L, d), 1e-12);
}

TEST(IlDistance, SlopeZeroVersusOne)
{
  // Unit sphere of W under d_inf: max(|y|, sqrt|tau|) = 1; images (0,0,0) and (y,0,0).
  const DistanceSpec d = DistanceSpec::d_inf(heisenberg1());
  double oracle_max = 0.0;
  for (int k = 0; k <= 2000; ++k) {
    const double y = -1.0 + 2.0 * k / 2000;
    oracle_max = std::max(oracle_max, std::abs(y));
  }
  const IntrinsicLinearMap L0 = IntrinsicLinearMap::zero(h1_couple());
  const IntrinsicLinearMap L1 = IntrinsicLinearMap::from_matrix(h1_couple(), scalar(1.0));
  EXPECT_NEAR(il_distance(L0, L1, d), oracle_max, 1e-12);
}

TEST(ProjectedField, HeisenbergClosedForm)
{
  for (double y : {-1.0, 0.0, 0.6, 1.5}) {
    const Point w = vec({0, y, 0.25});
    const Eigen::VectorXd D = projected_vector_field(phi_parabola(), 2, w);
    EXPECT_NEAR((D - Eigen::Vector2d(1.0, -y * y)).norm(), 0.0, 1e-14);
    const Eigen::VectorXd Dl = projected_vector_field(phi_linear(0.8), 2, w);
    EXPECT_NEAR((Dl - Eigen::Vector2d(1.0, 0.8 * y)).norm(), 0.0, 1e-14);
  }
}

TEST(ProjectedField, ZeroMapGivesCoordinateFields)
{
  const IntrinsicMap phi = phi_zero(h1_couple());
  EXPECT_NEAR((projected_vector_field(phi, 2, vec({0, 0.3, 0.1})) - Eigen::Vector2d(1, 0)).norm(), 0.0, 1e-15);
  EXPECT_NEAR((projected_vector_field(phi, 3, vec({0, 0.3, 0.1})) - Eigen::Vector2d(0, 1)).norm(), 0.0, 1e-15);
}

TEST(ProjectedField, TopLayerIsConstant)
{
  for (double y : {-1.0, 1.2}) {
    EXPECT_NEAR((projected_vector_field(phi_parabola(), 3, vec({0, y, -0.5})) - Eigen::Vector2d(0, 1)).norm(), 0.0,
                1e-15);
  }
}

TEST(PartialDerivative, LinearMap)
{
  for (double a : {-2.0, 0.5, 1.0}) {
    const PartialDerivative p = intrinsic_partial_derivative(phi_linear(a), 2, Eigen::Vector2d(0.3, -0.2));
    EXPECT_NEAR(p.value[0], a, 1e-6);
    EXPECT_LE(p.perturbed_disagreement, 1e-6);
  }
}

TEST(PartialDerivative, ParabolaMatchesHandDerivative)
{
  for (double y : {-1.0, 0.5, 1.0}) {
    const PartialDerivative p = intrinsic_partial_derivative(phi_parabola(), 2, Eigen::Vector2d(y, 0.1));
    EXPECT_NEAR(p.value[0], -2.0 * y, 1e-4);
  }
}

TEST(PartialDerivative, ConstantMapIsZero)
{
  const PartialDerivative p = intrinsic_partial_derivative(phi_zero(h1_couple()), 2, Eigen::Vector2d(0.1, 0.1));
  EXPECT_NEAR(p.value.norm(), 0.0, 1e-12);
}

TEST(PartialDerivative, IndexOutsideHorizontalWRange)
{
  EXPECT_THROW(intrinsic_partial_derivative(phi_parabola(), 1, Eigen::Vector2d(0, 0)), std::out_of_range);
  EXPECT_THROW(intrinsic_partial_derivative(phi_parabola(), 3, Eigen::Vector2d(0, 0)), std::out_of_range);
}

TEST(PartialDerivative, CurveLeavingDomainThrows)
{
  PartialDerivativeOptions o;
  o.s0 = 0.5;
  EXPECT_THROW(intrinsic_partial_derivative(phi_parabola(), 2, Eigen::Vector2d(1.9, 0), o), std::domain_error);
}

TEST(Jacobian, WedgeAnchors)
{
  EXPECT_NEAR(jacobian_wedge(IntrinsicLinearMap::zero(h1_couple())), 1.0, 1e-15);
  EXPECT_NEAR(jacobian_wedge(IntrinsicLinearMap::from_matrix(h1_couple(), scalar(1.0))), std::sqrt(2.0), 1e-14);
  for (double a : {-3.0, 0.25, 2.0}) {
    EXPECT_NEAR(jacobian_wedge(IntrinsicLinearMap::from_matrix(h1_couple(), scalar(a))), std::sqrt(1 + a * a), 1e-14);
  }
}

TEST(Jacobian, MinorsAnchors)
{
  EXPECT_DOUBLE_EQ(jacobian_minors(Eigen::MatrixXd::Zero(2, 3)), 1.0);
  EXPECT_NEAR(jacobian_minors(scalar(3.0)), std::sqrt(10.0), 1e-15);
  EXPECT_NEAR(jacobian_minors(Eigen::Matrix2d::Identity()), 2.0, 1e-15);
}

TEST(Jacobian, MinorsAgreeWithOracles)
{
  Rng rng(1);
  for (int trial = 0; trial < 40; ++trial) {
    const int r = 1 + trial % 4;
    const int c = 1 + (trial / 4) % 5;
    Eigen::MatrixXd M(r, c);
    for (int i = 0; i < r; ++i) {
      M.row(i) = rng.normal_vector(c).transpose();
    }
    const double brute = oracle::minors_bruteforce(M);
    EXPECT_NEAR(jacobian_minors(M), brute, 1e-11 * brute);
    EXPECT_NEAR(jacobian_minors_gram(M), brute, 1e-11 * brute);
  }
  // Above the enumeration cutoff both routes still agree.
  Eigen::MatrixXd big(7, 8);
  for (int i = 0; i < 7; ++i) {
    big.row(i) = 0.3 * rng.normal_vector(8).transpose();
  }
  EXPECT_NEAR(jacobian_minors(big), oracle::minors_bruteforce(big), 1e-9 * oracle::minors_bruteforce(big));
}

TEST(Jacobian, WedgeEqualsMinorsOnRandomSplittings)
{
  Rng rng(2);
  for (int trial = 0; trial < 30; ++trial) {
    if (trial % 3 == 0) {
      const double a = rng.normal();
      const IntrinsicLinearMap L = IntrinsicLinearMap::from_matrix(h1_couple(), scalar(a));
      EXPECT_NEAR(jacobian_wedge(L), jacobian_minors(scalar(a)), 1e-9);
      continue;
    }
    const int p = 1 + trial % 3 % 2;
    const ComplementaryCouple c = h2_couple(rng, p);
    Eigen::MatrixXd M(p, 4 - p);
    for (int i = 0; i < p; ++i) {
      M.row(i) = rng.normal_vector(4 - p).transpose();
    }
    const IntrinsicLinearMap L = IntrinsicLinearMap::from_matrix(c, M);
    EXPECT_NEAR(jacobian_wedge(L), jacobian_minors(M), 1e-9) << "trial " << trial;
  }
}

TEST(Jacobian, MonteCarloRouteAgrees)
{
  Rng rng(3);
  for (int trial = 0; trial < 4; ++trial) {
    const int p = 1 + trial % 2;
    const ComplementaryCouple c = h2_couple(rng, p);
    Eigen::MatrixXd M(p, 4 - p);
    for (int i = 0; i < p; ++i) {
      M.row(i) = rng.normal_vector(4 - p).transpose();
    }
    const IntrinsicLinearMap L = IntrinsicLinearMap::from_matrix(c, M);
    const int m = c.W().dim();
    const MeasureEstimate e =
      jacobian_measure_mc(L, -Eigen::VectorXd::Ones(m), Eigen::VectorXd::Ones(m), 100000, 10 + trial);
    EXPECT_NEAR(e.value, jacobian_minors(M), 0.02 * jacobian_minors(M));
    // The coordinate map is layer-triangular with constant diagonal blocks,
    // so its Euclidean Jacobian does not vary over the box.
    EXPECT_LE(e.std_error, 1e-12 * e.value);
    // Independent hit-or-miss volume of the image G(L)(B).
    const MeasureEstimate hit = pushforward_volume(L.graph_couple(), c, -Eigen::VectorXd::Ones(m),
                                                   Eigen::VectorXd::Ones(m), 200000, 20 + trial);
    const double box = std::pow(2.0, m);
    EXPECT_LE(std::abs(hit.value / box - jacobian_minors(M)), 3.0 * hit.std_error / box) << "trial " << trial;
  }
}

TEST(Jacobian, MonteCarloAnchors)
{
  const Eigen::VectorXd lo = -Eigen::VectorXd::Ones(2);
  const Eigen::VectorXd hi = Eigen::VectorXd::Ones(2);
  const MeasureEstimate zero = jacobian_measure_mc(IntrinsicLinearMap::zero(h1_couple()), lo, hi, 100000, 1);
  EXPECT_NEAR(zero.value, 1.0, 2.0 * zero.std_error + 1e-12);
  const MeasureEstimate one =
    jacobian_measure_mc(IntrinsicLinearMap::from_matrix(h1_couple(), scalar(1.0)), lo, hi, 100000, 2);
  EXPECT_NEAR(one.value, std::sqrt(2.0), 2.0 * one.std_error + 1e-12);
}

TEST(Jacobian, MonteCarloIndependentOfBox)
{
  const IntrinsicLinearMap L = IntrinsicLinearMap::from_matrix(h1_couple(), scalar(1.0));
  const MeasureEstimate a = jacobian_measure_mc(L, Eigen::Vector2d(-2, -2), Eigen::Vector2d(-1, 0), 100000, 3);
  const MeasureEstimate b = jacobian_measure_mc(L, Eigen::Vector2d(0.5, 1), Eigen::Vector2d(2, 1.5), 100000, 4);
  EXPECT_LE(std::abs(a.value - b.value), 3.0 * std::hypot(a.std_error, b.std_error));
}

TEST(Jacobian, ParabolaEndToEnd)
{
  const DistanceSpec d = DistanceSpec::d_inf(heisenberg1());
  for (double y : {-1.0, 0.5, 1.0}) {
    const PartialDerivative p = intrinsic_partial_derivative(phi_parabola(), 2, Eigen::Vector2d(y, 0.0));
    const IntrinsicDifferential D = estimate_intrinsic_differential(phi_parabola(), vec({0, y, 0}), d);
    ASSERT_TRUE(D.map);
    EXPECT_NEAR(jacobian_minors(scalar(p.value[0])), jacobian_wedge(*D.map), 1e-3);
  }
  EXPECT_NEAR(graph_jacobian(phi_parabola(), vec({0, 1, 0}), d), std::sqrt(5.0), 1e-12);
}

TEST(Jacobian, ContinuityAlongShrinkingPairs)
{
  const DistanceSpec d = DistanceSpec::d_inf(heisenberg1());
  const GradedAlgebra g = heisenberg1();
  const Point w = vec({0, 0.8, 0.2});
  double previous = std::numeric_limits<double>::infinity();
  for (double eps : {0.1, 0.01, 0.001}) {
    const Point w2 = bch_multiply(g, w, dilate(g, eps, vec({0, 1, 1})));
    const double gap = std::abs(graph_jacobian(phi_parabola(), w, d) - graph_jacobian(phi_parabola(), w2, d));
    EXPECT_LT(gap, previous);
    previous = gap;
  }
  EXPECT_LT(previous, 1e-2);
}

TEST(Tangent, GraphNearPointLiesInShrinkingCones)
{
  const GradedAlgebra g = heisenberg1();
  const DistanceSpec d = DistanceSpec::d_inf(g);
  const IntrinsicMap phi = phi_parabola();
  const Point wbar = vec({0, 1, 0});
  const IntrinsicLinearMap T = tangent_map(phi, wbar, d);
  const IntrinsicMap psi = translate_map(phi, inverse(g, graph_point(phi, wbar)));
  double previous = std::numeric_limits<double>::infinity();
  for (double delta : {0.2, 0.02, 0.002}) {
    double worst = 0.0;
    for (const Point & u : unit_sphere_points(psi.couple().W(), d, 24)) {
      const Point eta = dilate(g, delta, u);
      const Point p = bch_multiply(g, eta, psi(eta));
      worst = std::max(worst, distance_to_subgroup(d, p, T.graph_subgroup()).value / hom_norm(d, p));
    }
    EXPECT_LT(worst, previous);
    previous = worst;
  }
  EXPECT_LT(previous, 0.05);
}
