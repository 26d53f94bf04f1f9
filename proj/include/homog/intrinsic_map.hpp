#ifndef HOMOG_INTRINSIC_MAP_HPP
#define HOMOG_INTRINSIC_MAP_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "homog/metric.hpp"
#include "homog/subgroup.hpp"

namespace homog
{

/// phi: A -> V with A a subset of W, for a couple (W,V). Points of W and V
/// are passed as ambient exponential coordinates.
class IntrinsicMap
{
public:
  using Evaluator = std::function<Point(const Point &)>;
  using Predicate = std::function<bool(const Point &)>;
  using Gradient = std::function<Eigen::MatrixXd(const Point &)>;

  /// Box [lo, hi] in W-coordinates; infinite bounds are allowed.
  IntrinsicMap(ComplementaryCouple couple, Eigen::VectorXd lo, Eigen::VectorXd hi, Evaluator eval,
               std::string name = "");

  const ComplementaryCouple & couple() const { return m_couple; }
  const GradedAlgebra & algebra() const { return m_couple.algebra(); }
  const Eigen::VectorXd & lo() const { return m_lo; }
  const Eigen::VectorXd & hi() const { return m_hi; }
  const std::string & name() const { return m_name; }

  /// Extra domain constraint on top of the box (used by translated maps).
  void set_domain(Predicate pred) { m_domain = std::move(pred); }
  /// Closed-form intrinsic gradient (p x (n_1 - p) matrix), horizontal-V case.
  void set_gradient(Gradient grad) { m_gradient = std::move(grad); }
  const Gradient & gradient() const { return m_gradient; }
  bool has_gradient() const { return static_cast<bool>(m_gradient); }

  bool in_domain(const Point & w) const;
  /// phi(w); throws std::domain_error outside A.
  Point operator()(const Point & w) const;
  /// phi in coordinates: W-coordinates to V-coordinates.
  Eigen::VectorXd tilde(const Eigen::VectorXd & w_coords) const;

private:
  ComplementaryCouple m_couple;
  Eigen::VectorXd m_lo;
  Eigen::VectorXd m_hi;
  Evaluator m_eval;
  Predicate m_domain;
  Gradient m_gradient;
  std::string m_name;
};

/// Phi(w) = w phi(w).
Point graph_point(const IntrinsicMap & phi, const Point & w);

/// phi_x(eta) = (pi_V(x^-1 eta))^-1 phi(sigma_{x^-1}(eta)), defined on
/// A_x = sigma_x(A). Evaluating outside A_x throws std::domain_error.
IntrinsicMap translate_map(const IntrinsicMap & phi, const Point & x);

struct LipschitzEstimate
{
  double value = 0.0; ///< max sampled ratio, a lower bound on the intrinsic Lipschitz constant
  int pairs = 0;
  int skipped = 0; ///< pairs whose projected W-part vanished
};

/// max over sampled pairs of ||pi_V(Phi(w')^-1 Phi(w))|| / ||pi_W(Phi(w')^-1 Phi(w))||,
/// with w, w' uniform in the domain box.
LipschitzEstimate intrinsic_lipschitz_estimate(const IntrinsicMap & phi, const DistanceSpec & d, int n,
                                               std::uint64_t seed);

/// Built-in couples and maps.
///
/// vertical = span(e_2, ..., e_q), horizontal = span(e_1); on every fixture
/// group these form a complementary couple (W, V) = (vertical, horizontal).
HomogeneousSubgroup vertical_subgroup(const GradedAlgebra & g);
HomogeneousSubgroup horizontal_subgroup(const GradedAlgebra & g);
ComplementaryCouple vertical_horizontal_couple(const GradedAlgebra & g);

/// phi = 0 on the box [-2,2]^m.
IntrinsicMap phi_zero(const ComplementaryCouple & couple);
/// Heisenberg1, (W,V) = (vertical, horizontal): phi(0,y,tau) = (a y, 0, 0).
IntrinsicMap phi_linear(double a);
/// Heisenberg1, (W,V) = (vertical, horizontal): phi(0,y,tau) = (-y^2, 0, 0).
IntrinsicMap phi_parabola();
/// Parses "zero", "linear:a" / "linear(a)" or "parabola" on heisenberg1.
IntrinsicMap phi_by_name(const std::string & name);

} // namespace homog

#endif
