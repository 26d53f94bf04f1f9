#ifndef HOMOG_GRAPH_HPP
#define HOMOG_GRAPH_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "homog/estimate.hpp"
#include "homog/intrinsic_map.hpp"
#include "homog/metric.hpp"
#include "homog/subgroup.hpp"

namespace homog
{

/// Intrinsically linear map L: W -> V, stored through its graph subgroup U.
/// Then W = U V factors as w = (w L(w)) L(w)^-1, so L(w) = pi_V^{U,V}(w)^-1
/// and the graph map is w L(w) = pi_U^{U,V}(w).
class IntrinsicLinearMap
{
public:
  /// Throws std::invalid_argument unless (U, V) is a complementary couple with
  /// the same layer dimensions as W.
  static IntrinsicLinearMap from_subgroup(const ComplementaryCouple & WV, const HomogeneousSubgroup & U);
  /// Horizontal-V case: M is p x (n_1 - p) and acts on the layer-1
  /// W-coordinates. Requires V horizontal and orthogonal to W.
  static IntrinsicLinearMap from_matrix(const ComplementaryCouple & WV, const Eigen::MatrixXd & M);
  /// Checks L(delta_t w) = delta_t L(w) and L(w) in V on sampled w, then builds
  /// the graph subgroup. Throws std::invalid_argument when L is not intrinsically linear.
  static IntrinsicLinearMap from_function(const ComplementaryCouple & WV, const std::function<Point(const Point &)> & L,
                                          int samples = 64, std::uint64_t seed = 1);
  static IntrinsicLinearMap zero(const ComplementaryCouple & WV);

  const ComplementaryCouple & couple() const { return m_WV; }
  const ComplementaryCouple & graph_couple() const { return m_UV; }
  const HomogeneousSubgroup & graph_subgroup() const { return m_UV.W(); }
  /// The p x (n_1 - p) matrix when V is horizontal and orthogonal to W.
  const std::optional<Eigen::MatrixXd> & matrix() const { return m_matrix; }

  Point operator()(const Point & w) const;
  /// Graph map w -> w L(w).
  Point graph_map(const Point & w) const { return m_UV.project_W(w); }

private:
  IntrinsicLinearMap(ComplementaryCouple WV, ComplementaryCouple UV, std::optional<Eigen::MatrixXd> M)
    : m_WV(std::move(WV)), m_UV(std::move(UV)), m_matrix(std::move(M))
  {
  }

  ComplementaryCouple m_WV;
  ComplementaryCouple m_UV;
  std::optional<Eigen::MatrixXd> m_matrix;
};

inline const HomogeneousSubgroup & graph_subgroup(const IntrinsicLinearMap & L) { return L.graph_subgroup(); }

/// True when V sits in the first layer and is orthogonal to W.
bool horizontal_orthogonal(const ComplementaryCouple & couple);

struct IntrinsicDifferential
{
  std::optional<IntrinsicLinearMap> map;
  std::vector<Point> direction_values; ///< extrapolated L(b_j) for the W basis b_j
  double extrapolation_error = 0.0;    ///< worst Richardson error estimate over directions
  double residual = 0.0; ///< sup of ||L(w)^-1 phi_{x^-1}(w)|| / ||w|| over sampled ||w|| = t_min
  double subspace_residual = 0.0;
  bool converged = false;
};

/// Default schedule 0.1 * 2^-k down to 1e-4.
std::vector<double> default_differential_schedule();

/// Limits delta_{1/t} phi_{x^-1}(delta_t b_j), x = Phi(w_bar), extrapolated to
/// t -> 0 along the schedule, assembled into an intrinsically linear map.
/// Non-convergence is reported through `converged`, never thrown.
IntrinsicDifferential estimate_intrinsic_differential(const IntrinsicMap & phi, const Point & w_bar,
                                                      const DistanceSpec & d, std::vector<double> schedule = {});

/// Points of the d-unit sphere of W from a deterministic low-discrepancy set.
std::vector<Point> unit_sphere_points(const HomogeneousSubgroup & W, const DistanceSpec & d, int n);

/// sup over the unit sphere of W of d(L(w), T(w)).
double il_distance(const IntrinsicLinearMap & L, const IntrinsicLinearMap & T, const DistanceSpec & d, int n = 256);

/// Adapted orthonormal basis for a horizontal-orthogonal couple: the V basis,
/// then the W basis (layer ordered). Column j - 1 is the 1-based index j.
Eigen::MatrixXd adapted_basis(const ComplementaryCouple & couple);

/// D^phi_{X_j}(w) = d(pi_W)_{Phi(w)} X_j(Phi(w)) in W-coordinates, with X_j
/// the left-invariant field of adapted basis vector j. Throws
/// std::invalid_argument when V is not horizontal and orthogonal to W.
Eigen::VectorXd projected_vector_field(const IntrinsicMap & phi, int j, const Point & w);

struct PartialDerivativeOptions
{
  double s0 = 0.05;     ///< largest curve parameter of the difference schedule
  int levels = 6;       ///< schedule s0 * 2^-k, k < levels
  double ode_tol = 1e-8;
  double perturbation = 1e-6;
};

struct PartialDerivative
{
  Eigen::VectorXd value;         ///< in V-coordinates
  double error = 0.0;            ///< Richardson error estimate
  double perturbed_disagreement = 0.0;
  int ode_steps = 0;             ///< RK4 steps used for the largest s
};

/// Derivative of phi-tilde along the integral curve of D^phi_{X_j} through
/// w_tilde (W-coordinates), j in p+1..n_1. Throws std::domain_error when the
/// curve leaves the domain.
PartialDerivative intrinsic_partial_derivative(const IntrinsicMap & phi, int j, const Eigen::VectorXd & w_tilde,
                                               const PartialDerivativeOptions & opts = {});

/// |V ^ W| / |V ^ U| for the graph subgroup U of L.
double jacobian_wedge(const IntrinsicLinearMap & L);

/// sqrt(1 + sum of all squared square minors of M), by explicit enumeration
/// when min(rows, cols) <= 6 and by sqrt(det(I + M^T M)) otherwise.
double jacobian_minors(const Eigen::MatrixXd & M);
double jacobian_minors_gram(const Eigen::MatrixXd & M);

/// H^m(G(L)(B)) / H^m(B) for the W-coordinate box B: Monte Carlo mean over B
/// of the Euclidean Jacobian of w -> w L(w), differentiated exactly through
/// the group law.
MeasureEstimate jacobian_measure_mc(const IntrinsicLinearMap & L, const Eigen::VectorXd & lo,
                                    const Eigen::VectorXd & hi, long n, std::uint64_t seed, int threads = 1);

/// J Phi(w): closed-form gradient through jacobian_minors when available,
/// otherwise jacobian_wedge of the estimated intrinsic differential.
double graph_jacobian(const IntrinsicMap & phi, const Point & w, const DistanceSpec & d);

/// Tangent subgroup graph(d phi_w).
IntrinsicLinearMap tangent_map(const IntrinsicMap & phi, const Point & w, const DistanceSpec & d);

} // namespace homog

#endif
