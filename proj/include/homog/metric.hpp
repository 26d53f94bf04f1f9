#ifndef HOMOG_METRIC_HPP
#define HOMOG_METRIC_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "homog/algebra.hpp"
#include "homog/subgroup.hpp"

namespace homog
{

enum class DistanceKind { d_inf, cygan_koranyi, custom_homnorm };

/// A homogeneous norm on a graded group; the distance is d(x,y) = ||x^-1 y||.
///
/// d_inf:           max_s eps_s |x_s|^(1/s)
/// cygan_koranyi:   (|z|^4 + 16 t^2)^(1/4), Heisenberg fixtures only
/// custom_homnorm:  (sum_s (eps_s |x_s|^(1/s))^r)^(1/r), r >= 1
///
/// |x_s| is the Euclidean norm of the layer-s block.
struct DistanceSpec
{
  DistanceKind kind = DistanceKind::d_inf;
  std::vector<double> weights; ///< eps_s per layer, defaults to 1
  double exponent = 2.0;       ///< r for custom_homnorm
  GradedAlgebra algebra;

  /// Throws std::invalid_argument for bad weights or Cygan-Koranyi on a
  /// group that is not one of the Heisenberg fixtures.
  static DistanceSpec d_inf(const GradedAlgebra & g, std::vector<double> weights = {});
  static DistanceSpec cygan_koranyi(const GradedAlgebra & g);
  static DistanceSpec custom(const GradedAlgebra & g, std::vector<double> weights, double exponent);

  std::string kind_name() const;
  double weight(int s) const { return weights[s - 1]; }
  /// Largest |x_s| over the ball ||x|| <= R.
  double layer_bound(int s, double R) const;
};

DistanceKind parse_distance_kind(const std::string & name);

double hom_norm(const DistanceSpec & d, const Point & x);
double distance(const DistanceSpec & d, const Point & x, const Point & y);

struct Cone
{
  Point vertex;
  HomogeneousSubgroup axis;
  double opening; ///< alpha in (0,1)
};

/// Validates alpha in (0,1); throws std::invalid_argument otherwise.
Cone make_cone(Point vertex, HomogeneousSubgroup axis, double alpha);

struct DistanceToSubgroup
{
  double value = 0.0;
  Point nearest; ///< minimizing point of the subgroup
};

/// dist(x, H) = inf_h d(x, h) by multistart Nelder-Mead in H-coordinates
/// (20 starts, 400 iterations each). Deterministic.
DistanceToSubgroup distance_to_subgroup(const DistanceSpec & d, const Point & x, const HomogeneousSubgroup & H);

/// vertex^-1 x in X(0, axis, alpha), i.e. dist(y, axis) <= alpha ||y||, up to
/// the 1e-6 relative tolerance of the distance estimate.
bool in_cone(const Point & x, const Cone & cone, const DistanceSpec & d);

struct C0Estimate
{
  double value = 0.0; ///< min ||wv|| / (||w|| + ||v||) found; an upper bound on c0
  Point w;            ///< minimizing pair, normalized to ||w|| + ||v|| = 1
  Point v;
  int samples = 0;
};

/// Sampled lower envelope of ||wv|| over ||w|| + ||v|| = 1, polished by
/// Nelder-Mead. Throws std::invalid_argument when either factor is trivial.
C0Estimate estimate_c0(const ComplementaryCouple & couple, const DistanceSpec & d, int n, std::uint64_t seed);

struct DistanceValidation
{
  int samples = 0;
  double worst_triangle = 0.0; ///< max of d(x,z) - d(x,y) - d(y,z), clipped below at 0
  Point worst_x, worst_y, worst_z;
  double left_invariance = 0.0;
  double homogeneity = 0.0;
  double symmetry = 0.0;
  bool empty() const { return samples == 0; }
  bool ok(double tol = 1e-12) const
  {
    return worst_triangle <= tol && left_invariance <= 1e-9 && homogeneity <= 1e-9 && symmetry <= 1e-12;
  }
};

/// Samples n random triples (coordinates uniform in [-1,1]) and reports the
/// worst triangle violation together with invariance residuals.
DistanceValidation validate_homogeneous_distance(const DistanceSpec & d, int n, std::uint64_t seed);

} // namespace homog

#endif
