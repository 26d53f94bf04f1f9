#ifndef HOMOG_MEASURE_HPP
#define HOMOG_MEASURE_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "homog/estimate.hpp"
#include "homog/graph.hpp"
#include "homog/intrinsic_map.hpp"
#include "homog/metric.hpp"

namespace homog
{

enum class SliceMethod { monte_carlo, grid, adaptive };

SliceMethod parse_slice_method(const std::string & name);
std::string slice_method_name(SliceMethod m);

struct SliceOptions
{
  SliceMethod method = SliceMethod::adaptive;
  long samples = 100000; ///< monte_carlo
  int resolution = 256;  ///< grid points per outer coordinate
  double tol = 1e-7;     ///< adaptive absolute tolerance
  double radius = 1.0;   ///< ball radius r in H^n(S cap B(z, r))
  std::uint64_t seed = 1;
  int threads = 1;
};

/// H^n of {u in R^n : ||z^-1 psi(u)|| <= r} with psi(u) = S u for an
/// orthonormal q x n basis S. Every method integrates the exact measure of
/// the one-dimensional sections along the last coordinate; monte_carlo is
/// plain hit-or-miss in the bounding box instead. adaptive falls back to
/// monte_carlo above n = 3. Throws std::runtime_error when the bounding
/// box would have to grow past its cap.
MeasureEstimate slice_volume(const Eigen::MatrixXd & S, const Point & z, const DistanceSpec & d,
                             const SliceOptions & opts = {});
MeasureEstimate slice_volume(const HomogeneousSubgroup & S, const Point & z, const DistanceSpec & d,
                             const SliceOptions & opts = {});

struct SphericalFactorOptions
{
  int starts = 8;
  int iterations = 80;
  SliceOptions slice;
  std::uint64_t seed = 1;
};

struct SphericalFactor
{
  double beta = 0.0;
  Point argmax;          ///< maximizing center z* in the closed unit ball
  double at_zero = 0.0;  ///< H^n(S cap B(0,1))
  bool on_boundary = false; ///< ||z*|| = 1 up to 1e-6
  bool converged = false;   ///< every start met the simplex tolerance
  int evaluations = 0;
};

/// beta_d(S) = max over ||z|| <= 1 of H^n(S cap B(z,1)), by multistart
/// Nelder-Mead in exponential coordinates. Points outside the ball are
/// pulled back by the dilation delta_{1/||z||}. The start z = 0 is always
/// included, so beta >= at_zero.
SphericalFactor spherical_factor(const HomogeneousSubgroup & S, const DistanceSpec & d,
                                 const SphericalFactorOptions & opts = {});

/// Measurable set in G for graph_mu.
struct Region
{
  enum class Kind { ball, box };
  Kind kind = Kind::box;
  Point center;
  double radius = 0.0;
  Eigen::VectorXd lo; ///< box corners in exponential coordinates
  Eigen::VectorXd hi;
  int open_axis = -1; ///< box axis whose upper face is excluded, -1 for a closed box

  static Region ball(Point center, double radius);
  static Region box(Eigen::VectorXd lo, Eigen::VectorXd hi);
  bool contains(const Point & p, const DistanceSpec & d) const;
  /// Splits a box at the midpoint of its widest axis into a partition: the
  /// lower half drops the cut face so a graph lying in it is counted once.
  std::pair<Region, Region> bisect() const;
};

/// mu(B) = integral over {w in A : Phi(w) in B} of J Phi(w) dH^m(w), by
/// Monte Carlo over the domain box A of phi (which must be bounded).
MeasureEstimate graph_mu(const IntrinsicMap & phi, const Region & B, const DistanceSpec & d, long n,
                         std::uint64_t seed, int threads = 1);

/// H^m(pi_W^{W,V}(B)) for the U-coordinate box B = [lo, hi] of a couple
/// (U,V) sharing V with (W,V). Hit-or-miss in W-coordinates: a point of W
/// is in the image iff its projection back onto U lands in B.
MeasureEstimate pushforward_volume(const ComplementaryCouple & WV, const ComplementaryCouple & UV,
                                   const Eigen::VectorXd & lo, const Eigen::VectorXd & hi, long n,
                                   std::uint64_t seed, int threads = 1);

/// t = 2^-3, ..., 2^-9.
std::vector<double> default_blowup_schedule();

struct BlowupOptions
{
  std::vector<double> schedule = default_blowup_schedule();
  int centers = 64;
  long samples = 40000; ///< Monte Carlo samples per t
  int refine_iterations = 60;
  double tolerance = 0.10;
  std::uint64_t seed = 1;
  int threads = 1;
  SphericalFactorOptions beta;
};

struct BlowupRow
{
  double t = 0.0;
  double density = 0.0; ///< mu(B(y,t)) / t^M at the refined center, fresh samples
  double std_error = 0.0;
  double best_sampled = 0.0; ///< max over the sampled centers before refinement
  Point center;              ///< y = x delta_t(z), reported as z
};

struct BlowupReport
{
  Point zeta;
  Point x;
  int hausdorff_dim = 0;
  std::vector<BlowupRow> rows;
  double extrapolated = 0.0;
  double extrapolation_error = 0.0; ///< standard error of the intercept
  double beta = 0.0;                ///< beta_d of the tangent subgroup
  Point beta_argmax;
  double relative_gap = 0.0;
  bool noisy = false; ///< Monte Carlo error above a third of the tolerance
  bool pass = false;
};

/// Spherical Federer density of mu at x = Phi(zeta) through the blow-up
/// sup_y mu(B(y,t)) / t^M with x in B(y,t), compared against beta_d of the
/// tangent subgroup. The substitution w = sigma_x(delta_t eta) keeps the
/// sampling box fixed as t shrinks.
BlowupReport federer_density(const IntrinsicMap & phi, const Point & zeta, const DistanceSpec & d,
                             const BlowupOptions & opts = {});

struct AreaOptions
{
  long samples = 100000;
  int density_points = 2;
  int tangent_samples = 10;
  double symmetry_tolerance = 0.02;
  BlowupOptions blowup;
  std::uint64_t seed = 1;
  int threads = 1;
};

struct AreaReport
{
  MeasureEstimate mu;
  std::vector<BlowupReport> densities;
  std::vector<double> tangent_betas;
  double beta_spread = 0.0; ///< (max - min) / mean over sampled tangents
  bool rotationally_symmetric = false;
  double omega = 0.0;              ///< common beta when symmetric
  double spherical_measure = 0.0;  ///< mu(region) / omega
  std::vector<MeasureEstimate> halves;
  double additivity_gap = 0.0; ///< |mu - mu_1 - mu_2| in combined standard errors
  bool pass = false;
};

/// Composite check of the area formula on a box region: the measure mu,
/// Federer densities at sampled graph points, and the rotational-symmetry
/// shortcut mu(region) / omega_d with its consistency over two halves.
AreaReport area_check(const IntrinsicMap & phi, const Region & region, const DistanceSpec & d,
                      const AreaOptions & opts = {});

} // namespace homog

#endif
