#ifndef HOMOG_LEVELSET_HPP
#define HOMOG_LEVELSET_HPP

#include <functional>
#include <optional>
#include <vector>

#include "homog/algebra.hpp"
#include "homog/intrinsic_map.hpp"
#include "homog/subgroup.hpp"

namespace homog
{

/// Smooth map between homogeneous groups in exponential coordinates.
using GroupMap = std::function<Eigen::VectorXd(const Point &)>;

/// Abelian group R^p with a single layer.
GradedAlgebra euclidean_group(int p);

struct PansuDifferential
{
  Eigen::MatrixXd matrix;            ///< dim M x dim G, column j = L(e_j)
  double extrapolation_error = 0.0;  ///< worst Richardson error over columns
  double homomorphism_residual = 0.0; ///< max |L(a b) - L(a) L(b)| on sampled pairs
  double homogeneity_residual = 0.0;  ///< max |L(delta_t a) - delta_t L(a)|
  bool converged = false;
};

/// t = 0.1 * 2^-k down to 1e-3.
std::vector<double> default_pansu_schedule();

/// Columns L(e_j) as limits of delta_{1/t}(f(x)^-1 f(x delta_t e_j)),
/// extrapolated to t -> 0. Non-convergence is reported, never thrown.
PansuDifferential pansu_differential(const GradedAlgebra & G, const GradedAlgebra & M, const GroupMap & f,
                                     const Point & x, std::vector<double> schedule = {});

struct LevelSetJacobians
{
  double JH = 0.0; ///< |R^1 ^ ... ^ R^p|
  double JV = 0.0; ///< same for the rows projected onto V
};

/// Rows are the p x q matrix of an h-differential into R^p. Throws
/// std::invalid_argument when p exceeds dim V.
LevelSetJacobians jacobians_JH_JV(const Eigen::MatrixXd & rows, const HomogeneousSubgroup & V);

struct ImplicitOptions
{
  int max_iterations = 50;
  double tol = 1e-10;
  std::optional<Point> v0; ///< Newton seed in V, default the identity
};

struct ImplicitSolution
{
  Point v;               ///< phi(w) in V
  double residual = 0.0; ///< |f(w phi(w))|
  int iterations = 0;
};

/// Solves f(w v) = 0 for v in V by damped Newton with the V-restricted Pansu
/// differential as the linear model. Throws std::runtime_error when J_V
/// vanishes at an iterate or Newton stops making progress.
ImplicitSolution solve_implicit(const GroupMap & f, const ComplementaryCouple & couple, const Point & w,
                                const ImplicitOptions & opts = {});

/// The implicitly defined phi on the W-coordinate box [lo, hi].
IntrinsicMap implicit_map(const GroupMap & f, const ComplementaryCouple & couple, const Eigen::VectorXd & lo,
                          const Eigen::VectorXd & hi, const ImplicitOptions & opts = {});

/// |V ^ W| J_H f(x) / J_V f(x). Throws std::domain_error when J_V f(x) = 0.
double level_set_jacobian_ratio(const GroupMap & f, const ComplementaryCouple & couple, const Point & x);

} // namespace homog

#endif
