#ifndef HOMOG_SUBGROUP_HPP
#define HOMOG_SUBGROUP_HPP

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "homog/algebra.hpp"

namespace homog
{

struct SubgroupReport
{
  bool graded = true;
  bool bracket_closed = true;
  bool dilation_invariant = true;
  int offending_vector = 0; ///< 1-based index of the first vector that mixes layers, 0 if none
  double grading_residual = 0.0;
  double bracket_residual = 0.0;
  double dilation_residual = 0.0;
  std::vector<std::string> messages;
  bool ok() const { return graded && bracket_closed && dilation_invariant; }
};

/// Checks that the span of `vectors` is graded, closed under the bracket
/// (residual at most 1e-9) and invariant under dilations.
SubgroupReport validate_subgroup(const GradedAlgebra & g, const std::vector<Point> & vectors);

/// Graded, bracket-closed subspace of the Lie algebra, stored with a basis
/// that is orthonormal inside each layer and ordered by layer.
class HomogeneousSubgroup
{
public:
  static constexpr double kClosureTol = 1e-9;

  /// Throws std::invalid_argument with the report summary when validation fails.
  static HomogeneousSubgroup from_basis(const GradedAlgebra & g, const std::vector<Point> & vectors,
                                        std::string name = "");
  static HomogeneousSubgroup trivial(const GradedAlgebra & g);
  static HomogeneousSubgroup whole(const GradedAlgebra & g);
  /// Span of the layer components of approximate points, keeping the top
  /// `layer_dims[s-1]` singular directions in each layer. `residual` receives
  /// the largest discarded singular value relative to the largest kept one.
  static HomogeneousSubgroup graded_span(const GradedAlgebra & g, const std::vector<Point> & points,
                                         const std::vector<int> & layer_dims, double * residual = nullptr);

  const GradedAlgebra & algebra() const { return m_g; }
  const std::string & name() const { return m_name; }
  int dim() const { return static_cast<int>(m_basis.cols()); }
  /// Hausdorff dimension sum_s s * m_s.
  int hausdorff_dim() const;
  /// m_s = dim(S intersect V_s) for s = 1..step.
  const std::vector<int> & layer_dims() const { return m_layer_dims; }
  /// q x dim matrix; columns orthonormal, grouped by layer.
  const Eigen::MatrixXd & basis() const { return m_basis; }
  /// Column offset of the layer-s block (1-based s).
  int column_begin(int s) const;
  /// 1-based layer of basis column c.
  int column_layer(int c) const;

  Point point(const Eigen::VectorXd & coords) const { return m_basis * coords; }
  Eigen::VectorXd coords(const Point & p) const { return m_basis.transpose() * p; }
  double span_residual(const Point & p) const { return (p - m_basis * (m_basis.transpose() * p)).norm(); }
  bool contains(const Point & p, double tol = 1e-9) const { return span_residual(p) <= tol * (1.0 + p.norm()); }
  bool is_horizontal() const;
  bool same_span(const HomogeneousSubgroup & other, double tol = 1e-9) const;

private:
  HomogeneousSubgroup(GradedAlgebra g, Eigen::MatrixXd basis, std::vector<int> layer_dims, std::string name)
    : m_g(std::move(g)), m_basis(std::move(basis)), m_layer_dims(std::move(layer_dims)), m_name(std::move(name))
  {
  }

  GradedAlgebra m_g;
  Eigen::MatrixXd m_basis;
  std::vector<int> m_layer_dims;
  std::string m_name;
};

class CoupleError : public std::invalid_argument
{
public:
  enum class Kind { overlap, dimension_deficit, mismatch };
  CoupleError(Kind kind, const std::string & what) : std::invalid_argument(what), m_kind(kind) {}
  Kind kind() const { return m_kind; }

private:
  Kind m_kind;
};

namespace detail
{
template <typename S>
VectorX<S> mat_vec(const Eigen::MatrixXd & a, const VectorX<S> & x)
{
  VectorX<S> out = VectorX<S>::Zero(a.rows());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      if (a(i, j) != 0.0) {
        out[i] += S(a(i, j)) * x[j];
      }
    }
  }
  return out;
}
} // namespace detail

/// Validated factorization G = W V with W and V homogeneous and W cap V = {0}.
/// The order matters: project() returns (w, v) with g = w v.
class ComplementaryCouple
{
public:
  /// Throws CoupleError on overlap, dimension deficit or mismatched groups.
  static ComplementaryCouple validate(const HomogeneousSubgroup & W, const HomogeneousSubgroup & V);

  const HomogeneousSubgroup & W() const { return m_W; }
  const HomogeneousSubgroup & V() const { return m_V; }
  const GradedAlgebra & algebra() const { return m_W.algebra(); }
  /// (m_s, l_s) per layer.
  std::vector<std::pair<int, int>> layer_table() const;

  /// Group projections (pi_W(g), pi_V(g)). At layer s the split of
  /// g_s - [w_<s v_<s]_s into (W cap V_s) + (V cap V_s) is a linear solve.
  template <typename S>
  std::pair<VectorX<S>, VectorX<S>> project(const VectorX<S> & g) const
  {
    const GradedAlgebra & G = algebra();
    VectorX<S> w = VectorX<S>::Zero(G.dim());
    VectorX<S> v = VectorX<S>::Zero(G.dim());
    for (int s = 1; s <= G.step(); ++s) {
      const int off = G.layer_begin(s);
      const int n = G.layer_size(s);
      VectorX<S> r = g.segment(off, n);
      if (s > 1) {
        r -= G.multiply(w, v).segment(off, n);
      }
      const Layer & L = m_layers[s - 1];
      const VectorX<S> ab = detail::mat_vec(L.solve, r);
      w.segment(off, n) = detail::mat_vec(L.w_block, VectorX<S>(ab.head(L.w_block.cols())));
      v.segment(off, n) = detail::mat_vec(L.v_block, VectorX<S>(ab.tail(L.v_block.cols())));
    }
    return {w, v};
  }

  std::pair<Point, Point> project(const Point & g) const { return project<double>(g); }
  Point project_W(const Point & g) const { return project<double>(g).first; }
  Point project_V(const Point & g) const { return project<double>(g).second; }

private:
  struct Layer
  {
    Eigen::MatrixXd w_block; ///< n_s x m_s layer rows of the W basis
    Eigen::MatrixXd v_block; ///< n_s x l_s
    Eigen::MatrixXd solve;   ///< inverse of [w_block | v_block]
  };

  ComplementaryCouple(HomogeneousSubgroup W, HomogeneousSubgroup V, std::vector<Layer> layers)
    : m_W(std::move(W)), m_V(std::move(V)), m_layers(std::move(layers))
  {
  }

  HomogeneousSubgroup m_W;
  HomogeneousSubgroup m_V;
  std::vector<Layer> m_layers;
};

inline ComplementaryCouple validate_couple(const HomogeneousSubgroup & W, const HomogeneousSubgroup & V)
{
  return ComplementaryCouple::validate(W, V);
}

inline std::pair<Point, Point> project(const ComplementaryCouple & c, const Point & g) { return c.project(g); }

/// pi_W^{W,V} restricted to U, for couples (W,V) and (U,V) sharing V.
/// Throws std::invalid_argument if the V factors differ or u is not in U.
Point restricted_projection(const ComplementaryCouple & WV, const ComplementaryCouple & UV, const Point & u);

/// sigma_x(eta) = pi_W(x eta).
template <typename S>
VectorX<S> sigma_translate(const ComplementaryCouple & c, const VectorX<S> & x, const VectorX<S> & eta)
{
  return c.project<S>(c.algebra().multiply(x, eta)).first;
}

inline Point sigma_translate(const ComplementaryCouple & c, const Point & x, const Point & eta)
{
  return sigma_translate<double>(c, x, eta);
}

/// Orthogonal complement of a horizontal subgroup V: the complement of V
/// inside V_1 plus every higher layer. Brackets land in layers >= 2, so this
/// is always a homogeneous subgroup.
HomogeneousSubgroup horizontal_complement(const HomogeneousSubgroup & V);

} // namespace homog

#endif
