#ifndef HOMOG_ALGEBRA_HPP
#define HOMOG_ALGEBRA_HPP

#include <Eigen/Dense>
#include <memory>
#include <string>
#include <vector>

#include "homog/dual.hpp"

namespace homog
{

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Exponential coordinates of the first kind in the graded basis.
using Point = Eigen::VectorXd;

/// One structure constant [e_i, e_j] = ... + c e_k, with 1-based indices in
/// the global graded basis (the convention of group files).
struct StructureConstant
{
  int i = 0;
  int j = 0;
  int k = 0;
  double c = 0.0;
};

/// Raw description of a graded nilpotent Lie algebra, as read from a file.
/// Antisymmetric completion happens when a GradedAlgebra is built from it.
struct AlgebraSpec
{
  std::vector<int> layers;
  std::vector<StructureConstant> brackets;
};

struct Violation
{
  std::string axiom;        ///< antisymmetry | jacobi | grading | index | layers | step
  std::vector<int> indices; ///< 1-based basis indices
  double residual = 0.0;
  std::string message;
};

struct ValidationReport
{
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  std::string summary() const;
};

/// Checks the grading axioms of a spec. Violations are report entries, never
/// exceptions. Tolerance for Jacobi and antisymmetry residuals is 1e-12.
ValidationReport validate_spec(const AlgebraSpec & spec);

/// Tangent vector at a point of the group, components in the graded basis.
struct TangentVector
{
  Point base;
  Eigen::VectorXd components;
};

/// Immutable graded nilpotent Lie algebra of step at most 6, with the group
/// law given by the truncated BCH series in exponential coordinates.
///
/// Copies are cheap and share state. All arithmetic members are templated on
/// the scalar type so that the same polynomial code runs on doubles and on
/// Dual numbers.
class GradedAlgebra
{
public:
  static constexpr double kValidationTol = 1e-12;
  static constexpr int kMaxStep = 6;

  /// Builds the algebra, throwing std::invalid_argument when validate_spec
  /// reports any violation.
  static GradedAlgebra from_spec(const AlgebraSpec & spec);

  int dim() const { return m_data->dim; }
  int step() const { return static_cast<int>(m_data->layers.size()); }
  const std::vector<int> & layer_dims() const { return m_data->layers; }
  /// First 0-based coordinate of layer s (1-based); layer_begin(step()+1) == dim().
  int layer_begin(int s) const { return m_data->offsets[s - 1]; }
  int layer_size(int s) const { return m_data->layers[s - 1]; }
  /// 1-based layer of the 0-based coordinate k.
  int layer_of(int k) const { return m_data->layer_of[k]; }
  /// Hausdorff dimension sum_s s*n_s.
  int homogeneous_dim() const;
  const AlgebraSpec & spec() const { return m_data->spec; }

  bool same_as(const GradedAlgebra & other) const { return m_data == other.m_data; }

  template <typename DerivedX, typename DerivedY>
  VectorX<typename DerivedX::Scalar> bracket(const Eigen::MatrixBase<DerivedX> & x,
                                             const Eigen::MatrixBase<DerivedY> & y) const
  {
    using S = typename DerivedX::Scalar;
    VectorX<S> out = VectorX<S>::Zero(dim());
    for (const auto & e : m_data->constants) {
      out[e.k] += S(e.c) * (x[e.i] * y[e.j] - x[e.j] * y[e.i]);
    }
    return out;
  }

  /// Group product v*w through the BCH series.
  template <typename S>
  VectorX<S> multiply(const VectorX<S> & v, const VectorX<S> & w) const
  {
    const auto & nodes = m_data->bch_nodes;
    Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic> terms(dim(), nodes.size());
    VectorX<S> z = VectorX<S>::Zero(dim());
    for (std::size_t n = 0; n < nodes.size(); ++n) {
      const BchNode & node = nodes[n];
      const VectorX<S> & letter = node.letter_y ? w : v;
      if (node.parent < 0) {
        terms.col(n) = letter;
      } else {
        terms.col(n) = bracket(letter, terms.col(node.parent));
      }
      if (node.coeff != 0.0) {
        z += S(node.coeff) * terms.col(n);
      }
    }
    return z;
  }

  template <typename S>
  VectorX<S> inverse(const VectorX<S> & x) const
  {
    return -x;
  }

  template <typename S>
  VectorX<S> dilate(double t, const VectorX<S> & x) const
  {
    VectorX<S> out = x;
    double scale = 1.0;
    for (int s = 1; s <= step(); ++s) {
      scale *= t;
      out.segment(layer_begin(s), layer_size(s)) *= S(scale);
    }
    return out;
  }

  /// Keeps layers 1..j, zeroes the rest.
  template <typename S>
  VectorX<S> layer_project(int j, const VectorX<S> & x) const
  {
    VectorX<S> out = x;
    const int from = layer_begin(j + 1);
    out.tail(dim() - from).setZero();
    return out;
  }

private:
  struct Entry
  {
    int i, j, k; // 0-based, i < j
    double c;
  };
  struct BchNode
  {
    int parent;    ///< index of the bracketed suffix, -1 for a single letter
    bool letter_y; ///< letter prepended at this node
    double coeff;  ///< rational BCH coefficient of the full word, 0 if none
  };
  struct Data
  {
    AlgebraSpec spec;
    std::vector<int> layers;
    std::vector<int> offsets;
    std::vector<int> layer_of;
    int dim = 0;
    std::vector<Entry> constants;
    std::vector<BchNode> bch_nodes;
  };

  explicit GradedAlgebra(std::shared_ptr<const Data> data) : m_data(std::move(data)) {}

  std::shared_ptr<const Data> m_data;
};

// Free-function forms of the algebra operations.

Eigen::VectorXd bracket(const GradedAlgebra & g, const Eigen::VectorXd & x, const Eigen::VectorXd & y);
Point bch_multiply(const GradedAlgebra & g, const Point & v, const Point & w);
Point inverse(const GradedAlgebra & g, const Point & x);
/// Throws std::domain_error when t <= 0.
Point dilate(const GradedAlgebra & g, double t, const Point & x);
/// Throws std::out_of_range unless 1 <= j <= step.
Point layer_project(const GradedAlgebra & g, int j, const Point & x);

/// X_j(g) = d/ds g*(s e_j) at s = 0, with j a 1-based basis index. Computed
/// exactly by pushing a dual number through the BCH polynomial.
TangentVector left_invariant_field(const GradedAlgebra & g, int j, const Point & base);

/// Basis vector e_j (1-based) of the ambient graded basis.
Point basis_vector(const GradedAlgebra & g, int j);

} // namespace homog

#endif
