#include "homog/subgroup.hpp"

#include <cmath>
#include <sstream>

namespace homog
{

namespace
{

constexpr double kRankTol = 1e-10;

/// Orthonormal basis of the column span via SVD, keeping singular values
/// above kRankTol relative to the largest.
Eigen::MatrixXd span_basis(const Eigen::MatrixXd & a)
{
  if (a.cols() == 0 || a.rows() == 0) {
    return Eigen::MatrixXd(a.rows(), 0);
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU);
  const Eigen::VectorXd & sv = svd.singularValues();
  int rank = 0;
  const double scale = std::max(1.0, sv.size() ? sv[0] : 0.0);
  while (rank < sv.size() && sv[rank] > kRankTol * scale) {
    ++rank;
  }
  return svd.matrixU().leftCols(rank);
}

Eigen::MatrixXd as_matrix(int q, const std::vector<Point> & vectors)
{
  Eigen::MatrixXd m(q, static_cast<Eigen::Index>(vectors.size()));
  for (std::size_t k = 0; k < vectors.size(); ++k) {
    m.col(static_cast<Eigen::Index>(k)) = vectors[k];
  }
  return m;
}

Point layer_component(const GradedAlgebra & g, int s, const Point & x)
{
  Point out = Point::Zero(g.dim());
  out.segment(g.layer_begin(s), g.layer_size(s)) = x.segment(g.layer_begin(s), g.layer_size(s));
  return out;
}

/// Modified Gram-Schmidt in input order, dropping vectors that are dependent
/// on the ones already kept.
Eigen::MatrixXd gram_schmidt(const std::vector<Point> & vectors, int q)
{
  std::vector<Point> kept;
  for (const Point & v : vectors) {
    const double n0 = v.norm();
    if (n0 < kRankTol) {
      continue;
    }
    Point u = v;
    for (int pass = 0; pass < 2; ++pass) {
      for (const Point & k : kept) {
        u -= k.dot(u) * k;
      }
    }
    if (u.norm() > 1e-8 * n0) {
      kept.push_back(u.normalized());
    }
  }
  return as_matrix(q, kept);
}

} // namespace

SubgroupReport validate_subgroup(const GradedAlgebra & g, const std::vector<Point> & vectors)
{
  SubgroupReport report;
  const int q = g.dim();
  for (std::size_t k = 0; k < vectors.size(); ++k) {
    if (vectors[k].size() != q) {
      report.graded = false;
      report.offending_vector = static_cast<int>(k) + 1;
      report.messages.push_back("basis vector " + std::to_string(k + 1) + " has the wrong length");
      return report;
    }
  }
  const Eigen::MatrixXd Q = span_basis(as_matrix(q, vectors));
  auto residual = [&](const Point & p) { return (p - Q * (Q.transpose() * p)).norm(); };

  for (std::size_t k = 0; k < vectors.size() && report.graded; ++k) {
    for (int s = 1; s <= g.step(); ++s) {
      const double r = residual(layer_component(g, s, vectors[k]));
      report.grading_residual = std::max(report.grading_residual, r);
      if (r > HomogeneousSubgroup::kClosureTol * (1.0 + vectors[k].norm())) {
        report.graded = false;
        report.offending_vector = static_cast<int>(k) + 1;
        std::ostringstream os;
        os << "basis vector " << k + 1 << " mixes layers: its layer-" << s
           << " component is not in the span (residual " << r << ")";
        report.messages.push_back(os.str());
        break;
      }
    }
  }

  for (Eigen::Index a = 0; a < Q.cols(); ++a) {
    for (Eigen::Index b = a + 1; b < Q.cols(); ++b) {
      const double r = residual(g.bracket(Q.col(a), Q.col(b)));
      report.bracket_residual = std::max(report.bracket_residual, r);
    }
  }
  if (report.bracket_residual > HomogeneousSubgroup::kClosureTol) {
    report.bracket_closed = false;
    std::ostringstream os;
    os << "span is not closed under the bracket (residual " << report.bracket_residual << ")";
    report.messages.push_back(os.str());
  }

  for (Eigen::Index a = 0; a < Q.cols(); ++a) {
    for (double t : {0.5, 2.0, 3.0}) {
      const Point d = g.dilate<double>(t, Q.col(a));
      report.dilation_residual = std::max(report.dilation_residual, residual(d) / d.norm());
    }
  }
  if (report.dilation_residual > HomogeneousSubgroup::kClosureTol) {
    report.dilation_invariant = false;
    std::ostringstream os;
    os << "span is not dilation invariant (residual " << report.dilation_residual << ")";
    report.messages.push_back(os.str());
  }
  return report;
}

HomogeneousSubgroup HomogeneousSubgroup::from_basis(const GradedAlgebra & g, const std::vector<Point> & vectors,
                                                    std::string name)
{
  const SubgroupReport report = validate_subgroup(g, vectors);
  if (!report.ok()) {
    std::string msg = "invalid homogeneous subgroup" + (name.empty() ? std::string() : " '" + name + "'") + ":";
    for (const auto & m : report.messages) {
      msg += "\n  " + m;
    }
    throw std::invalid_argument(msg);
  }
  const int q = g.dim();
  std::vector<Point> columns;
  std::vector<int> dims;
  for (int s = 1; s <= g.step(); ++s) {
    std::vector<Point> comps;
    for (const Point & v : vectors) {
      comps.push_back(layer_component(g, s, v));
    }
    const Eigen::MatrixXd layer = gram_schmidt(comps, q);
    dims.push_back(static_cast<int>(layer.cols()));
    for (Eigen::Index c = 0; c < layer.cols(); ++c) {
      columns.push_back(layer.col(c));
    }
  }
  return HomogeneousSubgroup(g, as_matrix(q, columns), dims, std::move(name));
}

HomogeneousSubgroup HomogeneousSubgroup::trivial(const GradedAlgebra & g)
{
  return HomogeneousSubgroup(g, Eigen::MatrixXd(g.dim(), 0), std::vector<int>(g.step(), 0), "trivial");
}

HomogeneousSubgroup HomogeneousSubgroup::whole(const GradedAlgebra & g)
{
  return HomogeneousSubgroup(g, Eigen::MatrixXd::Identity(g.dim(), g.dim()), g.layer_dims(), "whole");
}

HomogeneousSubgroup HomogeneousSubgroup::graded_span(const GradedAlgebra & g, const std::vector<Point> & points,
                                                     const std::vector<int> & layer_dims, double * residual)
{
  const int q = g.dim();
  std::vector<Point> columns;
  double worst = 0.0;
  for (int s = 1; s <= g.step(); ++s) {
    const int want = layer_dims.at(s - 1);
    const int n = g.layer_size(s);
    Eigen::MatrixXd comps(n, static_cast<Eigen::Index>(points.size()));
    for (std::size_t k = 0; k < points.size(); ++k) {
      comps.col(static_cast<Eigen::Index>(k)) = points[k].segment(g.layer_begin(s), n);
    }
    if (want == 0) {
      continue;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(comps, Eigen::ComputeFullU);
    const Eigen::VectorXd & sv = svd.singularValues();
    if (sv.size() < want || sv[want - 1] <= 0.0) {
      throw std::invalid_argument("graded_span: layer " + std::to_string(s) + " has rank below " +
                                  std::to_string(want));
    }
    if (sv.size() > want) {
      worst = std::max(worst, sv[want] / sv[0]);
    }
    for (int c = 0; c < want; ++c) {
      Point col = Point::Zero(q);
      col.segment(g.layer_begin(s), n) = svd.matrixU().col(c);
      columns.push_back(col);
    }
  }
  if (residual) {
    *residual = worst;
  }
  return from_basis(g, columns);
}

int HomogeneousSubgroup::hausdorff_dim() const
{
  int M = 0;
  for (std::size_t s = 0; s < m_layer_dims.size(); ++s) {
    M += static_cast<int>(s + 1) * m_layer_dims[s];
  }
  return M;
}

int HomogeneousSubgroup::column_begin(int s) const
{
  int off = 0;
  for (int r = 1; r < s; ++r) {
    off += m_layer_dims[r - 1];
  }
  return off;
}

int HomogeneousSubgroup::column_layer(int c) const
{
  int off = 0;
  for (std::size_t s = 0; s < m_layer_dims.size(); ++s) {
    off += m_layer_dims[s];
    if (c < off) {
      return static_cast<int>(s) + 1;
    }
  }
  throw std::out_of_range("subgroup column index out of range");
}

bool HomogeneousSubgroup::is_horizontal() const
{
  for (std::size_t s = 1; s < m_layer_dims.size(); ++s) {
    if (m_layer_dims[s] != 0) {
      return false;
    }
  }
  return true;
}

bool HomogeneousSubgroup::same_span(const HomogeneousSubgroup & other, double tol) const
{
  if (dim() != other.dim() || !m_g.same_as(other.m_g)) {
    return false;
  }
  for (int c = 0; c < other.dim(); ++c) {
    if (span_residual(other.basis().col(c)) > tol) {
      return false;
    }
  }
  return true;
}

ComplementaryCouple ComplementaryCouple::validate(const HomogeneousSubgroup & W, const HomogeneousSubgroup & V)
{
  const GradedAlgebra & g = W.algebra();
  if (!g.same_as(V.algebra())) {
    throw CoupleError(CoupleError::Kind::mismatch, "W and V live in different groups");
  }
  std::vector<Layer> layers;
  for (int s = 1; s <= g.step(); ++s) {
    const int n = g.layer_size(s);
    const int m = W.layer_dims()[s - 1];
    const int l = V.layer_dims()[s - 1];
    Layer L;
    L.w_block = W.basis().block(g.layer_begin(s), W.column_begin(s), n, m);
    L.v_block = V.basis().block(g.layer_begin(s), V.column_begin(s), n, l);
    Eigen::MatrixXd B(n, m + l);
    B << L.w_block, L.v_block;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(B);
    lu.setThreshold(kRankTol);
    const int rank = static_cast<int>(lu.rank());
    if (rank < m + l) {
      throw CoupleError(CoupleError::Kind::overlap,
                        "W and V overlap in layer " + std::to_string(s) + " (rank " + std::to_string(rank) + " < " +
                          std::to_string(m + l) + ")");
    }
    if (m + l < n) {
      throw CoupleError(CoupleError::Kind::dimension_deficit,
                        "W and V do not span layer " + std::to_string(s) + " (" + std::to_string(m) + " + " +
                          std::to_string(l) + " < " + std::to_string(n) + ")");
    }
    L.solve = lu.inverse();
    layers.push_back(std::move(L));
  }
  return ComplementaryCouple(W, V, std::move(layers));
}

std::vector<std::pair<int, int>> ComplementaryCouple::layer_table() const
{
  std::vector<std::pair<int, int>> out;
  for (std::size_t s = 0; s < m_layers.size(); ++s) {
    out.emplace_back(m_W.layer_dims()[s], m_V.layer_dims()[s]);
  }
  return out;
}

Point restricted_projection(const ComplementaryCouple & WV, const ComplementaryCouple & UV, const Point & u)
{
  if (!WV.V().same_span(UV.V())) {
    throw std::invalid_argument("restricted_projection: the couples do not share V");
  }
  if (!UV.W().contains(u)) {
    throw std::invalid_argument("restricted_projection: point is not in U");
  }
  return WV.project_W(u);
}

HomogeneousSubgroup horizontal_complement(const HomogeneousSubgroup & V)
{
  const GradedAlgebra & g = V.algebra();
  if (!V.is_horizontal()) {
    throw std::invalid_argument("horizontal_complement: V is not horizontal");
  }
  const int n1 = g.layer_size(1);
  const Eigen::MatrixXd Vh = V.basis().topRows(n1);
  Eigen::MatrixXd P = Eigen::MatrixXd::Identity(n1, n1) - Vh * Vh.transpose();
  std::vector<Point> vectors;
  for (int i = 0; i < n1; ++i) {
    Point p = Point::Zero(g.dim());
    p.head(n1) = P.col(i);
    vectors.push_back(p);
  }
  for (int k = n1; k < g.dim(); ++k) {
    vectors.push_back(Point::Unit(g.dim(), k));
  }
  // Drop the dependent columns of the projector before validation.
  std::vector<Point> basis;
  const Eigen::MatrixXd Q = span_basis(as_matrix(g.dim(), vectors));
  for (Eigen::Index c = 0; c < Q.cols(); ++c) {
    basis.push_back(Q.col(c));
  }
  return HomogeneousSubgroup::from_basis(g, basis);
}

} // namespace homog
