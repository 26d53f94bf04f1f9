#include "homog/exterior.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "homog/numerics.hpp"

namespace homog
{

Multivector::Multivector(int q, int k) : m_q(q), m_k(k)
{
  if (q < 0 || k < 0 || k > q) {
    throw std::invalid_argument("multivector degree " + std::to_string(k) + " outside 0.." + std::to_string(q));
  }
}

Multivector Multivector::from_vector(const Eigen::VectorXd & v)
{
  Multivector out(static_cast<int>(v.size()), 1);
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v[i] != 0.0) {
      out.m_coeffs[{static_cast<int>(i) + 1}] = v[i];
    }
  }
  return out;
}

Multivector Multivector::basis(int q, const Index & idx)
{
  Multivector out(q, static_cast<int>(idx.size()));
  out.add(idx, 1.0);
  return out;
}

Multivector Multivector::wedge_columns(const Eigen::MatrixXd & columns)
{
  const int q = static_cast<int>(columns.rows());
  Multivector out(q, 0);
  out.add({}, 1.0);
  for (Eigen::Index c = 0; c < columns.cols(); ++c) {
    out = wedge(out, from_vector(columns.col(c)));
  }
  return out;
}

double Multivector::coefficient(const Index & idx) const
{
  const auto it = m_coeffs.find(idx);
  return it == m_coeffs.end() ? 0.0 : it->second;
}

void Multivector::add(const Index & idx, double c)
{
  if (static_cast<int>(idx.size()) != m_k) {
    throw std::invalid_argument("index tuple has the wrong length for this degree");
  }
  for (std::size_t n = 0; n < idx.size(); ++n) {
    if (idx[n] < 1 || idx[n] > m_q || (n > 0 && idx[n] <= idx[n - 1])) {
      throw std::invalid_argument("multivector indices must be strictly increasing within 1..q");
    }
  }
  m_coeffs[idx] += c;
}

double Multivector::norm() const { return std::sqrt(dot(*this)); }

double Multivector::dot(const Multivector & other) const
{
  if (m_q != other.m_q || m_k != other.m_k) {
    throw std::invalid_argument("inner product of multivectors of different shape");
  }
  double s = 0.0;
  for (const auto & [idx, c] : m_coeffs) {
    s += c * other.coefficient(idx);
  }
  return s;
}

Multivector & Multivector::operator+=(const Multivector & other)
{
  if (m_q != other.m_q || m_k != other.m_k) {
    throw std::invalid_argument("sum of multivectors of different shape");
  }
  for (const auto & [idx, c] : other.m_coeffs) {
    m_coeffs[idx] += c;
  }
  return *this;
}

Multivector Multivector::operator+(const Multivector & other) const
{
  Multivector out = *this;
  out += other;
  return out;
}

Multivector Multivector::operator-(const Multivector & other) const { return *this + other * -1.0; }

Multivector Multivector::operator*(double s) const
{
  Multivector out = *this;
  for (auto & [idx, c] : out.m_coeffs) {
    c *= s;
  }
  return out;
}

Multivector Multivector::canonical() const
{
  for (const auto & [idx, c] : m_coeffs) {
    if (std::abs(c) > 1e-14) {
      return c < 0 ? *this * -1.0 : *this;
    }
  }
  return *this;
}

namespace
{
/// Sign of the permutation sorting the concatenation a|b (both increasing,
/// disjoint): (-1)^(number of pairs i in a, j in b with i > j).
int merge_sign(const Multivector::Index & a, const Multivector::Index & b)
{
  int inversions = 0;
  for (int i : a) {
    for (int j : b) {
      if (i > j) {
        ++inversions;
      }
    }
  }
  return inversions % 2 ? -1 : 1;
}
} // namespace

Multivector wedge(const Multivector & a, const Multivector & b)
{
  if (a.ambient_dim() != b.ambient_dim()) {
    throw std::invalid_argument("wedge of multivectors in different ambient spaces");
  }
  if (a.degree() + b.degree() > a.ambient_dim()) {
    throw std::invalid_argument("wedge degree " + std::to_string(a.degree() + b.degree()) +
                                " exceeds ambient dimension " + std::to_string(a.ambient_dim()));
  }
  Multivector out(a.ambient_dim(), a.degree() + b.degree());
  for (const auto & [ia, ca] : a.coefficients()) {
    for (const auto & [ib, cb] : b.coefficients()) {
      Multivector::Index merged;
      std::set_union(ia.begin(), ia.end(), ib.begin(), ib.end(), std::back_inserter(merged));
      if (merged.size() != ia.size() + ib.size()) {
        continue; // repeated index
      }
      out.add(merged, merge_sign(ia, ib) * ca * cb);
    }
  }
  return out;
}

Multivector orienting_unit(const Eigen::MatrixXd & spanning_columns)
{
  if (spanning_columns.cols() == 0) {
    throw std::invalid_argument("orienting_unit: zero-dimensional subspace");
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(spanning_columns);
  const Eigen::MatrixXd Q =
    qr.householderQ() * Eigen::MatrixXd::Identity(spanning_columns.rows(), spanning_columns.cols());
  const Eigen::MatrixXd R = qr.matrixQR().topRows(spanning_columns.cols()).triangularView<Eigen::Upper>();
  const double scale = spanning_columns.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < R.rows(); ++i) {
    if (std::abs(R(i, i)) <= 1e-12 * scale) {
      throw std::invalid_argument("orienting_unit: spanning columns are linearly dependent");
    }
  }
  return Multivector::wedge_columns(Q).canonical();
}

Multivector orienting_unit(const HomogeneousSubgroup & S) { return orienting_unit(S.basis()); }

Multivector hodge_star(const Multivector & eta, const Multivector & orientation)
{
  const int q = eta.ambient_dim();
  if (orientation.ambient_dim() != q || orientation.degree() != q || std::abs(orientation.norm() - 1.0) > 1e-12) {
    throw std::invalid_argument("hodge_star: orientation must be a unit q-vector");
  }
  Multivector::Index all(q);
  for (int i = 0; i < q; ++i) {
    all[i] = i + 1;
  }
  const double s = orientation.coefficient(all);
  Multivector out(q, q - eta.degree());
  for (const auto & [idx, c] : eta.coefficients()) {
    Multivector::Index rest;
    std::set_difference(all.begin(), all.end(), idx.begin(), idx.end(), std::back_inserter(rest));
    out.add(rest, s * merge_sign(idx, rest) * c);
  }
  return out;
}

double wedge_ratio(const HomogeneousSubgroup & V, const HomogeneousSubgroup & W, const HomogeneousSubgroup & U)
{
  const Multivector v = orienting_unit(V);
  const double vw = wedge(v, orienting_unit(W)).norm();
  if (vw < 1e-12) {
    throw std::invalid_argument("wedge_ratio: |V ^ W| vanishes, W and V are not complementary");
  }
  return wedge(v, orienting_unit(U)).norm() / vw;
}

double wedge_norm_gram(const Eigen::MatrixXd & columns)
{
  if (columns.cols() == 0) {
    return 1.0;
  }
  const double det = (columns.transpose() * columns).determinant();
  return std::sqrt(std::max(det, 0.0));
}

} // namespace homog
