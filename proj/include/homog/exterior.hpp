#ifndef HOMOG_EXTERIOR_HPP
#define HOMOG_EXTERIOR_HPP

#include <Eigen/Dense>
#include <map>
#include <vector>

#include "homog/subgroup.hpp"

namespace homog
{

/// k-vector in Lambda_k R^q with coefficients on strictly increasing 1-based
/// index tuples. The ambient basis is orthonormal, so the norm is the
/// Euclidean norm of the coefficient list.
class Multivector
{
public:
  using Index = std::vector<int>;

  Multivector(int q, int k);
  /// Degree-1 vector from ambient coordinates.
  static Multivector from_vector(const Eigen::VectorXd & v);
  /// e_{i_1} ^ ... ^ e_{i_k} for a strictly increasing 1-based tuple.
  static Multivector basis(int q, const Index & idx);
  /// Wedge of the columns of a q x k matrix.
  static Multivector wedge_columns(const Eigen::MatrixXd & columns);

  int ambient_dim() const { return m_q; }
  int degree() const { return m_k; }
  const std::map<Index, double> & coefficients() const { return m_coeffs; }
  double coefficient(const Index & idx) const;
  /// Adds c to the coefficient of a strictly increasing tuple.
  void add(const Index & idx, double c);

  double norm() const;
  double dot(const Multivector & other) const;

  Multivector & operator+=(const Multivector & other);
  Multivector operator+(const Multivector & other) const;
  Multivector operator-(const Multivector & other) const;
  Multivector operator*(double s) const;

  /// Flips the sign so the first nonzero coefficient is positive.
  Multivector canonical() const;

private:
  int m_q;
  int m_k;
  std::map<Index, double> m_coeffs;
};

/// Graded-anticommutative wedge product. Throws std::invalid_argument when
/// the degrees add up to more than the ambient dimension.
Multivector wedge(const Multivector & a, const Multivector & b);

/// Unit simple k-vector of an orthonormal basis of the column span, sign
/// canonicalized. Throws std::invalid_argument for a zero-dimensional span.
Multivector orienting_unit(const Eigen::MatrixXd & spanning_columns);
Multivector orienting_unit(const HomogeneousSubgroup & S);

/// The unique (q-k)-vector with xi ^ *eta = <xi, eta> e for every k-vector xi.
/// Throws std::invalid_argument unless `orientation` is a unit q-vector.
Multivector hodge_star(const Multivector & eta, const Multivector & orientation);

/// |V ^ U| / |V ^ W| from orienting units. Throws std::invalid_argument when
/// |V ^ W| vanishes (W and V not complementary).
double wedge_ratio(const HomogeneousSubgroup & V, const HomogeneousSubgroup & W, const HomogeneousSubgroup & U);

/// |v_1 ^ ... ^ v_k| of the columns through the Gram determinant.
double wedge_norm_gram(const Eigen::MatrixXd & columns);

} // namespace homog

#endif
