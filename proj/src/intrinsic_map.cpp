#include "homog/intrinsic_map.hpp"

#include <cmath>
#include <regex>
#include <stdexcept>

#include "homog/fixtures.hpp"
#include "homog/random.hpp"

namespace homog
{

IntrinsicMap::IntrinsicMap(ComplementaryCouple couple, Eigen::VectorXd lo, Eigen::VectorXd hi, Evaluator eval,
                           std::string name)
  : m_couple(std::move(couple)), m_lo(std::move(lo)), m_hi(std::move(hi)), m_eval(std::move(eval)),
    m_name(std::move(name))
{
  const int m = m_couple.W().dim();
  if (m_lo.size() != m || m_hi.size() != m) {
    throw std::invalid_argument("domain box must have one bound per W-coordinate");
  }
}

bool IntrinsicMap::in_domain(const Point & w) const
{
  const Eigen::VectorXd c = m_couple.W().coords(w);
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    if (c[i] < m_lo[i] || c[i] > m_hi[i]) {
      return false;
    }
  }
  return !m_domain || m_domain(w);
}

Point IntrinsicMap::operator()(const Point & w) const
{
  if (!in_domain(w)) {
    throw std::domain_error("point outside the domain of " + (m_name.empty() ? std::string("phi") : m_name));
  }
  return m_eval(w);
}

Eigen::VectorXd IntrinsicMap::tilde(const Eigen::VectorXd & w_coords) const
{
  return m_couple.V().coords((*this)(m_couple.W().point(w_coords)));
}

Point graph_point(const IntrinsicMap & phi, const Point & w)
{
  return phi.algebra().multiply<double>(w, phi(w));
}

IntrinsicMap translate_map(const IntrinsicMap & phi, const Point & x)
{
  const ComplementaryCouple & c = phi.couple();
  const GradedAlgebra & g = c.algebra();
  const Point x_inv = g.inverse<double>(x);
  const int m = c.W().dim();
  const Eigen::VectorXd inf = Eigen::VectorXd::Constant(m, std::numeric_limits<double>::infinity());
  auto eval = [phi, c, g, x_inv](const Point & eta) {
    const auto [w, v] = c.project(g.multiply<double>(x_inv, eta));
    return g.multiply<double>(g.inverse<double>(v), phi(w));
  };
  IntrinsicMap out(c, -inf, inf, eval, phi.name() + " translated");
  out.set_domain([phi, c, x_inv](const Point & eta) { return phi.in_domain(sigma_translate(c, x_inv, eta)); });
  return out;
}

LipschitzEstimate intrinsic_lipschitz_estimate(const IntrinsicMap & phi, const DistanceSpec & d, int n,
                                               std::uint64_t seed)
{
  const ComplementaryCouple & c = phi.couple();
  const GradedAlgebra & g = c.algebra();
  Rng rng(seed, 0x11B);
  LipschitzEstimate out;
  for (int k = 0; k < n; ++k) {
    const Point w1 = c.W().point(rng.uniform_vector(phi.lo(), phi.hi()));
    const Point w2 = c.W().point(rng.uniform_vector(phi.lo(), phi.hi()));
    if (!phi.in_domain(w1) || !phi.in_domain(w2)) {
      ++out.skipped;
      continue;
    }
    const Point z = g.multiply<double>(g.inverse<double>(graph_point(phi, w2)), graph_point(phi, w1));
    const auto [zw, zv] = c.project(z);
    const double den = hom_norm(d, zw);
    if (den < 1e-12) {
      ++out.skipped;
      continue;
    }
    ++out.pairs;
    out.value = std::max(out.value, hom_norm(d, zv) / den);
  }
  return out;
}

HomogeneousSubgroup vertical_subgroup(const GradedAlgebra & g)
{
  std::vector<Point> basis;
  for (int k = 1; k < g.dim(); ++k) {
    basis.push_back(Point::Unit(g.dim(), k));
  }
  return HomogeneousSubgroup::from_basis(g, basis, "vertical");
}

HomogeneousSubgroup horizontal_subgroup(const GradedAlgebra & g)
{
  return HomogeneousSubgroup::from_basis(g, {Point::Unit(g.dim(), 0)}, "horizontal");
}

ComplementaryCouple vertical_horizontal_couple(const GradedAlgebra & g)
{
  return validate_couple(vertical_subgroup(g), horizontal_subgroup(g));
}

IntrinsicMap phi_zero(const ComplementaryCouple & couple)
{
  const int m = couple.W().dim();
  const int p = couple.V().dim();
  const int n1 = couple.algebra().layer_size(1);
  const int q = couple.algebra().dim();
  IntrinsicMap out(couple, Eigen::VectorXd::Constant(m, -2.0), Eigen::VectorXd::Constant(m, 2.0),
                   [q](const Point &) { return Point::Zero(q); }, "zero");
  if (couple.V().is_horizontal()) {
    out.set_gradient([p, n1](const Point &) { return Eigen::MatrixXd::Zero(p, n1 - p); });
  }
  return out;
}

IntrinsicMap phi_linear(double a)
{
  const GradedAlgebra g = heisenberg1();
  IntrinsicMap out(vertical_horizontal_couple(g), Eigen::Vector2d(-2.0, -2.0), Eigen::Vector2d(2.0, 2.0),
                   [a](const Point & w) { return Point(Eigen::Vector3d(a * w[1], 0.0, 0.0)); },
                   "linear(" + std::to_string(a) + ")");
  out.set_gradient([a](const Point &) { return Eigen::MatrixXd::Constant(1, 1, a); });
  return out;
}

IntrinsicMap phi_parabola()
{
  const GradedAlgebra g = heisenberg1();
  IntrinsicMap out(vertical_horizontal_couple(g), Eigen::Vector2d(-2.0, -2.0), Eigen::Vector2d(2.0, 2.0),
                   [](const Point & w) { return Point(Eigen::Vector3d(-w[1] * w[1], 0.0, 0.0)); }, "parabola");
  // Intrinsic gradient d/dy + phi d/dtau applied to -y^2.
  out.set_gradient([](const Point & w) { return Eigen::MatrixXd::Constant(1, 1, -2.0 * w[1]); });
  return out;
}

IntrinsicMap phi_by_name(const std::string & name)
{
  if (name == "zero") {
    return phi_zero(vertical_horizontal_couple(heisenberg1()));
  }
  if (name == "parabola") {
    return phi_parabola();
  }
  static const std::regex linear(R"(linear[:(]\s*([-+0-9.eE]+)\s*\)?)");
  std::smatch m;
  if (std::regex_match(name, m, linear)) {
    return phi_linear(std::stod(m[1].str()));
  }
  throw std::invalid_argument("unknown phi fixture '" + name + "' (expected zero, linear:a or parabola)");
}

} // namespace homog
