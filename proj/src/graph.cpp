#include "homog/graph.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "homog/exterior.hpp"
#include "homog/dual.hpp"
#include "homog/numerics.hpp"
#include "homog/random.hpp"

namespace homog
{

bool horizontal_orthogonal(const ComplementaryCouple & couple)
{
  if (!couple.V().is_horizontal()) {
    return false;
  }
  const Eigen::MatrixXd cross = couple.W().basis().transpose() * couple.V().basis();
  return cross.size() == 0 || cross.cwiseAbs().maxCoeff() <= 1e-10;
}

namespace
{

Eigen::MatrixXd matrix_from_graph(const ComplementaryCouple & WV, const ComplementaryCouple & UV)
{
  const int m1 = WV.W().layer_dims()[0];
  const int p = WV.V().dim();
  Eigen::MatrixXd M(p, m1);
  for (int j = 0; j < m1; ++j) {
    const Point w = WV.W().basis().col(j);
    M.col(j) = WV.V().coords(-UV.project_V(w));
  }
  return M;
}

} // namespace

IntrinsicLinearMap IntrinsicLinearMap::from_subgroup(const ComplementaryCouple & WV, const HomogeneousSubgroup & U)
{
  if (U.layer_dims() != WV.W().layer_dims()) {
    throw std::invalid_argument("graph subgroup must have the layer dimensions of W");
  }
  ComplementaryCouple UV = validate_couple(U, WV.V());
  std::optional<Eigen::MatrixXd> M;
  if (horizontal_orthogonal(WV)) {
    M = matrix_from_graph(WV, UV);
  }
  return IntrinsicLinearMap(WV, std::move(UV), std::move(M));
}

IntrinsicLinearMap IntrinsicLinearMap::from_matrix(const ComplementaryCouple & WV, const Eigen::MatrixXd & M)
{
  if (!horizontal_orthogonal(WV)) {
    throw std::invalid_argument("matrix representation needs V horizontal and orthogonal to W");
  }
  const HomogeneousSubgroup & W = WV.W();
  const HomogeneousSubgroup & V = WV.V();
  const int m1 = W.layer_dims()[0];
  if (M.rows() != V.dim() || M.cols() != m1) {
    throw std::invalid_argument("intrinsic gradient must be " + std::to_string(V.dim()) + " x " + std::to_string(m1));
  }
  std::vector<Point> basis;
  for (int j = 0; j < W.dim(); ++j) {
    Point b = W.basis().col(j);
    if (j < m1) {
      b += V.basis() * M.col(j);
    }
    basis.push_back(b);
  }
  const HomogeneousSubgroup U = HomogeneousSubgroup::from_basis(WV.algebra(), basis, "graph");
  return IntrinsicLinearMap(WV, validate_couple(U, V), M);
}

IntrinsicLinearMap IntrinsicLinearMap::from_function(const ComplementaryCouple & WV,
                                                     const std::function<Point(const Point &)> & L, int samples,
                                                     std::uint64_t seed)
{
  const GradedAlgebra & g = WV.algebra();
  const HomogeneousSubgroup & W = WV.W();
  Rng rng(seed, 0x1A);
  std::vector<Point> images;
  std::vector<Point> inputs;
  for (int j = 0; j < W.dim(); ++j) {
    inputs.push_back(W.basis().col(j));
  }
  for (int k = 0; k < samples; ++k) {
    inputs.push_back(W.point(rng.normal_vector(W.dim())));
  }
  double worst = 0.0;
  for (const Point & w : inputs) {
    const Point lw = L(w);
    if (!WV.V().contains(lw, 1e-10)) {
      throw std::invalid_argument("intrinsic linear candidate does not take values in V");
    }
    const double t = 0.1 + 9.9 * rng.uniform();
    const Point lhs = L(g.dilate<double>(t, w));
    const Point rhs = g.dilate<double>(t, lw);
    worst = std::max(worst, (lhs - rhs).norm() / (1.0 + rhs.norm()));
    images.push_back(g.multiply<double>(w, lw));
  }
  if (worst > 1e-8) {
    throw std::invalid_argument("map is not homogeneous: L(delta_t w) != delta_t L(w) (residual " +
                                std::to_string(worst) + ")");
  }
  double residual = 0.0;
  const HomogeneousSubgroup U = HomogeneousSubgroup::graded_span(g, images, W.layer_dims(), &residual);
  if (residual > 1e-8) {
    throw std::invalid_argument("graph of the map is not a homogeneous subgroup (residual " +
                                std::to_string(residual) + ")");
  }
  IntrinsicLinearMap out = from_subgroup(WV, U);
  for (const Point & w : inputs) {
    if ((out(w) - L(w)).norm() > 1e-8 * (1.0 + w.norm())) {
      throw std::invalid_argument("map disagrees with the intrinsically linear map of its graph");
    }
  }
  return out;
}

IntrinsicLinearMap IntrinsicLinearMap::zero(const ComplementaryCouple & WV) { return from_subgroup(WV, WV.W()); }

Point IntrinsicLinearMap::operator()(const Point & w) const
{
  if (m_matrix) {
    const int m1 = m_WV.W().layer_dims()[0];
    return m_WV.V().basis() * (*m_matrix * m_WV.W().coords(w).head(m1));
  }
  return -m_UV.project_V(w);
}

std::vector<double> default_differential_schedule() { return halving_schedule(0.1, 1e-4); }

std::vector<Point> unit_sphere_points(const HomogeneousSubgroup & W, const DistanceSpec & d, int n)
{
  const int m = W.dim();
  const GradedAlgebra & g = W.algebra();
  std::vector<Eigen::VectorXd> coords;
  if (m == 1) {
    coords = {Eigen::VectorXd::Constant(1, 1.0), Eigen::VectorXd::Constant(1, -1.0)};
  } else if (m == 2) {
    for (int k = 0; k < n; ++k) {
      const double th = 2.0 * M_PI * k / n;
      coords.push_back(Eigen::Vector2d(std::cos(th), std::sin(th)));
    }
  } else if (m > 2) {
    static const int primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    for (int j = 0; j < m; ++j) {
      coords.push_back(Eigen::VectorXd::Unit(m, j));
      coords.push_back(-Eigen::VectorXd::Unit(m, j));
    }
    for (int k = 1; static_cast<int>(coords.size()) < n; ++k) {
      Eigen::VectorXd c(m);
      for (int j = 0; j < m; ++j) {
        double f = 1.0;
        double r = 0.0;
        for (int i = k; i > 0; i /= primes[j % 12]) {
          f /= primes[j % 12];
          r += f * (i % primes[j % 12]);
        }
        c[j] = 2.0 * r - 1.0;
      }
      if (c.norm() > 1e-9) {
        coords.push_back(c);
      }
    }
  }
  std::vector<Point> out;
  for (const auto & c : coords) {
    const Point w = W.point(c);
    out.push_back(g.dilate<double>(1.0 / hom_norm(d, w), w));
  }
  return out;
}

double il_distance(const IntrinsicLinearMap & L, const IntrinsicLinearMap & T, const DistanceSpec & d, int n)
{
  if (!L.couple().W().same_span(T.couple().W()) || !L.couple().V().same_span(T.couple().V())) {
    throw std::invalid_argument("il_distance: maps are defined on different couples");
  }
  double out = 0.0;
  for (const Point & w : unit_sphere_points(L.couple().W(), d, n)) {
    out = std::max(out, distance(d, L(w), T(w)));
  }
  return out;
}

IntrinsicDifferential estimate_intrinsic_differential(const IntrinsicMap & phi, const Point & w_bar,
                                                      const DistanceSpec & d, std::vector<double> schedule)
{
  if (schedule.empty()) {
    schedule = default_differential_schedule();
  }
  for (std::size_t k = 1; k < schedule.size(); ++k) {
    if (!(schedule[k] < schedule[k - 1])) {
      throw std::invalid_argument("t-schedule must be strictly decreasing");
    }
  }
  const ComplementaryCouple & c = phi.couple();
  const GradedAlgebra & g = c.algebra();
  const HomogeneousSubgroup & W = c.W();
  const Point x = graph_point(phi, w_bar);
  const IntrinsicMap psi = translate_map(phi, g.inverse<double>(x));
  const double ratio = schedule.size() > 1 ? schedule[0] / schedule[1] : 2.0;

  IntrinsicDifferential out;
  std::vector<Point> images;
  double scale = 1.0;
  for (int j = 0; j < W.dim(); ++j) {
    const Point b = W.basis().col(j);
    std::vector<Eigen::VectorXd> values;
    for (double t : schedule) {
      values.push_back(g.dilate<double>(1.0 / t, psi(g.dilate<double>(t, b))));
    }
    const Extrapolation e = richardson(values, ratio);
    out.direction_values.push_back(e.value);
    out.extrapolation_error = std::max(out.extrapolation_error, e.error);
    scale = std::max(scale, e.value.cwiseAbs().maxCoeff());
    images.push_back(g.multiply<double>(b, e.value));
  }
  try {
    const HomogeneousSubgroup U = HomogeneousSubgroup::graded_span(g, images, W.layer_dims(), &out.subspace_residual);
    out.map = IntrinsicLinearMap::from_subgroup(c, U);
  } catch (const std::invalid_argument &) {
    out.converged = false;
    out.residual = std::numeric_limits<double>::infinity();
    return out;
  }
  const double t_min = schedule.back();
  for (const Point & u : unit_sphere_points(W, d, 64)) {
    const Point w = g.dilate<double>(t_min, u);
    const Point diff = g.multiply<double>(g.inverse<double>((*out.map)(w)), psi(w));
    out.residual = std::max(out.residual, hom_norm(d, diff) / t_min);
  }
  out.converged = out.extrapolation_error <= 1e-6 * scale && out.subspace_residual <= 1e-8;
  return out;
}

Eigen::MatrixXd adapted_basis(const ComplementaryCouple & couple)
{
  const Eigen::MatrixXd & Vb = couple.V().basis();
  const Eigen::MatrixXd & Wb = couple.W().basis();
  Eigen::MatrixXd out(Vb.rows(), Vb.cols() + Wb.cols());
  out << Vb, Wb;
  return out;
}

Eigen::VectorXd projected_vector_field(const IntrinsicMap & phi, int j, const Point & w)
{
  const ComplementaryCouple & c = phi.couple();
  if (!horizontal_orthogonal(c)) {
    throw std::invalid_argument("projected vector fields need V horizontal and orthogonal to W");
  }
  const GradedAlgebra & g = c.algebra();
  if (j < 1 || j > g.dim()) {
    throw std::out_of_range("adapted basis index out of range");
  }
  const Eigen::VectorXd b = adapted_basis(c).col(j - 1);
  const VectorX<Dual> x = graph_point(phi, w).cast<Dual>();
  VectorX<Dual> e(g.dim());
  for (int k = 0; k < g.dim(); ++k) {
    e[k] = Dual(0.0, b[k]);
  }
  const VectorX<Dual> pw = c.project<Dual>(g.multiply(x, e)).first;
  Eigen::VectorXd deriv(g.dim());
  for (int k = 0; k < g.dim(); ++k) {
    deriv[k] = pw[k].d;
  }
  return c.W().coords(deriv);
}

namespace
{

/// RK4 integration of the projected field from c0 over time s with n steps.
Eigen::VectorXd integrate_curve(const IntrinsicMap & phi, int j, const Eigen::VectorXd & c0, double s, int n)
{
  const HomogeneousSubgroup & W = phi.couple().W();
  auto field = [&](const Eigen::VectorXd & c) {
    const Point w = W.point(c);
    if (!phi.in_domain(w)) {
      throw std::domain_error("integral curve leaves the domain of phi");
    }
    return projected_vector_field(phi, j, w);
  };
  const double h = s / n;
  Eigen::VectorXd c = c0;
  for (int k = 0; k < n; ++k) {
    const Eigen::VectorXd k1 = field(c);
    const Eigen::VectorXd k2 = field(c + 0.5 * h * k1);
    const Eigen::VectorXd k3 = field(c + 0.5 * h * k2);
    const Eigen::VectorXd k4 = field(c + h * k3);
    c += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  if (!phi.in_domain(W.point(c))) {
    throw std::domain_error("integral curve leaves the domain of phi");
  }
  return c;
}

/// Smallest step count (a power of two) whose halving changes the end point
/// of both the forward and backward curves by less than tol.
int choose_steps(const IntrinsicMap & phi, int j, const Eigen::VectorXd & c0, double s, double tol)
{
  int n = 1;
  Eigen::VectorXd fwd = integrate_curve(phi, j, c0, s, n);
  Eigen::VectorXd bwd = integrate_curve(phi, j, c0, -s, n);
  while (n < (1 << 16)) {
    const Eigen::VectorXd fwd2 = integrate_curve(phi, j, c0, s, 2 * n);
    const Eigen::VectorXd bwd2 = integrate_curve(phi, j, c0, -s, 2 * n);
    const double change = std::max((fwd2 - fwd).cwiseAbs().maxCoeff(), (bwd2 - bwd).cwiseAbs().maxCoeff());
    n *= 2;
    fwd = fwd2;
    bwd = bwd2;
    if (change < tol) {
      break;
    }
  }
  return n;
}

Extrapolation curve_derivative(const IntrinsicMap & phi, int j, const Eigen::VectorXd & c0,
                               const PartialDerivativeOptions & opts, int * steps)
{
  const int n = choose_steps(phi, j, c0, opts.s0, opts.ode_tol);
  if (steps) {
    *steps = n;
  }
  std::vector<Eigen::VectorXd> quotients;
  double s = opts.s0;
  for (int k = 0; k < opts.levels; ++k, s *= 0.5) {
    const Eigen::VectorXd fp = phi.tilde(integrate_curve(phi, j, c0, s, n));
    const Eigen::VectorXd fm = phi.tilde(integrate_curve(phi, j, c0, -s, n));
    quotients.push_back((fp - fm) / (2.0 * s));
  }
  // Symmetric quotients expand in even powers of s.
  return richardson(quotients, 4.0);
}

} // namespace

PartialDerivative intrinsic_partial_derivative(const IntrinsicMap & phi, int j, const Eigen::VectorXd & w_tilde,
                                               const PartialDerivativeOptions & opts)
{
  const ComplementaryCouple & c = phi.couple();
  const int p = c.V().dim();
  const int n1 = c.algebra().layer_size(1);
  if (!horizontal_orthogonal(c)) {
    throw std::invalid_argument("intrinsic partial derivatives need V horizontal and orthogonal to W");
  }
  if (j <= p || j > n1) {
    throw std::out_of_range("intrinsic partial derivative index must lie in " + std::to_string(p + 1) + ".." +
                            std::to_string(n1));
  }
  PartialDerivative out;
  const Extrapolation main = curve_derivative(phi, j, w_tilde, opts, &out.ode_steps);
  out.value = main.value;
  out.error = main.error;
  const Eigen::VectorXd shifted = w_tilde + Eigen::VectorXd::Constant(w_tilde.size(), opts.perturbation);
  const Extrapolation other = curve_derivative(phi, j, shifted, opts, nullptr);
  out.perturbed_disagreement = (other.value - main.value).cwiseAbs().maxCoeff();
  return out;
}

double jacobian_wedge(const IntrinsicLinearMap & L)
{
  return wedge_ratio(L.couple().V(), L.graph_subgroup(), L.couple().W());
}

double jacobian_minors_gram(const Eigen::MatrixXd & M)
{
  const Eigen::MatrixXd G = Eigen::MatrixXd::Identity(M.cols(), M.cols()) + M.transpose() * M;
  return std::sqrt(G.determinant());
}

double jacobian_minors(const Eigen::MatrixXd & M)
{
  const int r = static_cast<int>(M.rows());
  const int c = static_cast<int>(M.cols());
  const int top = std::min(r, c);
  if (top > 6) {
    return jacobian_minors_gram(M);
  }
  double sum = 1.0;
  for (int l = 1; l <= top; ++l) {
    const auto rows = combinations(r, l);
    const auto cols = combinations(c, l);
    for (const auto & I : rows) {
      for (const auto & J : cols) {
        Eigen::MatrixXd sub(l, l);
        for (int a = 0; a < l; ++a) {
          for (int b = 0; b < l; ++b) {
            sub(a, b) = M(I[a], J[b]);
          }
        }
        const double det = sub.determinant();
        sum += det * det;
      }
    }
  }
  return std::sqrt(sum);
}

MeasureEstimate jacobian_measure_mc(const IntrinsicLinearMap & L, const Eigen::VectorXd & lo,
                                    const Eigen::VectorXd & hi, long n, std::uint64_t seed, int threads)
{
  const HomogeneousSubgroup & W = L.couple().W();
  const int m = W.dim();
  if (lo.size() != m || hi.size() != m || !((hi - lo).minCoeff() > 0.0)) {
    throw std::invalid_argument("jacobian_measure_mc: box must have positive volume in W-coordinates");
  }
  const GradedAlgebra & g = L.couple().algebra();
  const ComplementaryCouple & UV = L.graph_couple();
  // Area formula for w -> w L(w) with L(w) = pi_V^{U,V}(w)^-1: average the
  // Euclidean Jacobian sqrt(det(D^T D)) of the coordinate map over B.
  return monte_carlo_mean(n, seed, 0x6a63, threads, [&](Rng & rng) {
    const Point w = W.point(rng.uniform_vector(lo, hi));
    Eigen::MatrixXd D(g.dim(), m);
    for (int k = 0; k < m; ++k) {
      VectorX<Dual> wd(g.dim());
      for (int i = 0; i < g.dim(); ++i) {
        wd[i] = Dual(w[i], W.basis()(i, k));
      }
      const VectorX<Dual> Lw = -UV.project<Dual>(wd).second;
      const VectorX<Dual> image = g.multiply(wd, Lw);
      for (int i = 0; i < g.dim(); ++i) {
        D(i, k) = image[i].d;
      }
    }
    return std::sqrt(std::max(0.0, (D.transpose() * D).determinant()));
  });
}

IntrinsicLinearMap tangent_map(const IntrinsicMap & phi, const Point & w, const DistanceSpec & d)
{
  if (phi.has_gradient() && horizontal_orthogonal(phi.couple())) {
    return IntrinsicLinearMap::from_matrix(phi.couple(), phi.gradient()(w));
  }
  const IntrinsicDifferential diff = estimate_intrinsic_differential(phi, w, d);
  if (!diff.map || !diff.converged) {
    throw std::runtime_error("intrinsic differential did not converge");
  }
  return *diff.map;
}

double graph_jacobian(const IntrinsicMap & phi, const Point & w, const DistanceSpec & d)
{
  if (phi.has_gradient()) {
    return jacobian_minors(phi.gradient()(w));
  }
  return jacobian_wedge(tangent_map(phi, w, d));
}

} // namespace homog
