#include "homog/levelset.hpp"

#include <cmath>
#include <stdexcept>

#include "homog/exterior.hpp"
#include "homog/numerics.hpp"
#include "homog/random.hpp"

namespace homog
{

GradedAlgebra euclidean_group(int p)
{
  return GradedAlgebra::from_spec({{p}, {}});
}

std::vector<double> default_pansu_schedule()
{
  return halving_schedule(0.1, 1e-3);
}

namespace
{

constexpr int kResidualSamples = 32;

Eigen::VectorXd checked_eval(const GroupMap & f, const Point & x, int target_dim)
{
  const Eigen::VectorXd y = f(x);
  if (y.size() != target_dim) {
    throw std::invalid_argument("map returned a vector of length " + std::to_string(y.size()) +
                                ", expected " + std::to_string(target_dim));
  }
  return y;
}

} // namespace

PansuDifferential pansu_differential(const GradedAlgebra & G, const GradedAlgebra & M, const GroupMap & f,
                                     const Point & x, std::vector<double> schedule)
{
  if (x.size() != G.dim()) {
    throw std::invalid_argument("base point does not match the source group");
  }
  if (schedule.empty()) {
    schedule = default_pansu_schedule();
  }
  const int q = G.dim();
  const int p = M.dim();
  const Eigen::VectorXd fx_inv = M.inverse<double>(checked_eval(f, x, p));

  PansuDifferential out;
  out.matrix.resize(p, q);
  double scale = 1.0;
  for (int j = 0; j < q; ++j) {
    std::vector<Eigen::VectorXd> samples;
    for (double t : schedule) {
      const Point step = G.dilate(t, Point(Point::Unit(q, j)));
      const Eigen::VectorXd fy = checked_eval(f, G.multiply<double>(x, step), p);
      samples.push_back(M.dilate(1.0 / t, M.multiply<double>(fx_inv, fy)));
    }
    const Extrapolation e = richardson(samples, schedule.size() > 1 ? schedule[0] / schedule[1] : 2.0);
    out.matrix.col(j) = e.value;
    out.extrapolation_error = std::max(out.extrapolation_error, e.error);
    scale = std::max(scale, e.value.cwiseAbs().maxCoeff());
  }

  const Eigen::MatrixXd & L = out.matrix;
  Rng rng(0x9a45, 0);
  for (int k = 0; k < kResidualSamples; ++k) {
    const Point a = rng.uniform_vector(-Eigen::VectorXd::Ones(q), Eigen::VectorXd::Ones(q));
    const Point b = rng.uniform_vector(-Eigen::VectorXd::Ones(q), Eigen::VectorXd::Ones(q));
    const Eigen::VectorXd lab = L * G.multiply<double>(a, b);
    const Eigen::VectorXd la_lb = M.multiply<double>(Eigen::VectorXd(L * a), Eigen::VectorXd(L * b));
    out.homomorphism_residual = std::max(out.homomorphism_residual, (lab - la_lb).cwiseAbs().maxCoeff());
    for (double t : {0.5, 2.0}) {
      const Eigen::VectorXd lhs = L * G.dilate(t, a);
      const Eigen::VectorXd rhs = M.dilate(t, Eigen::VectorXd(L * a));
      out.homogeneity_residual = std::max(out.homogeneity_residual, (lhs - rhs).cwiseAbs().maxCoeff());
    }
  }
  const double tol = 1e-6 * scale;
  out.converged = out.extrapolation_error <= tol && out.homomorphism_residual <= tol && out.homogeneity_residual <= tol;
  return out;
}

LevelSetJacobians jacobians_JH_JV(const Eigen::MatrixXd & rows, const HomogeneousSubgroup & V)
{
  if (rows.cols() != V.algebra().dim()) {
    throw std::invalid_argument("rows do not match the group dimension");
  }
  if (rows.rows() > V.dim()) {
    throw std::invalid_argument("p = " + std::to_string(rows.rows()) + " exceeds dim V = " + std::to_string(V.dim()));
  }
  const Eigen::MatrixXd P = V.basis() * V.basis().transpose();
  LevelSetJacobians out;
  out.JH = Multivector::wedge_columns(rows.transpose()).norm();
  out.JV = Multivector::wedge_columns(P * rows.transpose()).norm();
  return out;
}

ImplicitSolution solve_implicit(const GroupMap & f, const ComplementaryCouple & couple, const Point & w,
                                const ImplicitOptions & opts)
{
  const GradedAlgebra & G = couple.algebra();
  const HomogeneousSubgroup & V = couple.V();
  Point v = opts.v0 ? *opts.v0 : Point(Point::Zero(G.dim()));
  if (!V.contains(v)) {
    throw std::invalid_argument("Newton seed is not in V");
  }
  Eigen::VectorXd F = f(G.multiply<double>(w, v));
  const GradedAlgebra M = euclidean_group(static_cast<int>(F.size()));
  ImplicitSolution out;
  for (int it = 0; it < opts.max_iterations; ++it) {
    if (F.norm() <= opts.tol) {
      out.v = v;
      out.residual = F.norm();
      out.iterations = it;
      return out;
    }
    const Point y = G.multiply<double>(w, v);
    const Eigen::MatrixXd A = pansu_differential(G, M, f, y).matrix * V.basis();
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd sv = svd.singularValues();
    if (sv.size() < F.size() || sv[F.size() - 1] < 1e-12) {
      throw std::runtime_error("singular J_V f at a Newton iterate");
    }
    const Eigen::VectorXd step = svd.solve(-F);
    bool improved = false;
    for (double lambda = 1.0; lambda > 1e-6; lambda *= 0.5) {
      const Point trial = G.multiply<double>(v, V.point(lambda * step));
      const Eigen::VectorXd Ft = f(G.multiply<double>(w, trial));
      if (Ft.norm() < F.norm()) {
        v = trial;
        F = Ft;
        improved = true;
        break;
      }
    }
    if (!improved) {
      throw std::runtime_error("Newton iteration stalled at residual " + std::to_string(F.norm()));
    }
  }
  if (F.norm() > opts.tol) {
    throw std::runtime_error("Newton iteration did not reach the residual tolerance");
  }
  out.v = v;
  out.residual = F.norm();
  out.iterations = opts.max_iterations;
  return out;
}

IntrinsicMap implicit_map(const GroupMap & f, const ComplementaryCouple & couple, const Eigen::VectorXd & lo,
                          const Eigen::VectorXd & hi, const ImplicitOptions & opts)
{
  return IntrinsicMap(
    couple, lo, hi, [f, couple, opts](const Point & w) { return solve_implicit(f, couple, w, opts).v; }, "implicit");
}

double level_set_jacobian_ratio(const GroupMap & f, const ComplementaryCouple & couple, const Point & x)
{
  const GradedAlgebra & G = couple.algebra();
  const int p = static_cast<int>(f(x).size());
  const PansuDifferential D = pansu_differential(G, euclidean_group(p), f, x);
  const LevelSetJacobians J = jacobians_JH_JV(D.matrix, couple.V());
  if (J.JV < 1e-12) {
    throw std::domain_error("J_V f vanishes at the point");
  }
  const double vw = wedge(orienting_unit(couple.V()), orienting_unit(couple.W())).norm();
  return vw * J.JH / J.JV;
}

} // namespace homog
