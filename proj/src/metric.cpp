#include "homog/metric.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "homog/fixtures.hpp"
#include "homog/numerics.hpp"
#include "homog/random.hpp"

namespace homog
{

namespace
{

std::vector<double> check_weights(const GradedAlgebra & g, std::vector<double> weights)
{
  if (weights.empty()) {
    weights.assign(g.step(), 1.0);
  }
  if (static_cast<int>(weights.size()) != g.step()) {
    throw std::invalid_argument("distance needs one weight per layer (" + std::to_string(g.step()) + ")");
  }
  for (double w : weights) {
    if (!(w > 0.0) || !std::isfinite(w)) {
      throw std::invalid_argument("distance weights must be positive and finite");
    }
  }
  return weights;
}

double layer_norm(const GradedAlgebra & g, const Point & x, int s)
{
  return x.segment(g.layer_begin(s), g.layer_size(s)).norm();
}

} // namespace

DistanceSpec DistanceSpec::d_inf(const GradedAlgebra & g, std::vector<double> weights)
{
  return {DistanceKind::d_inf, check_weights(g, std::move(weights)), 2.0, g};
}

DistanceSpec DistanceSpec::cygan_koranyi(const GradedAlgebra & g)
{
  if (!is_heisenberg(g)) {
    throw std::invalid_argument("Cygan-Koranyi norm is only available on the Heisenberg fixtures");
  }
  return {DistanceKind::cygan_koranyi, std::vector<double>(g.step(), 1.0), 2.0, g};
}

DistanceSpec DistanceSpec::custom(const GradedAlgebra & g, std::vector<double> weights, double exponent)
{
  if (!(exponent >= 1.0) || !std::isfinite(exponent)) {
    throw std::invalid_argument("custom_homnorm exponent must be finite and >= 1");
  }
  return {DistanceKind::custom_homnorm, check_weights(g, std::move(weights)), exponent, g};
}

std::string DistanceSpec::kind_name() const
{
  switch (kind) {
    case DistanceKind::d_inf: return "d_inf";
    case DistanceKind::cygan_koranyi: return "cygan_koranyi";
    case DistanceKind::custom_homnorm: return "custom_homnorm";
  }
  return "unknown";
}

double DistanceSpec::layer_bound(int s, double R) const
{
  if (kind == DistanceKind::cygan_koranyi) {
    return s == 1 ? R : R * R / 4.0;
  }
  return std::pow(R / weight(s), s);
}

DistanceKind parse_distance_kind(const std::string & name)
{
  if (name == "d_inf" || name == "dinf") return DistanceKind::d_inf;
  if (name == "cygan_koranyi" || name == "ck") return DistanceKind::cygan_koranyi;
  if (name == "custom_homnorm" || name == "custom") return DistanceKind::custom_homnorm;
  throw std::invalid_argument("unknown distance kind '" + name + "'");
}

double hom_norm(const DistanceSpec & d, const Point & x)
{
  const GradedAlgebra & g = d.algebra;
  switch (d.kind) {
    case DistanceKind::d_inf: {
      double out = 0.0;
      for (int s = 1; s <= g.step(); ++s) {
        out = std::max(out, d.weight(s) * std::pow(layer_norm(g, x, s), 1.0 / s));
      }
      return out;
    }
    case DistanceKind::cygan_koranyi: {
      const double z = layer_norm(g, x, 1);
      const double t = layer_norm(g, x, 2);
      return std::pow(z * z * z * z + 16.0 * t * t, 0.25);
    }
    case DistanceKind::custom_homnorm: {
      double sum = 0.0;
      for (int s = 1; s <= g.step(); ++s) {
        sum += std::pow(d.weight(s) * std::pow(layer_norm(g, x, s), 1.0 / s), d.exponent);
      }
      return std::pow(sum, 1.0 / d.exponent);
    }
  }
  return 0.0;
}

double distance(const DistanceSpec & d, const Point & x, const Point & y)
{
  return hom_norm(d, d.algebra.multiply<double>(d.algebra.inverse<double>(x), y));
}

Cone make_cone(Point vertex, HomogeneousSubgroup axis, double alpha)
{
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("cone opening must lie in (0,1)");
  }
  return {std::move(vertex), std::move(axis), alpha};
}

DistanceToSubgroup distance_to_subgroup(const DistanceSpec & d, const Point & x, const HomogeneousSubgroup & H)
{
  const int m = H.dim();
  if (m == 0) {
    return {hom_norm(d, x), Point::Zero(x.size())};
  }
  const Objective f = [&](const Eigen::VectorXd & c) { return distance(d, x, H.point(c)); };
  const double scale = std::max(hom_norm(d, x), 1e-300);
  Rng rng(0x5eed, static_cast<std::uint64_t>(m));
  std::vector<Eigen::VectorXd> starts;
  starts.push_back(Eigen::VectorXd::Zero(m));
  starts.push_back(H.coords(x));
  while (starts.size() < 20) {
    Eigen::VectorXd c(m);
    for (int k = 0; k < m; ++k) {
      c[k] = rng.uniform(-1.0, 1.0) * d.layer_bound(H.column_layer(k), 2.0 * scale);
    }
    starts.push_back(c);
  }
  const double step = 0.25 * std::max(scale, 1e-12);
  const MinimizeResult r = multistart_nelder_mead(f, starts, step, 400, 1e-12);
  return {r.value, H.point(r.x)};
}

bool in_cone(const Point & x, const Cone & cone, const DistanceSpec & d)
{
  const GradedAlgebra & g = d.algebra;
  const Point y = g.multiply<double>(g.inverse<double>(cone.vertex), x);
  const double norm = hom_norm(d, y);
  if (norm == 0.0) {
    return true;
  }
  const double dist = distance_to_subgroup(d, y, cone.axis).value;
  return dist <= cone.opening * norm * (1.0 + 1e-6);
}

C0Estimate estimate_c0(const ComplementaryCouple & couple, const DistanceSpec & d, int n, std::uint64_t seed)
{
  const HomogeneousSubgroup & W = couple.W();
  const HomogeneousSubgroup & V = couple.V();
  if (W.dim() == 0 || V.dim() == 0) {
    throw std::invalid_argument("estimate_c0: degenerate couple (a factor is trivial)");
  }
  const GradedAlgebra & g = couple.algebra();
  auto ratio = [&](const Eigen::VectorXd & c) {
    const Point w = W.point(c.head(W.dim()));
    const Point v = V.point(c.tail(V.dim()));
    const double denom = hom_norm(d, w) + hom_norm(d, v);
    if (denom < 1e-300) {
      return std::numeric_limits<double>::infinity();
    }
    return hom_norm(d, g.multiply<double>(w, v)) / denom;
  };
  Rng rng(seed, 0xC0);
  C0Estimate out;
  out.value = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best;
  for (int k = 0; k < n; ++k) {
    // Homogeneous coordinates: layer-s entries scaled like u^s so every
    // direction of the norm sphere is reached with comparable density.
    Eigen::VectorXd c(W.dim() + V.dim());
    const double uw = rng.uniform();
    const double uv = rng.uniform();
    for (int j = 0; j < W.dim(); ++j) {
      c[j] = rng.normal() * std::pow(uw, W.column_layer(j) - 1);
    }
    for (int j = 0; j < V.dim(); ++j) {
      c[W.dim() + j] = rng.normal() * std::pow(uv, V.column_layer(j) - 1);
    }
    const double r = ratio(c);
    if (r < out.value) {
      out.value = r;
      best = c;
    }
  }
  if (best.size() == 0) {
    best = Eigen::VectorXd::Ones(W.dim() + V.dim());
    out.value = ratio(best);
  }
  const MinimizeResult polished = nelder_mead(ratio, best, 0.05 * best.cwiseAbs().maxCoeff(), 2000, 1e-14);
  if (polished.value < out.value) {
    out.value = polished.value;
    best = polished.x;
  }
  Point w = W.point(best.head(W.dim()));
  Point v = V.point(best.tail(V.dim()));
  const double scale = hom_norm(d, w) + hom_norm(d, v);
  out.w = g.dilate<double>(1.0 / scale, w);
  out.v = g.dilate<double>(1.0 / scale, v);
  out.samples = n;
  return out;
}

DistanceValidation validate_homogeneous_distance(const DistanceSpec & d, int n, std::uint64_t seed)
{
  DistanceValidation out;
  out.samples = std::max(n, 0);
  if (n <= 0) {
    return out;
  }
  const GradedAlgebra & g = d.algebra;
  const Eigen::VectorXd lo = Eigen::VectorXd::Constant(g.dim(), -1.0);
  const Eigen::VectorXd hi = Eigen::VectorXd::Constant(g.dim(), 1.0);
  Rng rng(seed, 0xD157);
  double worst = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < n; ++k) {
    const Point x = rng.uniform_vector(lo, hi);
    const Point y = rng.uniform_vector(lo, hi);
    const Point z = rng.uniform_vector(lo, hi);
    const double dxy = distance(d, x, y);
    const double dyz = distance(d, y, z);
    const double dxz = distance(d, x, z);
    const double viol = dxz - dxy - dyz;
    if (viol > worst) {
      worst = viol;
      out.worst_x = x;
      out.worst_y = y;
      out.worst_z = z;
    }
    const double dzx_zy = distance(d, g.multiply<double>(z, x), g.multiply<double>(z, y));
    out.left_invariance = std::max(out.left_invariance, std::abs(dzx_zy - dxy));
    const double t = 0.1 + 9.9 * rng.uniform();
    const double dt = distance(d, g.dilate<double>(t, x), g.dilate<double>(t, y));
    out.homogeneity = std::max(out.homogeneity, std::abs(dt - t * dxy) / t);
    out.symmetry = std::max(out.symmetry, std::abs(hom_norm(d, g.inverse<double>(x)) - hom_norm(d, x)));
  }
  out.worst_triangle = std::max(worst, 0.0);
  return out;
}

} // namespace homog
