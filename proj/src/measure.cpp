#include "homog/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "homog/numerics.hpp"
#include "homog/parallel.hpp"
#include "homog/random.hpp"

namespace homog
{

SliceMethod parse_slice_method(const std::string & name)
{
  if (name == "monte_carlo" || name == "mc") return SliceMethod::monte_carlo;
  if (name == "grid") return SliceMethod::grid;
  if (name == "adaptive") return SliceMethod::adaptive;
  throw std::invalid_argument("unknown slice method '" + name + "'");
}

std::string slice_method_name(SliceMethod m)
{
  switch (m) {
  case SliceMethod::monte_carlo: return "monte_carlo";
  case SliceMethod::grid: return "grid";
  case SliceMethod::adaptive: return "adaptive";
  }
  return "?";
}

namespace
{

constexpr int kMaxDoublings = 8;
constexpr int kLineScan = 16;
constexpr int kBisections = 32;
constexpr int kSimpsonPanels = 8;
constexpr int kSimpsonDepth = 34;

Point retract_to_ball(const DistanceSpec & d, const Point & z)
{
  const double r = hom_norm(d, z);
  return r > 1.0 ? d.algebra.dilate(1.0 / r, z) : z;
}

/// Indicator of the slice {u : ||z^-1 S u|| <= r} with a bounding box.
class Slice
{
public:
  Slice(const Eigen::MatrixXd & S, const Point & z, const DistanceSpec & d, double r)
    : m_S(S), m_zinv(d.algebra.inverse<double>(z)), m_d(d), m_r(r), m_half(S.cols())
  {
    const GradedAlgebra & g = d.algebra;
    const double R = r + hom_norm(d, z);
    const bool centered = z.cwiseAbs().maxCoeff() == 0.0;
    for (Eigen::Index c = 0; c < S.cols(); ++c) {
      double h = 0.0;
      for (int s = 1; s <= g.step(); ++s) {
        const double block = S.col(c).segment(g.layer_begin(s), g.layer_size(s)).cwiseAbs().maxCoeff();
        if (block > 1e-12) {
          // Off-center balls pick up BCH cross terms in the upper layers.
          h += d.layer_bound(s, R) * (centered || s == 1 ? 1.0 : 2.0);
        }
      }
      m_half[c] = 1.1 * h;
    }
  }

  int dim() const { return static_cast<int>(m_S.cols()); }
  const Eigen::VectorXd & half() const { return m_half; }
  void grow(int c) { m_half[c] *= 2.0; }

  bool inside(const Eigen::VectorXd & u) const
  {
    const Point y = m_S * u;
    return hom_norm(m_d, m_d.algebra.multiply<double>(m_zinv, y)) <= m_r;
  }

  /// Coordinates whose box face is touched: a hit beyond half / 1.1.
  void mark_shell(const Eigen::VectorXd & u, std::vector<bool> & touched) const
  {
    for (int c = 0; c < dim(); ++c) {
      if (std::abs(u[c]) > m_half[c] / 1.1) {
        touched[c] = true;
      }
    }
  }

  /// Length of the section along the last coordinate at the outer
  /// coordinates `outer`, by a scan plus bisection at every sign change.
  double line_length(const Eigen::VectorXd & outer, std::vector<bool> & touched) const
  {
    const int n = dim();
    const double h = m_half[n - 1];
    Eigen::VectorXd u(n);
    u.head(n - 1) = outer;
    auto at = [&](double s) {
      u[n - 1] = s;
      return inside(u);
    };
    double total = 0.0;
    double prev_s = -h;
    bool prev_in = at(prev_s);
    double enter = prev_in ? prev_s : 0.0;
    bool any = prev_in;
    if (prev_in) {
      touched[n - 1] = true;
    }
    for (int k = 1; k <= kLineScan; ++k) {
      const double s = -h + 2.0 * h * k / kLineScan;
      const bool in = at(s);
      if (in != prev_in) {
        double a = prev_s;
        double b = s;
        for (int it = 0; it < kBisections; ++it) {
          const double m = 0.5 * (a + b);
          (at(m) == prev_in ? a : b) = m;
        }
        const double cross = 0.5 * (a + b);
        if (std::abs(cross) > h / 1.1) {
          touched[n - 1] = true;
        }
        if (in) {
          enter = cross;
        } else {
          total += cross - enter;
        }
      }
      any = any || in;
      prev_in = in;
      prev_s = s;
    }
    if (prev_in) {
      total += h - enter;
    }
    if (prev_in) {
      touched[n - 1] = true;
    }
    if (any) {
      u[n - 1] = 0.0;
      mark_shell(u, touched);
    }
    return total;
  }

private:
  Eigen::MatrixXd m_S;
  Point m_zinv;
  const DistanceSpec & m_d;
  double m_r;
  Eigen::VectorXd m_half;
};

double box_volume(const Eigen::VectorXd & half)
{
  double v = 1.0;
  for (Eigen::Index c = 0; c < half.size(); ++c) {
    v *= 2.0 * half[c];
  }
  return v;
}

MeasureEstimate slice_mc(const Slice & slice, const SliceOptions & o, std::vector<bool> & touched)
{
  const int n = slice.dim();
  const Eigen::VectorXd half = slice.half();
  const long chunks = (o.samples + kChunkSize - 1) / kChunkSize;
  std::vector<std::vector<bool>> marks(chunks, std::vector<bool>(n, false));
  const MeasureEstimate m = monte_carlo_mean(o.samples, o.seed, 0x51ce, o.threads, [&](Rng & rng) {
    const Eigen::VectorXd u = rng.uniform_vector(-half, half);
    return slice.inside(u) ? 1.0 : 0.0;
  });
  // Shell detection on a second, cheap pass with the same streams.
  parallel_for(static_cast<int>(chunks), o.threads, [&](int c) {
    Rng rng(o.seed ^ splitmix64(0x51ce), static_cast<std::uint64_t>(c));
    const long end = std::min<long>(o.samples, (c + 1) * kChunkSize);
    for (long k = c * kChunkSize; k < end; ++k) {
      const Eigen::VectorXd u = rng.uniform_vector(-half, half);
      if (slice.inside(u)) {
        slice.mark_shell(u, marks[c]);
      }
    }
  });
  for (const auto & mk : marks) {
    for (int c = 0; c < n; ++c) {
      touched[c] = touched[c] || mk[c];
    }
  }
  const double vol = box_volume(half);
  MeasureEstimate out;
  out.value = vol * m.value;
  out.std_error = vol * m.std_error;
  out.n_samples = o.samples;
  out.method = "monte_carlo";
  return out;
}

MeasureEstimate slice_grid(const Slice & slice, const SliceOptions & o, std::vector<bool> & touched)
{
  const int n = slice.dim();
  const Eigen::VectorXd half = slice.half();
  MeasureEstimate out;
  out.method = "grid";
  if (n == 1) {
    out.value = slice.line_length(Eigen::VectorXd(0), touched);
    out.n_samples = 1;
    return out;
  }
  const int outer = n - 1;
  // Midpoint rule at resolution N and N/2. The section length is of bounded
  // variation but not smooth, so the bound also includes TV * h / 2 along
  // the first outer axis.
  double tv_bound = 0.0;
  auto midpoint = [&](int N, long & lines) {
    long cells = 1;
    for (int c = 0; c < outer; ++c) {
      cells *= N;
    }
    std::vector<double> part(cells, 0.0);
    std::vector<std::vector<bool>> marks(cells, std::vector<bool>(n, false));
    parallel_for(static_cast<int>(cells), o.threads, [&](int k) {
      Eigen::VectorXd u(outer);
      long rest = k;
      for (int c = 0; c < outer; ++c) {
        const int idx = static_cast<int>(rest % N);
        rest /= N;
        u[c] = -half[c] + (idx + 0.5) * 2.0 * half[c] / N;
      }
      part[k] = slice.line_length(u, marks[k]);
    });
    double cell = 1.0;
    for (int c = 0; c < outer; ++c) {
      cell *= 2.0 * half[c] / N;
    }
    double sum = 0.0;
    double tv = 0.0;
    for (long k = 0; k < cells; ++k) {
      if (k % N != 0) {
        tv += std::abs(part[k] - part[k - 1]);
      }
      sum += part[k];
      for (int c = 0; c < n; ++c) {
        touched[c] = touched[c] || marks[k][c];
      }
    }
    lines += cells;
    tv_bound = std::max(tv_bound, 0.5 * tv * cell);
    return sum * cell;
  };
  const int N = std::max(2, o.resolution);
  long lines = 0;
  const double fine = midpoint(N, lines);
  const double fine_tv = tv_bound;
  const double coarse = midpoint(std::max(1, N / 2), lines);
  out.value = fine;
  out.std_error = std::max(std::abs(fine - coarse), fine_tv);
  out.n_samples = lines;
  return out;
}

struct SimpsonResult
{
  double value = 0.0;
  double error = 0.0;
  long evaluations = 0;
};

template <typename F>
void simpson_step(const F & f, double a, double b, double fa, double fm, double fb, double whole, double tol, int depth,
                  SimpsonResult & acc)
{
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  acc.evaluations += 2;
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double diff = left + right - whole;
  if (depth <= 0 || std::abs(diff) <= 15.0 * tol) {
    acc.value += left + right + diff / 15.0;
    acc.error += std::abs(diff) / 15.0;
    return;
  }
  simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, acc);
  simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, acc);
}

/// Adaptive Simpson over [a,b], started on fixed panels so that narrow
/// supports are not missed by the first five nodes.
template <typename F>
SimpsonResult adaptive_simpson(const F & f, double a, double b, double tol)
{
  SimpsonResult acc;
  const double w = (b - a) / kSimpsonPanels;
  double fl = f(a);
  acc.evaluations = 1;
  for (int k = 0; k < kSimpsonPanels; ++k) {
    const double lo = a + k * w;
    const double hi = lo + w;
    const double fm = f(0.5 * (lo + hi));
    const double fh = f(hi);
    acc.evaluations += 2;
    const double whole = w / 6.0 * (fl + 4.0 * fm + fh);
    simpson_step(f, lo, hi, fl, fm, fh, whole, tol / kSimpsonPanels, kSimpsonDepth, acc);
    fl = fh;
  }
  return acc;
}

MeasureEstimate slice_adaptive(const Slice & slice, const SliceOptions & o, std::vector<bool> & touched)
{
  const int n = slice.dim();
  const Eigen::VectorXd half = slice.half();
  MeasureEstimate out;
  out.method = "adaptive";
  if (n == 1) {
    out.value = slice.line_length(Eigen::VectorXd(0), touched);
    out.n_samples = 1;
    return out;
  }
  if (n == 2) {
    Eigen::VectorXd u(1);
    const SimpsonResult r = adaptive_simpson(
      [&](double a) {
        u[0] = a;
        return slice.line_length(u, touched);
      },
      -half[0], half[0], o.tol);
    out.value = r.value;
    out.std_error = r.error;
    out.n_samples = r.evaluations;
    return out;
  }
  Eigen::VectorXd u(2);
  double inner_error = 0.0;
  long evaluations = 0;
  const double inner_tol = o.tol / (2.0 * half[0]);
  const SimpsonResult r = adaptive_simpson(
    [&](double a) {
      const SimpsonResult inner = adaptive_simpson(
        [&](double b) {
          u[0] = a;
          u[1] = b;
          return slice.line_length(u, touched);
        },
        -half[1], half[1], inner_tol);
      inner_error = std::max(inner_error, inner.error);
      evaluations += inner.evaluations;
      return inner.value;
    },
    -half[0], half[0], o.tol);
  out.value = r.value;
  out.std_error = r.error + 2.0 * half[0] * inner_error;
  out.n_samples = evaluations;
  return out;
}

} // namespace

MeasureEstimate slice_volume(const Eigen::MatrixXd & S, const Point & z, const DistanceSpec & d,
                             const SliceOptions & opts)
{
  if (S.cols() < 1) {
    throw std::invalid_argument("slice_volume needs a subspace of dimension >= 1");
  }
  if (S.rows() != d.algebra.dim() || z.size() != d.algebra.dim()) {
    throw std::invalid_argument("slice_volume: dimension mismatch with the group");
  }
  if (!(opts.radius > 0.0)) {
    throw std::invalid_argument("slice_volume: radius must be positive");
  }
  Slice slice(S, z, d, opts.radius);
  SliceMethod method = opts.method;
  if (method == SliceMethod::adaptive && S.cols() > 3) {
    method = SliceMethod::monte_carlo;
  }
  for (int round = 0; round <= kMaxDoublings; ++round) {
    std::vector<bool> touched(slice.dim(), false);
    MeasureEstimate m;
    switch (method) {
    case SliceMethod::monte_carlo: m = slice_mc(slice, opts, touched); break;
    case SliceMethod::grid: m = slice_grid(slice, opts, touched); break;
    case SliceMethod::adaptive: m = slice_adaptive(slice, opts, touched); break;
    }
    if (std::none_of(touched.begin(), touched.end(), [](bool b) { return b; })) {
      return m;
    }
    for (int c = 0; c < slice.dim(); ++c) {
      if (touched[c]) {
        slice.grow(c);
      }
    }
  }
  throw std::runtime_error("unbounded slice: bounding box exceeded its growth cap");
}

MeasureEstimate slice_volume(const HomogeneousSubgroup & S, const Point & z, const DistanceSpec & d,
                             const SliceOptions & opts)
{
  return slice_volume(S.basis(), z, d, opts);
}

SphericalFactor spherical_factor(const HomogeneousSubgroup & S, const DistanceSpec & d,
                                 const SphericalFactorOptions & opts)
{
  const GradedAlgebra & g = d.algebra;
  const int q = g.dim();
  SphericalFactor out;
  int evaluations = 0;
  auto objective = [&](const Eigen::VectorXd & z) {
    ++evaluations;
    return -slice_volume(S, retract_to_ball(d, z), d, opts.slice).value;
  };
  out.at_zero = -objective(Point::Zero(q));
  out.beta = out.at_zero;
  out.argmax = Point::Zero(q);

  std::vector<Eigen::VectorXd> starts{Point::Zero(q)};
  Rng rng(opts.seed, 0x5fac);
  Eigen::VectorXd box(q);
  for (int k = 0; k < q; ++k) {
    box[k] = d.layer_bound(g.layer_of(k), 1.0);
  }
  while (static_cast<int>(starts.size()) < opts.starts) {
    const Point z = rng.uniform_vector(-box, box);
    if (hom_norm(d, z) <= 1.0) {
      starts.push_back(z);
    }
  }
  out.converged = true;
  for (const auto & z0 : starts) {
    const MinimizeResult r = nelder_mead(objective, z0, 0.2, opts.iterations, 1e-9);
    out.converged = out.converged && r.converged;
    if (-r.value > out.beta) {
      out.beta = -r.value;
      out.argmax = retract_to_ball(d, r.x);
    }
  }
  out.evaluations = evaluations;
  out.on_boundary = hom_norm(d, out.argmax) > 1.0 - 1e-6;
  return out;
}

Region Region::ball(Point center, double radius)
{
  if (!(radius > 0.0)) {
    throw std::invalid_argument("ball radius must be positive");
  }
  Region r;
  r.kind = Kind::ball;
  r.center = std::move(center);
  r.radius = radius;
  return r;
}

Region Region::box(Eigen::VectorXd lo, Eigen::VectorXd hi)
{
  if (lo.size() != hi.size() || (hi - lo).minCoeff() < 0.0) {
    throw std::invalid_argument("box corners must have equal length and lo <= hi");
  }
  Region r;
  r.kind = Kind::box;
  r.lo = std::move(lo);
  r.hi = std::move(hi);
  return r;
}

bool Region::contains(const Point & p, const DistanceSpec & d) const
{
  if (kind == Kind::ball) {
    return distance(d, center, p) <= radius;
  }
  if (open_axis >= 0 && p[open_axis] >= hi[open_axis]) {
    return false;
  }
  return (p - lo).minCoeff() >= 0.0 && (hi - p).minCoeff() >= 0.0;
}

std::pair<Region, Region> Region::bisect() const
{
  if (kind != Kind::box) {
    throw std::invalid_argument("only boxes can be bisected");
  }
  Eigen::Index axis = 0;
  (hi - lo).maxCoeff(&axis);
  const double cut = 0.5 * (lo[axis] + hi[axis]);
  Region lower = *this;
  Region upper = *this;
  lower.hi[axis] = cut;
  lower.open_axis = static_cast<int>(axis);
  upper.lo[axis] = cut;
  return {lower, upper};
}

namespace
{

double w_box_volume(const IntrinsicMap & phi)
{
  double v = 1.0;
  for (Eigen::Index k = 0; k < phi.lo().size(); ++k) {
    const double w = phi.hi()[k] - phi.lo()[k];
    if (!std::isfinite(w)) {
      throw std::invalid_argument("graph_mu needs a bounded domain box");
    }
    v *= w;
  }
  return v;
}

} // namespace

MeasureEstimate graph_mu(const IntrinsicMap & phi, const Region & B, const DistanceSpec & d, long n,
                         std::uint64_t seed, int threads)
{
  const double vol = w_box_volume(phi);
  const HomogeneousSubgroup & W = phi.couple().W();
  const MeasureEstimate m = monte_carlo_mean(n, seed, 0x6a4c, threads, [&](Rng & rng) {
    const Point w = W.point(rng.uniform_vector(phi.lo(), phi.hi()));
    if (!phi.in_domain(w) || !B.contains(graph_point(phi, w), d)) {
      return 0.0;
    }
    return graph_jacobian(phi, w, d);
  });
  MeasureEstimate out = m;
  out.value = vol * m.value;
  out.std_error = vol * m.std_error;
  out.method = "monte_carlo";
  return out;
}

MeasureEstimate pushforward_volume(const ComplementaryCouple & WV, const ComplementaryCouple & UV,
                                   const Eigen::VectorXd & lo, const Eigen::VectorXd & hi, long n,
                                   std::uint64_t seed, int threads)
{
  const HomogeneousSubgroup & W = WV.W();
  const HomogeneousSubgroup & U = UV.W();
  if (lo.size() != U.dim() || hi.size() != U.dim() || (hi - lo).minCoeff() <= 0.0) {
    throw std::invalid_argument("pushforward_volume: bad box for U");
  }
  // Bounding box of the image from the corners and a sample of B.
  Eigen::VectorXd blo = Eigen::VectorXd::Constant(W.dim(), std::numeric_limits<double>::infinity());
  Eigen::VectorXd bhi = -blo;
  Rng rng(seed, 0x9b0c);
  for (int k = 0; k < 4096 + (1 << U.dim()); ++k) {
    Eigen::VectorXd u(U.dim());
    if (k < (1 << U.dim())) {
      for (int c = 0; c < U.dim(); ++c) {
        u[c] = (k >> c) & 1 ? hi[c] : lo[c];
      }
    } else {
      u = rng.uniform_vector(lo, hi);
    }
    const Eigen::VectorXd w = W.coords(restricted_projection(WV, UV, U.point(u)));
    blo = blo.cwiseMin(w);
    bhi = bhi.cwiseMax(w);
  }
  const Eigen::VectorXd pad = 0.1 * (bhi - blo) + Eigen::VectorXd::Constant(W.dim(), 1e-9);
  blo -= pad;
  bhi += pad;
  double vol = 1.0;
  for (Eigen::Index c = 0; c < blo.size(); ++c) {
    vol *= bhi[c] - blo[c];
  }
  const MeasureEstimate m = monte_carlo_mean(n, seed, 0x9b0d, threads, [&](Rng & r) {
    const Point w = W.point(r.uniform_vector(blo, bhi));
    const Eigen::VectorXd u = U.coords(restricted_projection(UV, WV, w));
    return ((u - lo).minCoeff() >= 0.0 && (hi - u).minCoeff() >= 0.0) ? 1.0 : 0.0;
  });
  MeasureEstimate out = m;
  out.value = vol * m.value;
  out.std_error = vol * m.std_error;
  return out;
}

std::vector<double> default_blowup_schedule()
{
  std::vector<double> t;
  for (int k = 3; k <= 9; ++k) {
    t.push_back(std::ldexp(1.0, -k));
  }
  return t;
}

namespace
{

/// Blown-up graph points p = delta_{1/t}(x^-1 Phi(w)) with w = sigma_x(delta_t eta),
/// kept only when they can lie in some B(z,1) with ||z|| <= 1.
struct BlownUp
{
  std::vector<Point> p;
  std::vector<double> jac;
  long n = 0;
  double volume = 0.0;
};

constexpr double kKeepRadius = 3.0;

class Blowup
{
public:
  Blowup(const IntrinsicMap & phi, const Point & x, const DistanceSpec & d, int threads)
    : m_phi(phi), m_x(x), m_xinv(d.algebra.inverse<double>(x)), m_d(d), m_threads(threads)
  {
  }

  /// Evaluates eta -> p for n samples uniform in [lo, hi] from stream (seed, tag).
  BlownUp sample(double t, const Eigen::VectorXd & lo, const Eigen::VectorXd & hi, long n, std::uint64_t seed,
                 std::uint64_t tag) const
  {
    const GradedAlgebra & g = m_d.algebra;
    const HomogeneousSubgroup & W = m_phi.couple().W();
    const int chunks = static_cast<int>((n + kChunkSize - 1) / kChunkSize);
    std::vector<BlownUp> parts(chunks);
    parallel_for(chunks, m_threads, [&](int c) {
      Rng rng(seed ^ splitmix64(tag), static_cast<std::uint64_t>(c));
      const long end = std::min(n, (c + 1) * kChunkSize);
      for (long k = c * kChunkSize; k < end; ++k) {
        const Eigen::VectorXd eta = rng.uniform_vector(lo, hi);
        const Point w = sigma_translate(m_phi.couple(), m_x, g.dilate(t, W.point(eta)));
        if (!m_phi.in_domain(w)) {
          continue;
        }
        const Point p = g.dilate(1.0 / t, g.multiply<double>(m_xinv, graph_point(m_phi, w)));
        if (hom_norm(m_d, p) > kKeepRadius) {
          continue;
        }
        parts[c].p.push_back(p);
        parts[c].jac.push_back(graph_jacobian(m_phi, w, m_d));
      }
    });
    BlownUp out;
    out.n = n;
    out.volume = 1.0;
    for (Eigen::Index k = 0; k < lo.size(); ++k) {
      out.volume *= hi[k] - lo[k];
    }
    for (auto & part : parts) {
      out.p.insert(out.p.end(), part.p.begin(), part.p.end());
      out.jac.insert(out.jac.end(), part.jac.begin(), part.jac.end());
    }
    return out;
  }

  /// mu(B(x delta_t z, t)) / t^M from a blown-up sample.
  MeasureEstimate density(const BlownUp & b, const Point & z) const
  {
    const GradedAlgebra & g = m_d.algebra;
    const Point zinv = g.inverse<double>(z);
    double s = 0.0;
    double s2 = 0.0;
    for (std::size_t k = 0; k < b.p.size(); ++k) {
      if (hom_norm(m_d, g.multiply<double>(zinv, b.p[k])) <= 1.0) {
        s += b.jac[k];
        s2 += b.jac[k] * b.jac[k];
      }
    }
    MeasureEstimate out;
    out.n_samples = b.n;
    if (b.n == 0) {
      return out;
    }
    const double mean = s / b.n;
    const double var = b.n > 1 ? std::max(0.0, (s2 - b.n * mean * mean) / (b.n - 1)) : 0.0;
    out.value = b.volume * mean;
    out.std_error = b.volume * std::sqrt(var / b.n);
    return out;
  }

private:
  const IntrinsicMap & m_phi;
  Point m_x;
  Point m_xinv;
  const DistanceSpec & m_d;
  int m_threads;
};

std::uint64_t cell_tag(int t_index, int part)
{
  return 0xb10000ull + static_cast<std::uint64_t>(t_index) * 16 + static_cast<std::uint64_t>(part);
}

/// Least-squares line a + b t; returns a and the standard error of a.
std::pair<double, double> intercept_fit(const std::vector<double> & t, const std::vector<double> & y)
{
  const int n = static_cast<int>(t.size());
  if (n == 1) {
    return {y[0], 0.0};
  }
  Eigen::MatrixXd A(n, 2);
  Eigen::VectorXd b(n);
  for (int k = 0; k < n; ++k) {
    A(k, 0) = 1.0;
    A(k, 1) = t[k];
    b[k] = y[k];
  }
  const Eigen::VectorXd c = A.colPivHouseholderQr().solve(b);
  if (n == 2) {
    return {c[0], 0.0};
  }
  const double rss = (A * c - b).squaredNorm();
  const Eigen::MatrixXd cov = (A.transpose() * A).inverse() * (rss / (n - 2));
  return {c[0], std::sqrt(std::max(0.0, cov(0, 0)))};
}

} // namespace

BlowupReport federer_density(const IntrinsicMap & phi, const Point & zeta, const DistanceSpec & d,
                             const BlowupOptions & opts)
{
  if (opts.schedule.empty()) {
    throw std::invalid_argument("federer_density needs a non-empty t-schedule");
  }
  for (std::size_t k = 0; k < opts.schedule.size(); ++k) {
    if (!(opts.schedule[k] > 0.0) || (k > 0 && !(opts.schedule[k] < opts.schedule[k - 1]))) {
      throw std::invalid_argument("t-schedule must be positive and strictly decreasing");
    }
  }
  if (opts.centers < 1 || opts.samples < 1) {
    throw std::invalid_argument("federer_density budgets must be positive");
  }
  if (!phi.in_domain(zeta)) {
    throw std::domain_error("zeta outside the domain of phi");
  }
  const GradedAlgebra & g = d.algebra;
  const HomogeneousSubgroup & W = phi.couple().W();
  const int q = g.dim();
  const int m = W.dim();

  BlowupReport report;
  report.zeta = zeta;
  report.x = graph_point(phi, zeta);

  const IntrinsicLinearMap tangent = tangent_map(phi, zeta, d);
  report.hausdorff_dim = tangent.graph_subgroup().hausdorff_dim();
  const SphericalFactor beta = spherical_factor(tangent.graph_subgroup(), d, opts.beta);
  report.beta = beta.beta;
  report.beta_argmax = beta.argmax;

  // Blown-up W-coordinates eta satisfy ||eta|| <= ||p|| / c0 <= 2 / c0.
  const C0Estimate c0 = estimate_c0(phi.couple(), d, 2000, opts.seed);
  const double R0 = 2.0 / std::max(c0.value, 1e-3);
  Eigen::VectorXd lo0(m);
  for (int k = 0; k < m; ++k) {
    lo0[k] = -d.layer_bound(W.column_layer(k), R0);
  }
  const Eigen::VectorXd hi0 = -lo0;

  // Centers z uniform in the closed unit ball, z = 0 first.
  std::vector<Point> centers{Point::Zero(q)};
  {
    Rng rng(opts.seed, 0xce47);
    Eigen::VectorXd box(q);
    for (int k = 0; k < q; ++k) {
      box[k] = d.layer_bound(g.layer_of(k), 1.0);
    }
    while (static_cast<int>(centers.size()) < opts.centers) {
      const Point z = rng.uniform_vector(-box, box);
      if (hom_norm(d, z) <= 1.0) {
        centers.push_back(z);
      }
    }
  }

  const Blowup blow(phi, report.x, d, opts.threads);
  bool noisy = false;
  for (std::size_t ti = 0; ti < opts.schedule.size(); ++ti) {
    const double t = opts.schedule[ti];
    const int tag = static_cast<int>(ti);

    // Pilot run: shrink the sampling box to the hits, then pad by 25%.
    Eigen::VectorXd lo = lo0;
    Eigen::VectorXd hi = hi0;
    {
      const BlownUp pilot = blow.sample(t, lo0, hi0, std::max<long>(opts.samples / 4, 1000), opts.seed, cell_tag(tag, 0));
      Eigen::VectorXd hlo = Eigen::VectorXd::Constant(m, std::numeric_limits<double>::infinity());
      Eigen::VectorXd hhi = -hlo;
      bool any = false;
      for (const Point & p : pilot.p) {
        if (hom_norm(d, p) > 2.2) {
          continue;
        }
        // p = eta v with v in V, so eta = pi_W(p).
        const Eigen::VectorXd eta = W.coords(phi.couple().project_W(p));
        hlo = hlo.cwiseMin(eta);
        hhi = hhi.cwiseMax(eta);
        any = true;
      }
      if (any) {
        const Eigen::VectorXd pad = 0.25 * (hhi - hlo) + Eigen::VectorXd::Constant(m, 1e-3);
        lo = (hlo - pad).cwiseMax(lo0);
        hi = (hhi + pad).cwiseMin(hi0);
      }
    }

    const BlownUp main = blow.sample(t, lo, hi, opts.samples, opts.seed, cell_tag(tag, 1));
    std::vector<double> values(centers.size());
    parallel_for(static_cast<int>(centers.size()), opts.threads,
                 [&](int c) { values[c] = blow.density(main, centers[c]).value; });
    const auto best = std::max_element(values.begin(), values.end()) - values.begin();

    auto objective = [&](const Eigen::VectorXd & z) { return -blow.density(main, retract_to_ball(d, z)).value; };
    const MinimizeResult refined = nelder_mead(objective, centers[best], 0.1, opts.refine_iterations, 1e-12);
    Point z_star = retract_to_ball(d, refined.x);
    if (-refined.value < values[best]) {
      z_star = centers[best];
    }

    const BlownUp fresh = blow.sample(t, lo, hi, opts.samples, opts.seed, cell_tag(tag, 2));
    const MeasureEstimate est = blow.density(fresh, z_star);

    BlowupRow row;
    row.t = t;
    row.density = est.value;
    row.std_error = est.std_error;
    row.best_sampled = values[best];
    row.center = z_star;
    report.rows.push_back(row);
    if (est.value <= 0.0 || est.std_error > est.value * opts.tolerance / 3.0) {
      noisy = true;
    }
  }

  std::vector<double> ts;
  std::vector<double> ys;
  double mc_var = 0.0;
  for (const auto & row : report.rows) {
    ts.push_back(row.t);
    ys.push_back(row.density);
    mc_var += row.std_error * row.std_error;
  }
  const auto [a, se] = intercept_fit(ts, ys);
  report.extrapolated = a;
  report.extrapolation_error = std::max(se, std::sqrt(mc_var / report.rows.size()));
  report.relative_gap = report.beta > 0.0 ? std::abs(a - report.beta) / report.beta : std::abs(a);
  report.noisy = noisy;
  report.pass = report.relative_gap <= opts.tolerance;
  return report;
}

AreaReport area_check(const IntrinsicMap & phi, const Region & region, const DistanceSpec & d, const AreaOptions & opts)
{
  AreaReport out;
  out.mu = graph_mu(phi, region, d, opts.samples, opts.seed, opts.threads);

  // Interior sample points of the domain box, preferring points mapped into the region.
  const HomogeneousSubgroup & W = phi.couple().W();
  const Eigen::VectorXd mid = 0.5 * (phi.lo() + phi.hi());
  const Eigen::VectorXd rad = 0.25 * (phi.hi() - phi.lo());
  Rng rng(opts.seed, 0xa4ea);
  auto draw = [&]() {
    Point fallback = W.point(mid);
    for (int tries = 0; tries < 1000; ++tries) {
      const Point w = W.point(rng.uniform_vector(mid - rad, mid + rad));
      if (phi.in_domain(w) && region.contains(graph_point(phi, w), d)) {
        return w;
      }
    }
    return fallback;
  };

  bool densities_ok = true;
  for (int k = 0; k < opts.density_points; ++k) {
    BlowupOptions b = opts.blowup;
    b.seed = splitmix64(opts.seed + static_cast<std::uint64_t>(k));
    b.threads = opts.threads;
    out.densities.push_back(federer_density(phi, draw(), d, b));
    densities_ok = densities_ok && out.densities.back().pass;
  }

  for (int k = 0; k < opts.tangent_samples; ++k) {
    const IntrinsicLinearMap T = tangent_map(phi, draw(), d);
    out.tangent_betas.push_back(spherical_factor(T.graph_subgroup(), d, opts.blowup.beta).beta);
  }
  if (!out.tangent_betas.empty()) {
    const auto [mn, mx] = std::minmax_element(out.tangent_betas.begin(), out.tangent_betas.end());
    double mean = 0.0;
    for (double b : out.tangent_betas) {
      mean += b;
    }
    mean /= static_cast<double>(out.tangent_betas.size());
    out.beta_spread = (*mx - *mn) / mean;
    out.rotationally_symmetric = out.beta_spread <= opts.symmetry_tolerance;
    out.omega = mean;
  }

  bool additive = true;
  if (out.rotationally_symmetric) {
    out.spherical_measure = out.mu.value / out.omega;
    if (region.kind == Region::Kind::box) {
      const auto [lower, upper] = region.bisect();
      out.halves.push_back(graph_mu(phi, lower, d, opts.samples, opts.seed + 1, opts.threads));
      out.halves.push_back(graph_mu(phi, upper, d, opts.samples, opts.seed + 2, opts.threads));
      const double se = std::sqrt(out.mu.std_error * out.mu.std_error +
                                  out.halves[0].std_error * out.halves[0].std_error +
                                  out.halves[1].std_error * out.halves[1].std_error);
      const double gap = std::abs(out.mu.value - out.halves[0].value - out.halves[1].value);
      out.additivity_gap = se > 0.0 ? gap / se : (gap > 1e-12 ? std::numeric_limits<double>::infinity() : 0.0);
      additive = out.additivity_gap <= 3.0;
    }
  }
  out.pass = densities_ok && additive;
  return out;
}

} // namespace homog
