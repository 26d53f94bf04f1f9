#include "homog/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace homog
{

MinimizeResult nelder_mead(const Objective & f, const Eigen::VectorXd & x0, double step, int max_iter, double ftol)
{
  const int n = static_cast<int>(x0.size());
  MinimizeResult out;
  if (n == 0) {
    out.x = x0;
    out.value = f(x0);
    out.evaluations = 1;
    out.converged = true;
    return out;
  }
  std::vector<Eigen::VectorXd> simplex(n + 1, x0);
  std::vector<double> values(n + 1);
  for (int i = 0; i < n; ++i) {
    simplex[i + 1][i] += step;
  }
  for (int i = 0; i <= n; ++i) {
    values[i] = f(simplex[i]);
  }
  int evals = n + 1;
  std::vector<int> order(n + 1);
  int iter = 0;
  for (; iter < max_iter; ++iter) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return values[a] < values[b]; });
    const int best = order.front();
    const int worst = order.back();
    const int second = order[n - 1];
    const double spread = std::abs(values[worst] - values[best]);
    if (spread <= ftol * (std::abs(values[best]) + ftol)) {
      out.converged = true;
      break;
    }
    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (int i = 0; i <= n; ++i) {
      if (i != worst) {
        centroid += simplex[i];
      }
    }
    centroid /= n;
    const Eigen::VectorXd xr = centroid + (centroid - simplex[worst]);
    const double fr = f(xr);
    ++evals;
    if (fr < values[best]) {
      const Eigen::VectorXd xe = centroid + 2.0 * (centroid - simplex[worst]);
      const double fe = f(xe);
      ++evals;
      if (fe < fr) {
        simplex[worst] = xe;
        values[worst] = fe;
      } else {
        simplex[worst] = xr;
        values[worst] = fr;
      }
      continue;
    }
    if (fr < values[second]) {
      simplex[worst] = xr;
      values[worst] = fr;
      continue;
    }
    const bool outside = fr < values[worst];
    const Eigen::VectorXd xc = outside ? Eigen::VectorXd(centroid + 0.5 * (xr - centroid))
                                       : Eigen::VectorXd(centroid + 0.5 * (simplex[worst] - centroid));
    const double fc = f(xc);
    ++evals;
    if (fc < std::min(fr, values[worst])) {
      simplex[worst] = xc;
      values[worst] = fc;
      continue;
    }
    for (int i = 0; i <= n; ++i) {
      if (i != best) {
        simplex[i] = simplex[best] + 0.5 * (simplex[i] - simplex[best]);
        values[i] = f(simplex[i]);
        ++evals;
      }
    }
  }
  const int best = static_cast<int>(std::min_element(values.begin(), values.end()) - values.begin());
  out.x = simplex[best];
  out.value = values[best];
  out.iterations = iter;
  out.evaluations = evals;
  return out;
}

MinimizeResult multistart_nelder_mead(const Objective & f, const std::vector<Eigen::VectorXd> & starts, double step,
                                      int max_iter, double ftol)
{
  MinimizeResult best;
  best.value = std::numeric_limits<double>::infinity();
  int evals = 0;
  for (const auto & s : starts) {
    MinimizeResult r = nelder_mead(f, s, step, max_iter, ftol);
    evals += r.evaluations;
    if (r.value < best.value) {
      best = r;
    }
  }
  best.evaluations = evals;
  return best;
}

Extrapolation richardson(const std::vector<Eigen::VectorXd> & samples, double ratio)
{
  const int n = static_cast<int>(samples.size());
  Extrapolation out;
  out.value = samples.back();
  out.error = std::numeric_limits<double>::infinity();
  if (n == 1) {
    return out;
  }
  // T[i][j]: j-fold extrapolation using samples i-j..i.
  std::vector<std::vector<Eigen::VectorXd>> T(n);
  for (int i = 0; i < n; ++i) {
    T[i].push_back(samples[i]);
    double factor = 1.0;
    for (int j = 1; j <= i; ++j) {
      factor *= ratio;
      T[i].push_back(T[i][j - 1] + (T[i][j - 1] - T[i - 1][j - 1]) / (factor - 1.0));
      const double err = std::max((T[i][j] - T[i][j - 1]).cwiseAbs().maxCoeff(),
                                  (T[i][j] - T[i - 1][j - 1]).cwiseAbs().maxCoeff());
      if (err <= out.error) {
        out.error = err;
        out.value = T[i][j];
      }
    }
    // Once the leading diagonal diverges, further rows only add round-off.
    if (i >= 2 && (T[i][i] - T[i - 1][i - 1]).cwiseAbs().maxCoeff() >= 2.0 * out.error) {
      break;
    }
  }
  return out;
}

std::vector<std::vector<int>> combinations(int n, int k)
{
  std::vector<std::vector<int>> out;
  if (k < 0 || k > n) {
    return out;
  }
  std::vector<int> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    out.push_back(idx);
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) {
      --i;
    }
    if (i < 0) {
      break;
    }
    ++idx[i];
    for (int j = i + 1; j < k; ++j) {
      idx[j] = idx[j - 1] + 1;
    }
  }
  return out;
}

std::vector<double> halving_schedule(double t0, double t_min)
{
  std::vector<double> out;
  for (double t = t0; t >= t_min * (1.0 - 1e-12); t *= 0.5) {
    out.push_back(t);
  }
  return out;
}

} // namespace homog
