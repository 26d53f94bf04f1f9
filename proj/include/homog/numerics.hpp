#ifndef HOMOG_NUMERICS_HPP
#define HOMOG_NUMERICS_HPP

#include <Eigen/Core>
#include <functional>
#include <vector>

namespace homog
{

struct MinimizeResult
{
  Eigen::VectorXd x;
  double value = 0.0;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
};

using Objective = std::function<double(const Eigen::VectorXd &)>;

/// Derivative-free simplex minimization with the standard coefficients
/// (reflection 1, expansion 2, contraction 1/2, shrink 1/2).
MinimizeResult nelder_mead(const Objective & f, const Eigen::VectorXd & x0, double step, int max_iter,
                           double ftol = 1e-10);

/// Runs nelder_mead from every start and keeps the best result. Ties keep
/// the earliest start, so the answer is deterministic given the starts.
MinimizeResult multistart_nelder_mead(const Objective & f, const std::vector<Eigen::VectorXd> & starts,
                                      double step, int max_iter, double ftol = 1e-10);

struct Extrapolation
{
  Eigen::VectorXd value;
  double error = 0.0; ///< difference between the two best tableau entries
};

/// Richardson extrapolation of samples taken at h_k = h_0 / ratio^k, assuming
/// an error expansion in integer powers of h. Scans the Neville tableau and
/// returns the entry with the smallest error estimate, stopping once the
/// estimates start growing (round-off takes over).
Extrapolation richardson(const std::vector<Eigen::VectorXd> & samples, double ratio = 2.0);

/// Scalar convenience wrapper.
inline double richardson_scalar(const std::vector<double> & samples, double ratio, double * error = nullptr)
{
  std::vector<Eigen::VectorXd> v;
  for (double s : samples) {
    v.push_back(Eigen::VectorXd::Constant(1, s));
  }
  const Extrapolation e = richardson(v, ratio);
  if (error) {
    *error = e.error;
  }
  return e.value[0];
}

/// All k-subsets of {0..n-1} in lexicographic order.
std::vector<std::vector<int>> combinations(int n, int k);

/// The geometric schedule t0, t0/2, ..., stopping before t drops below t_min.
std::vector<double> halving_schedule(double t0, double t_min);

} // namespace homog

#endif
