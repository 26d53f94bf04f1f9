#ifndef HOMOG_RANDOM_HPP
#define HOMOG_RANDOM_HPP

#include <Eigen/Core>
#include <cstdint>
#include <random>

namespace homog
{

/// splitmix64 finalizer, used to derive independent stream seeds.
inline std::uint64_t splitmix64(std::uint64_t x)
{
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Counter-based stream: the generator for (seed, stream) does not depend on
/// how many other streams were drawn before it, so parallel cells reproduce.
class Rng
{
public:
  Rng(std::uint64_t seed, std::uint64_t stream = 0)
    : m_engine(splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632BE59BD9B4E019ull)))
  {
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(m_engine() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal() { return m_normal(m_engine); }

  Eigen::VectorXd uniform_vector(const Eigen::VectorXd & lo, const Eigen::VectorXd & hi)
  {
    Eigen::VectorXd out(lo.size());
    for (Eigen::Index i = 0; i < lo.size(); ++i) {
      out[i] = uniform(lo[i], hi[i]);
    }
    return out;
  }
  Eigen::VectorXd normal_vector(Eigen::Index n)
  {
    Eigen::VectorXd out(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      out[i] = normal();
    }
    return out;
  }
  /// Uniform direction on the Euclidean unit sphere.
  Eigen::VectorXd unit_vector(Eigen::Index n)
  {
    Eigen::VectorXd v;
    do {
      v = normal_vector(n);
    } while (v.norm() < 1e-12);
    return v.normalized();
  }

  std::mt19937_64 & engine() { return m_engine; }

private:
  std::mt19937_64 m_engine;
  std::normal_distribution<double> m_normal;
};

} // namespace homog

#endif
