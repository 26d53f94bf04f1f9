#ifndef HOMOG_ESTIMATE_HPP
#define HOMOG_ESTIMATE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "homog/parallel.hpp"
#include "homog/random.hpp"

namespace homog
{

/// Value with an error bar. Monte Carlo estimates carry a standard error;
/// deterministic quadratures carry a resolution-based bound in std_error.
struct MeasureEstimate
{
  double value = 0.0;
  double std_error = 0.0;
  long n_samples = 0;
  std::string method = "monte_carlo"; ///< monte_carlo | grid | adaptive
  bool precision_ok = true;           ///< false when the requested precision was not reached
};

/// Samples per Monte Carlo chunk. Each chunk owns the RNG stream
/// (seed, tag, chunk index), so the estimate is independent of the thread count.
inline constexpr long kChunkSize = 4096;

/// Mean and standard error of sample(rng) over n draws.
template <typename Sample>
MeasureEstimate monte_carlo_mean(long n, std::uint64_t seed, std::uint64_t tag, int threads, Sample && sample)
{
  const int chunks = static_cast<int>((n + kChunkSize - 1) / kChunkSize);
  std::vector<double> sums(chunks, 0.0);
  std::vector<double> squares(chunks, 0.0);
  parallel_for(chunks, threads, [&](int c) {
    Rng rng(seed ^ splitmix64(tag), static_cast<std::uint64_t>(c));
    const long begin = c * kChunkSize;
    const long end = std::min(n, begin + kChunkSize);
    double s = 0.0;
    double s2 = 0.0;
    for (long k = begin; k < end; ++k) {
      const double v = sample(rng);
      s += v;
      s2 += v * v;
    }
    sums[c] = s;
    squares[c] = s2;
  });
  double s = 0.0;
  double s2 = 0.0;
  for (int c = 0; c < chunks; ++c) {
    s += sums[c];
    s2 += squares[c];
  }
  MeasureEstimate out;
  out.n_samples = n;
  if (n == 0) {
    return out;
  }
  const double mean = s / n;
  const double var = n > 1 ? std::max(0.0, (s2 - n * mean * mean) / (n - 1)) : 0.0;
  out.value = mean;
  out.std_error = std::sqrt(var / n);
  return out;
}

} // namespace homog

#endif
