#include "epon/ctmc.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "epon/errors.hpp"

namespace epon::ctmc {

namespace {

void normalize(std::vector<double>& p) {
  const double total = std::accumulate(p.begin(), p.end(), 0.0);
  for (double& x : p) x /= total;
}

}  // namespace

std::vector<double> mm1_distribution(double lambda, double mu, std::size_t truncation) {
  if (!(lambda >= 0.0) || !(mu > 0.0)) throw InvalidArgument("rates must satisfy lambda >= 0, mu > 0");
  const double rho = lambda / mu;
  if (!(rho < 1.0)) throw UnstableStation("birth-death chain is not positive recurrent");
  if (std::pow(rho, static_cast<double>(truncation + 1)) >= kTailBound)
    throw TruncationTooSmall("truncation " + std::to_string(truncation) +
                             " leaves tail mass above the bound");

  std::vector<double> p(truncation + 1);
  p[0] = 1.0;
  // Cut between n and n+1: λ·p(n) = μ·p(n+1).
  for (std::size_t n = 0; n < truncation; ++n) p[n + 1] = p[n] * lambda / mu;
  normalize(p);
  return p;
}

std::vector<double> batch_distribution(double lambda, double mu, std::uint32_t k,
                                       std::size_t truncation) {
  if (!(lambda >= 0.0) || !(mu > 0.0) || k == 0)
    throw InvalidArgument("rates must satisfy lambda >= 0, mu > 0 and K >= 1");
  if (!(lambda < k * mu)) throw UnstableStation("bulk-service chain is not positive recurrent");

  std::vector<double> p(truncation + 1, 0.0);
  p[0] = 1.0;
  if (lambda == 0.0 || truncation == 0) return p;

  // Cut between n and n+1: λ·p(n) = μ·Σ_{j=n+1}^{min(n+K,M)} p(j).
  // Back-substitute from p(M) = 1; the window sum slides down by one state.
  const std::size_t m = truncation;
  p[m] = 1.0;
  double window = p[m];
  for (std::size_t n = m; n-- > 0;) {
    p[n] = mu / lambda * window;
    window += p[n];
    if (n + k <= m) window -= p[n + k];
    if (p[n] > 1e200) {
      for (std::size_t j = n; j <= m; ++j) p[j] *= 1e-200;
      window *= 1e-200;
    }
  }
  normalize(p);

  // Interior ratio approximates the geometric decay of the untruncated chain.
  const std::size_t probe = m / 2;
  if (probe >= 1 && p[probe - 1] > 0.0) {
    const double ratio = p[probe] / p[probe - 1];
    if (std::pow(ratio, static_cast<double>(m + 1)) >= kTailBound)
      throw TruncationTooSmall("truncation " + std::to_string(truncation) +
                               " leaves tail mass above the bound");
  } else if (p[m] >= kTailBound) {
    throw TruncationTooSmall("truncation " + std::to_string(truncation) + " is too small");
  }
  return p;
}

std::vector<double> batch_generator(double lambda, double mu, std::uint32_t k,
                                    std::size_t truncation) {
  const std::size_t size = truncation + 1;
  std::vector<double> q(size * size, 0.0);
  for (std::size_t n = 0; n < size; ++n) {
    if (n + 1 < size) {
      q[n * size + n + 1] += lambda;
      q[n * size + n] -= lambda;
    }
    if (n > 0) {
      const std::size_t to = n > k ? n - k : 0;
      q[n * size + to] += mu;
      q[n * size + n] -= mu;
    }
  }
  return q;
}

double mean(const std::vector<double>& distribution) {
  double m = 0.0;
  for (std::size_t n = 0; n < distribution.size(); ++n)
    m += static_cast<double>(n) * distribution[n];
  return m;
}

std::vector<double> batch_distribution_auto(double lambda, double mu, std::uint32_t k) {
  for (std::size_t m = 64;; m *= 2) {
    try {
      return batch_distribution(lambda, mu, k, m);
    } catch (const TruncationTooSmall&) {
      if (m > (std::size_t{1} << 24)) throw;
    }
  }
}

}  // namespace epon::ctmc
