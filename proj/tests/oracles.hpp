#pragma once

// Test-only reference computations. Nothing here calls into the library's
// root finder or chain solvers.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

namespace oracle {

/// Root of μr^{K+1} − (λ+μ)r + λ in (0,1): scan a uniform grid for the
/// first sign change, then bisect that cell to machine precision.
inline double grid_scan_root(double lambda, double mu, int k, double step = 1e-6) {
  auto f = [&](double r) { return mu * std::pow(r, k + 1) - (lambda + mu) * r + lambda; };
  double prev = 0.0;
  for (double r = step; r < 1.0; r += step) {
    if (f(r) <= 0.0) {
      double lo = prev, hi = r;
      for (int i = 0; i < 200 && hi - lo > 0.0; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        (f(mid) > 0.0 ? lo : hi) = mid;
      }
      return 0.5 * (lo + hi);
    }
    prev = r;
  }
  return std::nan("");
}

/// Stationary vector of a dense generator (row-major, size n×n): solves
/// πQ = 0 with the last balance equation replaced by Σπ = 1, by Gaussian
/// elimination with partial pivoting.
inline std::vector<double> dense_stationary(const std::vector<double>& q, std::size_t n) {
  // Build A = Qᵀ with the normalization row.
  std::vector<double> a(n * n);
  std::vector<double> b(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i * n + j] = q[j * n + i];
  for (std::size_t j = 0; j < n; ++j) a[(n - 1) * n + j] = 1.0;
  b[n - 1] = 1.0;

  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a[r * n + col]) > std::abs(a[pivot * n + col])) pivot = r;
    if (pivot != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a[col * n + j], a[pivot * n + j]);
      std::swap(b[col], b[pivot]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const double factor = a[r * n + col] / a[col * n + col];
      if (factor == 0.0) continue;
      for (std::size_t j = col; j < n; ++j) a[r * n + j] -= factor * a[col * n + j];
      b[r] -= factor * b[col];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= a[i * n + j] * x[j];
    x[i] = s / a[i * n + i];
  }
  return x;
}

/// Generator of the truncated bulk-service chain, built independently of
/// the library (arrivals blocked at the top state).
inline std::vector<double> bulk_generator(double lambda, double mu, std::uint32_t k,
                                          std::size_t m) {
  const std::size_t n = m + 1;
  std::vector<double> q(n * n, 0.0);
  for (std::size_t s = 0; s < n; ++s) {
    if (s < m) {
      q[s * n + s + 1] += lambda;
      q[s * n + s] -= lambda;
    }
    if (s > 0) {
      const std::size_t to = s >= k ? s - k : 0;
      q[s * n + to] += mu;
      q[s * n + s] -= mu;
    }
  }
  return q;
}

inline double mean_of(const std::vector<double>& p) {
  double m = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) m += static_cast<double>(i) * p[i];
  return m;
}

}  // namespace oracle
