#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

// Truncated continuous-time Markov chains of the two station types. They
// solve the balance equations directly and never call the closed forms, so
// they serve as independent checks of analytic.hpp.

namespace epon::ctmc {

inline constexpr double kTailBound = 1e-10;

/// Birth-death chain on {0..M}: birth λ, death μ. Solved by forward
/// recursion and normalized. Throws UnstableStation when λ ≥ μ and
/// TruncationTooSmall when ρ^{M+1} ≥ kTailBound.
std::vector<double> mm1_distribution(double lambda, double mu, std::size_t truncation);

/// Bulk-service chain on {0..M}: arrivals n→n+1 at rate λ (blocked at M),
/// service epochs n→max(n−K,0) at rate μ. Solved through the cut equations
/// λ·p(n) = μ·Σ_{j=n+1}^{n+K} p(j), back-substituted from the top state.
/// Throws UnstableStation when λ ≥ Kμ and TruncationTooSmall when the
/// estimated geometric tail beyond M reaches kTailBound.
std::vector<double> batch_distribution(double lambda, double mu, std::uint32_t k,
                                       std::size_t truncation);

/// Dense generator of the truncated bulk-service chain, row-major (M+1)².
std::vector<double> batch_generator(double lambda, double mu, std::uint32_t k,
                                    std::size_t truncation);

double mean(const std::vector<double>& distribution);

/// Smallest power-of-two truncation (≥ 64) for which batch_distribution
/// accepts the tail.
std::vector<double> batch_distribution_auto(double lambda, double mu, std::uint32_t k);

}  // namespace epon::ctmc
