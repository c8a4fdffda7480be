#pragma once

// Finite-dimensional integration engines used on truncated integrands:
// Gauss-Legendre tensor products, seeded Monte Carlo and 1-D adaptive
// Gauss-Kronrod, plus the low-discrepancy points used for sup-norm sampling.
//
// Work is split into fixed-size chunks whose partial results are combined in
// a fixed pairwise order, so results do not depend on the worker count.

#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <span>
#include <vector>

namespace hq::quadrature {

/// Nodes and weights on [0, 1].
struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

const Rule& gauss_legendre(std::size_t order);

using PointFunction = std::function<double(std::span<const double>)>;

struct Estimate {
  double value = 0.0;
  /// Standard error for Monte Carlo, 0 for deterministic rules.
  double std_error = 0.0;
  std::size_t evaluations = 0;
};

/// ∫ over ×[0, sides[k]] with `order` Gauss-Legendre nodes per dimension.
Estimate tensor_product(const PointFunction& f, std::span<const double> sides, std::size_t order,
                        unsigned workers = 0);

/// Plain Monte Carlo: mean of f over uniform samples times ∏ sides.
Estimate monte_carlo(const PointFunction& f, std::span<const double> sides, std::size_t samples,
                     std::uint64_t seed, unsigned workers = 0);

/// Counter-based uniform variate in [0, 1) for (seed, sample, dimension).
double uniform01(std::uint64_t seed, std::uint64_t sample, std::uint64_t dim) noexcept;

/// Additive-recurrence (Kronecker) low-discrepancy point in [0, 1)^out.size().
void kronecker_point(std::size_t index, std::span<double> out);

/// Adaptive 15-point Gauss-Kronrod on [a, b].
double adaptive_1d(const std::function<double(double)>& f, double a, double b, double tol,
                   double* error = nullptr);

unsigned default_workers() noexcept;

/// Runs fn(chunk, begin, end) over [0, count) in chunks of `chunk_size`.
/// The first exception (by chunk order) is rethrown after all workers finish.
void parallel_chunks(std::size_t count, std::size_t chunk_size, unsigned workers,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& fn);

}  // namespace hq::quadrature
