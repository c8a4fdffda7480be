#pragma once

// Closed-form and series values used as golden references for the engines.

#include <cstddef>

namespace hq::reference {

struct SeriesValue {
  double value = 0.0;
  std::size_t terms_used = 0;
  /// Bound on |limit − value| (0 for closed forms).
  double remainder_bound = 0.0;
};

/// ∏_{i≥1} 4i²/(4i²−1) = π/2, Richardson-extrapolated partial products.
SeriesValue wallis_product(double tol);
/// ∏_{i≤terms} 4i²/(4i²−1).
SeriesValue wallis_partial(std::size_t terms);

/// 1/sinh(z), switching to 2e^{−z} for large z.
double csch(double z);

/// 1/2 + Σ_{k≥1} π/2^{k+1} √k csch(π√k); terms below tol are dropped.
SeriesValue csch_series(double tol);
/// Term k of csch_series (k = 0 gives 1/2).
double csch_series_term(std::size_t k);

enum class RatioBase { Square, PowerOfTwo };

/// ∏_{n≥1} b_n/(k + b_n) with b_n = n² or 2^n. The square base uses the
/// closed form π√k csch(π√k); powers of two use a direct product with a
/// geometric tail bound.
SeriesValue infinite_ratio_product(double k, RatioBase base, double tol);
/// Direct accelerated product for either base, for cross-checks.
SeriesValue infinite_ratio_product_direct(double k, RatioBase base, double tol);

/// Σ_{k≥0} 1/(2k)! ∏_{n≥1} 2^n/(2k + 2^n): the integral of
/// cosh(∏ x_n^{1/2^n}) over the Hilbert cube.
SeriesValue cosh_series(double tol);
double cosh_series_term(std::size_t k);

/// Σ_{k≥1} 1/(2k)! ∏_{n≥1} 2^n/(k + 2^n), the series as it is usually
/// printed; it drops the constant term and halves the moment shift, and does
/// not equal the integral.
SeriesValue cosh_series_as_printed(double tol);

}  // namespace hq::reference
