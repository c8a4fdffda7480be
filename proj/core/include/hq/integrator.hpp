#pragma once

// ∫_R f as the limit of the finite-dimensional integrals ∫ f̂_n over
// ×_{i≤n} [0, a_i], taken along a doubling ladder of truncation dimensions.
//
// Three engines produce the ladder values: an exact analytic engine for
// integrands with recognized structure (separable sums, ψ of a coordinate-wise
// product), tensor Gauss-Legendre quadrature in low dimension and seeded Monte
// Carlo beyond that.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hq/funcspace.hpp"
#include "hq/quadrature.hpp"
#include "hq/rectangle.hpp"

namespace hq {

enum class Engine { Auto, Analytic, TensorQuad, MonteCarlo };
enum class Status { Converged, BudgetExhausted, DegenerateZero };

std::string_view to_string(Engine e) noexcept;
std::string_view to_string(Status s) noexcept;
/// Accepts auto, analytic, quad (or tensor_quad), mc (or monte_carlo).
std::optional<Engine> parse_engine(std::string_view name);

struct ConvergenceConfig {
  double tol = 1e-6;
  /// Largest truncation dimension of the ladder 1, 2, 4, ...
  std::size_t max_dims = std::size_t{1} << 20;
  /// No stopping rule fires below this dimension (capped at max_dims): a
  /// plateau of equal levels at small n can hide coordinates that enter later.
  std::size_t min_dims = 16;
  std::size_t quad_order = 16;
  std::size_t mc_samples = std::size_t{1} << 20;
  std::uint64_t seed = 20240607;
  Engine engine = Engine::Auto;
  /// Tensor grids above this many nodes fall through to Monte Carlo.
  std::size_t max_tensor_points = std::size_t{1} << 22;
  /// Cap on the ladder for the quadrature and Monte Carlo engines.
  std::size_t max_numeric_dims = 64;
  unsigned workers = 0;
  /// Integrate functions without a known bound on non-unit rectangles.
  bool force = false;
  /// Controls the infinite products and series of the analytic engine.
  VolumeConfig series{1e-11, 10'000'000, 3};
};

struct TracePoint {
  std::size_t n = 0;
  double value = 0.0;
  double std_error = 0.0;
  Engine engine = Engine::Analytic;
};

struct IntegralResult {
  double value = 0.0;
  std::size_t n_dims_used = 0;
  Engine engine = Engine::Analytic;
  double error_estimate = 0.0;
  Status status = Status::BudgetExhausted;
  std::vector<TracePoint> trace;
  /// How the ladder was declared convergent: "raw", "extrapolated",
  /// "series" or empty.
  std::string rule;
};

/// 1, 2, 4, ..., with max_dims appended when it is not a power of two.
std::vector<std::size_t> dimension_ladder(std::size_t max_dims);

/// ∫ over ×_{i≤n} [0, a_i] of f at level n with one engine (Auto picks).
quadrature::Estimate integrate_level(const CoordinateFunction& f, const ConvergentRectangle& rect,
                                     std::size_t n, Engine engine,
                                     const ConvergenceConfig& cfg = {});

IntegralResult integrate(const DeltaSequence& seq, const ConvergentRectangle& rect,
                         const ConvergenceConfig& cfg = {});
/// Regular sequence of f on its own domain.
IntegralResult integrate(const CoordinateFunction& f, const ConvergenceConfig& cfg = {});

/// ψ of the infinite product ∏ φ_n(x_n), φ written in x[n] and n
/// (e.g. "x[n]^(1/n^2)").
ProductForm product_form(PowerSeries psi, std::string_view phi, std::size_t first = 1);

/// Σ_k c_k ∏_i m_k(i) with m_k(i) = ∫_0^{a_i} φ_i^k.
IntegralResult integrate_product_form(const ProductForm& form, const ConvergentRectangle& rect,
                                      const ConvergenceConfig& cfg = {});

/// g^r(t) = ∫_{[0,1]^r} f(x, t): integrates out the first r coordinates of a
/// function on the Hilbert cube.
CoordinateFunction partial_integrate(const CoordinateFunction& f, std::size_t r,
                                     const ConvergenceConfig& cfg = {});

struct PrimitiveReport {
  IntegralResult lhs;
  IntegralResult rhs;
  double gap = 0.0;
};

PrimitiveReport check_unit_primitive(const CoordinateFunction& f, std::size_t r,
                                     const ConvergenceConfig& cfg = {});

struct BoundReport {
  IntegralResult integral;
  double bound = 0.0;  // M·vol(R)
  bool holds = false;
};

BoundReport check_bound(const CoordinateFunction& f, double M, const ConvergentRectangle& rect,
                        const ConvergenceConfig& cfg = {});

double check_uniqueness(const DeltaSequence& a, const DeltaSequence& b,
                        const ConvergentRectangle& rect, const ConvergenceConfig& cfg = {});

}  // namespace hq
