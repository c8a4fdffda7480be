#pragma once

// Reference values computed independently of the library: plain loops,
// composite Simpson rules and closed forms written out by hand.

#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kHalfPi = std::numbers::pi / 2.0;
/// Σ 1/(2i²).
inline constexpr double kPiSquaredOver12 = std::numbers::pi * std::numbers::pi / 12.0;

/// Composite Simpson on [a, b] with an even number of panels.
inline double simpson(const std::function<double(double)>& f, double a, double b,
                      std::size_t panels = 2000) {
  if (panels % 2 == 1) ++panels;
  const double h = (b - a) / static_cast<double>(panels);
  double s = f(a) + f(b);
  for (std::size_t k = 1; k < panels; ++k) {
    s += (k % 2 == 1 ? 4.0 : 2.0) * f(a + h * static_cast<double>(k));
  }
  return s * h / 3.0;
}

inline double wallis_side(std::size_t i) {
  const double q = 4.0 * static_cast<double>(i) * static_cast<double>(i);
  return q / (q - 1.0);
}

/// ∏_{k=n}^{m} 4k²/(4k²−1), accumulated left to right in long double.
inline double wallis_range_product(std::size_t n, std::size_t m) {
  long double p = 1.0L;
  for (std::size_t k = n; k <= m; ++k) {
    const long double q = 4.0L * static_cast<long double>(k) * static_cast<long double>(k);
    p *= q / (q - 1.0L);
  }
  return static_cast<double>(p);
}

/// I_n for Σ x_i/i² on ×_{i≤n}[0, a_i]: ½ Σ_i (a_i²/i²) ∏_{j≠i} a_j.
inline double separable_level(const std::vector<double>& sides) {
  long double vol = 1.0L;
  for (double a : sides) vol *= a;
  long double s = 0.0L;
  for (std::size_t i = 0; i < sides.size(); ++i) {
    const long double a = sides[i];
    const long double idx = static_cast<long double>(i + 1);
    s += 0.5L * a * a / (idx * idx) * (vol / a);
  }
  return static_cast<double>(s);
}

/// Σ_{i≤n} ∫_0^1 x/i² dx by Simpson in each dimension, plus the exact tail
/// Σ_{i>n} 1/(2i²) bounded by the integral test.
inline double unit_separable_norm_by_quadrature(std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    const double w = 1.0 / (static_cast<double>(i) * static_cast<double>(i));
    s += simpson([w](double x) { return w * x; }, 0.0, 1.0, 8);
  }
  // Σ_{i>n} 1/i² = 1/n − 1/(2n²) + 1/(6n³) − ... (Euler-Maclaurin).
  const double N = static_cast<double>(n);
  const double tail = 1.0 / N - 1.0 / (2.0 * N * N) + 1.0 / (6.0 * N * N * N) -
                      1.0 / (30.0 * std::pow(N, 5));
  return s + 0.5 * tail;
}

/// ∫_{[0,1]^n} 1/(2 − ∏_{i≤n} x_i^{1/i²}) = Σ_k 2^{−(k+1)} ∏_{i≤n} i²/(k+i²).
inline double ex1_level(std::size_t n, std::size_t kmax = 200) {
  long double s = 0.0L;
  for (std::size_t k = 0; k <= kmax; ++k) {
    long double p = std::ldexp(1.0L, -static_cast<int>(k + 1));
    for (std::size_t i = 1; i <= n; ++i) {
      const long double q = static_cast<long double>(i) * static_cast<long double>(i);
      p *= q / (static_cast<long double>(k) + q);
    }
    s += p;
  }
  return static_cast<double>(s);
}

/// 1/2 + Σ_{k≥1} 2^{−(k+1)} π√k / sinh(π√k), straight from std::sinh.
inline double ex1_closed_form() {
  double s = 0.5;
  for (int k = 1; k <= 200; ++k) {
    const double z = kPi * std::sqrt(static_cast<double>(k));
    s += std::ldexp(1.0, -(k + 1)) * z / std::sinh(z);
  }
  return s;
}

/// Σ_{k≥0} 1/(2k)! ∏_{n≤60} 2^n/(2k+2^n); factors past n = 60 equal 1 in double.
inline double ex2_value() {
  long double s = 0.0L;
  long double fact = 1.0L;
  for (std::size_t k = 0; k <= 30; ++k) {
    if (k > 0) fact *= static_cast<long double>(2 * k - 1) * static_cast<long double>(2 * k);
    long double p = 1.0L / fact;
    for (int n = 1; n <= 60; ++n) {
      const long double b = std::ldexp(1.0L, n);
      p *= b / (2.0L * static_cast<long double>(k) + b);
    }
    s += p;
  }
  return static_cast<double>(s);
}

/// π√k·csch(π√k).
inline double ratio_product_square(double k) {
  if (k == 0.0) return 1.0;
  const double z = kPi * std::sqrt(k);
  return z / std::sinh(z);
}

}  // namespace oracle
