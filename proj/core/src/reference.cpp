#include "hq/reference.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "hq/detail/summation.hpp"
#include "hq/error.hpp"
#include "hq/rectangle.hpp"

namespace hq::reference {

namespace {

void require_tol(double tol) {
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tol must be positive");
}

double wallis_factor(double i) { return 4.0 * i * i / (4.0 * i * i - 1.0); }

}  // namespace

SeriesValue wallis_partial(std::size_t terms) {
  double log_sum = 0.0;
  for (std::size_t i = 1; i <= terms; ++i) log_sum += std::log(wallis_factor(static_cast<double>(i)));
  return {std::exp(log_sum), terms, 0.0};
}

SeriesValue wallis_product(double tol) {
  require_tol(tol);
  // Romberg table in 1/N over N = 2^j; the partial products have an
  // expansion in powers of 1/N.
  std::vector<std::vector<double>> table;
  detail::CompensatedSum log_sum;
  std::size_t n = 0;
  for (std::size_t target = 2; target <= (std::size_t{1} << 24); target *= 2) {
    for (std::size_t i = n + 1; i <= target; ++i) log_sum.add(std::log(wallis_factor(static_cast<double>(i))));
    n = target;
    std::vector<double> row{std::exp(log_sum.value())};
    if (!table.empty()) {
      const auto& prev = table.back();
      double factor = 2.0;
      for (std::size_t c = 0; c < prev.size(); ++c) {
        row.push_back((factor * row[c] - prev[c]) / (factor - 1.0));
        factor *= 2.0;
      }
    }
    table.push_back(std::move(row));
    if (table.size() >= 3) {
      const auto& cur = table.back();
      const auto& prev = table[table.size() - 2];
      const double diff = std::abs(cur.back() - prev.back());
      if (diff < tol / 10.0) return {cur.back(), n, diff};
    }
  }
  const auto& last = table.back();
  return {last.back(), n, std::abs(last.back() - table[table.size() - 2].back())};
}

double csch(double z) {
  if (z == 0.0) throw Error(ErrorCode::DomainError, "csch(0) is infinite");
  if (std::abs(z) > 30.0) return std::copysign(2.0 * std::exp(-std::abs(z)), z);
  return 1.0 / std::sinh(z);
}

double csch_series_term(std::size_t k) {
  if (k == 0) return 0.5;
  const double rk = std::sqrt(static_cast<double>(k));
  return std::numbers::pi / std::ldexp(1.0, static_cast<int>(k) + 1) * rk *
         csch(std::numbers::pi * rk);
}

SeriesValue csch_series(double tol) {
  require_tol(tol);
  detail::CompensatedSum sum;
  sum.add(csch_series_term(0));
  for (std::size_t k = 1;; ++k) {
    const double t = csch_series_term(k);
    // Successive terms shrink by at least r = √((k+1)/k)/2 < 1.
    const double r = 0.5 * std::sqrt(static_cast<double>(k + 1) / static_cast<double>(k));
    if (t < tol) return {sum.value(), k, t / (1.0 - r)};
    sum.add(t);
  }
}

SeriesValue infinite_ratio_product(double k, RatioBase base, double tol) {
  require_tol(tol);
  if (!(k >= 0.0)) throw Error(ErrorCode::InvalidArgument, "k must be non-negative");
  if (k == 0.0) return {1.0, 0, 0.0};
  if (base == RatioBase::Square) {
    const double z = std::numbers::pi * std::sqrt(k);
    return {z * csch(z), 0, 0.0};
  }
  // Σ_{n>N} log(1 + k/2^n) ≤ k/2^N bounds the omitted tail.
  double log_sum = 0.0;
  for (std::size_t n = 1;; ++n) {
    const double b = std::ldexp(1.0, static_cast<int>(n));
    log_sum += std::log(b / (k + b));
    const double tail = k / b;
    const double value = std::exp(log_sum);
    if (value * tail < tol / 10.0 || n >= 1000) return {value, n, value * tail};
  }
}

SeriesValue infinite_ratio_product_direct(double k, RatioBase base, double tol) {
  require_tol(tol);
  if (!(k >= 0.0)) throw Error(ErrorCode::InvalidArgument, "k must be non-negative");
  VolumeConfig cfg;
  cfg.tol = tol;
  const auto r = infinite_product({}, [k, base](std::size_t n) {
    const double b = base == RatioBase::Square ? static_cast<double>(n) * static_cast<double>(n)
                                               : std::ldexp(1.0, static_cast<int>(std::min<std::size_t>(n, 1000)));
    return b / (k + b);
  }, cfg);
  if (!r.value) throw Error(ErrorCode::BudgetExhausted, "ratio product did not converge");
  return {*r.value, r.n_terms, r.residual};
}

double cosh_series_term(std::size_t k) {
  const double inv_fact = 1.0 / std::tgamma(2.0 * static_cast<double>(k) + 1.0);
  return inv_fact * infinite_ratio_product(2.0 * static_cast<double>(k), RatioBase::PowerOfTwo, 1e-17).value;
}

namespace {

// Σ_{k≥first} 1/(2k)! ∏ 2^n/(shift·k + 2^n); ratios of successive terms are
// below 1/2 so twice the first dropped term bounds the remainder.
SeriesValue factorial_series(double tol, std::size_t first, double shift) {
  require_tol(tol);
  detail::CompensatedSum sum;
  for (std::size_t k = first;; ++k) {
    const double kk = static_cast<double>(k);
    const double t = infinite_ratio_product(shift * kk, RatioBase::PowerOfTwo, 1e-17).value /
                     std::tgamma(2.0 * kk + 1.0);
    if (t < tol && k > first) return {sum.value(), k - first, 2.0 * t};
    sum.add(t);
    if (t < tol) return {sum.value(), k - first + 1, 2.0 * t};
  }
}

}  // namespace

SeriesValue cosh_series(double tol) { return factorial_series(tol, 0, 2.0); }

SeriesValue cosh_series_as_printed(double tol) { return factorial_series(tol, 1, 1.0); }

}  // namespace hq::reference
