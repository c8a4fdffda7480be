#pragma once

// Rectangles ×_{i≥1} [0, a_i] in R^N and their volumes ∏ a_i.
//
// A rectangle is stored as a finite prefix a_1..a_m plus a closed-form tail
// rule i ↦ a_i for i > m. Volumes are accumulated as log-sums so that
// degenerate products do not underflow before they are classified.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hq/expr.hpp"

namespace hq {

struct VolumeConfig {
  double tol = 1e-10;
  std::size_t max_terms = 10'000'000;
  /// Consecutive doubling checks that must show a non-shrinking trend before a
  /// product is declared degenerate or divergent.
  std::size_t window = 3;
};

enum class VolumeClass { NonDegenerate, Degenerate, Divergent, Unknown };

std::string_view to_string(VolumeClass c) noexcept;

struct VolumeReport {
  VolumeClass classification = VolumeClass::Unknown;
  std::optional<double> value;
  std::size_t n_terms = 0;
  double residual = 0.0;
  /// True when the value came from a closed-form tail product.
  bool analytic = false;
};

class TailRule {
 public:
  using Native = std::function<double(std::size_t)>;

  static TailRule constant(double c);
  /// Formula in the free index `i` (see hq/expr.hpp).
  static TailRule formula(std::string_view src);
  static TailRule formula(expr::ExprPtr ast);
  static TailRule native(Native fn, std::string description);

  /// Attaches the closed-form value of ∏_{i≥1} rule(i).
  TailRule with_analytic_product(double product_from_one, std::string provenance) const;

  double operator()(std::size_t i) const;

  std::optional<double> constant_value() const { return constant_; }
  const std::optional<double>& analytic_product() const { return analytic_; }
  const std::string& provenance() const { return provenance_; }
  const std::string& description() const { return description_; }
  const expr::ExprPtr& expression() const { return ast_; }

 private:
  TailRule() = default;

  std::optional<double> constant_;
  expr::ExprPtr ast_;
  Native native_;
  std::optional<double> analytic_;
  std::string provenance_;
  std::string description_;
};

class ConvergentRectangle {
 public:
  ConvergentRectangle(std::string name, std::vector<double> prefix, TailRule tail,
                      const VolumeConfig& cfg = {});

  const std::string& name() const { return name_; }
  std::span<const double> prefix() const { return prefix_; }
  const TailRule& tail() const { return tail_; }

  /// Side length a_i, 1-based.
  double side(std::size_t i) const;
  /// a_1..a_n.
  std::vector<double> sides(std::size_t n) const;
  /// ∏_{i≤n} a_i.
  double partial_volume(std::size_t n) const;

  /// Classification computed on construction.
  const VolumeReport& classification() const { return report_; }
  VolumeClass volume_class() const { return report_.classification; }

  /// Known upper bound on every side, when available.
  std::optional<double> sup_side() const { return sup_side_; }
  ConvergentRectangle& set_sup_side(double s);

  /// True for the Hilbert cube (every side equal to 1).
  bool is_unit() const;

  /// Same side sequence (name is ignored).
  bool same_sides(const ConvergentRectangle& other) const;

  std::string describe() const;

 private:
  std::string name_;
  std::vector<double> prefix_;
  TailRule tail_;
  VolumeReport report_;
  std::optional<double> sup_side_;
};

/// Limit of prefix[0]·…·prefix[m−1]·∏_{i>m} factor(i), classified.
/// Throws Error{NonPositiveBound} on any non-positive or non-finite factor.
VolumeReport infinite_product(std::span<const double> prefix,
                              const std::function<double(std::size_t)>& factor,
                              const VolumeConfig& cfg = {});

VolumeReport volume(const ConvergentRectangle& rect, const VolumeConfig& cfg = {});

struct SeriesReport {
  std::optional<double> value;
  std::size_t n_terms = 0;
  double residual = 0.0;
};

/// Σ_{i≥first} term(i) on the same doubling schedule and stopping rules as
/// infinite_product; value is empty when max_terms is reached first.
SeriesReport infinite_series(std::size_t first, const std::function<double(std::size_t)>& term,
                             const VolumeConfig& cfg = {});

/// |∏_{k=n}^{m} a_k − 1|, evaluated in log space. Requires a non-degenerate
/// rectangle and m ≥ n > prefix length.
double tail_product_bound(const ConvergentRectangle& rect, std::size_t n, std::size_t m);

struct CatalogRectangle {
  std::string name;
  std::string description;
  ConvergentRectangle rect;
};

/// unit (Hilbert cube), wallis (a_i = 4i²/(4i²−1)), degenerate_half (a_i = 1/2).
std::vector<CatalogRectangle> builtin_catalog();

std::optional<ConvergentRectangle> catalog_rectangle(std::string_view name);

/// Accepts a catalog name or "[prefix: a1, a2, ...;] tail: <expr in i>".
ConvergentRectangle parse_rectangle(std::string_view spec, const VolumeConfig& cfg = {});

}  // namespace hq
