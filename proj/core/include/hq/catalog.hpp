#pragma once

// Built-in integrands: wallis-sum, sec9-ex1, sec9-ex2 and const:<c>.

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hq/funcspace.hpp"

namespace hq {

struct CatalogIntegrand {
  std::string name;
  /// The integrand in the expression language.
  std::string formula;
  std::string description;
  /// Where the closed-form value comes from.
  std::string reference;
  /// Rectangle the integrand is usually integrated over.
  std::string default_rect;
};

std::vector<CatalogIntegrand> catalog_integrands();

/// Catalog integrand on `rect`; accepts the names above with or without a
/// "catalog:" prefix. Returns nullopt for unknown names.
std::optional<CoordinateFunction> catalog_function(
    std::string_view name, std::shared_ptr<const ConvergentRectangle> rect);

/// Catalog name (optionally "catalog:"-prefixed) or an expression.
CoordinateFunction resolve_integrand(std::string_view name,
                                     std::shared_ptr<const ConvergentRectangle> rect);
/// Rectangle a catalog integrand is usually integrated over; "unit" otherwise.
std::string default_rectangle_for(std::string_view name);

/// Σ x_i/i².
CoordinateFunction wallis_sum(std::shared_ptr<const ConvergentRectangle> rect);
/// f_n = f + 2^{−n}: a second δ-sequence of f with the same integral.
DeltaSequence perturbed_sequence(const CoordinateFunction& f);
/// f_n = f for odd n and f + 1 for even n; not δ-Cauchy.
DeltaSequence alternating_sequence(const CoordinateFunction& f);

/// 1/(2 − ∏ x_n^{1/n²}).
CoordinateFunction sec9_ex1(std::shared_ptr<const ConvergentRectangle> rect);
/// cosh(∏ x_n^{1/2^n}).
CoordinateFunction sec9_ex2(std::shared_ptr<const ConvergentRectangle> rect);

std::shared_ptr<const ConvergentRectangle> shared_rectangle(std::string_view name);

}  // namespace hq
