#pragma once

// Executable property suites over a catalog of integrands.
//
// Every check is empirical: a pass means no violation was found with the
// configured tolerances and sample budget.

#include <optional>
#include <string>
#include <vector>

#include "hq/funcspace.hpp"
#include "hq/integrator.hpp"

namespace hq {

struct PropertyCheck {
  std::string suite;
  std::string property;
  std::string subject;
  bool passed = false;
  std::string detail;
  /// Set on failures: the values or sample point that contradict the property.
  std::optional<std::string> witness;
};

struct VerifyReport {
  std::vector<PropertyCheck> checks;
  std::vector<std::string> warnings;
  double seconds = 0.0;

  bool passed() const;
  std::size_t failures() const;
  void append(VerifyReport other);
};

/// Deliberate defects for exercising the harness itself.
enum class Fault { None, NegatedAbs };

std::vector<std::string> default_integrands();

struct VerifyOptions {
  ConvergenceConfig cfg = default_config();
  SampleBudget budget;
  /// Catalog names or expressions.
  std::vector<std::string> integrands = default_integrands();
  /// Overrides each integrand's default rectangle in the sampling suite.
  std::optional<std::string> rect;
  Fault fault = Fault::None;

  /// Integrator settings for property checks: 2^16 Monte Carlo samples per
  /// rung, the rest as ConvergenceConfig.
  static ConvergenceConfig default_config();
};

/// δ-Cauchy/δ-uniform agreement, hat/tilde consistency and the abs and
/// Lipschitz contraction properties.
VerifyReport verify_cauchy(const VerifyOptions& opts = {});
/// Norm axioms, equivalence relation, ∫|f| invariance under ~ and
/// p-monotonicity.
VerifyReport verify_norms(const VerifyOptions& opts = {});
/// Linearity, positivity, monotonicity, |∫f| ≤ ∫|f|, ∫f ≤ M·vol(R), the
/// degenerate-rectangle trace, analytic/Monte Carlo agreement at n = 12,
/// uniqueness and the unit primitive.
VerifyReport verify_integrals(const VerifyOptions& opts = {});
VerifyReport verify_all(const VerifyOptions& opts = {});

}  // namespace hq
