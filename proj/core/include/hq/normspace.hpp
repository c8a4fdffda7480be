#pragma once

// S^p norms on the Hilbert cube and the relation f ~ g ⇔ ∫_U |f − g| = 0.

#include <string>
#include <vector>

#include "hq/funcspace.hpp"
#include "hq/integrator.hpp"

namespace hq {

struct NormResult {
  double p = 1.0;
  double value = 0.0;
  IntegralResult integral;
};

/// (∫_U |f|^p)^{1/p}. For p > 1 the function needs a known bound M; |f|^p
/// is then built as t ↦ t^p on [0, M] composed with |f|.
NormResult norm(const CoordinateFunction& f, double p, const ConvergenceConfig& cfg = {});

/// |f|^p as a function on the Hilbert cube (see norm).
CoordinateFunction abs_power(const CoordinateFunction& f, double p);

struct Equivalence {
  bool equivalent = false;
  /// ||f − g||_1.
  double distance = 0.0;
  IntegralResult integral;
};

/// f ~ g when ||f − g||_1 ≤ tol. The pair is put in a canonical order first,
/// so the distance is symmetric bit for bit.
Equivalence equivalent(const CoordinateFunction& f, const CoordinateFunction& g,
                       const ConvergenceConfig& cfg = {});

struct AxiomCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct AxiomReport {
  std::vector<AxiomCheck> checks;
  bool passed() const;
};

/// Non-negativity, absolute homogeneity for k ∈ {−2, −1, 0, ½, 3} and the
/// triangle inequality over all pairs, within 10·tol (plus three standard
/// errors for Monte Carlo values).
AxiomReport check_norm_axioms(const std::vector<CoordinateFunction>& catalog,
                              const ConvergenceConfig& cfg = {});

}  // namespace hq
