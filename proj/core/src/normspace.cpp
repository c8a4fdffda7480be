#include "hq/normspace.hpp"

#include <cmath>
#include <sstream>

#include "hq/error.hpp"

namespace hq {

namespace {

void require_unit(const CoordinateFunction& f) {
  if (!f.domain().is_unit()) {
    throw Error(ErrorCode::DomainMismatch, "S^p norms are defined on the Hilbert cube");
  }
}

std::string num(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

// Three reported standard errors when the value is a Monte Carlo estimate.
double noise(const NormResult& r) {
  return r.integral.engine == Engine::MonteCarlo ? 3.0 * r.integral.error_estimate : 0.0;
}

}  // namespace

CoordinateFunction abs_power(const CoordinateFunction& f, double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw Error(ErrorCode::InvalidArgument, "p must be >= 1");
  CoordinateFunction a = abs(f);
  if (p == 1.0) return a;
  const auto M = f.bound();
  if (!M) {
    throw Error(ErrorCode::UnsupportedCase,
                "|f|^p needs a bounded f; no bound is known for " + f.description());
  }
  LipschitzMap g;
  g.fn = [p](double t) { return std::pow(t, p); };
  g.modulus = p * std::pow(*M, p - 1.0);
  g.name = "pow_" + num(p);
  g.valid_on = Interval{0.0, *M};
  CoordinateFunction out = compose(g, a);

  // ψ^p keeps the product structure when |f| is a single product form.
  std::optional<AnalyticForm> form;
  if (const auto& af = a.analytic()) {
    if (af->is_constant()) {
      form = AnalyticForm{};
      form->constant = std::pow(std::abs(af->constant), p);
    } else if (af->constant == 0.0 && af->terms.size() == 1 && af->terms.front().first > 0.0) {
      const auto& [w, comp] = af->terms.front();
      if (const auto* prod = std::get_if<ProductForm>(&comp->form)) {
        try {
          ProductForm q = *prod;
          q.psi = prod->psi.scaled(w).power(p);
          form = AnalyticForm::product(std::move(q), "(" + comp->label + ")^" + num(p));
        } catch (const Error&) {
          form.reset();
        }
      }
    }
  }
  return out.with_analytic(form);
}

NormResult norm(const CoordinateFunction& f, double p, const ConvergenceConfig& cfg) {
  require_unit(f);
  NormResult out;
  out.p = p;
  out.integral = integrate(abs_power(f, p), cfg);
  out.value = std::pow(std::max(0.0, out.integral.value), 1.0 / p);
  return out;
}

Equivalence equivalent(const CoordinateFunction& f, const CoordinateFunction& g,
                       const ConvergenceConfig& cfg) {
  Equivalence out;
  const bool swap = g.description() < f.description();
  const NormResult r = swap ? norm(g + (-1.0) * f, 1.0, cfg) : norm(f + (-1.0) * g, 1.0, cfg);
  out.distance = r.value;
  out.integral = r.integral;
  out.equivalent = out.distance <= cfg.tol;
  return out;
}

bool AxiomReport::passed() const {
  for (const auto& c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

AxiomReport check_norm_axioms(const std::vector<CoordinateFunction>& catalog,
                              const ConvergenceConfig& cfg) {
  AxiomReport report;
  const double slack = 10.0 * cfg.tol;
  std::vector<NormResult> norms;
  for (const auto& f : catalog) {
    const NormResult nf = norm(f, 1.0, cfg);
    norms.push_back(nf);
    report.checks.push_back(
        {"nonnegative: " + f.description(), nf.value >= 0.0, "||f|| = " + num(nf.value)});
    for (double k : {-2.0, -1.0, 0.0, 0.5, 3.0}) {
      const NormResult nk = norm(k * f, 1.0, cfg);
      const double expected = std::abs(k) * nf.value;
      const double allowed =
          slack * std::max(1.0, std::abs(k)) + noise(nk) + std::abs(k) * noise(nf);
      report.checks.push_back({"homogeneous k=" + num(k) + ": " + f.description(),
                               std::abs(nk.value - expected) <= allowed,
                               "||kf|| = " + num(nk.value) + ", |k| ||f|| = " + num(expected)});
    }
  }
  for (std::size_t i = 0; i < catalog.size(); ++i) {
    for (std::size_t j = i; j < catalog.size(); ++j) {
      const NormResult ns = norm(catalog[i] + catalog[j], 1.0, cfg);
      const double rhs = norms[i].value + norms[j].value;
      const double allowed = slack + noise(ns) + noise(norms[i]) + noise(norms[j]);
      report.checks.push_back(
          {"triangle: " + catalog[i].description() + " + " + catalog[j].description(),
           ns.value <= rhs + allowed,
           "||f+g|| = " + num(ns.value) + ", ||f|| + ||g|| = " + num(rhs)});
    }
  }
  return report;
}

}  // namespace hq
