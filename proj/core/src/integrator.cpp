#include "hq/integrator.hpp"

#include <algorithm>
#include <cmath>

#include "hq/detail/summation.hpp"
#include "hq/error.hpp"

namespace hq {

std::string_view to_string(Engine e) noexcept {
  switch (e) {
    case Engine::Auto: return "auto";
    case Engine::Analytic: return "analytic";
    case Engine::TensorQuad: return "tensor_quad";
    case Engine::MonteCarlo: return "monte_carlo";
  }
  return "auto";
}

std::string_view to_string(Status s) noexcept {
  switch (s) {
    case Status::Converged: return "converged";
    case Status::BudgetExhausted: return "budget_exhausted";
    case Status::DegenerateZero: return "degenerate_zero";
  }
  return "budget_exhausted";
}

std::optional<Engine> parse_engine(std::string_view name) {
  if (name == "auto") return Engine::Auto;
  if (name == "analytic") return Engine::Analytic;
  if (name == "quad" || name == "tensor_quad") return Engine::TensorQuad;
  if (name == "mc" || name == "monte_carlo") return Engine::MonteCarlo;
  return std::nullopt;
}

std::vector<std::size_t> dimension_ladder(std::size_t max_dims) {
  if (max_dims == 0) throw Error(ErrorCode::InvalidArgument, "max_dims must be at least 1");
  std::vector<std::size_t> out;
  for (std::size_t n = 1; n <= max_dims; n *= 2) {
    out.push_back(n);
    if (n > max_dims / 2) break;
  }
  if (out.back() != max_dims) out.push_back(max_dims);
  return out;
}

namespace {

// ---------------------------------------------------------------------------
// One-dimensional pieces

// ∫_0^a g with Gauss-Legendre, escalating to adaptive quadrature when two
// orders disagree.
double integrate_1d(const std::function<double(double)>& g, double a) {
  auto gl = [&](std::size_t order) {
    const auto& rule = quadrature::gauss_legendre(order);
    double s = 0.0;
    for (std::size_t j = 0; j < order; ++j) s += rule.weights[j] * g(rule.nodes[j] * a);
    return s * a;
  };
  const double v16 = gl(16);
  const double v24 = gl(24);
  if (std::abs(v16 - v24) <= 1e-14 * std::max(1.0, std::abs(v24))) return v24;
  return quadrature::adaptive_1d(g, 0.0, a, 1e-13);
}

double separable_piece(const SeparableSum& s, std::size_t i, double a) {
  if (s.primitive) return s.primitive(i, a);
  return integrate_1d([&](double x) { return s.term(i, x); }, a);
}

// m_k(i) = ∫_0^a φ_i(x)^k dx.
double moment(const ProductForm& p, std::size_t k, std::size_t i, double a) {
  if (k == 0) return a;
  if (p.exponent) {
    const double e = p.exponent(i) * static_cast<double>(k) + 1.0;
    if (!(e > 0.0)) {
      throw Error(ErrorCode::UnsupportedCase, "moment of x^p with p <= -1 diverges");
    }
    return std::pow(a, e) / e;
  }
  return integrate_1d([&](double x) { return std::pow(p.phi(i, x), static_cast<double>(k)); }, a);
}

// Sums Σ c_k T_k over the nonzero coefficients until the terms are negligible.
template <typename TermFn>
double sum_psi(const PowerSeries& psi, double rel_tol, const TermFn& term_for,
               double* last_term = nullptr) {
  constexpr std::size_t kMaxK = 20000;
  detail::CompensatedSum sum;
  double prev = INFINITY;
  int growing = 0;
  int small = 0;
  const std::size_t kmax = psi.degree() ? *psi.degree() + 1 : kMaxK;
  for (std::size_t k = 0; k < kmax; ++k) {
    const double c = psi[k];
    if (c == 0.0) continue;
    const double t = c * term_for(k);
    if (!std::isfinite(t)) {
      throw Error(ErrorCode::SeriesDivergence, "term " + std::to_string(k) + " is not finite");
    }
    sum.add(t);
    growing = std::abs(t) > std::abs(prev) ? growing + 1 : 0;
    if (growing >= 5) {
      throw Error(ErrorCode::SeriesDivergence,
                  "series terms grew for 5 consecutive k (last k = " + std::to_string(k) + ")");
    }
    prev = t;
    small = std::abs(t) < rel_tol * std::abs(sum.value()) || t == 0.0 ? small + 1 : 0;
    if (small >= 2) {
      if (last_term) *last_term = std::abs(t);
      return sum.value();
    }
  }
  if (kmax < kMaxK) {
    if (last_term) *last_term = 0.0;
    return sum.value();
  }
  throw Error(ErrorCode::BudgetExhausted, "power series did not settle within 20000 terms");
}

// ---------------------------------------------------------------------------
// Exact level-n integrals of analytic forms

double analytic_level(const AnalyticForm& form, std::span<const double> sides) {
  const std::size_t n = sides.size();
  double volume = 1.0;
  for (double a : sides) volume *= a;
  detail::CompensatedSum total;
  total.add(form.constant * volume);
  for (const auto& [w, comp] : form.terms) {
    if (const auto* s = std::get_if<SeparableSum>(&comp->form)) {
      const std::size_t hi = s->last ? std::min(*s->last, n) : n;
      detail::CompensatedSum acc;
      for (std::size_t i = s->first; i <= hi; ++i) {
        acc.add(separable_piece(*s, i, sides[i - 1]) / sides[i - 1]);
      }
      total.add(w * volume * acc.value());
    } else {
      const auto& p = std::get<ProductForm>(comp->form);
      const std::size_t hi = p.last ? std::min(*p.last, n) : n;
      const double v = sum_psi(p.psi, 1e-17, [&](std::size_t k) {
        double q = 1.0;
        for (std::size_t i = p.first; i <= hi; ++i) q *= moment(p, k, i, sides[i - 1]) / sides[i - 1];
        return q;
      });
      total.add(w * volume * v);
    }
  }
  return total.value();
}

struct LimitValue {
  double value = 0.0;
  double residual = 0.0;
  std::size_t terms = 0;
};

// ∏ over all coordinates of the k-th moment product: a_i for coordinates
// outside the product, m_k(i) inside it.
VolumeReport moment_product(const ProductForm& p, std::size_t k, const ConvergentRectangle& rect,
                            const VolumeConfig& vcfg) {
  if (p.last) {
    VolumeReport r;
    const double vol = *rect.classification().value;
    double q = 1.0;
    for (std::size_t i = p.first; i <= *p.last; ++i) {
      const double a = rect.side(i);
      q *= moment(p, k, i, a) / a;
    }
    r.classification = VolumeClass::NonDegenerate;
    r.value = vol * q;
    r.n_terms = *p.last;
    r.analytic = true;
    return r;
  }
  std::vector<double> prefix;
  for (std::size_t i = 1; i < p.first; ++i) prefix.push_back(rect.side(i));
  try {
    return infinite_product(prefix, [&](std::size_t i) { return moment(p, k, i, rect.side(i)); },
                            vcfg);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::NonPositiveBound) {
      throw Error(ErrorCode::UnsupportedCase,
                  "moment products need positive factors; " + std::string(e.what()));
    }
    throw;
  }
}

LimitValue product_limit(const ProductForm& p, const ConvergentRectangle& rect,
                         const ConvergenceConfig& cfg) {
  LimitValue out;
  double product_residual = 0.0;
  double last = 0.0;
  const double value = sum_psi(
      p.psi, cfg.series.tol,
      [&](std::size_t k) {
        const VolumeReport r = moment_product(p, k, rect, cfg.series);
        if (!r.value) {
          throw Error(ErrorCode::BudgetExhausted,
                      "moment product for k = " + std::to_string(k) + " did not converge");
        }
        out.terms = std::max(out.terms, r.n_terms);
        product_residual += std::abs(p.psi[k]) * r.residual;
        return *r.value;
      },
      &last);
  out.value = value;
  out.residual = product_residual + last;
  return out;
}

LimitValue analytic_limit(const AnalyticForm& form, const ConvergentRectangle& rect,
                          const ConvergenceConfig& cfg) {
  const double vol = *rect.classification().value;
  LimitValue out;
  detail::CompensatedSum total;
  total.add(form.constant * vol);
  for (const auto& [w, comp] : form.terms) {
    if (const auto* s = std::get_if<SeparableSum>(&comp->form)) {
      auto piece = [&](std::size_t i) {
        const double a = rect.side(i);
        return separable_piece(*s, i, a) / a;
      };
      double sum = 0.0;
      if (s->last) {
        detail::CompensatedSum acc;
        for (std::size_t i = s->first; i <= *s->last; ++i) acc.add(piece(i));
        sum = acc.value();
      } else {
        const SeriesReport r = infinite_series(s->first, piece, cfg.series);
        if (!r.value) {
          throw Error(ErrorCode::BudgetExhausted, "separable sum did not converge");
        }
        sum = *r.value;
        out.residual += std::abs(w) * vol * r.residual;
        out.terms = std::max(out.terms, r.n_terms);
      }
      total.add(w * vol * sum);
    } else {
      const LimitValue v = product_limit(std::get<ProductForm>(comp->form), rect, cfg);
      total.add(w * v.value);
      out.residual += std::abs(w) * v.residual;
      out.terms = std::max(out.terms, v.terms);
    }
  }
  out.value = total.value();
  return out;
}

// ---------------------------------------------------------------------------
// Numeric engines

std::uint64_t rung_seed(std::uint64_t seed, std::size_t n) {
  return seed ^ (static_cast<std::uint64_t>(n) * 0x9E3779B97F4A7C15ull);
}

bool tensor_feasible(std::size_t n, const ConvergenceConfig& cfg) {
  const double points = std::pow(static_cast<double>(cfg.quad_order), static_cast<double>(n));
  return points <= static_cast<double>(cfg.max_tensor_points);
}

quadrature::Estimate numeric_level(const CoordinateFunction& f, std::span<const double> sides,
                                   Engine engine, const ConvergenceConfig& cfg) {
  auto point_fn = [&f](std::span<const double> x) { return f(x); };
  if (engine == Engine::TensorQuad) {
    return quadrature::tensor_product(point_fn, sides, cfg.quad_order, cfg.workers);
  }
  return quadrature::monte_carlo(point_fn, sides, cfg.mc_samples, rung_seed(cfg.seed, sides.size()),
                                 cfg.workers);
}

Engine numeric_choice(std::size_t n, const ConvergenceConfig& cfg) {
  return n <= 8 && tensor_feasible(n, cfg) ? Engine::TensorQuad : Engine::MonteCarlo;
}

bool analytic_recoverable(const Error& e) {
  return e.code() == ErrorCode::SeriesDivergence || e.code() == ErrorCode::UnsupportedCase ||
         e.code() == ErrorCode::BudgetExhausted;
}

void require_domain(const DeltaSequence& seq, const ConvergentRectangle& rect) {
  if (!seq.domain().same_sides(rect)) {
    throw Error(ErrorCode::DomainMismatch, "sequence is defined on " + seq.domain().name() +
                                               ", not on " + rect.name());
  }
}

}  // namespace

quadrature::Estimate integrate_level(const CoordinateFunction& f, const ConvergentRectangle& rect,
                                     std::size_t n, Engine engine, const ConvergenceConfig& cfg) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "level must be at least 1");
  const auto sides = rect.sides(n);
  if (engine == Engine::Auto) engine = f.analytic() ? Engine::Analytic : numeric_choice(n, cfg);
  if (engine == Engine::Analytic) {
    if (!f.analytic()) {
      throw Error(ErrorCode::UnsupportedCase, "no analytic structure for " + f.description());
    }
    return {analytic_level(*f.analytic(), sides), 0.0, n};
  }
  return numeric_level(f, sides, engine, cfg);
}

IntegralResult integrate(const DeltaSequence& seq, const ConvergentRectangle& rect,
                         const ConvergenceConfig& cfg) {
  if (!(cfg.tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tol must be positive");
  if (cfg.quad_order < 2) throw Error(ErrorCode::InvalidArgument, "quad_order must be at least 2");
  require_domain(seq, rect);

  const VolumeClass cls = rect.volume_class();
  if (cls == VolumeClass::Divergent) {
    throw Error(ErrorCode::DivergentRectangle, rect.name() + " has infinite volume");
  }
  if (cls == VolumeClass::Unknown) {
    throw Error(ErrorCode::BudgetExhausted, "the volume of " + rect.name() + " is unclassified");
  }
  if (!rect.is_unit() && !seq.limit().bound() && !cfg.force) {
    throw Error(ErrorCode::UnsupportedCase,
                "no bound is known for " + seq.limit().description() +
                    " and integrals of unbounded functions exist only on the Hilbert cube "
                    "(declare a bound or force)");
  }

  IntegralResult result;
  std::vector<std::size_t> ladder = dimension_ladder(cfg.max_dims);
  const bool degenerate = cls == VolumeClass::Degenerate;
  if (degenerate) {
    // The limit is 0; the trace documents how fast the levels vanish.
    std::erase_if(ladder, [&](std::size_t n) { return n > std::min<std::size_t>(32, cfg.max_numeric_dims); });
  }

  bool analytic_ok = cfg.engine == Engine::Auto || cfg.engine == Engine::Analytic;
  int raw_streak = 0;
  int accel_streak = 0;
  std::vector<double> richardson;
  for (std::size_t idx = 0; idx < ladder.size(); ++idx) {
    const std::size_t n = ladder[idx];
    const CoordinateFunction fn = seq.term(n);
    const auto sides = rect.sides(n);

    std::optional<TracePoint> point;
    if (analytic_ok && fn.analytic()) {
      try {
        point = TracePoint{n, analytic_level(*fn.analytic(), sides), 0.0, Engine::Analytic};
      } catch (const Error& e) {
        if (cfg.engine == Engine::Analytic || !analytic_recoverable(e)) throw;
        analytic_ok = false;
      }
    } else if (cfg.engine == Engine::Analytic) {
      throw Error(ErrorCode::UnsupportedCase,
                  "no analytic structure for " + fn.description() + " at level " +
                      std::to_string(n));
    }
    if (!point) {
      if (n > cfg.max_numeric_dims) break;
      Engine e = cfg.engine == Engine::Auto ? numeric_choice(n, cfg) : cfg.engine;
      if (e == Engine::Analytic) e = numeric_choice(n, cfg);
      if (e == Engine::TensorQuad && !tensor_feasible(n, cfg)) break;
      const auto est = numeric_level(fn, sides, e, cfg);
      point = TracePoint{n, est.value, est.std_error, e};
    }
    result.trace.push_back(*point);
    result.n_dims_used = n;
    result.engine = point->engine;
    result.value = point->value;
    result.error_estimate = point->std_error;
    if (degenerate || result.trace.size() < 2) continue;

    const TracePoint& cur = result.trace.back();
    const TracePoint& prev = result.trace[result.trace.size() - 2];
    const double delta = std::abs(cur.value - prev.value);
    double threshold = cfg.tol * std::max(1.0, std::abs(cur.value));
    const bool noisy = cur.std_error > 0.0 || prev.std_error > 0.0;
    if (noisy) {
      threshold = std::max(threshold, 3.0 * std::hypot(cur.std_error, prev.std_error));
    }
    raw_streak = delta < threshold ? raw_streak + 1 : 0;
    const bool deep_enough = cur.n >= std::min(cfg.min_dims, cfg.max_dims);

    // Richardson extrapolation for an O(1/n) truncation error on exact
    // doublings of deterministic levels.
    const bool doubling = cur.n == 2 * prev.n;
    if (!noisy && doubling) {
      richardson.push_back(2.0 * cur.value - prev.value);
    } else {
      richardson.clear();
    }
    bool accel_ok = false;
    double accel_delta = INFINITY;
    if (richardson.size() >= 2 && result.trace.size() >= 3) {
      const double prev_delta =
          std::abs(prev.value - result.trace[result.trace.size() - 3].value);
      accel_delta = std::abs(richardson.back() - richardson[richardson.size() - 2]);
      accel_ok = delta <= prev_delta && accel_delta < threshold;
    }
    accel_streak = accel_ok ? accel_streak + 1 : 0;

    if (deep_enough && raw_streak >= 2) {
      result.status = Status::Converged;
      result.rule = "raw";
      result.error_estimate = noisy ? cur.std_error : delta;
      break;
    }
    if (deep_enough && accel_streak >= 2) {
      result.status = Status::Converged;
      result.rule = "extrapolated";
      const std::size_t r = richardson.size();
      result.value = r >= 2 ? (4.0 * richardson[r - 1] - richardson[r - 2]) / 3.0 : richardson.back();
      result.error_estimate = accel_delta;
      break;
    }
    result.error_estimate = noisy ? cur.std_error : delta;
  }

  if (degenerate) {
    result.value = 0.0;
    result.status = Status::DegenerateZero;
    result.rule.clear();
    return result;
  }

  // Regular sequences with structure have their limit in closed form.
  const auto& form = seq.limit().analytic();
  if (result.status == Status::Converged && seq.is_regular() && form && analytic_ok &&
      result.engine == Engine::Analytic) {
    try {
      const LimitValue lim = analytic_limit(*form, rect, cfg);
      result.value = lim.value;
      result.error_estimate = std::max(lim.residual, 1e-16 * std::abs(lim.value));
      result.rule = "series";
    } catch (const Error& e) {
      if (!analytic_recoverable(e)) throw;
    }
  }
  return result;
}

IntegralResult integrate(const CoordinateFunction& f, const ConvergenceConfig& cfg) {
  return integrate(DeltaSequence::regular(f), f.domain(), cfg);
}

ProductForm product_form(PowerSeries psi, std::string_view phi, std::size_t first) {
  const std::vector<std::string> index{"n"};
  const auto body = expr::parse(phi, index);
  if (!expr::references_coordinates(*body)) {
    // φ_n constant in x, e.g. "1".
    ProductForm p;
    p.psi = std::move(psi);
    p.phi = [body](std::size_t n, double) {
      return expr::eval(*body, {}, {static_cast<double>(n)});
    };
    p.first = first;
    return p;
  }
  const std::string src =
      "prod(n, " + std::to_string(first) + ", inf, " + std::string(phi) + ")";
  const auto form = recognize_structure(expr::parse(src));
  if (!form || form->terms.size() != 1 || form->constant != 0.0) {
    throw Error(ErrorCode::InvalidArgument,
                "'" + std::string(phi) + "' is not a function of x[n] alone");
  }
  ProductForm p = std::get<ProductForm>(form->terms.front().second->form);
  p.psi = std::move(psi);
  return p;
}

IntegralResult integrate_product_form(const ProductForm& form, const ConvergentRectangle& rect,
                                      const ConvergenceConfig& cfg) {
  if (!(cfg.tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tol must be positive");
  IntegralResult result;
  result.engine = Engine::Analytic;
  const VolumeClass cls = rect.volume_class();
  if (cls == VolumeClass::Degenerate) {
    result.status = Status::DegenerateZero;
    return result;
  }
  if (cls != VolumeClass::NonDegenerate) {
    throw Error(ErrorCode::DivergentRectangle, rect.name() + " has no finite nonzero volume");
  }
  AnalyticForm af = AnalyticForm::product(form, "product form");
  for (std::size_t n : dimension_ladder(64)) {
    result.trace.push_back({n, analytic_level(af, rect.sides(n)), 0.0, Engine::Analytic});
  }
  const LimitValue lim = product_limit(form, rect, cfg);
  result.value = lim.value;
  result.error_estimate = lim.residual;
  result.n_dims_used = lim.terms;
  result.status = Status::Converged;
  result.rule = "series";
  return result;
}

// ---------------------------------------------------------------------------
// Unit primitive

namespace {

// Form of g^r: coordinates 1..r integrated over [0, 1], the rest shifted down
// by r.
AnalyticForm shift_form(const AnalyticForm& form, std::size_t r) {
  AnalyticForm out;
  out.constant = form.constant;
  for (const auto& [w, comp] : form.terms) {
    if (const auto* s = std::get_if<SeparableSum>(&comp->form)) {
      const std::size_t hi = s->last ? std::min(*s->last, r) : r;
      for (std::size_t i = s->first; i <= hi; ++i) out.constant += w * separable_piece(*s, i, 1.0);
      if (s->last && *s->last <= r) continue;
      SeparableSum t;
      t.first = std::max(s->first, r + 1) - r;
      if (s->last) t.last = *s->last - r;
      t.term = [term = s->term, r](std::size_t j, double v) { return term(j + r, v); };
      if (s->primitive) {
        t.primitive = [prim = s->primitive, r](std::size_t j, double a) { return prim(j + r, a); };
      }
      AnalyticForm piece = AnalyticForm::separable(std::move(t), comp->label + " shifted by " +
                                                                     std::to_string(r));
      out = AnalyticForm::add(out, piece.scaled(w));
    } else {
      const auto& p = std::get<ProductForm>(comp->form);
      const std::size_t hi = p.last ? std::min(*p.last, r) : r;
      ProductForm q;
      const PowerSeries psi = p.psi;
      const ProductForm base = p;
      q.psi = PowerSeries(
          [psi, base, hi](std::size_t k, const PowerSeries&) {
            const double c = psi[k];
            if (c == 0.0) return 0.0;
            double m = 1.0;
            for (std::size_t i = base.first; i <= hi; ++i) m *= moment(base, k, i, 1.0);
            return c * m;
          },
          psi.name() + " integrated over " + std::to_string(r) + " coordinates");
      q.first = std::max(p.first, r + 1) - r;
      if (p.last) q.last = *p.last >= r ? *p.last - r : 0;
      q.phi = [phi = p.phi, r](std::size_t j, double v) { return phi(j + r, v); };
      if (p.exponent) q.exponent = [ex = p.exponent, r](std::size_t j) { return ex(j + r); };
      AnalyticForm piece = AnalyticForm::product(std::move(q), comp->label + " shifted by " +
                                                                   std::to_string(r));
      out = AnalyticForm::add(out, piece.scaled(w));
    }
  }
  return out;
}

}  // namespace

CoordinateFunction partial_integrate(const CoordinateFunction& f, std::size_t r,
                                     const ConvergenceConfig& cfg) {
  if (r == 0) throw Error(ErrorCode::InvalidArgument, "r must be at least 1");
  if (!f.domain().is_unit()) {
    throw Error(ErrorCode::DomainMismatch, "unit primitives are taken on the Hilbert cube");
  }
  const std::string desc = "g^" + std::to_string(r) + "[" + f.description() + "]";
  if (const auto& form = f.analytic()) {
    AnalyticForm shifted = shift_form(*form, r);
    CoordinateFunction g([shifted](std::span<const double> t) { return shifted.evaluate(t); },
                         f.domain_ptr(), desc);
    return g.with_analytic(shifted).with_range(f.range()).with_derived_from(f.description());
  }
  if (r > 8) {
    throw Error(ErrorCode::DimensionTooLarge,
                "partial integration over " + std::to_string(r) +
                    " coordinates needs analytic structure");
  }
  const std::size_t order = cfg.quad_order;
  CoordinateFunction g(
      [f, r, order](std::span<const double> t) {
        std::vector<double> ones(r, 1.0);
        std::vector<double> x(r + t.size());
        std::copy(t.begin(), t.end(), x.begin() + static_cast<std::ptrdiff_t>(r));
        return quadrature::tensor_product(
                   [&](std::span<const double> head) {
                     std::copy(head.begin(), head.end(), x.begin());
                     return f(x);
                   },
                   ones, order, 1)
            .value;
      },
      f.domain_ptr(), desc);
  return g.with_range(f.range()).with_derived_from(f.description());
}

PrimitiveReport check_unit_primitive(const CoordinateFunction& f, std::size_t r,
                                     const ConvergenceConfig& cfg) {
  PrimitiveReport out;
  out.lhs = integrate(f, cfg);
  ConvergenceConfig rhs_cfg = cfg;
  if (cfg.max_dims > r + 1) rhs_cfg.max_dims = cfg.max_dims - r;
  out.rhs = integrate(partial_integrate(f, r, cfg), rhs_cfg);
  out.gap = std::abs(out.lhs.value - out.rhs.value);
  return out;
}

BoundReport check_bound(const CoordinateFunction& f, double M, const ConvergentRectangle& rect,
                        const ConvergenceConfig& cfg) {
  BoundReport out;
  ConvergenceConfig c = cfg;
  c.force = true;  // M is the declared bound
  out.integral = integrate(DeltaSequence::regular(f), rect, c);
  const auto& vol = rect.classification().value;
  out.bound = M * vol.value_or(0.0);
  out.holds = out.integral.value <= out.bound + 10.0 * cfg.tol;
  return out;
}

double check_uniqueness(const DeltaSequence& a, const DeltaSequence& b,
                        const ConvergentRectangle& rect, const ConvergenceConfig& cfg) {
  return std::abs(integrate(a, rect, cfg).value - integrate(b, rect, cfg).value);
}

}  // namespace hq
