#include "hq/funcspace.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "hq/error.hpp"
#include "hq/quadrature.hpp"

namespace hq {

namespace {

// Interval analysis of expressions with infinite aggregators is done on the
// truncations at these two levels; a range that still moves between them is
// treated as unknown.
constexpr std::size_t kRangeLevel = 1024;

std::optional<Interval> estimate_range(const expr::ExprPtr& ast, const ConvergentRectangle& rect) {
  try {
    const auto sides = rect.sides(kRangeLevel);
    const auto full = expr::bounds(*expr::truncate(ast, kRangeLevel), sides);
    if (!full || !std::isfinite(full->lo) || !std::isfinite(full->hi)) return std::nullopt;
    const auto half = expr::bounds(*expr::truncate(ast, kRangeLevel / 2),
                                   std::span<const double>(sides).first(kRangeLevel / 2));
    if (!half) return std::nullopt;
    const double scale = std::max({1.0, std::abs(full->lo), std::abs(full->hi)});
    if (std::abs(full->lo - half->lo) > 1e-2 * scale ||
        std::abs(full->hi - half->hi) > 1e-2 * scale) {
      return std::nullopt;
    }
    return full;
  } catch (const Error&) {
    return std::nullopt;
  }
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

// ---------------------------------------------------------------------------
// CoordinateFunction

CoordinateFunction::CoordinateFunction(Body body,
                                       std::shared_ptr<const ConvergentRectangle> domain,
                                       std::string description)
    : body_(std::move(body)), domain_(std::move(domain)), description_(std::move(description)) {
  if (!domain_) throw Error(ErrorCode::InvalidArgument, "a function needs a domain rectangle");
}

CoordinateFunction CoordinateFunction::constant(double c,
                                                std::shared_ptr<const ConvergentRectangle> domain) {
  CoordinateFunction f([c](std::span<const double>) { return c; }, std::move(domain), fmt(c));
  f.expression_ = expr::number(c);
  AnalyticForm form;
  form.constant = c;
  f.analytic_ = form;
  f.range_ = Interval{c, c};
  return f;
}

CoordinateFunction CoordinateFunction::from_expression(
    expr::ExprPtr ast, std::shared_ptr<const ConvergentRectangle> domain) {
  CoordinateFunction f(
      [ast](std::span<const double> x) { return expr::eval_truncated(*ast, x); }, domain,
      expr::to_string(*ast));
  f.expression_ = ast;
  f.analytic_ = recognize_structure(ast);
  f.range_ = estimate_range(ast, *domain);
  return f;
}

CoordinateFunction CoordinateFunction::from_expression(
    std::string_view src, std::shared_ptr<const ConvergentRectangle> domain) {
  return from_expression(expr::parse(src), std::move(domain));
}

std::optional<double> CoordinateFunction::bound() const {
  if (!range_) return std::nullopt;
  return std::max(std::abs(range_->lo), std::abs(range_->hi));
}

CoordinateFunction CoordinateFunction::with_analytic(std::optional<AnalyticForm> form) const {
  CoordinateFunction f = *this;
  f.analytic_ = std::move(form);
  return f;
}

CoordinateFunction CoordinateFunction::with_range(std::optional<Interval> range) const {
  CoordinateFunction f = *this;
  f.range_ = range;
  return f;
}

CoordinateFunction CoordinateFunction::with_description(std::string description) const {
  CoordinateFunction f = *this;
  f.description_ = std::move(description);
  return f;
}

CoordinateFunction CoordinateFunction::with_derived_from(std::string origin) const {
  CoordinateFunction f = *this;
  f.derived_from_ = std::move(origin);
  return f;
}

CoordinateFunction operator+(const CoordinateFunction& a, const CoordinateFunction& b) {
  if (!a.domain().same_sides(b.domain())) {
    throw Error(ErrorCode::DomainMismatch,
                "cannot add functions on " + a.domain().name() + " and " + b.domain().name());
  }
  CoordinateFunction out(
      [fa = a, fb = b](std::span<const double> x) { return fa(x) + fb(x); }, a.domain_ptr(),
      "(" + a.description() + ") + (" + b.description() + ")");
  if (a.analytic() && b.analytic()) {
    out = out.with_analytic(AnalyticForm::add(*a.analytic(), *b.analytic()));
  }
  if (a.range() && b.range()) {
    out = out.with_range(Interval{a.range()->lo + b.range()->lo, a.range()->hi + b.range()->hi});
  }
  return out;
}

CoordinateFunction operator*(double k, const CoordinateFunction& f) {
  CoordinateFunction out([k, f](std::span<const double> x) { return k * f(x); }, f.domain_ptr(),
                         fmt(k) + "*(" + f.description() + ")");
  if (f.analytic()) out = out.with_analytic(f.analytic()->scaled(k));
  if (f.range()) {
    const double lo = k * f.range()->lo;
    const double hi = k * f.range()->hi;
    out = out.with_range(Interval{std::min(lo, hi), std::max(lo, hi)});
  }
  return out;
}

CoordinateFunction abs(const CoordinateFunction& f) {
  CoordinateFunction out([f](std::span<const double> x) { return std::abs(f(x)); },
                         f.domain_ptr(), "abs(" + f.description() + ")");
  if (f.analytic() && f.analytic()->is_constant()) {
    AnalyticForm c;
    c.constant = std::abs(f.analytic()->constant);
    return out.with_analytic(c).with_range(Interval{c.constant, c.constant});
  }
  if (const auto& r = f.range()) {
    if (r->lo >= 0.0) {
      out = out.with_range(*r).with_analytic(f.analytic());
    } else if (r->hi <= 0.0) {
      out = out.with_range(Interval{-r->hi, -r->lo});
      if (f.analytic()) out = out.with_analytic(f.analytic()->scaled(-1.0));
    } else {
      out = out.with_range(Interval{0.0, std::max(-r->lo, r->hi)});
    }
  }
  return out;
}

CoordinateFunction compose(const LipschitzMap& g, const CoordinateFunction& f) {
  CoordinateFunction out([fn = g.fn, f](std::span<const double> x) { return fn(f(x)); },
                         f.domain_ptr(), g.name + "(" + f.description() + ")");
  if (const auto& form = f.analytic()) {
    if (form->is_constant()) {
      AnalyticForm c;
      c.constant = g.fn(form->constant);
      out = out.with_analytic(c);
    } else if (g.series && form->constant == 0.0 && form->terms.size() == 1) {
      const auto& [w, comp] = form->terms.front();
      if (const auto* p = std::get_if<ProductForm>(&comp->form); p && p->psi.is_identity()) {
        ProductForm q = *p;
        q.psi = g.series->dilated(w);
        out = out.with_analytic(AnalyticForm::product(std::move(q), g.name + "(" + comp->label + ")"));
      }
    }
  }
  if (const auto& r = f.range()) {
    // Range of g over r: grid extremes widened by the Lipschitz slack.
    constexpr int kGrid = 1024;
    double lo = g.fn(r->lo);
    double hi = lo;
    for (int j = 1; j <= kGrid; ++j) {
      const double v = g.fn(r->lo + (r->hi - r->lo) * j / kGrid);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    const double slack = g.modulus * (r->hi - r->lo) / (2.0 * kGrid);
    out = out.with_range(Interval{lo - slack, hi + slack});
  }
  return out;
}

// ---------------------------------------------------------------------------
// DeltaSequence and truncations

DeltaSequence DeltaSequence::regular(CoordinateFunction f) {
  DeltaSequence s([f](std::size_t) { return f; }, f, "regular(" + f.description() + ")");
  s.regular_ = true;
  return s;
}

DeltaSequence::DeltaSequence(Generator generator, CoordinateFunction limit, std::string description)
    : generator_(std::move(generator)),
      limit_(std::move(limit)),
      description_(std::move(description)) {}

CoordinateFunction DeltaSequence::term(std::size_t n) const {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "sequence terms start at n = 1");
  if (regular_) return limit_;
  return generator_(n);
}

CoordinateFunction tilde(const DeltaSequence& seq, std::size_t n) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "truncation level must be at least 1");
  CoordinateFunction fn = seq.term(n);
  CoordinateFunction out(
      [fn, n](std::span<const double> x) {
        if (x.size() == n) return fn(x);
        std::vector<double> y(n, 0.0);
        std::copy_n(x.begin(), std::min(n, x.size()), y.begin());
        return fn(y);
      },
      fn.domain_ptr(), "tilde_" + std::to_string(n) + "(" + fn.description() + ")");
  if (fn.analytic()) out = out.with_analytic(fn.analytic()->truncated(n));
  return out.with_range(fn.range());
}

double FiniteFunction::operator()(std::span<const double> x) const {
  if (x.size() != dim_) {
    throw Error(ErrorCode::OutOfRange, "expected a point of dimension " + std::to_string(dim_) +
                                           ", got " + std::to_string(x.size()));
  }
  return body_(x);
}

FiniteFunction hat(const DeltaSequence& seq, std::size_t n) {
  if (n == 0) throw Error(ErrorCode::InvalidArgument, "truncation level must be at least 1");
  CoordinateFunction fn = seq.term(n);
  return FiniteFunction(n, [fn](std::span<const double> x) { return fn(x); });
}

DeltaSequence combine_sum(const DeltaSequence& a, const DeltaSequence& b) {
  CoordinateFunction limit = a.limit() + b.limit();
  const std::string desc = "(" + a.description() + ") + (" + b.description() + ")";
  if (a.is_regular() && b.is_regular()) return DeltaSequence::regular(limit);
  return DeltaSequence([a, b](std::size_t n) { return a.term(n) + b.term(n); }, limit, desc);
}

DeltaSequence combine_scale(double k, const DeltaSequence& a) {
  CoordinateFunction limit = k * a.limit();
  if (a.is_regular()) return DeltaSequence::regular(limit);
  return DeltaSequence([k, a](std::size_t n) { return k * a.term(n); }, limit,
                       fmt(k) + "*(" + a.description() + ")");
}

DeltaSequence combine_abs(const DeltaSequence& a) {
  CoordinateFunction limit = abs(a.limit());
  if (a.is_regular()) return DeltaSequence::regular(limit);
  return DeltaSequence([a](std::size_t n) { return abs(a.term(n)); }, limit,
                       "abs(" + a.description() + ")");
}

namespace {

// Values taken by the sequence on a small low-discrepancy sample.
Interval sampled_values(const DeltaSequence& a) {
  constexpr std::size_t kPoints = 256;
  constexpr std::size_t kLevels[] = {1, 2, 4, 8, 16, 32, 64};
  const auto sides = a.domain().sides(64);
  double lo = INFINITY;
  double hi = -INFINITY;
  std::vector<double> head(64);
  for (std::size_t s = 0; s < kPoints; ++s) {
    quadrature::kronecker_point(s, head);
    for (std::size_t d = 0; d < 64; ++d) head[d] *= sides[d];
    for (std::size_t n : kLevels) {
      const double v = a.term(n)(std::span<const double>(head).first(n));
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    const double v = a.limit()(head);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return {lo, hi};
}

}  // namespace

DeltaSequence compose_lipschitz(const LipschitzMap& g, const DeltaSequence& a) {
  if (!(g.modulus >= 0.0)) throw Error(ErrorCode::InvalidArgument, "modulus must be non-negative");
  const Interval seen = sampled_values(a);
  if (g.valid_on) {
    const auto& v = *g.valid_on;
    const auto& r = a.limit().range();
    const Interval used = r ? Interval{std::min(r->lo, seen.lo), std::max(r->hi, seen.hi)} : seen;
    if (used.lo < v.lo || used.hi > v.hi) {
      throw Error(ErrorCode::ModulusViolated,
                  g.name + ": argument values [" + fmt(used.lo) + ", " + fmt(used.hi) +
                      "] leave the interval [" + fmt(v.lo) + ", " + fmt(v.hi) +
                      "] where the modulus is declared");
    }
  }
  const Interval d = g.valid_on ? *g.valid_on : seen;
  constexpr std::size_t kPairs = 1024;
  const double width = d.hi - d.lo;
  double uv[2];
  for (std::size_t j = 0; j < kPairs && width > 0.0; ++j) {
    quadrature::kronecker_point(j, uv);
    const double s = d.lo + width * uv[0];
    // Half of the pairs are close together, where a modulus is tightest.
    const double t = j % 2 ? d.lo + width * uv[1]
                           : std::clamp(s + width * 1e-4 * (uv[1] - 0.5), d.lo, d.hi);
    const double lhs = std::abs(g.fn(s) - g.fn(t));
    const double rhs = g.modulus * std::abs(s - t);
    if (lhs > rhs * (1.0 + 1e-9) + 1e-14) {
      throw Error(ErrorCode::ModulusViolated,
                  g.name + ": |g(" + fmt(s) + ") - g(" + fmt(t) + ")| = " + fmt(lhs) + " > " +
                      fmt(g.modulus) + " * |s - t|");
    }
  }
  CoordinateFunction limit = compose(g, a.limit());
  if (a.is_regular()) return DeltaSequence::regular(limit);
  return DeltaSequence([g, a](std::size_t n) { return compose(g, a.term(n)); }, limit,
                       g.name + "(" + a.description() + ")");
}

// ---------------------------------------------------------------------------
// Empirical δ-Cauchy and δ-uniform checks

std::string_view to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

std::string_view to_string(Sheet s) noexcept {
  return s == Sheet::Zero ? "zero" : "upper";
}

std::vector<std::size_t> sampling_ladder(std::size_t ladder_max) {
  std::vector<std::size_t> out{1};
  for (std::size_t p = 2; p <= ladder_max; p *= 2) {
    out.push_back(p);
    if (p + 1 <= ladder_max) out.push_back(p + 1);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

void fill_point(std::span<const double> sides, std::size_t sample, std::size_t dim_cap,
                Sheet sheet, std::span<double> out) {
  const std::size_t head = std::min(dim_cap, out.size());
  quadrature::kronecker_point(sample, out.first(head));
  for (std::size_t d = 0; d < head; ++d) out[d] *= sides[d];
  for (std::size_t d = head; d < out.size(); ++d) out[d] = sheet == Sheet::Zero ? 0.0 : sides[d];
}

struct LevelWitness {
  double gap = -1.0;
  std::size_t sample = 0;
  Sheet sheet = Sheet::Zero;
  std::size_t n = 0;
  std::optional<std::size_t> m;
};

CauchyReport run_check(const DeltaSequence& seq, const SampleBudget& budget,
                       CauchyReport::Kind kind) {
  if (budget.points == 0 || budget.ladder_max < 2) {
    throw Error(ErrorCode::InvalidArgument, "sample budget needs points and a ladder of 2+ levels");
  }
  CauchyReport report;
  report.kind = kind;
  report.budget = budget;
  report.ladder = sampling_ladder(budget.ladder_max);
  const auto& ladder = report.ladder;
  const std::size_t levels = ladder.size();
  const bool uniform = kind == CauchyReport::Kind::Uniform;
  // Both checks must reach the frozen sheets, so the head stops below the top level.
  const std::size_t dim_cap = std::min(budget.dim_cap, std::max<std::size_t>(1, ladder.back() / 2));
  report.budget.dim_cap = dim_cap;
  const std::size_t length =
      uniform ? std::max(ladder.back(), budget.limit_level) : ladder.back();
  const auto sides = seq.domain().sides(length);

  std::vector<CoordinateFunction> terms;
  terms.reserve(levels);
  for (std::size_t n : ladder) terms.push_back(seq.term(n));

  constexpr std::size_t kChunk = 32;
  const std::size_t chunks = (budget.points + kChunk - 1) / kChunk;
  std::vector<std::vector<LevelWitness>> partial(chunks);

  quadrature::parallel_chunks(
      budget.points, kChunk, budget.workers,
      [&](std::size_t c, std::size_t begin, std::size_t end) {
        std::vector<LevelWitness> best(levels);
        std::vector<double> x(length);
        std::vector<double> v(levels);
        for (std::size_t s = begin; s < end; ++s) {
          for (Sheet sheet : {Sheet::Zero, Sheet::Upper}) {
            fill_point(sides, s, dim_cap, sheet, x);
            double limit = 0.0;
            std::size_t at = 0;
            try {
              for (at = 0; at < levels; ++at) {
                v[at] = terms[at](std::span<const double>(x).first(ladder[at]));
              }
              if (uniform) limit = seq.limit()(x);
            } catch (const Error& e) {
              throw Error(ErrorCode::EvaluationError,
                          std::string(e.what()) + " (sample " + std::to_string(s) + ", sheet " +
                              std::string(to_string(sheet)) + ", level " +
                              (at < levels ? std::to_string(ladder[at]) : "limit") + ")");
            }
            // Suffix extremes give the largest gap among pairs at or above a level.
            std::size_t arg_hi = levels - 1;
            std::size_t arg_lo = levels - 1;
            std::size_t arg_dev = levels - 1;
            for (std::size_t l = levels; l-- > 0;) {
              if (v[l] > v[arg_hi]) arg_hi = l;
              if (v[l] < v[arg_lo]) arg_lo = l;
              LevelWitness w;
              w.sample = s;
              w.sheet = sheet;
              if (uniform) {
                if (std::abs(v[l] - limit) > std::abs(v[arg_dev] - limit)) arg_dev = l;
                w.gap = std::abs(v[arg_dev] - limit);
                w.n = ladder[arg_dev];
              } else {
                w.gap = v[arg_hi] - v[arg_lo];
                w.n = ladder[std::min(arg_hi, arg_lo)];
                w.m = ladder[std::max(arg_hi, arg_lo)];
              }
              if (!(w.gap <= best[l].gap)) best[l] = w;  // NaN gaps are kept as witnesses
            }
          }
        }
        partial[c] = std::move(best);
      });

  std::vector<LevelWitness> best(levels);
  for (const auto& chunk : partial) {
    for (std::size_t l = 0; l < levels; ++l) {
      if (chunk[l].gap > best[l].gap || std::isnan(chunk[l].gap)) best[l] = chunk[l];
    }
  }
  report.level_gaps.resize(levels);
  for (std::size_t l = 0; l < levels; ++l) report.level_gaps[l] = best[l].gap;

  auto witness_at = [&](std::size_t l) {
    Witness w;
    w.n = best[l].n;
    w.m = best[l].m;
    w.sample = best[l].sample;
    w.sheet = best[l].sheet;
    w.gap = best[l].gap;
    w.head.resize(std::min(dim_cap, length));
    fill_point(sides, w.sample, dim_cap, w.sheet, w.head);
    return w;
  };

  // Levels with a partner above them, and the pure doublings among them.
  const std::size_t usable = levels - 1;
  std::vector<std::size_t> doublings;
  for (std::size_t l = 0; l < usable; ++l) {
    const std::size_t n = ladder[l];
    if ((n & (n - 1)) == 0) doublings.push_back(l);
  }

  bool any_fail = false;
  bool all_pass = true;
  for (double eps : budget.eps_grid) {
    EpsilonOutcome o;
    o.eps = eps;
    o.sup_gap = *std::max_element(report.level_gaps.begin(), report.level_gaps.begin() + usable);
    for (std::size_t l = 0; l < usable; ++l) {
      if (report.level_gaps[l] < eps) {
        o.verdict = Verdict::Pass;
        o.N = ladder[l];
        break;
      }
    }
    if (o.verdict != Verdict::Pass && doublings.size() > budget.window) {
      const std::size_t last = doublings.back();
      const std::size_t earlier = doublings[doublings.size() - 1 - budget.window];
      const double g_last = report.level_gaps[last];
      const double g_early = report.level_gaps[earlier];
      if (std::isnan(g_last) || g_last >= 0.5 * g_early) {
        o.verdict = Verdict::Fail;
        o.witness = witness_at(last);
      }
    }
    any_fail = any_fail || o.verdict == Verdict::Fail;
    all_pass = all_pass && o.verdict == Verdict::Pass;
    report.outcomes.push_back(std::move(o));
  }
  report.verdict = any_fail ? Verdict::Fail : all_pass ? Verdict::Pass : Verdict::Inconclusive;
  return report;
}

}  // namespace

CauchyReport check_delta_cauchy(const DeltaSequence& seq, const SampleBudget& budget) {
  return run_check(seq, budget, CauchyReport::Kind::Cauchy);
}

CauchyReport check_delta_uniform(const DeltaSequence& seq, const SampleBudget& budget) {
  return run_check(seq, budget, CauchyReport::Kind::Uniform);
}

std::vector<double> sample_point(const ConvergentRectangle& rect, std::size_t sample,
                                 std::size_t dim_cap, Sheet sheet, std::size_t length) {
  std::vector<double> out(length);
  const auto sides = rect.sides(length);
  fill_point(sides, sample, dim_cap, sheet, out);
  return out;
}

}  // namespace hq
