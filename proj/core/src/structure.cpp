// Power series, analytic forms and the recognizer that extracts them from
// integrand expressions.

#include <algorithm>
#include <cmath>
#include <mutex>
#include <set>

#include "hq/error.hpp"
#include "hq/funcspace.hpp"

namespace hq {

// ---------------------------------------------------------------------------
// PowerSeries

struct PowerSeries::State {
  std::recursive_mutex mutex;
  std::vector<double> cache;
  Recurrence recurrence;
};

PowerSeries::PowerSeries()
    : PowerSeries([](std::size_t, const PowerSeries&) { return 0.0; }, "0") {
  degree_ = 0;
}

PowerSeries::PowerSeries(Recurrence recurrence, std::string name)
    : state_(std::make_shared<State>()), name_(std::move(name)) {
  state_->recurrence = std::move(recurrence);
}

double PowerSeries::operator[](std::size_t k) const {
  std::lock_guard lock(state_->mutex);
  while (state_->cache.size() <= k) {
    const double c = state_->recurrence(state_->cache.size(), *this);
    state_->cache.push_back(c);
  }
  return state_->cache[k];
}

PowerSeries PowerSeries::identity() {
  PowerSeries s([](std::size_t k, const PowerSeries&) { return k == 1 ? 1.0 : 0.0; }, "t");
  s.identity_ = true;
  s.degree_ = 1;
  return s;
}

PowerSeries PowerSeries::constant(double c) {
  PowerSeries s([c](std::size_t k, const PowerSeries&) { return k == 0 ? c : 0.0; },
                std::to_string(c));
  s.degree_ = 0;
  return s;
}

PowerSeries PowerSeries::polynomial(std::vector<double> coeffs, std::string name) {
  const std::size_t degree = coeffs.empty() ? 0 : coeffs.size() - 1;
  PowerSeries s(
      [coeffs = std::move(coeffs)](std::size_t k, const PowerSeries&) {
        return k < coeffs.size() ? coeffs[k] : 0.0;
      },
      std::move(name));
  s.degree_ = degree;
  return s;
}

PowerSeries PowerSeries::geometric(double a) {
  if (a == 0.0) throw Error(ErrorCode::InvalidArgument, "geometric series needs a != 0");
  return PowerSeries(
      [a](std::size_t k, const PowerSeries& self) { return k == 0 ? 1.0 / a : self[k - 1] / a; },
      "1/(" + std::to_string(a) + " - t)");
}

PowerSeries PowerSeries::exp() {
  return PowerSeries(
      [](std::size_t k, const PowerSeries& self) {
        return k == 0 ? 1.0 : self[k - 1] / static_cast<double>(k);
      },
      "exp(t)");
}

PowerSeries PowerSeries::cosh() {
  return PowerSeries(
      [](std::size_t k, const PowerSeries& self) {
        if (k == 0) return 1.0;
        if (k % 2 == 1) return 0.0;
        const auto kk = static_cast<double>(k);
        return self[k - 2] / (kk * (kk - 1.0));
      },
      "cosh(t)");
}

PowerSeries PowerSeries::scaled(double c) const {
  PowerSeries base = *this;
  PowerSeries s([base, c](std::size_t k, const PowerSeries&) { return c * base[k]; },
                std::to_string(c) + "*(" + name_ + ")");
  s.degree_ = degree_;
  return s;
}

PowerSeries PowerSeries::dilated(double w) const {
  PowerSeries base = *this;
  PowerSeries s(
      [base, w](std::size_t k, const PowerSeries&) {
        return base[k] * std::pow(w, static_cast<double>(k));
      },
      name_ + " at " + std::to_string(w) + "*t");
  s.degree_ = degree_;
  return s;
}

PowerSeries PowerSeries::plus(const PowerSeries& other) const {
  PowerSeries a = *this;
  PowerSeries b = other;
  PowerSeries s([a, b](std::size_t k, const PowerSeries&) { return a[k] + b[k]; },
                "(" + a.name_ + ") + (" + b.name_ + ")");
  if (a.degree_ && b.degree_) s.degree_ = std::max(*a.degree_, *b.degree_);
  return s;
}

PowerSeries PowerSeries::times(const PowerSeries& other) const {
  PowerSeries a = *this;
  PowerSeries b = other;
  PowerSeries out(
      [a, b](std::size_t k, const PowerSeries&) {
        double s = 0.0;
        for (std::size_t j = 0; j <= k; ++j) s += a[j] * b[k - j];
        return s;
      },
      "(" + a.name_ + ")*(" + b.name_ + ")");
  if (a.degree_ && b.degree_) out.degree_ = *a.degree_ + *b.degree_;
  return out;
}

PowerSeries PowerSeries::reciprocal() const {
  PowerSeries b = *this;
  if (b[0] == 0.0) throw Error(ErrorCode::InvalidArgument, "reciprocal of a series vanishing at 0");
  return PowerSeries(
      [b](std::size_t k, const PowerSeries& self) {
        if (k == 0) return 1.0 / b[0];
        double s = 0.0;
        for (std::size_t j = 1; j <= k; ++j) s += b[j] * self[k - j];
        return -s / b[0];
      },
      "1/(" + b.name_ + ")");
}

PowerSeries PowerSeries::power(double p) const {
  PowerSeries a = *this;
  const double a0 = a[0];
  if (a0 == 0.0 || (a0 < 0.0 && p != std::round(p))) {
    if (p >= 0.0 && p == std::round(p) && p <= 64.0) {
      PowerSeries acc = constant(1.0);
      for (int i = 0; i < static_cast<int>(p); ++i) acc = acc.times(a);
      return acc;
    }
    throw Error(ErrorCode::InvalidArgument, "series power needs a positive constant term");
  }
  // J.C.P. Miller recurrence for (Σ a_k t^k)^p.
  PowerSeries out(
      [a, a0, p](std::size_t k, const PowerSeries& self) {
        if (k == 0) return std::pow(a0, p);
        const auto kk = static_cast<double>(k);
        double s = 0.0;
        for (std::size_t j = 1; j <= k; ++j) {
          s += ((p + 1.0) * static_cast<double>(j) - kk) * a[j] * self[k - j];
        }
        return s / (kk * a0);
      },
      "(" + a.name_ + ")^" + std::to_string(p));
  if (a.degree_ && p >= 0.0 && p == std::round(p)) {
    out.degree_ = *a.degree_ * static_cast<std::size_t>(p);
  }
  return out;
}

PowerSeries PowerSeries::exponential() const {
  PowerSeries a = *this;
  return PowerSeries(
      [a](std::size_t k, const PowerSeries& self) {
        if (k == 0) return std::exp(a[0]);
        double s = 0.0;
        for (std::size_t j = 1; j <= k; ++j) s += static_cast<double>(j) * a[j] * self[k - j];
        return s / static_cast<double>(k);
      },
      "exp(" + a.name_ + ")");
}

PowerSeries PowerSeries::logarithm() const {
  PowerSeries a = *this;
  if (!(a[0] > 0.0)) throw Error(ErrorCode::InvalidArgument, "log of a series needs a_0 > 0");
  return PowerSeries(
      [a](std::size_t k, const PowerSeries& self) {
        if (k == 0) return std::log(a[0]);
        double s = 0.0;
        for (std::size_t j = 1; j < k; ++j) s += static_cast<double>(j) * self[j] * a[k - j];
        return (a[k] - s / static_cast<double>(k)) / a[0];
      },
      "log(" + a.name_ + ")");
}

// ---------------------------------------------------------------------------
// AnalyticForm

AnalyticForm AnalyticForm::scaled(double k) const {
  AnalyticForm out;
  out.constant = constant * k;
  if (k == 0.0) return out;
  out.terms = terms;
  for (auto& t : out.terms) t.first *= k;
  return out;
}

AnalyticForm AnalyticForm::add(const AnalyticForm& a, const AnalyticForm& b) {
  AnalyticForm out = a;
  out.constant += b.constant;
  for (const auto& [w, comp] : b.terms) {
    auto it = std::find_if(out.terms.begin(), out.terms.end(),
                           [&](const auto& t) { return t.second == comp; });
    if (it == out.terms.end()) {
      out.terms.emplace_back(w, comp);
    } else {
      it->first += w;
    }
  }
  std::erase_if(out.terms, [](const auto& t) { return t.first == 0.0; });
  return out;
}

AnalyticForm AnalyticForm::separable(SeparableSum s, std::string label) {
  AnalyticForm out;
  out.terms.emplace_back(1.0, std::make_shared<const AnalyticComponent>(
                                  AnalyticComponent{std::move(s), std::move(label)}));
  return out;
}

AnalyticForm AnalyticForm::product(ProductForm p, std::string label) {
  AnalyticForm out;
  out.terms.emplace_back(1.0, std::make_shared<const AnalyticComponent>(
                                  AnalyticComponent{std::move(p), std::move(label)}));
  return out;
}

AnalyticForm AnalyticForm::truncated(std::size_t n) const {
  AnalyticForm out;
  out.constant = constant;
  for (const auto& [w, comp] : terms) {
    AnalyticComponent c = *comp;
    std::visit(
        [n](auto& form) { form.last = form.last ? std::min(*form.last, n) : n; }, c.form);
    c.label += " cut at " + std::to_string(n);
    out.terms.emplace_back(w, std::make_shared<const AnalyticComponent>(std::move(c)));
  }
  return out;
}

namespace {

double sum_series(const PowerSeries& psi, double t) {
  double s = 0.0;
  double tk = 1.0;
  int small = 0;
  const std::size_t kmax = psi.degree() ? *psi.degree() + 1 : 4096;
  for (std::size_t k = 0; k < kmax; ++k) {
    const double term = psi[k] * tk;
    s += term;
    small = std::abs(term) <= 1e-17 * std::abs(s) ? small + 1 : 0;
    if (small >= 4 || (tk == 0.0 && k > 0)) break;
    tk *= t;
  }
  return s;
}

}  // namespace

double AnalyticForm::evaluate(std::span<const double> x) const {
  double total = constant;
  const std::size_t n = x.size();
  for (const auto& [w, comp] : terms) {
    double v = 0.0;
    if (const auto* s = std::get_if<SeparableSum>(&comp->form)) {
      const std::size_t hi = s->last ? std::min(*s->last, n) : n;
      for (std::size_t i = s->first; i <= hi; ++i) v += s->term(i, x[i - 1]);
    } else {
      const auto& p = std::get<ProductForm>(comp->form);
      const std::size_t hi = p.last ? std::min(*p.last, n) : n;
      double prod = 1.0;
      for (std::size_t i = p.first; i <= hi; ++i) prod *= p.phi(i, x[i - 1]);
      v = sum_series(p.psi, prod);
    }
    total += w * v;
  }
  return total;
}

// ---------------------------------------------------------------------------
// Recognizer

namespace {

using expr::Aggregate;
using expr::AggKind;
using expr::Binary;
using expr::BinaryOp;
using expr::Call;
using expr::Coord;
using expr::Expr;
using expr::ExprPtr;
using expr::Func;
using expr::Index;
using expr::Neg;
using expr::Number;

struct Facts {
  bool infinite_aggregate = false;
  bool variable_coordinate = false;  // x[<expression of an index>]
  std::set<std::size_t> coordinates;  // constant coordinate indices
};

void gather(const Expr& e, Facts& f) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Coord>) {
          Facts idx;
          gather(*n.index, idx);
          if (expr::references_slot(*n.index, 0) || idx.variable_coordinate ||
              !idx.coordinates.empty() || idx.infinite_aggregate) {
            f.variable_coordinate = true;
            return;
          }
          bool any_index = false;
          std::visit(
              [&](const auto& m) {
                if constexpr (std::is_same_v<std::decay_t<decltype(m)>, Index>) any_index = true;
              },
              n.index->node);
          try {
            const double k = expr::eval(*n.index, {});
            if (any_index || k < 1.0 || k != std::round(k)) {
              f.variable_coordinate = true;
            } else if (!n.cap || static_cast<std::size_t>(k) <= *n.cap) {
              f.coordinates.insert(static_cast<std::size_t>(k));
            }
          } catch (const Error&) {
            f.variable_coordinate = true;
          }
        } else if constexpr (std::is_same_v<T, Neg>) {
          gather(*n.operand, f);
        } else if constexpr (std::is_same_v<T, Binary>) {
          gather(*n.lhs, f);
          gather(*n.rhs, f);
        } else if constexpr (std::is_same_v<T, Call>) {
          gather(*n.arg, f);
        } else if constexpr (std::is_same_v<T, Aggregate>) {
          if (!n.hi) f.infinite_aggregate = true;
          gather(*n.lo, f);
          if (n.hi) gather(*n.hi, f);
          // Coordinates inside a body depend on the bound index.
          if (expr::references_coordinates(*n.body)) f.variable_coordinate = true;
          Facts body;
          gather(*n.body, body);
          f.infinite_aggregate = f.infinite_aggregate || body.infinite_aggregate;
        }
      },
      e.node);
}

std::optional<double> constant_value(const Expr& e) {
  Facts f;
  gather(e, f);
  if (f.infinite_aggregate || f.variable_coordinate || !f.coordinates.empty()) return std::nullopt;
  try {
    return expr::eval(e, {});
  } catch (const Error&) {
    return std::nullopt;
  }
}

struct Kernel {
  ExprPtr node;
  ProductForm base;
};

struct Shape {
  enum class Kind { Const, Linear, Series } kind = Kind::Const;
  double value = 0.0;
  AnalyticForm linear;
  std::shared_ptr<const Kernel> kernel;
  PowerSeries psi;
};

Shape make_const(double v) {
  Shape s;
  s.kind = Shape::Kind::Const;
  s.value = v;
  return s;
}

Shape make_linear(AnalyticForm f) {
  Shape s;
  s.kind = Shape::Kind::Linear;
  s.linear = std::move(f);
  return s;
}

Shape make_series(std::shared_ptr<const Kernel> k, PowerSeries psi) {
  Shape s;
  s.kind = Shape::Kind::Series;
  s.kernel = std::move(k);
  s.psi = std::move(psi);
  return s;
}

AnalyticForm to_form(const Shape& s) {
  switch (s.kind) {
    case Shape::Kind::Const: {
      AnalyticForm f;
      f.constant = s.value;
      return f;
    }
    case Shape::Kind::Linear:
      return s.linear;
    case Shape::Kind::Series: {
      ProductForm p = s.kernel->base;
      p.psi = s.psi;
      return AnalyticForm::product(std::move(p), expr::to_string(*s.kernel->node));
    }
  }
  return {};
}

PowerSeries as_series(const Shape& s) {
  return s.kind == Shape::Kind::Const ? PowerSeries::constant(s.value) : s.psi;
}

bool same_kernel(const Shape& a, const Shape& b) {
  return a.kernel == b.kernel || expr::structurally_equal(*a.kernel->node, *b.kernel->node);
}

std::optional<Shape> analyze(const ExprPtr& e);

// x[k]-only subexpression with a constant k: a one-term separable sum.
std::optional<Shape> single_coordinate(const ExprPtr& e) {
  Facts f;
  gather(*e, f);
  if (f.infinite_aggregate || f.variable_coordinate || f.coordinates.size() != 1) {
    return std::nullopt;
  }
  const std::size_t k = *f.coordinates.begin();
  SeparableSum s;
  s.first = k;
  s.last = k;
  s.term = [e](std::size_t i, double v) { return expr::eval_single(*e, i, v, {}); };
  return make_linear(AnalyticForm::separable(std::move(s), expr::to_string(*e)));
}

bool body_is_single_slot(const Aggregate& a) {
  if (!expr::references_coordinates(*a.body) || !expr::coordinates_only_at_slot(*a.body, a.slot)) {
    return false;
  }
  Facts f;
  gather(*a.body, f);
  return !f.infinite_aggregate;
}

std::optional<Shape> aggregate_shape(const ExprPtr& e, const Aggregate& a) {
  const auto lo = constant_value(*a.lo);
  if (!lo || *lo < 1.0) return std::nullopt;
  std::optional<double> hi;
  if (a.hi) {
    hi = constant_value(*a.hi);
    if (!hi) return std::nullopt;
  }
  if (!body_is_single_slot(a)) return std::nullopt;
  const auto first = static_cast<std::size_t>(*lo);
  const ExprPtr body = a.body;
  const std::size_t slot = a.slot;
  auto phi = [body, slot](std::size_t i, double v) {
    expr::IndexEnv env(slot + 1, 0.0);
    env[slot] = static_cast<double>(i);
    return expr::eval_single(*body, i, v, env);
  };

  if (a.kind == AggKind::Sum) {
    SeparableSum s;
    s.first = first;
    if (hi) {
      if (*hi < *lo) return make_const(0.0);
      s.last = static_cast<std::size_t>(*hi);
    }
    s.term = phi;
    return make_linear(AnalyticForm::separable(std::move(s), expr::to_string(*e)));
  }

  if (hi) return std::nullopt;
  ProductForm p;
  p.first = first;
  p.phi = phi;
  p.psi = PowerSeries::identity();
  // Monomial kernels x[i] and x[i]^e(i).
  auto is_own_coordinate = [slot](const Expr& x) {
    const auto* c = std::get_if<Coord>(&x.node);
    if (!c || c->cap) return false;
    const auto* idx = std::get_if<Index>(&c->index->node);
    return idx && idx->slot == slot;
  };
  if (is_own_coordinate(*body)) {
    p.exponent = [](std::size_t) { return 1.0; };
  } else if (const auto* b = std::get_if<Binary>(&body->node);
             b && b->op == BinaryOp::Pow && is_own_coordinate(*b->lhs) &&
             !expr::references_coordinates(*b->rhs)) {
    const ExprPtr ex = b->rhs;
    p.exponent = [ex, slot](std::size_t i) {
      expr::IndexEnv env(slot + 1, 0.0);
      env[slot] = static_cast<double>(i);
      return expr::eval(*ex, {}, env);
    };
  }
  auto kernel = std::make_shared<const Kernel>(Kernel{e, std::move(p)});
  return make_series(std::move(kernel), PowerSeries::identity());
}

std::optional<Shape> add_shapes(const Shape& a, const Shape& b, double sign) {
  using K = Shape::Kind;
  if (a.kind == K::Const && b.kind == K::Const) return make_const(a.value + sign * b.value);
  if (a.kind == K::Series && b.kind == K::Series && same_kernel(a, b)) {
    return make_series(a.kernel, a.psi.plus(b.psi.scaled(sign)));
  }
  if (a.kind == K::Series && b.kind == K::Const) {
    return make_series(a.kernel, a.psi.plus(PowerSeries::constant(sign * b.value)));
  }
  if (a.kind == K::Const && b.kind == K::Series) {
    return make_series(b.kernel, b.psi.scaled(sign).plus(PowerSeries::constant(a.value)));
  }
  return make_linear(AnalyticForm::add(to_form(a), to_form(b).scaled(sign)));
}

std::optional<Shape> scale_shape(const Shape& a, double k) {
  switch (a.kind) {
    case Shape::Kind::Const:
      return make_const(a.value * k);
    case Shape::Kind::Linear:
      return make_linear(a.linear.scaled(k));
    case Shape::Kind::Series:
      return make_series(a.kernel, a.psi.scaled(k));
  }
  return std::nullopt;
}

std::optional<Shape> binary_shape(BinaryOp op, const Shape& a, const Shape& b) {
  using K = Shape::Kind;
  switch (op) {
    case BinaryOp::Add:
      return add_shapes(a, b, 1.0);
    case BinaryOp::Sub:
      return add_shapes(a, b, -1.0);
    case BinaryOp::Mul:
      if (b.kind == K::Const) return scale_shape(a, b.value);
      if (a.kind == K::Const) return scale_shape(b, a.value);
      if (a.kind == K::Series && b.kind == K::Series && same_kernel(a, b)) {
        return make_series(a.kernel, a.psi.times(b.psi));
      }
      return std::nullopt;
    case BinaryOp::Div:
      if (b.kind == K::Const) {
        if (b.value == 0.0) return std::nullopt;
        return scale_shape(a, 1.0 / b.value);
      }
      if (b.kind == K::Series && (a.kind == K::Const || (a.kind == K::Series && same_kernel(a, b)))) {
        if (b.psi[0] == 0.0) return std::nullopt;
        return make_series(b.kernel, as_series(a).times(b.psi.reciprocal()));
      }
      return std::nullopt;
    case BinaryOp::Pow:
      if (a.kind == K::Const && b.kind == K::Const) {
        if (a.value < 0.0 && b.value != std::round(b.value)) return std::nullopt;
        if (a.value == 0.0 && b.value < 0.0) return std::nullopt;
        return make_const(std::pow(a.value, b.value));
      }
      if (a.kind == K::Series && b.kind == K::Const) {
        try {
          return make_series(a.kernel, a.psi.power(b.value));
        } catch (const Error&) {
          return std::nullopt;
        }
      }
      if (a.kind == K::Const && b.kind == K::Series && a.value > 0.0) {
        return make_series(b.kernel, b.psi.scaled(std::log(a.value)).exponential());
      }
      return std::nullopt;
  }
  return std::nullopt;
}

std::optional<Shape> call_shape(Func f, const Shape& a) {
  using K = Shape::Kind;
  if (a.kind == K::Const) {
    const double v = a.value;
    switch (f) {
      case Func::Exp: return make_const(std::exp(v));
      case Func::Log: return v > 0.0 ? std::optional(make_const(std::log(v))) : std::nullopt;
      case Func::Cosh: return make_const(std::cosh(v));
      case Func::Sinh: return make_const(std::sinh(v));
      case Func::Sqrt: return v >= 0.0 ? std::optional(make_const(std::sqrt(v))) : std::nullopt;
      case Func::Abs: return make_const(std::abs(v));
    }
  }
  if (a.kind != K::Series) return std::nullopt;
  try {
    switch (f) {
      case Func::Exp:
        return make_series(a.kernel, a.psi.exponential());
      case Func::Cosh:
      case Func::Sinh: {
        const PowerSeries up = a.psi.exponential();
        const PowerSeries down = a.psi.scaled(-1.0).exponential();
        const double sign = f == Func::Cosh ? 1.0 : -1.0;
        return make_series(a.kernel, up.plus(down.scaled(sign)).scaled(0.5));
      }
      case Func::Sqrt:
        return make_series(a.kernel, a.psi.power(0.5));
      case Func::Log:
        return make_series(a.kernel, a.psi.logarithm());
      case Func::Abs:
        return std::nullopt;
    }
  } catch (const Error&) {
    return std::nullopt;
  }
  return std::nullopt;
}

std::optional<Shape> analyze(const ExprPtr& e) {
  if (auto c = constant_value(*e)) return make_const(*c);
  if (auto s = single_coordinate(e)) return s;
  return std::visit(
      [&](const auto& n) -> std::optional<Shape> {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Aggregate>) {
          return aggregate_shape(e, n);
        } else if constexpr (std::is_same_v<T, Neg>) {
          auto a = analyze(n.operand);
          if (!a) return std::nullopt;
          return scale_shape(*a, -1.0);
        } else if constexpr (std::is_same_v<T, Binary>) {
          auto a = analyze(n.lhs);
          if (!a) return std::nullopt;
          auto b = analyze(n.rhs);
          if (!b) return std::nullopt;
          return binary_shape(n.op, *a, *b);
        } else if constexpr (std::is_same_v<T, Call>) {
          auto a = analyze(n.arg);
          if (!a) return std::nullopt;
          return call_shape(n.func, *a);
        } else {
          return std::nullopt;
        }
      },
      e->node);
}

}  // namespace

std::optional<AnalyticForm> recognize_structure(const expr::ExprPtr& e) {
  auto shape = analyze(e);
  if (!shape) return std::nullopt;
  return to_form(*shape);
}

}  // namespace hq
