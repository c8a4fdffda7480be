#include "hq/expr.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <utility>

#include "hq/error.hpp"

namespace hq::expr {

ExprPtr number(double value) { return std::make_shared<const Expr>(Expr{Number{value}}); }

ExprPtr index(std::string name, std::size_t slot) {
  return std::make_shared<const Expr>(Expr{Index{std::move(name), slot}});
}

ExprPtr coord(ExprPtr index, std::optional<std::size_t> cap) {
  return std::make_shared<const Expr>(Expr{Coord{std::move(index), cap}});
}

ExprPtr neg(ExprPtr operand) { return std::make_shared<const Expr>(Expr{Neg{std::move(operand)}}); }

ExprPtr binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs) {
  return std::make_shared<const Expr>(Expr{Binary{op, std::move(lhs), std::move(rhs)}});
}

ExprPtr call(Func func, ExprPtr arg) {
  return std::make_shared<const Expr>(Expr{Call{func, std::move(arg)}});
}

ExprPtr aggregate(AggKind kind, std::string var, std::size_t slot, ExprPtr lo, ExprPtr hi,
                  ExprPtr body) {
  return std::make_shared<const Expr>(
      Expr{Aggregate{kind, std::move(var), slot, std::move(lo), std::move(hi), std::move(body)}});
}

ParseError::ParseError(Kind kind, std::size_t position, std::string message,
                       std::vector<std::string> expected)
    : std::runtime_error("parse error at offset " + std::to_string(position) + ": " + message),
      kind_(kind),
      position_(position),
      detail_(std::move(message)),
      expected_(std::move(expected)) {}

namespace {

constexpr std::array<std::pair<std::string_view, Func>, 6> kFunctions{{
    {"exp", Func::Exp},
    {"log", Func::Log},
    {"cosh", Func::Cosh},
    {"sinh", Func::Sinh},
    {"sqrt", Func::Sqrt},
    {"abs", Func::Abs},
}};

std::optional<Func> lookup_function(std::string_view name) {
  for (const auto& [n, f] : kFunctions) {
    if (n == name) return f;
  }
  return std::nullopt;
}

std::string_view function_name(Func f) {
  for (const auto& [n, g] : kFunctions) {
    if (g == f) return n;
  }
  return "?";
}

bool is_reserved(std::string_view name) {
  return name == "x" || name == "pi" || name == "inf" || name == "sum" || name == "prod" ||
         lookup_function(name).has_value();
}

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class Parser {
 public:
  Parser(std::string_view src, std::span<const std::string> free_indices)
      : src_(src), scope_(free_indices.begin(), free_indices.end()) {}

  ExprPtr run() {
    ExprPtr e = parse_expr();
    skip_ws();
    if (pos_ < src_.size()) {
      fail(pos_, "unexpected '" + std::string(1, src_[pos_]) + "'", {"operator", "end of input"});
    }
    return e;
  }

 private:
  [[noreturn]] void fail(std::size_t at, std::string msg, std::vector<std::string> expected) {
    throw ParseError(ParseError::Kind::Syntax, at, std::move(msg), std::move(expected));
  }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      std::string want(1, c);
      fail(pos_, pos_ < src_.size() ? "expected '" + want + "'" : "unexpected end of input",
           {want});
    }
  }

  std::string_view peek_ident() {
    skip_ws();
    std::size_t end = pos_;
    if (end < src_.size() && ident_start(src_[end])) {
      while (end < src_.size() && ident_char(src_[end])) ++end;
    }
    return src_.substr(pos_, end - pos_);
  }

  ExprPtr parse_expr() {
    ExprPtr lhs = parse_term();
    for (;;) {
      if (accept('+')) {
        lhs = binary(BinaryOp::Add, lhs, parse_term());
      } else if (accept('-')) {
        lhs = binary(BinaryOp::Sub, lhs, parse_term());
      } else {
        return lhs;
      }
    }
  }

  ExprPtr parse_term() {
    ExprPtr lhs = parse_factor();
    for (;;) {
      if (accept('*')) {
        lhs = binary(BinaryOp::Mul, lhs, parse_factor());
      } else if (accept('/')) {
        lhs = binary(BinaryOp::Div, lhs, parse_factor());
      } else {
        return lhs;
      }
    }
  }

  ExprPtr parse_factor() {
    if (accept('-')) return neg(parse_factor());
    ExprPtr base = parse_atom();
    if (accept('^')) return binary(BinaryOp::Pow, base, parse_factor());
    return base;
  }

  ExprPtr parse_number() {
    const char* first = src_.data() + pos_;
    const char* last = src_.data() + src_.size();
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(first, last, value, std::chars_format::general);
    if (ec != std::errc{}) fail(pos_, "malformed number", {"number"});
    pos_ += static_cast<std::size_t>(ptr - first);
    return number(value);
  }

  ExprPtr parse_atom() {
    skip_ws();
    if (pos_ >= src_.size()) fail(pos_, "expected expression", {"expression"});
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (c == '(') {
      ++pos_;
      ExprPtr inner = parse_expr();
      expect(')');
      return inner;
    }
    if (!ident_start(c)) {
      fail(pos_, "unexpected '" + std::string(1, c) + "'", {"expression"});
    }

    const std::size_t at = pos_;
    const std::string name(peek_ident());
    pos_ += name.size();

    if (name == "x") {
      expect('[');
      ExprPtr idx = parse_expr();
      expect(']');
      return coord(idx);
    }
    if (name == "pi") return number(std::numbers::pi);
    if (name == "sum" || name == "prod") {
      return parse_aggregate(name == "sum" ? AggKind::Sum : AggKind::Prod);
    }
    if (auto f = lookup_function(name)) {
      expect('(');
      ExprPtr arg = parse_expr();
      expect(')');
      return call(*f, arg);
    }
    if (name == "inf") fail(at, "'inf' is only valid as an aggregator upper limit", {"expression"});

    auto it = std::find(scope_.rbegin(), scope_.rend(), name);
    if (it == scope_.rend()) {
      throw ParseError(ParseError::Kind::UnboundIndex, at,
                       "index '" + name + "' is not bound by an enclosing sum/prod");
    }
    const auto slot = static_cast<std::size_t>(std::distance(it, scope_.rend()) - 1);
    return index(name, slot);
  }

  ExprPtr parse_aggregate(AggKind kind) {
    expect('(');
    const std::size_t var_at = (skip_ws(), pos_);
    const std::string var(peek_ident());
    if (var.empty()) fail(var_at, "expected index variable", {"identifier"});
    if (is_reserved(var)) fail(var_at, "'" + var + "' cannot be used as an index", {"identifier"});
    if (std::find(scope_.begin(), scope_.end(), var) != scope_.end()) {
      fail(var_at, "index '" + var + "' shadows an enclosing index", {"identifier"});
    }
    pos_ += var.size();
    expect(',');
    ExprPtr lo = parse_expr();
    expect(',');
    ExprPtr hi;
    if (peek_ident() == "inf") {
      pos_ += 3;
    } else {
      hi = parse_expr();
    }
    expect(',');
    const std::size_t slot = scope_.size();
    scope_.push_back(var);
    ExprPtr body = parse_expr();
    scope_.pop_back();
    expect(')');
    return aggregate(kind, var, slot, lo, hi, body);
  }


  std::string_view src_;
  std::size_t pos_ = 0;
  std::vector<std::string> scope_;
};

}  // namespace

ExprPtr parse(std::string_view src, std::span<const std::string> free_indices) {
  return Parser(src, free_indices).run();
}

// ---------------------------------------------------------------------------
// Printing

namespace {

int precedence(const Expr& e) {
  if (const auto* b = std::get_if<Binary>(&e.node)) {
    switch (b->op) {
      case BinaryOp::Add:
      case BinaryOp::Sub:
        return 1;
      case BinaryOp::Mul:
      case BinaryOp::Div:
        return 2;
      case BinaryOp::Pow:
        return 4;
    }
  }
  if (std::holds_alternative<Neg>(e.node)) return 3;
  if (const auto* n = std::get_if<Number>(&e.node); n && std::signbit(n->value)) return 3;
  return 5;
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  if (std::signbit(v)) return "(" + s + ")";
  return s;
}

void print(const Expr& e, int min_prec, std::string& out) {
  const bool parens = precedence(e) < min_prec;
  if (parens) out += '(';
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Number>) {
          out += format_number(n.value);
        } else if constexpr (std::is_same_v<T, Index>) {
          out += n.name;
        } else if constexpr (std::is_same_v<T, Coord>) {
          out += "x[";
          print(*n.index, 0, out);
          out += ']';
        } else if constexpr (std::is_same_v<T, Neg>) {
          out += '-';
          print(*n.operand, 3, out);
        } else if constexpr (std::is_same_v<T, Binary>) {
          switch (n.op) {
            case BinaryOp::Add:
            case BinaryOp::Sub:
              print(*n.lhs, 1, out);
              out += n.op == BinaryOp::Add ? " + " : " - ";
              print(*n.rhs, 2, out);
              break;
            case BinaryOp::Mul:
            case BinaryOp::Div:
              print(*n.lhs, 2, out);
              out += n.op == BinaryOp::Mul ? '*' : '/';
              print(*n.rhs, 3, out);
              break;
            case BinaryOp::Pow:
              print(*n.lhs, 5, out);
              out += '^';
              print(*n.rhs, 3, out);
              break;
          }
        } else if constexpr (std::is_same_v<T, Call>) {
          out += function_name(n.func);
          out += '(';
          print(*n.arg, 0, out);
          out += ')';
        } else if constexpr (std::is_same_v<T, Aggregate>) {
          out += n.kind == AggKind::Sum ? "sum(" : "prod(";
          out += n.var;
          out += ", ";
          print(*n.lo, 0, out);
          out += ", ";
          if (n.hi) {
            print(*n.hi, 0, out);
          } else {
            out += "inf";
          }
          out += ", ";
          print(*n.body, 0, out);
          out += ')';
        }
      },
      e.node);
  if (parens) out += ')';
}

}  // namespace

std::string to_string(const Expr& e) {
  std::string out;
  print(e, 0, out);
  return out;
}

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.node.index() != b.node.index()) return false;
  auto eq = [](const ExprPtr& x, const ExprPtr& y) {
    if (!x || !y) return !x && !y;
    return structurally_equal(*x, *y);
  };
  return std::visit(
      [&](const auto& n) -> bool {
        using T = std::decay_t<decltype(n)>;
        const auto& m = std::get<T>(b.node);
        if constexpr (std::is_same_v<T, Number>) {
          return n.value == m.value;
        } else if constexpr (std::is_same_v<T, Index>) {
          return n.name == m.name && n.slot == m.slot;
        } else if constexpr (std::is_same_v<T, Coord>) {
          return n.cap == m.cap && eq(n.index, m.index);
        } else if constexpr (std::is_same_v<T, Neg>) {
          return eq(n.operand, m.operand);
        } else if constexpr (std::is_same_v<T, Binary>) {
          return n.op == m.op && eq(n.lhs, m.lhs) && eq(n.rhs, m.rhs);
        } else if constexpr (std::is_same_v<T, Call>) {
          return n.func == m.func && eq(n.arg, m.arg);
        } else {
          return n.kind == m.kind && n.var == m.var && n.slot == m.slot && eq(n.lo, m.lo) &&
                 eq(n.hi, m.hi) && eq(n.body, m.body);
        }
      },
      a.node);
}

ExprPtr truncate(const ExprPtr& e, std::size_t n) {
  return std::visit(
      [&](const auto& node) -> ExprPtr {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, Number> || std::is_same_v<T, Index>) {
          return e;
        } else if constexpr (std::is_same_v<T, Coord>) {
          if (const auto* k = std::get_if<Number>(&node.index->node)) {
            if (k->value > static_cast<double>(n)) return number(0.0);
            return e;
          }
          const std::size_t cap = node.cap ? std::min(*node.cap, n) : n;
          return coord(truncate(node.index, n), cap);
        } else if constexpr (std::is_same_v<T, Neg>) {
          return neg(truncate(node.operand, n));
        } else if constexpr (std::is_same_v<T, Binary>) {
          return binary(node.op, truncate(node.lhs, n), truncate(node.rhs, n));
        } else if constexpr (std::is_same_v<T, Call>) {
          return call(node.func, truncate(node.arg, n));
        } else {
          ExprPtr hi = node.hi ? truncate(node.hi, n) : number(static_cast<double>(n));
          return aggregate(node.kind, node.var, node.slot, truncate(node.lo, n), hi,
                           truncate(node.body, n));
        }
      },
      e->node);
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

enum class CoordMode { Strict, Truncated, Single };

struct EvalContext {
  CoordMode mode;
  std::span<const double> point;
  std::size_t single_index = 0;
  double single_value = 0.0;
  IndexEnv env;
};

double as_integer(double v, const char* what) {
  const double r = std::round(v);
  if (!std::isfinite(v) || std::abs(v - r) > 1e-9 * std::max(1.0, std::abs(v))) {
    throw Error(ErrorCode::DomainError, std::string(what) + " must be an integer");
  }
  return r;
}

double checked(double v, const char* what) {
  if (std::isnan(v)) throw Error(ErrorCode::DomainError, what);
  return v;
}

double apply_pow(double base, double exponent) {
  if (base == 0.0 && exponent < 0.0) throw Error(ErrorCode::DomainError, "0 raised to a negative power");
  if (base < 0.0 && exponent != std::round(exponent)) {
    throw Error(ErrorCode::DomainError, "negative base with non-integer exponent");
  }
  // Cases where std::pow is exact; they dominate truncated products.
  if (base == 1.0 || exponent == 0.0) return 1.0;
  if (base == 0.0 && exponent > 0.0) return 0.0;
  if (exponent == 1.0) return base;
  if (exponent == 2.0) return base * base;
  return checked(std::pow(base, exponent), "pow");
}

double apply(Func f, double v) {
  switch (f) {
    case Func::Exp:
      return std::exp(v);
    case Func::Log:
      if (v <= 0.0) throw Error(ErrorCode::DomainError, "log of a non-positive value");
      return std::log(v);
    case Func::Cosh:
      return std::cosh(v);
    case Func::Sinh:
      return std::sinh(v);
    case Func::Sqrt:
      if (v < 0.0) throw Error(ErrorCode::DomainError, "sqrt of a negative value");
      return std::sqrt(v);
    case Func::Abs:
      return std::abs(v);
  }
  return v;
}

double eval_node(const Expr& e, EvalContext& ctx);

double eval_coord(const Coord& c, EvalContext& ctx) {
  const double k = as_integer(eval_node(*c.index, ctx), "coordinate index");
  if (k < 1.0) throw Error(ErrorCode::OutOfRange, "coordinate index below 1");
  const auto idx = static_cast<std::size_t>(k);
  if (c.cap && idx > *c.cap) return 0.0;
  switch (ctx.mode) {
    case CoordMode::Single:
      return idx == ctx.single_index ? ctx.single_value : 0.0;
    case CoordMode::Truncated:
      return idx <= ctx.point.size() ? ctx.point[idx - 1] : 0.0;
    case CoordMode::Strict:
      break;
  }
  if (idx > ctx.point.size()) {
    throw Error(ErrorCode::OutOfRange,
                "x[" + std::to_string(idx) + "] outside a point of dimension " +
                    std::to_string(ctx.point.size()));
  }
  return ctx.point[idx - 1];
}

double eval_aggregate(const Aggregate& a, EvalContext& ctx) {
  const double lo = as_integer(eval_node(*a.lo, ctx), "aggregator lower limit");
  double hi;
  if (a.hi) {
    hi = as_integer(eval_node(*a.hi, ctx), "aggregator upper limit");
  } else if (ctx.mode == CoordMode::Truncated) {
    hi = static_cast<double>(ctx.point.size());
  } else {
    throw Error(ErrorCode::NotTruncated, "infinite " +
                                             std::string(a.kind == AggKind::Sum ? "sum" : "prod") +
                                             " must be truncated before evaluation");
  }
  if (ctx.env.size() <= a.slot) ctx.env.resize(a.slot + 1, 0.0);
  double acc = a.kind == AggKind::Sum ? 0.0 : 1.0;
  for (double i = lo; i <= hi; i += 1.0) {
    ctx.env[a.slot] = i;
    const double v = eval_node(*a.body, ctx);
    acc = a.kind == AggKind::Sum ? acc + v : acc * v;
  }
  return acc;
}

double eval_node(const Expr& e, EvalContext& ctx) {
  return std::visit(
      [&](const auto& n) -> double {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Number>) {
          return n.value;
        } else if constexpr (std::is_same_v<T, Index>) {
          if (n.slot >= ctx.env.size()) {
            throw Error(ErrorCode::EvaluationError, "index '" + n.name + "' has no value");
          }
          return ctx.env[n.slot];
        } else if constexpr (std::is_same_v<T, Coord>) {
          return eval_coord(n, ctx);
        } else if constexpr (std::is_same_v<T, Neg>) {
          return -eval_node(*n.operand, ctx);
        } else if constexpr (std::is_same_v<T, Binary>) {
          const double l = eval_node(*n.lhs, ctx);
          const double r = eval_node(*n.rhs, ctx);
          switch (n.op) {
            case BinaryOp::Add:
              return l + r;
            case BinaryOp::Sub:
              return l - r;
            case BinaryOp::Mul:
              return l * r;
            case BinaryOp::Div:
              if (r == 0.0) throw Error(ErrorCode::DomainError, "division by zero");
              return l / r;
            case BinaryOp::Pow:
              return apply_pow(l, r);
          }
          return 0.0;
        } else if constexpr (std::is_same_v<T, Call>) {
          return apply(n.func, eval_node(*n.arg, ctx));
        } else {
          return eval_aggregate(n, ctx);
        }
      },
      e.node);
}

}  // namespace

double eval(const Expr& e, std::span<const double> point, const IndexEnv& env) {
  EvalContext ctx{CoordMode::Strict, point, 0, 0.0, env};
  return eval_node(e, ctx);
}

double eval_truncated(const Expr& e, std::span<const double> point, const IndexEnv& env) {
  EvalContext ctx{CoordMode::Truncated, point, 0, 0.0, env};
  return eval_node(e, ctx);
}

double eval_single(const Expr& e, std::size_t coordinate, double value, const IndexEnv& env) {
  EvalContext ctx{CoordMode::Single, {}, coordinate, value, env};
  return eval_node(e, ctx);
}

// ---------------------------------------------------------------------------
// Structural queries

namespace {

template <typename Pred>
bool any_node(const Expr& e, const Pred& pred) {
  if (pred(e)) return true;
  return std::visit(
      [&](const auto& n) -> bool {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Coord>) {
          return any_node(*n.index, pred);
        } else if constexpr (std::is_same_v<T, Neg>) {
          return any_node(*n.operand, pred);
        } else if constexpr (std::is_same_v<T, Binary>) {
          return any_node(*n.lhs, pred) || any_node(*n.rhs, pred);
        } else if constexpr (std::is_same_v<T, Call>) {
          return any_node(*n.arg, pred);
        } else if constexpr (std::is_same_v<T, Aggregate>) {
          return any_node(*n.lo, pred) || (n.hi && any_node(*n.hi, pred)) ||
                 any_node(*n.body, pred);
        } else {
          return false;
        }
      },
      e.node);
}

}  // namespace

bool references_coordinates(const Expr& e) {
  return any_node(e, [](const Expr& n) { return std::holds_alternative<Coord>(n.node); });
}

bool references_slot(const Expr& e, std::size_t slot) {
  return any_node(e, [slot](const Expr& n) {
    const auto* i = std::get_if<Index>(&n.node);
    return i && i->slot == slot;
  });
}

bool coordinates_only_at_slot(const Expr& e, std::size_t slot) {
  return !any_node(e, [slot](const Expr& n) {
    const auto* c = std::get_if<Coord>(&n.node);
    if (!c) return false;
    const auto* i = std::get_if<Index>(&c->index->node);
    return !i || i->slot != slot;
  });
}

// ---------------------------------------------------------------------------
// Interval enclosures

namespace {

using MaybeInterval = std::optional<Interval>;

constexpr std::size_t kMaxBoundIterations = 1'000'000;

MaybeInterval make(double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b)) return std::nullopt;
  return Interval{std::min(a, b), std::max(a, b)};
}

MaybeInterval hull4(double a, double b, double c, double d) {
  return make(std::min({a, b, c, d}), std::max({a, b, c, d}));
}

struct BoundsContext {
  std::span<const double> sides;
  IndexEnv env;
  std::size_t iterations = 0;
};

MaybeInterval bound_node(const Expr& e, BoundsContext& ctx);

std::optional<double> point_value(const Expr& e, BoundsContext& ctx) {
  if (references_coordinates(e)) return std::nullopt;
  try {
    return eval(e, {}, ctx.env);
  } catch (const Error&) {
    return std::nullopt;
  }
}

MaybeInterval bound_pow(Interval b, Interval x) {
  if (x.lo == x.hi) {
    const double p = x.lo;
    if (b.lo >= 0.0) {
      if (p < 0.0 && b.lo == 0.0) return std::nullopt;
      return make(std::pow(b.lo, p), std::pow(b.hi, p));
    }
    if (p == std::round(p) && p >= 0.0) {
      const double a = std::pow(b.lo, p);
      const double c = std::pow(b.hi, p);
      if (static_cast<long long>(p) % 2 == 0) return make(0.0, std::max(a, c));
      return make(a, c);
    }
    return std::nullopt;
  }
  if (b.lo > 0.0 || (b.lo >= 0.0 && x.lo > 0.0)) {
    return hull4(std::pow(b.lo, x.lo), std::pow(b.lo, x.hi), std::pow(b.hi, x.lo),
                 std::pow(b.hi, x.hi));
  }
  return std::nullopt;
}

MaybeInterval bound_call(Func f, Interval v) {
  switch (f) {
    case Func::Exp:
      return make(std::exp(v.lo), std::exp(v.hi));
    case Func::Log:
      if (v.lo <= 0.0) return std::nullopt;
      return make(std::log(v.lo), std::log(v.hi));
    case Func::Cosh:
      if (v.lo <= 0.0 && v.hi >= 0.0) return make(1.0, std::max(std::cosh(v.lo), std::cosh(v.hi)));
      return make(std::cosh(v.lo), std::cosh(v.hi));
    case Func::Sinh:
      return make(std::sinh(v.lo), std::sinh(v.hi));
    case Func::Sqrt:
      if (v.lo < 0.0) return std::nullopt;
      return make(std::sqrt(v.lo), std::sqrt(v.hi));
    case Func::Abs:
      if (v.lo >= 0.0) return v;
      if (v.hi <= 0.0) return make(-v.hi, -v.lo);
      return make(0.0, std::max(-v.lo, v.hi));
  }
  return std::nullopt;
}

MaybeInterval bound_node(const Expr& e, BoundsContext& ctx) {
  return std::visit(
      [&](const auto& n) -> MaybeInterval {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Number>) {
          return make(n.value, n.value);
        } else if constexpr (std::is_same_v<T, Index>) {
          if (n.slot >= ctx.env.size()) return std::nullopt;
          return make(ctx.env[n.slot], ctx.env[n.slot]);
        } else if constexpr (std::is_same_v<T, Coord>) {
          auto k = point_value(*n.index, ctx);
          if (!k || *k < 1.0) return std::nullopt;
          const auto idx = static_cast<std::size_t>(std::llround(*k));
          if ((n.cap && idx > *n.cap) || idx > ctx.sides.size()) return make(0.0, 0.0);
          return make(0.0, ctx.sides[idx - 1]);
        } else if constexpr (std::is_same_v<T, Neg>) {
          auto v = bound_node(*n.operand, ctx);
          if (!v) return std::nullopt;
          return make(-v->hi, -v->lo);
        } else if constexpr (std::is_same_v<T, Binary>) {
          auto l = bound_node(*n.lhs, ctx);
          auto r = bound_node(*n.rhs, ctx);
          if (!l || !r) return std::nullopt;
          switch (n.op) {
            case BinaryOp::Add:
              return make(l->lo + r->lo, l->hi + r->hi);
            case BinaryOp::Sub:
              return make(l->lo - r->hi, l->hi - r->lo);
            case BinaryOp::Mul:
              return hull4(l->lo * r->lo, l->lo * r->hi, l->hi * r->lo, l->hi * r->hi);
            case BinaryOp::Div:
              if (r->lo <= 0.0 && r->hi >= 0.0) return std::nullopt;
              return hull4(l->lo / r->lo, l->lo / r->hi, l->hi / r->lo, l->hi / r->hi);
            case BinaryOp::Pow:
              return bound_pow(*l, *r);
          }
          return std::nullopt;
        } else if constexpr (std::is_same_v<T, Call>) {
          auto v = bound_node(*n.arg, ctx);
          if (!v) return std::nullopt;
          return bound_call(n.func, *v);
        } else {
          if (!n.hi) return std::nullopt;
          auto lo = point_value(*n.lo, ctx);
          auto hi = point_value(*n.hi, ctx);
          if (!lo || !hi) return std::nullopt;
          if (ctx.env.size() <= n.slot) ctx.env.resize(n.slot + 1, 0.0);
          Interval acc = n.kind == AggKind::Sum ? Interval{0.0, 0.0} : Interval{1.0, 1.0};
          for (double i = std::round(*lo); i <= std::round(*hi); i += 1.0) {
            if (++ctx.iterations > kMaxBoundIterations) return std::nullopt;
            ctx.env[n.slot] = i;
            auto v = bound_node(*n.body, ctx);
            if (!v) return std::nullopt;
            MaybeInterval next = n.kind == AggKind::Sum
                                     ? make(acc.lo + v->lo, acc.hi + v->hi)
                                     : hull4(acc.lo * v->lo, acc.lo * v->hi, acc.hi * v->lo,
                                             acc.hi * v->hi);
            if (!next) return std::nullopt;
            acc = *next;
          }
          return acc;
        }
      },
      e.node);
}

}  // namespace

std::optional<Interval> bounds(const Expr& e, std::span<const double> sides, const IndexEnv& env) {
  BoundsContext ctx{sides, env};
  return bound_node(e, ctx);
}

}  // namespace hq::expr
