#pragma once

// Expression language for integrands and rectangle tail rules.
//
// Grammar (whitespace-insensitive):
//
//   expr   := term (('+' | '-') term)*
//   term   := factor (('*' | '/') factor)*
//   factor := '-' factor | atom ('^' factor)?
//   atom   := number | 'pi' | 'x[' expr ']' | ident
//           | func '(' expr ')'
//           | ('sum' | 'prod') '(' ident ',' expr ',' (expr | 'inf') ',' expr ')'
//           | '(' expr ')'
//   func   := exp | log | cosh | sinh | sqrt | abs
//
// '+', '-', '*', '/' associate to the left, '^' to the right. Index variables
// are introduced only by sum/prod (or passed in as free indices, e.g. `i` for
// a tail rule) and may not be shadowed.

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace hq::expr {

enum class BinaryOp { Add, Sub, Mul, Div, Pow };
enum class Func { Exp, Log, Cosh, Sinh, Sqrt, Abs };
enum class AggKind { Sum, Prod };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Number {
  double value;
};

/// Reference to an index variable. `slot` is the binding depth: free indices
/// occupy the first slots, each enclosing aggregator adds one.
struct Index {
  std::string name;
  std::size_t slot;
};

/// Coordinate x[index]. After truncation at level n, `cap` is set and any
/// coordinate past it reads as 0.
struct Coord {
  ExprPtr index;
  std::optional<std::size_t> cap;
};

struct Neg {
  ExprPtr operand;
};

struct Binary {
  BinaryOp op;
  ExprPtr lhs;
  ExprPtr rhs;
};

struct Call {
  Func func;
  ExprPtr arg;
};

/// sum/prod over `var` from `lo` to `hi` inclusive; a null `hi` means infinity.
struct Aggregate {
  AggKind kind;
  std::string var;
  std::size_t slot;
  ExprPtr lo;
  ExprPtr hi;
  ExprPtr body;
};

struct Expr {
  std::variant<Number, Index, Coord, Neg, Binary, Call, Aggregate> node;
};

// Node constructors.
ExprPtr number(double value);
ExprPtr index(std::string name, std::size_t slot);
ExprPtr coord(ExprPtr index, std::optional<std::size_t> cap = std::nullopt);
ExprPtr neg(ExprPtr operand);
ExprPtr binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs);
ExprPtr call(Func func, ExprPtr arg);
ExprPtr aggregate(AggKind kind, std::string var, std::size_t slot, ExprPtr lo, ExprPtr hi,
                  ExprPtr body);

class ParseError : public std::runtime_error {
 public:
  enum class Kind { Syntax, UnboundIndex };

  ParseError(Kind kind, std::size_t position, std::string message,
             std::vector<std::string> expected = {});

  Kind kind() const noexcept { return kind_; }
  /// Byte offset into the source.
  std::size_t position() const noexcept { return position_; }
  const std::string& detail() const noexcept { return detail_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

 private:
  Kind kind_;
  std::size_t position_;
  std::string detail_;
  std::vector<std::string> expected_;
};

/// Parses `src`. Names in `free_indices` may appear unbound (slot = position
/// in the list); any other unbound identifier is an UnboundIndex error.
ExprPtr parse(std::string_view src, std::span<const std::string> free_indices = {});

/// Renders an expression in the grammar above; parse(to_string(e)) == e for
/// untruncated expressions without negative literals.
std::string to_string(const Expr& e);

bool structurally_equal(const Expr& a, const Expr& b);

/// Caps infinite aggregators at n and zeroes coordinates past n.
ExprPtr truncate(const ExprPtr& e, std::size_t n);

/// Values of bound index variables, indexed by slot.
using IndexEnv = std::vector<double>;

/// Strict evaluation. Requires a truncated expression (NotTruncated otherwise)
/// and coordinates inside `point` (OutOfRange otherwise).
double eval(const Expr& e, std::span<const double> point, const IndexEnv& env = {});

/// Evaluates as if `truncate(e, point.size())` had been applied first, without
/// rebuilding the tree.
double eval_truncated(const Expr& e, std::span<const double> point, const IndexEnv& env = {});

/// Evaluates a body in which the only coordinate read is x[index] with the
/// given value; every other coordinate reads as 0.
double eval_single(const Expr& e, std::size_t coordinate, double value, const IndexEnv& env);

bool references_coordinates(const Expr& e);
bool references_slot(const Expr& e, std::size_t slot);

/// True when every coordinate access in `e` is exactly x[<index in slot>].
bool coordinates_only_at_slot(const Expr& e, std::size_t slot);

struct Interval {
  double lo;
  double hi;
};

/// Interval enclosure of a finite expression (no infinite aggregators) when
/// coordinate k ranges over [0, sides[k-1]] and coordinates past the sides are 0.
std::optional<Interval> bounds(const Expr& e, std::span<const double> sides,
                               const IndexEnv& env = {});

}  // namespace hq::expr
