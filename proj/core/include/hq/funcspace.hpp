#pragma once

// Functions on convergent rectangles, their δ-sequences and truncations.
//
// A CoordinateFunction is evaluated on finitely supported points: calling it
// with x = (x_1..x_n) yields its level-n truncation, where infinite sums and
// products are cut at n and coordinates past n read as 0. The tilde/hat
// operators of a DeltaSequence are built on top of that convention.

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "hq/expr.hpp"
#include "hq/rectangle.hpp"

namespace hq {

using expr::Interval;

/// Memoized power-series coefficients c_0, c_1, ...; safe to share across
/// threads.
class PowerSeries {
 public:
  /// recurrence(k, self) returns c_k and may read self[j] for j < k.
  using Recurrence = std::function<double(std::size_t, const PowerSeries&)>;

  PowerSeries();  // the zero series
  explicit PowerSeries(Recurrence recurrence, std::string name = {});

  static PowerSeries identity();
  static PowerSeries constant(double c);
  /// Finite coefficient list, zero afterwards.
  static PowerSeries polynomial(std::vector<double> coeffs, std::string name = {});
  /// 1/(a − t) = Σ t^k / a^{k+1}.
  static PowerSeries geometric(double a);
  static PowerSeries cosh();
  static PowerSeries exp();

  double operator[](std::size_t k) const;

  PowerSeries scaled(double k) const;
  /// ψ(w·t).
  PowerSeries dilated(double w) const;
  PowerSeries plus(const PowerSeries& other) const;
  PowerSeries times(const PowerSeries& other) const;
  PowerSeries reciprocal() const;
  /// ψ^p for real p; needs c_0 > 0 unless p is a non-negative integer.
  PowerSeries power(double p) const;
  PowerSeries exponential() const;
  PowerSeries logarithm() const;

  /// True for the series of t itself.
  bool is_identity() const { return identity_; }
  /// Known polynomial degree; coefficients past it are zero.
  std::optional<std::size_t> degree() const { return degree_; }
  const std::string& name() const { return name_; }

 private:
  struct State;
  std::shared_ptr<State> state_;
  bool identity_ = false;
  std::optional<std::size_t> degree_;
  std::string name_;
};

/// Σ_{i=first}^{last} term(i, x_i).
struct SeparableSum {
  std::function<double(std::size_t, double)> term;
  std::size_t first = 1;
  std::optional<std::size_t> last;
  /// Closed-form ∫_0^a term(i, x) dx, when known.
  std::function<double(std::size_t, double)> primitive;
};

/// ψ(∏_{i=first}^{last} φ_i(x_i)); the product is infinite without `last`.
struct ProductForm {
  PowerSeries psi;
  std::function<double(std::size_t, double)> phi;
  /// When set, φ_i(x) = x^{exponent(i)}.
  std::function<double(std::size_t)> exponent;
  std::size_t first = 1;
  std::optional<std::size_t> last;
};

struct AnalyticComponent {
  std::variant<SeparableSum, ProductForm> form;
  std::string label;
};

/// constant + Σ weight·component: the structure the analytic engine integrates
/// exactly, dimension by dimension.
struct AnalyticForm {
  double constant = 0.0;
  std::vector<std::pair<double, std::shared_ptr<const AnalyticComponent>>> terms;

  AnalyticForm scaled(double k) const;
  /// Sums two forms; identical components have their weights merged and
  /// zero weights are dropped.
  static AnalyticForm add(const AnalyticForm& a, const AnalyticForm& b);

  static AnalyticForm separable(SeparableSum s, std::string label);
  static AnalyticForm product(ProductForm p, std::string label);

  /// The same form with every component restricted to coordinates i ≤ n.
  AnalyticForm truncated(std::size_t n) const;
  /// Value at x = (x_1..x_n), with sums and products cut at n.
  double evaluate(std::span<const double> x) const;

  bool is_constant() const { return terms.empty(); }
};

/// Recognizes sums of single-coordinate terms and analytic functions of one
/// coordinate-wise product in an integrand expression.
std::optional<AnalyticForm> recognize_structure(const expr::ExprPtr& e);

class CoordinateFunction {
 public:
  using Body = std::function<double(std::span<const double>)>;

  CoordinateFunction(Body body, std::shared_ptr<const ConvergentRectangle> domain,
                     std::string description);

  static CoordinateFunction constant(double c, std::shared_ptr<const ConvergentRectangle> domain);
  /// Integrand from the expression language; structure and (for finite
  /// expressions) a range are inferred.
  static CoordinateFunction from_expression(expr::ExprPtr ast,
                                            std::shared_ptr<const ConvergentRectangle> domain);
  static CoordinateFunction from_expression(std::string_view src,
                                            std::shared_ptr<const ConvergentRectangle> domain);

  /// Level-n truncation at x = (x_1..x_n).
  double operator()(std::span<const double> x) const { return body_(x); }

  const ConvergentRectangle& domain() const { return *domain_; }
  const std::shared_ptr<const ConvergentRectangle>& domain_ptr() const { return domain_; }
  const std::string& description() const { return description_; }
  const expr::ExprPtr& expression() const { return expression_; }
  const std::optional<AnalyticForm>& analytic() const { return analytic_; }
  /// Declared enclosure of the function's values.
  const std::optional<Interval>& range() const { return range_; }
  /// sup |f| implied by the range.
  std::optional<double> bound() const;
  const std::string& derived_from() const { return derived_from_; }

  CoordinateFunction with_analytic(std::optional<AnalyticForm> form) const;
  CoordinateFunction with_range(std::optional<Interval> range) const;
  CoordinateFunction with_description(std::string description) const;
  CoordinateFunction with_derived_from(std::string origin) const;

 private:
  Body body_;
  std::shared_ptr<const ConvergentRectangle> domain_;
  std::string description_;
  expr::ExprPtr expression_;
  std::optional<AnalyticForm> analytic_;
  std::optional<Interval> range_;
  std::string derived_from_;
};

/// Pointwise sum; throws Error{DomainMismatch} for different rectangles.
CoordinateFunction operator+(const CoordinateFunction& a, const CoordinateFunction& b);
CoordinateFunction operator*(double k, const CoordinateFunction& f);
CoordinateFunction abs(const CoordinateFunction& f);

/// Single-variable map with a Lipschitz modulus.
struct LipschitzMap {
  std::function<double(double)> fn;
  double modulus = 1.0;
  std::string name;
  /// Interval on which the modulus is claimed; values of the argument
  /// function must stay inside it.
  std::optional<Interval> valid_on;
  /// Taylor coefficients at 0 when the map is analytic there.
  std::optional<PowerSeries> series;
};

/// g ∘ f without modulus checks.
CoordinateFunction compose(const LipschitzMap& g, const CoordinateFunction& f);

class DeltaSequence {
 public:
  using Generator = std::function<CoordinateFunction(std::size_t)>;

  /// f_n = f for every n.
  static DeltaSequence regular(CoordinateFunction f);
  DeltaSequence(Generator generator, CoordinateFunction limit, std::string description);

  /// f_n, n ≥ 1.
  CoordinateFunction term(std::size_t n) const;
  const CoordinateFunction& limit() const { return limit_; }
  bool is_regular() const { return regular_; }
  const ConvergentRectangle& domain() const { return limit_.domain(); }
  const std::string& description() const { return description_; }

 private:
  Generator generator_;
  CoordinateFunction limit_;
  std::string description_;
  bool regular_ = false;
};

/// x ↦ f_n(x_1..x_n, 0, 0, ...) on the whole rectangle.
CoordinateFunction tilde(const DeltaSequence& seq, std::size_t n);

/// f_n restricted to ×_{i≤n} I_i; rejects points of any other dimension.
class FiniteFunction {
 public:
  FiniteFunction(std::size_t dim, CoordinateFunction::Body body)
      : dim_(dim), body_(std::move(body)) {}

  std::size_t dim() const { return dim_; }
  double operator()(std::span<const double> x) const;

 private:
  std::size_t dim_;
  CoordinateFunction::Body body_;
};

FiniteFunction hat(const DeltaSequence& seq, std::size_t n);

DeltaSequence combine_sum(const DeltaSequence& a, const DeltaSequence& b);
DeltaSequence combine_scale(double k, const DeltaSequence& a);
DeltaSequence combine_abs(const DeltaSequence& a);
/// g ∘ f_n; throws Error{ModulusViolated} when sampling contradicts the
/// declared modulus or the argument leaves g.valid_on.
DeltaSequence compose_lipschitz(const LipschitzMap& g, const DeltaSequence& a);

struct SampleBudget {
  std::vector<double> eps_grid{1e-1, 1e-2, 1e-3};
  std::size_t points = 4096;
  /// Coordinates past dim_cap are frozen on the sheets {0} and {a_i}. The
  /// checks lower it to half the top ladder level when it is larger.
  std::size_t dim_cap = 64;
  /// Ladder levels are 1 and 2^j, 2^j + 1 up to ladder_max.
  std::size_t ladder_max = 4096;
  /// Level at which the limit function is evaluated for δ-uniform checks.
  std::size_t limit_level = 16384;
  /// Doublings over which a non-decaying gap counts as a failure.
  std::size_t window = 3;
  unsigned workers = 0;
};

enum class Verdict { Pass, Fail, Inconclusive };
enum class Sheet { Zero, Upper };

std::string_view to_string(Verdict v) noexcept;
std::string_view to_string(Sheet s) noexcept;

struct Witness {
  std::size_t n = 0;
  /// Second level of the pair; nullopt means the limit function.
  std::optional<std::size_t> m;
  std::size_t sample = 0;
  Sheet sheet = Sheet::Zero;
  /// Coordinates x_1..x_{dim_cap} of the sample point.
  std::vector<double> head;
  double gap = 0.0;
};

struct EpsilonOutcome {
  double eps = 0.0;
  Verdict verdict = Verdict::Inconclusive;
  std::optional<std::size_t> N;
  double sup_gap = 0.0;
  std::optional<Witness> witness;
};

struct CauchyReport {
  enum class Kind { Cauchy, Uniform };
  Kind kind = Kind::Cauchy;
  SampleBudget budget;
  std::vector<std::size_t> ladder;
  /// Largest sampled gap over pairs (n, m) with both at or above each level.
  std::vector<double> level_gaps;
  std::vector<EpsilonOutcome> outcomes;
  Verdict verdict = Verdict::Inconclusive;
};

std::vector<std::size_t> sampling_ladder(std::size_t ladder_max);

/// Empirical δ-Cauchy check: sup_x |f̃_n(x) − f̃_m(x)| over a ladder of levels.
CauchyReport check_delta_cauchy(const DeltaSequence& seq, const SampleBudget& budget = {});
/// Empirical δ-uniform check of f̃_n against the sequence's limit.
CauchyReport check_delta_uniform(const DeltaSequence& seq, const SampleBudget& budget = {});

/// Sample point used by the checks: Kronecker head scaled to the sides, then
/// the given sheet, `length` coordinates in total.
std::vector<double> sample_point(const ConvergentRectangle& rect, std::size_t sample,
                                 std::size_t dim_cap, Sheet sheet, std::size_t length);

}  // namespace hq
