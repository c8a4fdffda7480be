#include "hq/catalog.hpp"

#include <charconv>
#include <cmath>
#include <numbers>

#include "hq/error.hpp"

namespace hq {

namespace {

// exp(Σ max(0, log a_n)·w(n)): an upper bound for every partial product
// ∏_{n≤L} x_n^{w(n)} with 0 ≤ x_n ≤ a_n.
std::optional<double> product_sup(const ConvergentRectangle& rect,
                                  const std::function<double(std::size_t)>& weight) {
  if (rect.sup_side() && *rect.sup_side() <= 1.0) return 1.0;
  const auto r = infinite_series(
      1, [&](std::size_t n) { return std::max(0.0, std::log(rect.side(n))) * weight(n); });
  if (!r.value) return std::nullopt;
  return std::exp(*r.value + r.residual);
}

// ∏_{n≤L} x_n^{w(n)} as exp Σ w(n) log x_n, stopping at the first zero.
template <typename Weight>
double coordinate_product(std::span<const double> x, const Weight& w) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double v = x[i];
    if (v == 0.0) return 0.0;
    if (v != 1.0) s += w(i + 1) * std::log(v);
  }
  return std::exp(s);
}

double inv_square(std::size_t n) {
  const auto d = static_cast<double>(n);
  return 1.0 / (d * d);
}

double inv_pow2(std::size_t n) { return std::ldexp(1.0, -static_cast<int>(std::min<std::size_t>(n, 2000))); }

}  // namespace

std::vector<CatalogIntegrand> catalog_integrands() {
  return {
      {"wallis-sum", "sum(i, 1, inf, x[i]/i^2)", "separable sum of x_i/i^2",
       "sum of a_i^2/(2 i^2) times the Wallis volume", "wallis"},
      {"sec9-ex1", "1/(2 - prod(n, 1, inf, x[n]^(1/n^2)))",
       "geometric function of a coordinate-wise product",
       "sum over k >= 1 of 2^(-k-1) sqrt(k) pi csch(pi sqrt(k)), plus 1/2", "unit"},
      {"sec9-ex2", "cosh(prod(n, 1, inf, x[n]^(1/2^n)))", "cosh of a coordinate-wise product",
       "sum over k >= 0 of prod_n 2^n/(2k + 2^n) / (2k)!", "unit"},
      {"const:<c>", "<c>", "constant function", "c times the volume", "unit"},
  };
}

CoordinateFunction wallis_sum(std::shared_ptr<const ConvergentRectangle> rect) {
  CoordinateFunction f(
      [](std::span<const double> x) {
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * inv_square(i + 1);
        return s;
      },
      rect, "wallis-sum");
  SeparableSum s;
  s.term = [](std::size_t i, double v) { return v * inv_square(i); };
  s.primitive = [](std::size_t i, double a) { return 0.5 * a * a * inv_square(i); };
  f = f.with_analytic(AnalyticForm::separable(std::move(s), "sum x_i/i^2"));
  std::optional<double> hi;
  if (auto sup = rect->sup_side()) {
    hi = *sup * std::numbers::pi * std::numbers::pi / 6.0;
  } else if (auto r = infinite_series(1, [&](std::size_t i) { return rect->side(i) * inv_square(i); });
             r.value) {
    hi = *r.value + r.residual;
  }
  if (hi) f = f.with_range(Interval{0.0, *hi});
  return f;
}

CoordinateFunction sec9_ex1(std::shared_ptr<const ConvergentRectangle> rect) {
  CoordinateFunction f(
      [](std::span<const double> x) { return 1.0 / (2.0 - coordinate_product(x, inv_square)); },
      rect, "sec9-ex1");
  ProductForm p;
  p.psi = PowerSeries::geometric(2.0);
  p.exponent = inv_square;
  p.phi = [](std::size_t i, double v) { return std::pow(v, inv_square(i)); };
  f = f.with_analytic(AnalyticForm::product(std::move(p), "prod x_n^(1/n^2)"));
  if (auto sup = product_sup(*rect, inv_square); sup && *sup < 2.0) {
    f = f.with_range(Interval{0.5, 1.0 / (2.0 - *sup)});
  }
  return f;
}

CoordinateFunction sec9_ex2(std::shared_ptr<const ConvergentRectangle> rect) {
  CoordinateFunction f(
      [](std::span<const double> x) { return std::cosh(coordinate_product(x, inv_pow2)); }, rect,
      "sec9-ex2");
  ProductForm p;
  p.psi = PowerSeries::cosh();
  p.exponent = inv_pow2;
  p.phi = [](std::size_t i, double v) { return std::pow(v, inv_pow2(i)); };
  f = f.with_analytic(AnalyticForm::product(std::move(p), "prod x_n^(1/2^n)"));
  if (auto sup = product_sup(*rect, inv_pow2)) f = f.with_range(Interval{1.0, std::cosh(*sup)});
  return f;
}

std::optional<CoordinateFunction> catalog_function(
    std::string_view name, std::shared_ptr<const ConvergentRectangle> rect) {
  if (name.starts_with("catalog:")) name.remove_prefix(8);
  if (name == "wallis-sum") return wallis_sum(std::move(rect));
  if (name == "sec9-ex1") return sec9_ex1(std::move(rect));
  if (name == "sec9-ex2") return sec9_ex2(std::move(rect));
  if (name.starts_with("const:")) {
    const std::string_view num = name.substr(6);
    double c = 0.0;
    const auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), c);
    if (ec != std::errc() || ptr != num.data() + num.size() || !std::isfinite(c)) {
      throw Error(ErrorCode::InvalidArgument, "bad constant in '" + std::string(name) + "'");
    }
    return CoordinateFunction::constant(c, std::move(rect))
        .with_description("const:" + std::string(num));
  }
  return std::nullopt;
}

CoordinateFunction resolve_integrand(std::string_view name,
                                     std::shared_ptr<const ConvergentRectangle> rect) {
  if (auto f = catalog_function(name, rect)) return *f;
  if (name.starts_with("catalog:")) {
    throw Error(ErrorCode::InvalidArgument, "unknown catalog integrand '" + std::string(name) + "'");
  }
  return CoordinateFunction::from_expression(name, std::move(rect));
}

std::string default_rectangle_for(std::string_view name) {
  if (name.starts_with("catalog:")) name.remove_prefix(8);
  return name == "wallis-sum" ? "wallis" : "unit";
}

DeltaSequence perturbed_sequence(const CoordinateFunction& f) {
  return DeltaSequence(
      [f](std::size_t n) {
        return (f + CoordinateFunction::constant(std::ldexp(1.0, -static_cast<int>(std::min<std::size_t>(n, 1000))),
                                                 f.domain_ptr()))
            .with_description(f.description() + " + 2^-" + std::to_string(n));
      },
      f, f.description() + " + 2^-n");
}

DeltaSequence alternating_sequence(const CoordinateFunction& f) {
  const CoordinateFunction shifted =
      (f + CoordinateFunction::constant(1.0, f.domain_ptr())).with_description(f.description() + " + 1");
  return DeltaSequence([f, shifted](std::size_t n) { return n % 2 == 1 ? f : shifted; }, f,
                       f.description() + " alternating with +1");
}

std::shared_ptr<const ConvergentRectangle> shared_rectangle(std::string_view name) {
  auto r = catalog_rectangle(name);
  if (!r) throw Error(ErrorCode::InvalidArgument, "unknown rectangle '" + std::string(name) + "'");
  return std::make_shared<const ConvergentRectangle>(std::move(*r));
}

}  // namespace hq
