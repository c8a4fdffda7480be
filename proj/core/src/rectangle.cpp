#include "hq/rectangle.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "hq/detail/summation.hpp"
#include "hq/error.hpp"

namespace hq {

std::string_view to_string(VolumeClass c) noexcept {
  switch (c) {
    case VolumeClass::NonDegenerate: return "NonDegenerate";
    case VolumeClass::Degenerate: return "Degenerate";
    case VolumeClass::Divergent: return "Divergent";
    case VolumeClass::Unknown: return "Unknown";
  }
  return "Unknown";
}

// ---------------------------------------------------------------------------
// TailRule

TailRule TailRule::constant(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw Error(ErrorCode::NonPositiveBound, "tail constant must be positive and finite");
  }
  TailRule r;
  r.constant_ = c;
  std::ostringstream os;
  os.precision(17);
  os << c;
  r.description_ = os.str();
  if (c == 1.0) {
    r.analytic_ = 1.0;
    r.provenance_ = "all factors equal 1";
  }
  return r;
}

TailRule TailRule::formula(std::string_view src) {
  static const std::vector<std::string> kFree{"i"};
  return formula(expr::parse(src, kFree));
}

TailRule TailRule::formula(expr::ExprPtr ast) {
  if (expr::references_coordinates(*ast)) {
    throw Error(ErrorCode::InvalidArgument, "a tail rule cannot reference coordinates");
  }
  if (!expr::references_slot(*ast, 0)) {
    return constant(expr::eval(*ast, {}, {1.0}));
  }
  TailRule r;
  r.description_ = expr::to_string(*ast);
  r.ast_ = std::move(ast);
  return r;
}

TailRule TailRule::native(Native fn, std::string description) {
  TailRule r;
  r.native_ = std::move(fn);
  r.description_ = std::move(description);
  return r;
}

TailRule TailRule::with_analytic_product(double product_from_one, std::string provenance) const {
  TailRule r = *this;
  r.analytic_ = product_from_one;
  r.provenance_ = std::move(provenance);
  return r;
}

double TailRule::operator()(std::size_t i) const {
  if (constant_) return *constant_;
  if (ast_) return expr::eval(*ast_, {}, {static_cast<double>(i)});
  return native_(i);
}

// ---------------------------------------------------------------------------
// Infinite products

namespace {

const double kLogMin = std::log(DBL_MIN) / 2.0;
const double kLogMax = std::log(DBL_MAX) / 2.0;

// Checks beyond this many tail terms are allowed to classify by trend.
constexpr std::size_t kTrendMinTerms = 1024;

double checked_log(double a, std::size_t i) {
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw Error(ErrorCode::NonPositiveBound,
                "a_" + std::to_string(i) + " = " + std::to_string(a) + " is not a positive real");
  }
  return std::log(a);
}

// One Aitken delta-squared pass; the output is two entries shorter.
std::vector<double> aitken(const std::vector<double>& s) {
  std::vector<double> out;
  for (std::size_t t = 2; t < s.size(); ++t) {
    const double d1 = s[t] - s[t - 1];
    const double d0 = s[t - 1] - s[t - 2];
    const double den = d1 - d0;
    if (den == 0.0 || !std::isfinite(d1 * d1 / den)) {
      out.push_back(s[t]);
    } else {
      out.push_back(s[t] - d1 * d1 / den);
    }
  }
  return out;
}

// Repeatedly accelerated estimate (up to three Aitken passes) of the limit of
// the log partial sums, or the last raw value while too few checkpoints exist.
double accelerated(const std::vector<double>& s) {
  std::vector<double> a = s;
  for (int pass = 0; pass < 3 && a.size() >= 3; ++pass) a = aitken(a);
  return a.back();
}

}  // namespace

VolumeReport infinite_product(std::span<const double> prefix,
                              const std::function<double(std::size_t)>& factor,
                              const VolumeConfig& cfg) {
  if (!(cfg.tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tol must be positive");
  detail::CompensatedSum log_sum;
  for (std::size_t i = 0; i < prefix.size(); ++i) log_sum.add(checked_log(prefix[i], i + 1));

  const std::size_t m = prefix.size();
  std::size_t n = m;
  std::vector<double> checkpoints;  // log partial sums at n = m + 2^j
  std::vector<double> increments;   // log-sum change between checkpoints
  int raw_streak = 0;
  int accel_streak = 0;
  double prev_estimate = 0.0;
  double residual = 0.0;

  VolumeReport report;
  for (std::size_t step = 1;; step *= 2) {
    const std::size_t target = std::min(m + step, std::max(cfg.max_terms, m + 1));
    detail::CompensatedSum block;
    for (std::size_t i = n + 1; i <= target; ++i) block.add(checked_log(factor(i), i));
    n = target;
    const double inc = block.value();
    log_sum.add(inc);
    const double s = log_sum.value();
    report.n_terms = n;

    if (s < kLogMin) {
      report.classification = VolumeClass::Degenerate;
      report.value = 0.0;
      report.residual = std::exp(s);
      return report;
    }
    if (s > kLogMax) {
      report.classification = VolumeClass::Divergent;
      report.residual = std::numeric_limits<double>::infinity();
      return report;
    }

    if (!checkpoints.empty()) increments.push_back(inc);
    const double prev_raw = checkpoints.empty() ? 0.0 : checkpoints.back();
    checkpoints.push_back(s);

    if (increments.size() >= cfg.window && n - m >= kTrendMinTerms) {
      const auto first = increments.end() - static_cast<std::ptrdiff_t>(cfg.window);
      const bool all_neg = std::all_of(first, increments.end(), [](double d) { return d < 0.0; });
      const bool all_pos = std::all_of(first, increments.end(), [](double d) { return d > 0.0; });
      bool non_shrinking = true;
      for (auto it = first + 1; it != increments.end(); ++it) {
        if (std::abs(*it) < std::abs(*(it - 1)) * (1.0 - 1e-9)) non_shrinking = false;
      }
      if (non_shrinking && all_neg) {
        report.classification = VolumeClass::Degenerate;
        report.value = 0.0;
        report.residual = std::exp(s);
        return report;
      }
      if (non_shrinking && all_pos) {
        report.classification = VolumeClass::Divergent;
        report.residual = std::numeric_limits<double>::infinity();
        return report;
      }
    }

    if (checkpoints.size() >= 2) {
      const double p_now = std::exp(s);
      const double p_prev = std::exp(prev_raw);
      const double raw_diff = std::abs(p_now - p_prev);
      raw_streak = raw_diff < cfg.tol * std::max(1.0, p_prev) ? raw_streak + 1 : 0;

      const double estimate = accelerated(checkpoints);
      const double accel_diff = std::abs(std::exp(estimate) - std::exp(prev_estimate));
      const bool shrinking =
          increments.size() >= 2 &&
          std::abs(increments.back()) <= std::abs(increments[increments.size() - 2]);
      accel_streak = checkpoints.size() >= 6 && shrinking &&
                             accel_diff < cfg.tol * std::max(1.0, std::exp(prev_estimate))
                         ? accel_streak + 1
                         : 0;
      prev_estimate = estimate;
      residual = std::min(raw_diff, accel_diff);

      if (raw_streak >= 2) {
        report.classification = VolumeClass::NonDegenerate;
        report.value = p_now;
        report.residual = raw_diff;
        return report;
      }
      if (accel_streak >= 2) {
        report.classification = VolumeClass::NonDegenerate;
        report.value = std::exp(estimate);
        report.residual = accel_diff;
        return report;
      }
    } else {
      prev_estimate = s;
    }

    if (n >= cfg.max_terms) break;
  }
  report.classification = VolumeClass::Unknown;
  report.residual = residual;
  return report;
}

SeriesReport infinite_series(std::size_t first, const std::function<double(std::size_t)>& term,
                             const VolumeConfig& cfg) {
  if (!(cfg.tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "tol must be positive");
  detail::CompensatedSum sum;
  std::vector<double> checkpoints;
  std::size_t done = 0;
  int raw_streak = 0;
  int accel_streak = 0;
  double prev_inc = std::numeric_limits<double>::infinity();
  double prev_estimate = 0.0;
  SeriesReport report;
  for (std::size_t step = 1;; step *= 2) {
    const std::size_t target = std::min(step, std::max<std::size_t>(cfg.max_terms, 1));
    detail::CompensatedSum block;
    for (std::size_t k = done; k < target; ++k) {
      const double t = term(first + k);
      if (!std::isfinite(t)) {
        throw Error(ErrorCode::EvaluationError,
                    "series term " + std::to_string(first + k) + " is not finite");
      }
      block.add(t);
    }
    done = target;
    const double inc = block.value();
    sum.add(inc);
    const double s = sum.value();
    report.n_terms = done;
    checkpoints.push_back(s);
    if (checkpoints.size() >= 2) {
      const double scale = std::max(1.0, std::abs(s));
      raw_streak = std::abs(inc) < cfg.tol * scale ? raw_streak + 1 : 0;
      const double estimate = accelerated(checkpoints);
      const double accel_diff = std::abs(estimate - prev_estimate);
      accel_streak = checkpoints.size() >= 6 && std::abs(inc) <= std::abs(prev_inc) &&
                             accel_diff < cfg.tol * scale
                         ? accel_streak + 1
                         : 0;
      prev_estimate = estimate;
      if (raw_streak >= 2) {
        report.value = s;
        report.residual = std::abs(inc);
        return report;
      }
      if (accel_streak >= 2) {
        report.value = estimate;
        report.residual = accel_diff;
        return report;
      }
      report.residual = std::min(std::abs(inc), accel_diff);
    } else {
      prev_estimate = s;
    }
    prev_inc = inc;
    if (done >= cfg.max_terms) break;
  }
  return report;
}

// ---------------------------------------------------------------------------
// ConvergentRectangle

ConvergentRectangle::ConvergentRectangle(std::string name, std::vector<double> prefix,
                                         TailRule tail, const VolumeConfig& cfg)
    : name_(std::move(name)), prefix_(std::move(prefix)), tail_(std::move(tail)) {
  for (std::size_t i = 0; i < prefix_.size(); ++i) checked_log(prefix_[i], i + 1);
  if (auto c = tail_.constant_value()) {
    double s = *c;
    for (double a : prefix_) s = std::max(s, a);
    sup_side_ = s;
  }
  report_ = volume(*this, cfg);
}

double ConvergentRectangle::side(std::size_t i) const {
  if (i == 0) throw Error(ErrorCode::OutOfRange, "sides are indexed from 1");
  if (i <= prefix_.size()) return prefix_[i - 1];
  return tail_(i);
}

std::vector<double> ConvergentRectangle::sides(std::size_t n) const {
  std::vector<double> out(n);
  for (std::size_t i = 1; i <= n; ++i) out[i - 1] = side(i);
  return out;
}

double ConvergentRectangle::partial_volume(std::size_t n) const {
  double v = 1.0;
  for (std::size_t i = 1; i <= n; ++i) v *= side(i);
  return v;
}

ConvergentRectangle& ConvergentRectangle::set_sup_side(double s) {
  sup_side_ = s;
  return *this;
}

bool ConvergentRectangle::is_unit() const {
  return tail_.constant_value() == 1.0 &&
         std::all_of(prefix_.begin(), prefix_.end(), [](double a) { return a == 1.0; });
}

bool ConvergentRectangle::same_sides(const ConvergentRectangle& other) const {
  if (is_unit() && other.is_unit()) return true;
  return prefix_ == other.prefix_ && tail_.description() == other.tail_.description() &&
         tail_.constant_value() == other.tail_.constant_value();
}

std::string ConvergentRectangle::describe() const {
  std::ostringstream os;
  os.precision(17);
  if (!prefix_.empty()) {
    os << "prefix: ";
    for (std::size_t i = 0; i < prefix_.size(); ++i) os << (i ? ", " : "") << prefix_[i];
    os << "; ";
  }
  os << "tail: " << tail_.description();
  return os.str();
}

VolumeReport volume(const ConvergentRectangle& rect, const VolumeConfig& cfg) {
  const auto prefix = rect.prefix();
  const TailRule& tail = rect.tail();
  double prefix_product = 1.0;
  for (double a : prefix) prefix_product *= a;

  if (auto c = tail.constant_value(); c && *c != 1.0) {
    VolumeReport r;
    r.n_terms = prefix.size();
    r.analytic = true;
    if (*c < 1.0) {
      r.classification = VolumeClass::Degenerate;
      r.value = 0.0;
    } else {
      r.classification = VolumeClass::Divergent;
      r.residual = std::numeric_limits<double>::infinity();
    }
    return r;
  }

  if (const auto& analytic = tail.analytic_product()) {
    double head = 1.0;
    for (std::size_t i = 1; i <= prefix.size(); ++i) head *= tail(i);
    VolumeReport r;
    r.n_terms = prefix.size();
    r.analytic = true;
    r.value = prefix_product * (*analytic / head);
    r.classification = *r.value > 0.0 ? VolumeClass::NonDegenerate : VolumeClass::Degenerate;
    return r;
  }

  return infinite_product(prefix, [&tail](std::size_t i) { return tail(i); }, cfg);
}

double tail_product_bound(const ConvergentRectangle& rect, std::size_t n, std::size_t m) {
  if (rect.volume_class() != VolumeClass::NonDegenerate) {
    throw Error(ErrorCode::DegenerateRectangle,
                "tail products are only controlled on non-degenerate rectangles");
  }
  if (n <= rect.prefix().size() || m < n) {
    throw Error(ErrorCode::InvalidArgument, "need m >= n > prefix length");
  }
  detail::CompensatedSum s;
  for (std::size_t k = n; k <= m; ++k) s.add(checked_log(rect.side(k), k));
  return std::abs(std::expm1(s.value()));
}

// ---------------------------------------------------------------------------
// Catalog

std::vector<CatalogRectangle> builtin_catalog() {
  std::vector<CatalogRectangle> out;
  out.push_back({"unit", "Hilbert cube, a_i = 1",
                 ConvergentRectangle("unit", {}, TailRule::constant(1.0))});
  ConvergentRectangle wallis(
      "wallis", {},
      TailRule::native(
          [](std::size_t i) {
            const double q = 4.0 * static_cast<double>(i) * static_cast<double>(i);
            return q / (q - 1.0);
          },
          "4*i^2/(4*i^2 - 1)")
          .with_analytic_product(std::numbers::pi / 2.0, "Wallis product"));
  wallis.set_sup_side(4.0 / 3.0);
  out.push_back({"wallis", "Wallis rectangle, a_i = 4i^2/(4i^2-1)", std::move(wallis)});
  out.push_back({"degenerate_half", "degenerate rectangle, a_i = 1/2",
                 ConvergentRectangle("degenerate_half", {}, TailRule::constant(0.5))});
  return out;
}

std::optional<ConvergentRectangle> catalog_rectangle(std::string_view name) {
  for (auto& entry : builtin_catalog()) {
    if (entry.name == name) return std::move(entry.rect);
  }
  return std::nullopt;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

ConvergentRectangle parse_rectangle(std::string_view spec, const VolumeConfig& cfg) {
  spec = trim(spec);
  if (auto r = catalog_rectangle(spec)) return *r;

  std::vector<double> prefix;
  if (spec.starts_with("prefix:")) {
    const auto semi = spec.find(';');
    if (semi == std::string_view::npos) {
      throw Error(ErrorCode::InvalidArgument, "expected ';' after the prefix list");
    }
    std::string_view list = spec.substr(7, semi - 7);
    while (!trim(list).empty()) {
      const auto comma = list.find(',');
      const std::string item(trim(list.substr(0, comma)));
      const auto e = expr::parse(item);
      prefix.push_back(expr::eval(*e, {}));
      if (comma == std::string_view::npos) break;
      list.remove_prefix(comma + 1);
    }
    spec = trim(spec.substr(semi + 1));
  }
  if (!spec.starts_with("tail:")) {
    throw Error(ErrorCode::InvalidArgument,
                "unknown rectangle '" + std::string(spec) +
                    "' (expected a catalog name or 'tail: <expr in i>')");
  }
  return ConvergentRectangle("custom", std::move(prefix), TailRule::formula(spec.substr(5)), cfg);
}

}  // namespace hq
