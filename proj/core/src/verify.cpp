#include "hq/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "hq/catalog.hpp"
#include "hq/error.hpp"
#include "hq/normspace.hpp"

namespace hq {

bool VerifyReport::passed() const { return failures() == 0; }

std::size_t VerifyReport::failures() const {
  return static_cast<std::size_t>(
      std::count_if(checks.begin(), checks.end(), [](const auto& c) { return !c.passed; }));
}

void VerifyReport::append(VerifyReport other) {
  for (auto& c : other.checks) checks.push_back(std::move(c));
  for (auto& w : other.warnings) warnings.push_back(std::move(w));
  seconds += other.seconds;
}

std::vector<std::string> default_integrands() {
  return {"wallis-sum", "sec9-ex1", "sec9-ex2", "const:1", "const:-0.5",
          "1/(2 - prod(n, 1, inf, x[n]^(1/n^2)))"};
}

ConvergenceConfig VerifyOptions::default_config() {
  ConvergenceConfig cfg;
  cfg.mc_samples = std::size_t{1} << 16;
  return cfg;
}

namespace {

std::string num(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

double noise(const IntegralResult& r) {
  return r.engine == Engine::MonteCarlo ? 3.0 * r.error_estimate : 0.0;
}

class Suite {
 public:
  explicit Suite(std::string name) : name_(std::move(name)), start_(std::chrono::steady_clock::now()) {}

  void add(std::string property, std::string subject, bool ok, std::string detail,
           std::optional<std::string> witness = std::nullopt) {
    if (!ok && !witness) witness = detail;
    report_.checks.push_back(
        {name_, std::move(property), std::move(subject), ok, std::move(detail),
         ok ? std::nullopt : std::move(witness)});
  }

  // Runs one check body; a thrown error fails the check instead of the run.
  template <typename Body>
  void guard(const std::string& property, const std::string& subject, Body&& body) {
    try {
      body();
    } catch (const std::exception& e) {
      add(property, subject, false, std::string("error: ") + e.what());
    }
  }

  void warn(std::string w) { report_.warnings.push_back(std::move(w)); }

  VerifyReport finish() {
    report_.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    return std::move(report_);
  }

 private:
  std::string name_;
  std::chrono::steady_clock::time_point start_;
  VerifyReport report_;
};

bool vacuous(const VerifyOptions& opts, Suite& suite) {
  if (!opts.integrands.empty()) return false;
  suite.warn("empty catalog: every property holds vacuously");
  return true;
}

CoordinateFunction abs_of(const CoordinateFunction& f, Fault fault) {
  CoordinateFunction a = abs(f);
  return fault == Fault::NegatedAbs ? (-1.0) * a : a;
}

class IntegralCache {
 public:
  explicit IntegralCache(const ConvergenceConfig& cfg) : cfg_(cfg) {}

  const IntegralResult& operator()(const CoordinateFunction& f) {
    const std::string key = f.domain().name() + "|" + f.description();
    auto it = cache_.find(key);
    if (it == cache_.end()) it = cache_.emplace(key, integrate(f, cfg_)).first;
    return it->second;
  }

 private:
  ConvergenceConfig cfg_;
  std::map<std::string, IntegralResult> cache_;
};

// f at a fixed set of sampled points and truncation levels.
std::vector<double> probe(const CoordinateFunction& f) {
  std::vector<double> out;
  for (Sheet sheet : {Sheet::Zero, Sheet::Upper}) {
    for (std::size_t level : {1, 2, 8, 64}) {
      for (std::size_t s = 0; s < 64; ++s) {
        out.push_back(f(sample_point(f.domain(), s, 64, sheet, level)));
      }
    }
  }
  return out;
}

struct Named {
  std::string name;
  CoordinateFunction f;
};

std::vector<Named> on_unit(const VerifyOptions& opts, Suite& suite) {
  const auto U = shared_rectangle("unit");
  std::vector<Named> out;
  for (const auto& name : opts.integrands) {
    suite.guard("construct", name, [&] { out.push_back({name, resolve_integrand(name, U)}); });
  }
  return out;
}

double tail_inverse_squares(std::size_t n) {
  double head = 0.0;
  for (std::size_t i = n; i >= 1; --i) head += 1.0 / (static_cast<double>(i) * static_cast<double>(i));
  return std::numbers::pi * std::numbers::pi / 6.0 - head;
}

}  // namespace

// ---------------------------------------------------------------------------

VerifyReport verify_integrals(const VerifyOptions& opts) {
  Suite suite("integrals");
  if (vacuous(opts, suite)) return suite.finish();
  const ConvergenceConfig& cfg = opts.cfg;
  const double slack = 10.0 * cfg.tol;
  IntegralCache I(cfg);
  const std::vector<Named> F = on_unit(opts, suite);

  std::vector<std::vector<double>> probes;
  for (const auto& [name, f] : F) probes.push_back(probe(f));

  for (std::size_t i = 0; i < F.size(); ++i) {
    for (std::size_t j = i; j < F.size(); ++j) {
      const std::string subject = F[i].name + " + " + F[j].name;
      suite.guard("linearity", subject, [&] {
        const auto& a = I(F[i].f);
        const auto& b = I(F[j].f);
        const auto& c = I(F[i].f + F[j].f);
        const double allowed = slack * std::max(1.0, std::abs(a.value) + std::abs(b.value)) +
                               noise(a) + noise(b) + noise(c);
        suite.add("linearity", subject, std::abs(c.value - a.value - b.value) <= allowed,
                  "int(f+g) = " + num(c.value) + ", int f + int g = " + num(a.value + b.value));
      });
    }
    for (double k : {-1.0, 2.5}) {
      const std::string subject = num(k) + " * " + F[i].name;
      suite.guard("linearity", subject, [&] {
        const auto& a = I(F[i].f);
        const auto& c = I(k * F[i].f);
        const double allowed = slack * std::max(1.0, std::abs(k * a.value)) +
                               std::abs(k) * noise(a) + noise(c);
        suite.add("linearity", subject, std::abs(c.value - k * a.value) <= allowed,
                  "int(kf) = " + num(c.value) + ", k int f = " + num(k * a.value));
      });
    }
  }

  for (std::size_t i = 0; i < F.size(); ++i) {
    if (*std::min_element(probes[i].begin(), probes[i].end()) < 0.0) continue;
    suite.guard("positivity", F[i].name, [&] {
      const auto& a = I(F[i].f);
      suite.add("positivity", F[i].name, a.value >= -(slack + noise(a)),
                "f >= 0 on samples, int f = " + num(a.value));
    });
  }

  for (std::size_t i = 0; i < F.size(); ++i) {
    for (std::size_t j = 0; j < F.size(); ++j) {
      if (i == j) continue;
      bool below = true;
      for (std::size_t t = 0; t < probes[i].size() && below; ++t) below = probes[i][t] <= probes[j][t];
      if (!below) continue;
      const std::string subject = F[i].name + " <= " + F[j].name;
      suite.guard("monotonicity", subject, [&] {
        const auto& a = I(F[i].f);
        const auto& b = I(F[j].f);
        suite.add("monotonicity", subject, a.value <= b.value + slack + noise(a) + noise(b),
                  "int f = " + num(a.value) + ", int g = " + num(b.value));
      });
    }
  }

  std::vector<Named> tri = F;
  for (std::size_t i = 0; i < F.size(); ++i) {
    for (std::size_t j = i + 1; j < F.size(); ++j) {
      tri.push_back({F[i].name + " + " + F[j].name, F[i].f + F[j].f});
    }
  }
  for (const auto& [name, f] : tri) {
    suite.guard("abs triangle", name, [&] {
      const auto& a = I(f);
      const auto& b = I(abs_of(f, opts.fault));
      const double lhs = std::abs(a.value);
      const bool ok = lhs <= b.value + slack * std::max(1.0, lhs) + noise(a) + noise(b);
      const std::string detail = "|int f| = " + num(lhs) + ", int |f| = " + num(b.value);
      suite.add("abs triangle", name, ok, detail,
                "f = " + name + ": " + detail + " (" + std::string(to_string(a.engine)) + ", " +
                    std::string(to_string(b.engine)) + ")");
    });
  }

  for (const char* rname : {"unit", "wallis", "degenerate_half"}) {
    const auto rect = shared_rectangle(rname);
    for (const auto& name : opts.integrands) {
      const std::string subject = name + " on " + rname;
      suite.guard("bound", subject, [&] {
        const CoordinateFunction f = resolve_integrand(name, rect);
        const auto M = f.bound();
        if (!M) return;
        const BoundReport b = check_bound(f, *M, *rect, cfg);
        suite.add("bound", subject, b.holds,
                  "int f = " + num(b.integral.value) + ", M vol = " + num(b.bound));
        if (rect->volume_class() != VolumeClass::Degenerate) return;
        const IntegralResult& r = b.integral;
        bool ok = r.status == Status::DegenerateZero && r.value == 0.0;
        std::string witness;
        for (const auto& t : r.trace) {
          const double limit = (*M + 1.0) * std::ldexp(1.0, -static_cast<int>(t.n));
          if (std::abs(t.value) > limit && ok) {
            ok = false;
            witness = "n = " + std::to_string(t.n) + ": |I_n| = " + num(std::abs(t.value)) +
                      " > " + num(limit);
          }
        }
        suite.add("degenerate trace", subject, ok,
                  "value " + num(r.value) + ", status " + std::string(to_string(r.status)) + ", " +
                      std::to_string(r.trace.size()) + " trace points within (M+1) 2^-n",
                  witness.empty() ? std::nullopt : std::optional<std::string>(witness));
      });
    }
  }

  for (const auto& name : opts.integrands) {
    const auto rect = shared_rectangle(default_rectangle_for(name));
    std::optional<CoordinateFunction> f;
    suite.guard("uniqueness", name, [&] { f = catalog_function(name, rect); });
    if (!f) continue;
    suite.guard("uniqueness", name, [&] {
      const double gap = check_uniqueness(DeltaSequence::regular(*f), perturbed_sequence(*f), *rect, cfg);
      suite.add("uniqueness", name + " vs " + name + " + 2^-n", gap <= cfg.tol,
                "gap = " + num(gap));
    });
  }

  for (const auto& [name, f] : F) {
    if (!f.analytic()) continue;
    const bool has_product = std::any_of(f.analytic()->terms.begin(), f.analytic()->terms.end(),
                                         [](const auto& t) {
                                           return std::holds_alternative<ProductForm>(t.second->form);
                                         });
    if (!has_product) continue;
    suite.guard("engine agreement", name, [&] {
      const auto exact = integrate_level(f, f.domain(), 12, Engine::Analytic, cfg);
      const auto mc = integrate_level(f, f.domain(), 12, Engine::MonteCarlo, cfg);
      suite.add("engine agreement", name + " at n = 12",
                std::abs(exact.value - mc.value) <= 3.0 * (mc.std_error + exact.std_error),
                "analytic " + num(exact.value) + ", monte carlo " + num(mc.value) + " +- " +
                    num(mc.std_error));
    });
  }

  for (const auto& [name, f] : F) {
    if (!f.analytic()) continue;
    for (std::size_t r : {1, 2, 3}) {
      const std::string subject = name + ", r = " + std::to_string(r);
      suite.guard("unit primitive", subject, [&] {
        const PrimitiveReport p = check_unit_primitive(f, r, cfg);
        suite.add("unit primitive", subject, p.gap < 1e-9,
                  "int f = " + num(p.lhs.value) + ", int g^r = " + num(p.rhs.value) +
                      ", gap = " + num(p.gap));
      });
    }
  }
  return suite.finish();
}

// ---------------------------------------------------------------------------

VerifyReport verify_norms(const VerifyOptions& opts) {
  Suite suite("norms");
  if (vacuous(opts, suite)) return suite.finish();
  const ConvergenceConfig& cfg = opts.cfg;
  const double slack = 10.0 * cfg.tol;
  const std::vector<Named> F = on_unit(opts, suite);

  std::vector<CoordinateFunction> fs;
  for (const auto& n : F) fs.push_back(n.f);
  suite.guard("norm axioms", "catalog", [&] {
    for (const auto& c : check_norm_axioms(fs, cfg).checks) {
      suite.add("norm axioms", c.name, c.passed, c.detail);
    }
  });

  std::vector<std::optional<NormResult>> n1(F.size());
  for (std::size_t i = 0; i < F.size(); ++i) {
    suite.guard("norm", F[i].name, [&] { n1[i] = norm(F[i].f, 1.0, cfg); });
  }

  const std::size_t m = F.size();
  std::vector<std::vector<std::optional<Equivalence>>> D(m, std::vector<std::optional<Equivalence>>(m));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      suite.guard("equivalence", F[i].name + " ~ " + F[j].name,
                  [&] { D[i][j] = equivalent(F[i].f, F[j].f, cfg); });
    }
  }
  auto dn = [&](std::size_t i, std::size_t j) { return noise(D[i][j]->integral); };

  for (std::size_t i = 0; i < m; ++i) {
    if (D[i][i]) {
      suite.add("reflexive", F[i].name, D[i][i]->equivalent,
                "d(f, f) = " + num(D[i][i]->distance));
    }
    for (std::size_t j = i + 1; j < m; ++j) {
      if (!D[i][j] || !D[j][i]) continue;
      suite.add("symmetric", F[i].name + ", " + F[j].name,
                D[i][j]->distance == D[j][i]->distance,
                "d(f, g) = " + num(D[i][j]->distance) + ", d(g, f) = " + num(D[j][i]->distance));
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      for (std::size_t k = 0; k < m; ++k) {
        if (!D[i][k] || !D[i][j] || !D[j][k]) continue;
        const double lhs = D[i][k]->distance;
        const double rhs = D[i][j]->distance + D[j][k]->distance;
        const bool ok = lhs <= rhs + slack + dn(i, k) + dn(i, j) + dn(j, k);
        // Passing triples are summarized below to keep the report readable.
        if (!ok) {
          suite.add("transitive", F[i].name + ", " + F[j].name + ", " + F[k].name, false,
                    "d(f, h) = " + num(lhs) + " > d(f, g) + d(g, h) = " + num(rhs));
        }
      }
    }
  }
  suite.add("transitive", "all triples", true,
            std::to_string(m * m * m) + " triples checked for d(f,h) <= d(f,g) + d(g,h)");

  for (std::size_t i = 0; i < m; ++i) {
    suite.guard("shifted", F[i].name + " + 1", [&] {
      const CoordinateFunction g = F[i].f + CoordinateFunction::constant(1.0, F[i].f.domain_ptr());
      const Equivalence e = equivalent(F[i].f, g, cfg);
      suite.add("shifted", F[i].name + " + 1",
                !e.equivalent && std::abs(e.distance - 1.0) <= slack + noise(e.integral),
                "d(f, f + 1) = " + num(e.distance));
    });
  }

  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      if (!D[i][j] || !D[i][j]->equivalent || !n1[i] || !n1[j]) continue;
      const double diff = std::abs(n1[i]->value - n1[j]->value);
      suite.add("equal norms", F[i].name + " ~ " + F[j].name,
                diff <= slack + noise(n1[i]->integral) + noise(n1[j]->integral),
                "d = " + num(D[i][j]->distance) + ", | ||f|| - ||g|| | = " + num(diff));
    }
  }

  for (std::size_t i = 0; i < m; ++i) {
    if (!F[i].f.bound() || !n1[i]) continue;
    suite.guard("p-monotone", F[i].name, [&] {
      const NormResult n2 = norm(F[i].f, 2.0, cfg);
      suite.add("p-monotone", F[i].name,
                n1[i]->value <= n2.value + slack + noise(n1[i]->integral) + noise(n2.integral),
                "||f||_1 = " + num(n1[i]->value) + ", ||f||_2 = " + num(n2.value));
    });
  }

  // Demonstration: partial sums of Σ x_i/i² are Cauchy in S¹ and their norms
  // approach the norm of the full sum.
  suite.guard("completeness demo", "partial sums of x_i/i^2", [&] {
    const auto U = shared_rectangle("unit");
    const double full = norm(wallis_sum(U), 1.0, cfg).value;
    double prev = 0.0;
    bool ok = true;
    std::string detail;
    for (std::size_t k = 1; k <= 64; k *= 2) {
      const auto fk =
          CoordinateFunction::from_expression("sum(i, 1, " + std::to_string(k) + ", x[i]/i^2)", U);
      const double v = norm(fk, 1.0, cfg).value;
      const double gap = full - v;
      ok = ok && v + slack >= prev && std::abs(gap - 0.5 * tail_inverse_squares(k)) <= slack;
      detail += "m=" + std::to_string(k) + ": " + num(v) + "; ";
      prev = v;
    }
    suite.add("completeness demo", "partial sums of x_i/i^2", ok, detail + "limit " + num(full));
  });
  return suite.finish();
}

// ---------------------------------------------------------------------------

namespace {

struct SequenceCase {
  std::string name;
  DeltaSequence seq;
  enum class Expect { None, WallisPass, ZeroPass, AlternatingFail } expect = Expect::None;
};

std::string describe(const Witness& w) {
  std::string s = "n = " + std::to_string(w.n) + ", m = " +
                  (w.m ? std::to_string(*w.m) : std::string("limit")) + ", sample " +
                  std::to_string(w.sample) + " on sheet " + std::string(to_string(w.sheet)) +
                  ", gap = " + num(w.gap);
  return s;
}

std::optional<Witness> first_witness(const CauchyReport& r) {
  for (const auto& o : r.outcomes) {
    if (o.witness) return o.witness;
  }
  return std::nullopt;
}

constexpr std::size_t kLevels[] = {1, 2, 4, 8, 16, 32, 64};

// Truncations f̃_n at the levels above, on one sampled point.
std::vector<double> level_values(const DeltaSequence& seq, std::span<const double> x) {
  std::vector<double> v;
  for (std::size_t n : kLevels) v.push_back(tilde(seq, n)(x));
  return v;
}

}  // namespace

VerifyReport verify_cauchy(const VerifyOptions& opts) {
  Suite suite("cauchy");
  if (vacuous(opts, suite)) return suite.finish();
  const SampleBudget& budget = opts.budget;

  std::vector<SequenceCase> cases;
  for (const auto& name : opts.integrands) {
    suite.guard("construct", name, [&] {
      const std::string rname = opts.rect.value_or(default_rectangle_for(name));
      const CoordinateFunction f = resolve_integrand(name, shared_rectangle(rname));
      SequenceCase c{name + " on " + rname, DeltaSequence::regular(f)};
      if (name == "wallis-sum" && rname == "wallis") c.expect = SequenceCase::Expect::WallisPass;
      cases.push_back(std::move(c));
    });
  }
  if (opts.integrands == default_integrands() && !opts.rect) {
    const auto U = shared_rectangle("unit");
    cases.push_back({"zero on unit", DeltaSequence::regular(CoordinateFunction::constant(0.0, U)),
                     SequenceCase::Expect::ZeroPass});
    cases.push_back({"x[1] alternating with x[1] + 1",
                     alternating_sequence(CoordinateFunction::from_expression("x[1]", U)),
                     SequenceCase::Expect::AlternatingFail});
    cases.push_back({"wallis-sum + 2^-n on wallis",
                     perturbed_sequence(wallis_sum(shared_rectangle("wallis")))});
  }

  for (const auto& c : cases) {
    std::optional<CauchyReport> cauchy;
    suite.guard("cauchy-uniform agreement", c.name, [&] {
      cauchy = check_delta_cauchy(c.seq, budget);
      const CauchyReport uniform = check_delta_uniform(c.seq, budget);
      const bool ok = cauchy->verdict == uniform.verdict;
      std::optional<std::string> witness;
      if (!ok) {
        const auto w = first_witness(cauchy->verdict == Verdict::Fail ? *cauchy : uniform);
        if (w) witness = describe(*w);
      }
      suite.add("cauchy-uniform agreement", c.name, ok,
                "cauchy " + std::string(to_string(cauchy->verdict)) + ", uniform " +
                    std::string(to_string(uniform.verdict)),
                witness);
    });

    if (cauchy && c.expect != SequenceCase::Expect::None) {
      bool ok = true;
      std::string detail;
      switch (c.expect) {
        case SequenceCase::Expect::WallisPass: {
          ok = cauchy->verdict == Verdict::Pass;
          for (std::size_t j = 0; j < cauchy->ladder.size(); ++j) {
            const double bound = 4.0 / 3.0 * tail_inverse_squares(cauchy->ladder[j]) + 1e-12;
            if (cauchy->level_gaps[j] > bound) {
              ok = false;
              detail = "level " + std::to_string(cauchy->ladder[j]) + ": gap " +
                       num(cauchy->level_gaps[j]) + " > " + num(bound) + "; ";
            }
          }
          detail += "gaps within (4/3) sum_{i>n} 1/i^2";
          break;
        }
        case SequenceCase::Expect::ZeroPass:
          for (const auto& o : cauchy->outcomes) ok = ok && o.N && *o.N == 1;
          for (double g : cauchy->level_gaps) ok = ok && g == 0.0;
          ok = ok && cauchy->verdict == Verdict::Pass;
          detail = "N = 1 and all gaps 0";
          break;
        case SequenceCase::Expect::AlternatingFail: {
          const auto w = first_witness(*cauchy);
          ok = cauchy->verdict == Verdict::Fail && w && std::abs(w->gap - 1.0) <= 1e-12;
          detail = w ? "fail, " + describe(*w) : "no witness";
          break;
        }
        case SequenceCase::Expect::None:
          break;
      }
      suite.add("expected verdict", c.name, ok, detail);
    }

    suite.guard("hat/tilde", c.name, [&] {
      const auto& rect = c.seq.domain();
      std::string witness;
      std::size_t compared = 0;
      for (std::size_t n : {1, 2, 5, 16, 64}) {
        const CoordinateFunction t = tilde(c.seq, n);
        const FiniteFunction h = hat(c.seq, n);
        for (Sheet sheet : {Sheet::Zero, Sheet::Upper}) {
          for (std::size_t s = 0; s < 32; ++s) {
            for (std::size_t len : {n, n + 3, 2 * n + 1}) {
              const auto x = sample_point(rect, s, budget.dim_cap, sheet, len);
              const double a = t(x);
              const double b = h(std::span<const double>(x).first(n));
              ++compared;
              if (a != b && witness.empty()) {
                witness = "n = " + std::to_string(n) + ", length " + std::to_string(len) +
                          ", sample " + std::to_string(s) + ": " + num(a) + " vs " + num(b);
              }
            }
          }
        }
        bool rejected = false;
        try {
          const std::vector<double> wrong(n + 1, 0.0);
          (void)h(wrong);
        } catch (const Error&) {
          rejected = true;
        }
        if (!rejected && witness.empty()) {
          witness = "hat at level " + std::to_string(n) + " accepted a point of dimension " +
                    std::to_string(n + 1);
        }
      }
      suite.add("hat/tilde", c.name, witness.empty(),
                std::to_string(compared) + " points compared bit for bit",
                witness.empty() ? std::nullopt : std::optional<std::string>(witness));
    });

    suite.guard("abs contraction", c.name, [&] {
      const DeltaSequence a = opts.fault == Fault::NegatedAbs
                                  ? combine_scale(-1.0, combine_abs(c.seq))
                                  : combine_abs(c.seq);
      std::string witness;
      for (Sheet sheet : {Sheet::Zero, Sheet::Upper}) {
        for (std::size_t s = 0; s < 128 && witness.empty(); ++s) {
          const auto x = sample_point(c.seq.domain(), s, budget.dim_cap, sheet, 64);
          const auto fv = level_values(c.seq, x);
          const auto av = level_values(a, x);
          for (std::size_t i = 0; i < fv.size(); ++i) {
            for (std::size_t j = i + 1; j < fv.size(); ++j) {
              const double lhs = std::abs(av[i] - av[j]);
              const double rhs = std::abs(fv[i] - fv[j]);
              if (lhs > rhs + 1e-15 * std::max(std::abs(fv[i]), std::abs(fv[j])) && witness.empty()) {
                witness = "sample " + std::to_string(s) + ", n = " + std::to_string(kLevels[i]) +
                          ", m = " + std::to_string(kLevels[j]) + ": " + num(lhs) + " > " + num(rhs);
              }
            }
          }
        }
      }
      suite.add("abs contraction", c.name, witness.empty(), "||f_n| - |f_m|| <= |f_n - f_m| on samples",
                witness.empty() ? std::nullopt : std::optional<std::string>(witness));
    });

    std::vector<LipschitzMap> maps;
    maps.push_back({[](double t) { return t; }, 1.0, "identity", std::nullopt, std::nullopt});
    maps.push_back({[](double t) { return 2.0 * t; }, 2.0, "twice", std::nullopt, std::nullopt});
    maps.push_back({[](double t) { return std::sin(t); }, 1.0, "sin", std::nullopt, std::nullopt});
    maps.push_back({[](double t) { return std::cosh(t); }, std::sinh(2.0), "cosh", Interval{0.0, 2.0},
                    std::nullopt});
    const auto& range = c.seq.limit().range();
    for (const auto& g : maps) {
      if (g.valid_on && (!range || range->lo < g.valid_on->lo || range->hi > g.valid_on->hi)) continue;
      const std::string subject = g.name + " of " + c.name;
      suite.guard("lipschitz contraction", subject, [&] {
        const DeltaSequence composed = compose_lipschitz(g, c.seq);
        std::string witness;
        for (Sheet sheet : {Sheet::Zero, Sheet::Upper}) {
          for (std::size_t s = 0; s < 128 && witness.empty(); ++s) {
            const auto x = sample_point(c.seq.domain(), s, budget.dim_cap, sheet, 64);
            const auto fv = level_values(c.seq, x);
            const auto gv = level_values(composed, x);
            for (std::size_t i = 0; i < fv.size(); ++i) {
              for (std::size_t j = i + 1; j < fv.size(); ++j) {
                const double lhs = std::abs(gv[i] - gv[j]);
                const double rhs = g.modulus * std::abs(fv[i] - fv[j]);
                if (lhs > rhs * (1.0 + 1e-12) + 1e-14 && witness.empty()) {
                  witness = "sample " + std::to_string(s) + ", n = " + std::to_string(kLevels[i]) +
                            ", m = " + std::to_string(kLevels[j]) + ": " + num(lhs) + " > " + num(rhs);
                }
              }
            }
          }
        }
        suite.add("lipschitz contraction", subject, witness.empty(),
                  "gaps of g(f_n) <= " + num(g.modulus) + " x gaps of f_n on samples",
                  witness.empty() ? std::nullopt : std::optional<std::string>(witness));
      });
    }
  }
  return suite.finish();
}

VerifyReport verify_all(const VerifyOptions& opts) {
  VerifyReport out = verify_cauchy(opts);
  out.append(verify_norms(opts));
  out.append(verify_integrals(opts));
  if (opts.integrands.empty()) out.warnings.resize(1);
  return out;
}

}  // namespace hq
