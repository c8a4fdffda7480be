#include "hq/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>

#include "hq/catalog.hpp"
#include "hq/error.hpp"
#include "hq/expr.hpp"
#include "hq/integrator.hpp"
#include "hq/normspace.hpp"
#include "hq/rectangle.hpp"
#include "hq/verify.hpp"

namespace hq::cli {

namespace {

using json = nlohmann::ordered_json;

struct Globals {
  std::optional<double> tol;
  std::uint64_t seed = ConvergenceConfig{}.seed;
  std::string format = "json";
  std::string out;
};

// A finished command: the JSON document plus its CSV and text renderings.
struct Report {
  json doc;
  std::string csv;
  std::string text;
  int code = kSuccess;
};

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string fmt(double v) {
  if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(std::string s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

json header(std::string_view command) {
  json j;
  j["schema"] = kSchema;
  j["command"] = command;
  return j;
}

json trace_json(const std::vector<TracePoint>& trace) {
  json arr = json::array();
  for (const auto& t : trace) {
    arr.push_back({{"n", t.n},
                   {"value", number(t.value)},
                   {"std_error", number(t.std_error)},
                   {"engine", to_string(t.engine)}});
  }
  return arr;
}

json result_json(const IntegralResult& r) {
  json j;
  j["value"] = number(r.value);
  j["status"] = to_string(r.status);
  j["engine"] = to_string(r.engine);
  j["n_dims_used"] = r.n_dims_used;
  j["error_estimate"] = number(r.error_estimate);
  j["rule"] = r.rule;
  return j;
}

int result_code(const IntegralResult& r) {
  return r.status == Status::BudgetExhausted ? kFailure : kSuccess;
}

// ---------------------------------------------------------------------------

struct VolumeArgs {
  std::string rect;
  std::string tail;
  std::size_t max_terms = VolumeConfig{}.max_terms;
};

Report cmd_volume(const Globals& g, const VolumeArgs& a) {
  VolumeConfig cfg;
  if (g.tol) cfg.tol = *g.tol;
  cfg.max_terms = a.max_terms;
  const std::string spec = a.tail.empty() ? a.rect : "tail: " + a.tail;
  const ConvergentRectangle rect = parse_rectangle(spec, cfg);
  const VolumeReport v = volume(rect, cfg);

  Report r;
  r.doc = header("volume");
  r.doc["rect"] = rect.name();
  r.doc["description"] = rect.describe();
  r.doc["value"] = v.value ? number(*v.value) : json(nullptr);
  r.doc["classification"] = to_string(v.classification);
  r.doc["n_terms"] = v.n_terms;
  r.doc["residual"] = number(v.residual);
  r.doc["analytic"] = v.analytic;
  const std::string value = v.value ? fmt(*v.value) : "";
  r.csv = "rect,value,classification,n_terms,residual\n" + csv_field(rect.name()) + "," + value +
          "," + std::string(to_string(v.classification)) + "," + std::to_string(v.n_terms) + "," +
          fmt(v.residual) + "\n";
  r.text = "volume of " + rect.describe() + "\n  value          " +
           (v.value ? value : std::string("none")) + "\n  classification " +
           std::string(to_string(v.classification)) + "\n  terms          " +
           std::to_string(v.n_terms) + (v.analytic ? " (closed-form tail)" : "") +
           "\n  residual       " + fmt(v.residual) + "\n";
  const bool ok = v.value && (v.classification == VolumeClass::NonDegenerate ||
                              v.classification == VolumeClass::Degenerate);
  r.code = ok ? kSuccess : kFailure;
  return r;
}

// ---------------------------------------------------------------------------

struct IntegrateArgs {
  std::string f;
  std::string rect;
  std::string engine = "auto";
  std::optional<std::size_t> dims;
  std::optional<std::size_t> samples;
  std::optional<std::size_t> level;
  std::optional<double> bound;
  bool force = false;
};

// One truncation level instead of the ladder.
Report integrate_one_level(const IntegrateArgs& a, const CoordinateFunction& f,
                           const ConvergenceConfig& cfg) {
  const quadrature::Estimate e = integrate_level(f, f.domain(), *a.level, cfg.engine, cfg);
  Report r;
  r.doc = header("integrate");
  r.doc["f"] = a.f;
  r.doc["rect"] = f.domain().name();
  r.doc["level"] = *a.level;
  r.doc["engine"] = a.engine;
  r.doc["value"] = number(e.value);
  r.doc["std_error"] = number(e.std_error);
  r.doc["evaluations"] = e.evaluations;
  r.csv = "n,I_n,std_error\n" + std::to_string(*a.level) + "," + fmt(e.value) + "," +
          fmt(e.std_error) + "\n";
  r.text = "I_" + std::to_string(*a.level) + " of " + a.f + " = " + fmt(e.value) +
           (e.std_error > 0 ? " +- " + fmt(e.std_error) : std::string()) + "\n";
  return r;
}

ConvergenceConfig integrator_config(const Globals& g) {
  ConvergenceConfig cfg;
  if (g.tol) cfg.tol = *g.tol;
  cfg.seed = g.seed;
  return cfg;
}

CoordinateFunction load_function(const std::string& f, const std::string& rect_spec,
                                 std::optional<double> bound) {
  const std::string spec = rect_spec.empty() ? default_rectangle_for(f) : rect_spec;
  auto rect = std::make_shared<const ConvergentRectangle>(parse_rectangle(spec));
  CoordinateFunction fn = resolve_integrand(f, rect);
  if (bound) fn = fn.with_range(Interval{-*bound, *bound});
  return fn;
}

Report cmd_integrate(const Globals& g, const IntegrateArgs& a) {
  ConvergenceConfig cfg = integrator_config(g);
  cfg.engine = *parse_engine(a.engine);
  if (a.dims) cfg.max_dims = *a.dims;
  if (a.samples) cfg.mc_samples = *a.samples;
  cfg.force = a.force;
  const CoordinateFunction f = load_function(a.f, a.rect, a.bound);
  if (a.level) return integrate_one_level(a, f, cfg);
  const IntegralResult res = integrate(f, cfg);

  Report r;
  r.doc = header("integrate");
  r.doc["f"] = a.f;
  r.doc["rect"] = f.domain().name();
  r.doc.update(result_json(res));
  r.doc["trace"] = trace_json(res.trace);

  r.csv = "n,I_n,delta\n";
  std::optional<double> prev;
  for (const auto& t : res.trace) {
    r.csv += std::to_string(t.n) + "," + fmt(t.value) + "," + (prev ? fmt(t.value - *prev) : "") + "\n";
    prev = t.value;
  }
  std::ostringstream text;
  text << "integral of " << a.f << " over " << f.domain().describe() << "\n"
       << "  value      " << fmt(res.value) << "\n"
       << "  status     " << to_string(res.status) << (res.rule.empty() ? "" : " (" + res.rule + ")")
       << "\n  engine     " << to_string(res.engine) << "\n  dimensions " << res.n_dims_used
       << "\n  error est. " << fmt(res.error_estimate) << "\n  trace\n";
  for (const auto& t : res.trace) {
    text << "    n = " << t.n << "  I_n = " << fmt(t.value);
    if (t.std_error > 0) text << "  +- " << fmt(t.std_error);
    text << "\n";
  }
  r.text = text.str();
  r.code = result_code(res);
  return r;
}

// ---------------------------------------------------------------------------

struct NormArgs {
  std::string f;
  double p = 1.0;
  std::optional<double> bound;
};

Report cmd_norm(const Globals& g, const NormArgs& a) {
  const ConvergenceConfig cfg = integrator_config(g);
  const CoordinateFunction f = load_function(a.f, "unit", a.bound);
  const NormResult n = norm(f, a.p, cfg);

  Report r;
  r.doc = header("norm");
  r.doc["f"] = a.f;
  r.doc["p"] = number(a.p);
  r.doc["value"] = number(n.value);
  r.doc["integral"] = result_json(n.integral);
  r.csv = "f,p,value,status\n" + csv_field(a.f) + "," + fmt(a.p) + "," + fmt(n.value) + "," +
          std::string(to_string(n.integral.status)) + "\n";
  r.text = "||" + a.f + "||_" + fmt(a.p) + " = " + fmt(n.value) + " (" +
           std::string(to_string(n.integral.status)) + ", " +
           std::string(to_string(n.integral.engine)) + ")\n";
  r.code = result_code(n.integral);
  return r;
}

// ---------------------------------------------------------------------------

Report cmd_catalog(const Globals& g, const std::string& show) {
  Report r;
  r.doc = header("catalog");
  if (show.empty()) {
    json rects = json::array();
    std::string text = "rectangles\n";
    r.csv = "kind,name,description\n";
    for (const auto& c : builtin_catalog()) {
      rects.push_back({{"name", c.name},
                       {"description", c.description},
                       {"volume", c.rect.classification().value
                                      ? number(*c.rect.classification().value)
                                      : json(nullptr)}});
      text += "  " + c.name + "  " + c.description + "\n";
      r.csv += "rectangle," + csv_field(c.name) + "," + csv_field(c.description) + "\n";
    }
    json fns = json::array();
    text += "integrands\n";
    for (const auto& c : catalog_integrands()) {
      fns.push_back({{"name", c.name},
                     {"formula", c.formula},
                     {"description", c.description},
                     {"reference", c.reference},
                     {"rect", c.default_rect}});
      text += "  " + c.name + "  " + c.formula + "\n";
      r.csv += "integrand," + csv_field(c.name) + "," + csv_field(c.description) + "\n";
    }
    r.doc["rectangles"] = rects;
    r.doc["integrands"] = fns;
    r.text = text;
    return r;
  }

  if (auto rect = catalog_rectangle(show)) {
    VolumeConfig vcfg;
    if (g.tol) vcfg.tol = *g.tol;
    const VolumeReport v = volume(*rect, vcfg);
    r.doc["kind"] = "rectangle";
    r.doc["name"] = rect->name();
    r.doc["description"] = rect->describe();
    r.doc["reference"] = rect->tail().provenance();
    r.doc["value"] = v.value ? number(*v.value) : json(nullptr);
    r.doc["classification"] = to_string(v.classification);
    r.csv = "name,value,classification\n" + csv_field(rect->name()) + "," +
            (v.value ? fmt(*v.value) : "") + "," + std::string(to_string(v.classification)) + "\n";
    r.text = rect->name() + ": " + rect->describe() + "\n  volume " +
             (v.value ? fmt(*v.value) : std::string("none")) + " (" +
             std::string(to_string(v.classification)) + ")\n";
    return r;
  }

  std::string key = show;
  if (key.starts_with("catalog:")) key = key.substr(8);
  std::optional<CatalogIntegrand> entry;
  for (const auto& c : catalog_integrands()) {
    if (c.name == key || (c.name == "const:<c>" && key.starts_with("const:"))) entry = c;
  }
  if (!entry) throw Error(ErrorCode::InvalidArgument, "no catalog entry named '" + show + "'");

  const auto rect = shared_rectangle(entry->default_rect);
  const CoordinateFunction f = resolve_integrand(key, rect);
  const IntegralResult res = integrate(f, integrator_config(g));
  r.doc["kind"] = "integrand";
  r.doc["name"] = key;
  r.doc["formula"] = entry->formula;
  r.doc["description"] = entry->description;
  r.doc["reference"] = entry->reference;
  r.doc["rect"] = entry->default_rect;
  r.doc.update(result_json(res));
  r.csv = "name,rect,value,status\n" + csv_field(key) + "," + entry->default_rect + "," +
          fmt(res.value) + "," + std::string(to_string(res.status)) + "\n";
  r.text = key + " = " + entry->formula + "\n  " + entry->description + "\n  closed form: " +
           entry->reference + "\n  integral over " + entry->default_rect + " = " + fmt(res.value) +
           " (" + std::string(to_string(res.status)) + ", " + std::string(to_string(res.engine)) +
           ")\n";
  r.code = result_code(res);
  return r;
}

// ---------------------------------------------------------------------------

struct VerifyArgs {
  std::vector<std::string> f;
  std::string rect;
  std::optional<std::size_t> points;
  std::optional<std::size_t> dim_cap;
  std::optional<std::size_t> ladder_max;
  std::optional<std::size_t> samples;
  std::string fault = "none";
  bool no_catalog = false;
};

Report cmd_verify(const Globals& g, const VerifyArgs& a, const std::string& suite) {
  VerifyOptions opts;
  if (g.tol) opts.cfg.tol = *g.tol;
  opts.cfg.seed = g.seed;
  if (a.samples) opts.cfg.mc_samples = *a.samples;
  if (a.points) opts.budget.points = *a.points;
  if (a.dim_cap) opts.budget.dim_cap = *a.dim_cap;
  if (a.ladder_max) opts.budget.ladder_max = *a.ladder_max;
  if (!a.rect.empty()) opts.rect = a.rect;
  if (!a.f.empty()) opts.integrands = a.f;
  if (a.no_catalog) opts.integrands.clear();
  opts.fault = a.fault == "negated-abs" ? Fault::NegatedAbs : Fault::None;

  VerifyReport rep;
  if (suite == "cauchy") {
    rep = verify_cauchy(opts);
  } else if (suite == "norms") {
    rep = verify_norms(opts);
  } else if (suite == "integrals") {
    rep = verify_integrals(opts);
  } else {
    rep = verify_all(opts);
  }

  Report r;
  r.doc = header("verify");
  r.doc["suite"] = suite;
  r.doc["passed"] = rep.passed();
  r.doc["checks_run"] = rep.checks.size();
  r.doc["failures"] = rep.failures();
  r.doc["warnings"] = rep.warnings;
  json checks = json::array();
  r.csv = "suite,property,subject,passed,detail,witness\n";
  std::ostringstream text;
  for (const auto& c : rep.checks) {
    json j = {{"suite", c.suite},
              {"property", c.property},
              {"subject", c.subject},
              {"passed", c.passed},
              {"detail", c.detail}};
    if (c.witness) j["witness"] = *c.witness;
    checks.push_back(std::move(j));
    r.csv += csv_field(c.suite) + "," + csv_field(c.property) + "," + csv_field(c.subject) + "," +
             (c.passed ? "true" : "false") + "," + csv_field(c.detail) + "," +
             csv_field(c.witness.value_or("")) + "\n";
    text << (c.passed ? "[pass] " : "[FAIL] ") << c.suite << "/" << c.property << ": " << c.subject
         << " : " << c.detail << "\n";
    if (c.witness) text << "       witness: " << *c.witness << "\n";
  }
  r.doc["checks"] = std::move(checks);
  for (const auto& w : rep.warnings) text << "warning: " << w << "\n";
  char secs[32];
  std::snprintf(secs, sizeof secs, "%.2f", rep.seconds);
  text << rep.checks.size() << " checks, " << rep.failures() << " failed, " << secs << " s\n";
  r.text = text.str();
  r.code = rep.passed() ? kSuccess : kFailure;
  return r;
}

// ---------------------------------------------------------------------------

int emit(const Globals& g, const Report& r, std::ostream& out, std::ostream& err) {
  std::string body;
  if (g.format == "csv") {
    body = r.csv;
  } else if (g.format == "text") {
    body = r.text;
  } else {
    body = r.doc.dump(2) + "\n";
  }
  if (g.out.empty()) {
    out << body;
    out.flush();
    return r.code;
  }
  std::ofstream file(g.out, std::ios::binary);
  if (!file) {
    err << "error: cannot open '" << g.out << "' for writing\n";
    return kFailure;
  }
  file << body;
  return file ? r.code : kFailure;
}

int emit_error(const Globals& g, std::string_view command, const json& error, int code,
               std::ostream& out, std::ostream& err) {
  err << "error: " << error["message"].get<std::string>() << "\n";
  if (g.format != "json") return code;
  Report r;
  r.doc = header(command);
  r.doc["error"] = error;
  r.code = code;
  return emit(g, r, out, err);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Integrals over convergent rectangles of R^N", "hq"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--tol", g.tol, "Convergence tolerance")->check(CLI::PositiveNumber);
  app.add_option("--seed", g.seed, "Monte Carlo seed");
  app.add_option("--format", g.format, "Output format")
      ->check(CLI::IsMember({"json", "csv", "text"}));
  app.add_option("--out", g.out, "Write the report to a file");

  VolumeArgs va;
  auto* volume_cmd = app.add_subcommand("volume", "Volume of a rectangle as an infinite product");
  auto* rect_opt = volume_cmd->add_option("--rect", va.rect, "Catalog name or rectangle spec");
  auto* tail_opt = volume_cmd->add_option("--tail", va.tail, "Side rule in the index i");
  rect_opt->excludes(tail_opt);
  volume_cmd->add_option("--max-terms", va.max_terms, "Factor budget")->check(CLI::PositiveNumber);

  IntegrateArgs ia;
  auto* integrate_cmd = app.add_subcommand("integrate", "Integral over a rectangle");
  integrate_cmd->add_option("--f", ia.f, "Expression or catalog integrand")->required();
  integrate_cmd->add_option("--rect", ia.rect, "Catalog name or rectangle spec");
  integrate_cmd->add_option("--engine", ia.engine, "auto, analytic, quad or mc")
      ->check(CLI::IsMember({"auto", "analytic", "quad", "tensor_quad", "mc", "monte_carlo"}));
  integrate_cmd->add_option("--dims", ia.dims, "Largest truncation dimension")
      ->check(CLI::PositiveNumber);
  integrate_cmd->add_option("--samples", ia.samples, "Monte Carlo samples per rung")
      ->check(CLI::PositiveNumber);
  integrate_cmd->add_option("--level", ia.level, "Evaluate only truncation level n")
      ->check(CLI::PositiveNumber);
  integrate_cmd->add_option("--bound", ia.bound, "Declared bound M with |f| <= M")
      ->check(CLI::NonNegativeNumber);
  integrate_cmd->add_flag("--force", ia.force, "Integrate without a known bound");

  NormArgs na;
  auto* norm_cmd = app.add_subcommand("norm", "S^p norm on the Hilbert cube");
  norm_cmd->add_option("--f", na.f, "Expression or catalog integrand")->required();
  norm_cmd->add_option("--p", na.p, "Exponent p >= 1")
      ->check(CLI::Range(1.0, std::numeric_limits<double>::max()));
  norm_cmd->add_option("--bound", na.bound, "Declared bound M with |f| <= M")
      ->check(CLI::NonNegativeNumber);

  std::string show;
  auto* catalog_cmd = app.add_subcommand("catalog", "Built-in rectangles and integrands");
  catalog_cmd->add_option("--show", show, "Entry to describe and evaluate");

  VerifyArgs vargs;
  auto* verify_cmd = app.add_subcommand("verify", "Property suites");
  verify_cmd->require_subcommand(1);
  verify_cmd->add_option("--f", vargs.f, "Integrands to check (default: built-in catalog)");
  verify_cmd->add_option("--rect", vargs.rect, "Rectangle for the sampling suite");
  verify_cmd->add_option("--points", vargs.points, "Sample points per sheet")
      ->check(CLI::PositiveNumber);
  verify_cmd->add_option("--dim-cap", vargs.dim_cap, "Sampled coordinates")
      ->check(CLI::PositiveNumber);
  verify_cmd->add_option("--ladder-max", vargs.ladder_max, "Largest sampled level")
      ->check(CLI::PositiveNumber);
  verify_cmd->add_option("--samples", vargs.samples, "Monte Carlo samples per rung")
      ->check(CLI::PositiveNumber);
  verify_cmd->add_option("--fault", vargs.fault, "Inject a defect: none or negated-abs")
      ->check(CLI::IsMember({"none", "negated-abs"}));
  verify_cmd->add_flag("--no-catalog", vargs.no_catalog, "Run with an empty catalog");
  std::string suite;
  for (const char* name : {"cauchy", "norms", "integrals", "all"}) {
    verify_cmd->add_subcommand(name, std::string("Run the ") + name + " suite")
        ->callback([&suite, name] { suite = name; });
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  }
  if (volume_cmd->parsed() && va.rect.empty() && va.tail.empty()) {
    err << "usage error: volume needs --rect or --tail\n";
    return kUsage;
  }

  std::string command;
  for (auto* sub : app.get_subcommands()) command = sub->get_name();
  try {
    Report r;
    if (command == "volume") {
      r = cmd_volume(g, va);
    } else if (command == "integrate") {
      r = cmd_integrate(g, ia);
    } else if (command == "norm") {
      r = cmd_norm(g, na);
    } else if (command == "catalog") {
      r = cmd_catalog(g, show);
    } else {
      r = cmd_verify(g, vargs, suite);
    }
    return emit(g, r, out, err);
  } catch (const expr::ParseError& e) {
    return emit_error(g, command,
                      {{"code", "ParseError"}, {"message", e.what()}, {"position", e.position()}},
                      kUsage, out, err);
  } catch (const Error& e) {
    return emit_error(g, command, {{"code", to_string(e.code())}, {"message", e.what()}},
                      kFailure, out, err);
  } catch (const std::exception& e) {
    return emit_error(g, command, {{"code", "internal"}, {"message", e.what()}}, kFailure, out,
                      err);
  }
}

}  // namespace hq::cli
