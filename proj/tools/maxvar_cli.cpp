// maxvar: command-line front end for the field, group, norm, variety, chars and suite modules.
//
// Exit codes: 0 pass, 1 check failure, 2 usage error, 3 budget exceeded with nothing run.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <thread>

#include "maxvar/chars.hpp"
#include "maxvar/norm.hpp"
#include "maxvar/suite.hpp"
#include "maxvar/variety.hpp"

using namespace maxvar;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::uint32_t p = 2;
  std::uint32_t f = 1;
  std::uint32_t n = 2;
  int kase = 1;
  std::uint32_t k = 1;
  std::uint32_t kmax = 3;
  std::uint64_t q = 0;
  std::string method = "fiber";
  unsigned threads = 0;
  std::uint64_t budget_ops = std::uint64_t{1} << 34;
  double budget_secs = 300.0;
  std::string out;
  std::string format;
  std::string element;
  std::string b;
  bool table = false;
  bool default_suite = false;
  bool timings = false;
  std::vector<std::string> checks;
};

unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("MAXVAR_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

GroupSpec spec_of(const Options& o) {
  GroupSpec s{o.p, o.f, o.n, o.kase};
  s.validate();
  return s;
}

Budget budget_of(const Options& o) {
  if (o.budget_ops == 0 || !(o.budget_secs > 0)) throw UsageError("budgets must be positive");
  Budget b;
  b.max_ops = o.budget_ops;
  b.max_secs = o.budget_secs;
  return b;
}

std::string format_of(const Options& o, const std::string& fallback, bool csv_ok) {
  const std::string f = o.format.empty() ? fallback : o.format;
  if (f != "json" && f != "csv") throw UsageError("--format must be json or csv");
  if (f == "csv" && !csv_ok) throw UsageError("this report has no CSV form");
  return f;
}

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream file(o.out, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open " + o.out + " for writing");
  file << text;
  if (!file) throw std::runtime_error("write to " + o.out + " failed");
}

void emit_json(const Options& o, const Json& j) { emit(o, j.dump(2) + "\n"); }

Json parse_json(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw UsageError(what + " is not valid JSON: " + e.what());
  }
}

// Character parameter from --b, or the least parameter of conductor q^n.
Code parameter_of(const Options& o, const UnipotentGroup& G) {
  const FieldCtx& F = G.field();
  if (!o.b.empty()) {
    const Code b = F.element_from_json(parse_json(o.b, "--b"));
    if (b >= F.size()) throw UsageError("--b is not an element of F_{q^n}");
    return b;
  }
  for (Code b = 0; b < F.size(); ++b) {
    if (conductor(G.spec(), F, b) == G.n()) return b;
  }
  throw std::logic_error("no primitive character");
}

int cmd_field(const Options& o) {
  const std::uint64_t degree = static_cast<std::uint64_t>(o.f) * o.n * o.k;
  if (degree > 64) throw UsageError("field degree too large");
  const auto F = FieldCtx::make(o.p, static_cast<std::uint32_t>(degree));
  Json j;
  j["field"] = F->to_json();
  j["size"] = F->size();
  j["generator"] = F->element_to_json(F->generator());
  j["tables"] = F->uses_tables();
  emit_json(o, j);
  return 0;
}

int cmd_group(const Options& o) {
  const GroupSpec s = spec_of(o);
  const auto G = UnipotentGroup::over(s);
  Json sizes = Json::object();
  std::vector<SubgroupId> ids = {{SubgroupKind::U}, {SubgroupKind::Z}, {SubgroupKind::YcapU}};
  for (std::uint32_t d : divisors(s.n)) {
    for (auto kind : {SubgroupKind::H, SubgroupKind::Hplus, SubgroupKind::Hminus, SubgroupKind::Gamma,
                      SubgroupKind::Usub}) {
      ids.push_back({kind, d});
    }
  }
  for (const auto& id : ids) {
    try {
      sizes[id.label()] = PointSet(G, id).size();
    } catch (const GroupError&) {
      // Gamma(d) exists only for d even and n/d odd.
    }
  }
  Json j;
  j["spec"] = s.to_json();
  j["q"] = s.q();
  j["field"] = G.field().to_json();
  j["orders"] = sizes;
  emit_json(o, j);
  return 0;
}

int cmd_norm_eval(const Options& o) {
  const GroupSpec s = spec_of(o);
  if (o.element.empty()) throw UsageError("--element is required");
  const auto G = UnipotentGroup::over(s, o.k);
  const RingElem g = G.element_from_json(parse_json(o.element, "--element"));
  if (!G.is_unipotent(g)) throw UsageError("element must have a_0 = 1");
  const NormOracle N(G);
  const Code v = N.norm_morphism(g);
  Json j;
  j["spec"] = s.to_json();
  j["k"] = o.k;
  j["field"] = G.field().to_json();
  j["element"] = G.element_to_json(g);
  j["value"] = G.field().element_to_json(v);
  j["in_Fq"] = G.field().in_subfield(v, s.f);
  emit_json(o, j);
  return 0;
}

int cmd_norm_certify(const Options& o) {
  const auto r = drinfeld_certify(spec_of(o));
  Json j = r.to_json();
  j["certified"] = r.certified();
  emit_json(o, j);
  return r.certified() ? 0 : 1;
}

CountOptions count_options(const Options& o) {
  CountOptions c;
  try {
    c.method = parse_method(o.method);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  c.budget = budget_of(o);
  c.threads = resolve_threads(o.threads);
  return c;
}

int cmd_variety_count(const Options& o) {
  format_of(o, "json", false);
  const auto r = count_points(spec_of(o), o.k, count_options(o));
  emit_json(o, r.to_json());
  return r.match ? 0 : 1;
}

int cmd_variety_betti(const Options& o) {
  const auto t = betti(spec_of(o));
  if (format_of(o, "json", true) == "csv") {
    emit(o, t.to_csv());
  } else {
    emit_json(o, t.to_json());
  }
  return 0;
}

int cmd_variety_zeta(const Options& o) {
  const auto rows = zeta_table(spec_of(o), o.kmax, count_options(o));
  if (format_of(o, "csv", true) == "csv") {
    emit(o, zeta_csv(rows));
  } else {
    Json rs = Json::array();
    for (const auto& r : rows) {
      Json x;
      x["k"] = r.k;
      x["counted"] = r.skipped ? Json("skipped") : mpz_to_json(r.counted);
      x["predicted"] = mpz_to_json(r.predicted);
      x["match"] = r.skipped ? Json("skipped") : Json(r.match);
      if (r.skipped) x["note"] = r.skip_reason;
      rs.push_back(x);
    }
    emit_json(o, Json{{"spec", spec_of(o).to_json()}, {"rows", rs}});
  }
  bool ran = false;
  for (const auto& r : rows) {
    if (r.skipped) continue;
    ran = true;
    if (!r.match) return 1;
  }
  return ran ? 0 : 3;
}

int cmd_chars_rho(const Options& o) {
  const auto G = UnipotentGroup::over(spec_of(o));
  const auto r = build_rho(G, parameter_of(o, G), budget_of(o));
  if (format_of(o, "json", true) == "csv") {
    emit(o, r.character->to_csv());
  } else {
    emit_json(o, r.to_json(o.table));
  }
  return 0;
}

int cmd_chars_tracesum(const Options& o) {
  const auto G = UnipotentGroup::over(spec_of(o));
  const auto r = trace_sum(G, parameter_of(o, G), budget_of(o));
  emit_json(o, r.to_json());
  return r.match && r.positive ? 0 : 1;
}

int cmd_chars_gauss(const Options& o) {
  std::uint32_t p = o.p;
  std::uint32_t f = o.f;
  if (o.q != 0) {
    bool found = false;
    for (std::uint32_t cand = 2; cand <= o.q && !found; ++cand) {
      if (!is_prime(cand)) continue;
      if (const auto e = log_base(cand, o.q)) {
        p = cand;
        f = *e;
        found = true;
      }
    }
    if (!found) throw UsageError("--q must be a prime power");
  }
  std::optional<Code> b;
  if (!o.b.empty()) {
    const auto E = FieldCtx::make(p, 2 * f * o.k);
    b = E->element_from_json(parse_json(o.b, "--b"));
  }
  const auto r = gauss_sum(p, f, o.k, b, budget_of(o));
  emit_json(o, r.to_json());
  return r.match ? 0 : 1;
}

int cmd_chars_pairing(const Options& o) {
  const auto G = UnipotentGroup::over(spec_of(o));
  const auto r = pairing_check(G, parameter_of(o, G), budget_of(o));
  emit_json(o, r.to_json());
  return r.passed ? 0 : 1;
}

int cmd_suite(const Options& o, bool case_given) {
  SuiteConfig c;
  if (o.default_suite) {
    c = default_suite();
    if (!o.checks.empty()) c.checks = o.checks;
  } else {
    if (o.checks.empty()) throw UsageError("suite needs --default or at least one --check");
    c.name = "custom";
    c.checks = o.checks;
    const std::vector<int> cases = case_given ? std::vector<int>{o.kase} : std::vector<int>{1, 2};
    for (int kase : cases) {
      Options x = o;
      x.kase = kase;
      c.matrix.push_back({spec_of(x), o.kmax});
    }
    c.gauss_fields = {{o.p, o.f}};
    c.gauss_kmax = o.kmax;
  }
  c.budget = budget_of(o);
  c.threads = resolve_threads(o.threads);
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const SuiteReport r = run_suite(c);
  if (format_of(o, "json", true) == "csv") {
    emit(o, r.to_csv(o.timings));
  } else {
    emit_json(o, r.to_json(o.timings));
  }
  return r.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"maxvar: exact experiments on unipotent groups over finite fields and their maximal varieties"};
  app.set_config("--config", "", "TOML or INI file supplying option values");
  app.fallthrough();
  app.require_subcommand(1);

  app.add_option("--p", o.p, "characteristic");
  app.add_option("--f", o.f, "q = p^f");
  app.add_option("--n", o.n, "rank n");
  auto* case_opt = app.add_option("--case", o.kase, "multiplication rule (1 or 2)");
  app.add_option("--k", o.k, "extension index: work over F_{q^{nk}}");
  app.add_option("--kmax", o.kmax, "largest extension index");
  app.add_option("--method", o.method, "brute or fiber");
  app.add_option("--threads", o.threads, "worker threads (0: MAXVAR_THREADS or all cores)");
  app.add_option("--budget-ops", o.budget_ops, "field-operation budget per computation");
  app.add_option("--budget-secs", o.budget_secs, "wall-clock budget in seconds per computation");
  app.add_option("--out", o.out, "output file (default stdout)");
  app.add_option("--format", o.format, "json or csv");

  auto* field = app.add_subcommand("field", "presentation of F_{q^{nk}}");
  auto* group = app.add_subcommand("group", "orders of U(F_{q^n}) and its distinguished subgroups");

  auto* norm = app.add_subcommand("norm", "reduced norm");
  norm->require_subcommand(1);
  auto* norm_eval = norm->add_subcommand("eval", "evaluate N at an element over F_{q^{nk}}");
  norm_eval->add_option("--element", o.element, R"(element JSON, e.g. {"a": [1, 0, [1, 1]]})");
  auto* norm_certify = norm->add_subcommand("certify", "exhaustive certificate for Nm on U(F_{q^n})");

  auto* variety = app.add_subcommand("variety", "points and cohomology of X");
  variety->require_subcommand(1);
  auto* v_count = variety->add_subcommand("count", "count X(F_{q^{nk}})");
  auto* v_betti = variety->add_subcommand("betti", "Betti table");
  auto* v_zeta = variety->add_subcommand("zeta", "counted vs predicted for k = 1..kmax");

  auto* chars = app.add_subcommand("chars", "characters of U(F_{q^n})");
  chars->require_subcommand(1);
  auto* c_rho = chars->add_subcommand("rho", "the representation rho_psi");
  c_rho->add_flag("--table", o.table, "include the character table");
  auto* c_trace = chars->add_subcommand("tracesum", "sum of the induced trace function over Y(F_{q^n})");
  auto* c_gauss = chars->add_subcommand("gauss", "Gauss sum over F_{q^{2k}}");
  c_gauss->add_option("--q", o.q, "q, as an alternative to --p/--f");
  auto* c_pair = chars->add_subcommand("pairing", "pairing on F_{q^n} attached to psi");
  for (auto* c : {c_rho, c_trace, c_gauss, c_pair}) c->add_option("--b", o.b, "character parameter b (element JSON)");

  auto* suite = app.add_subcommand("suite", "bundled verification suites");
  suite->add_flag("--default", o.default_suite, "the default desk-scale matrix");
  suite->add_option("--check", o.checks, "checks to run (repeatable)");
  suite->add_flag("--timings", o.timings, "include wall times (reports are then not reproducible)");

  for (auto* sub : {field, group, norm, variety, chars, suite}) sub->fallthrough();
  for (auto* sub : {norm_eval, norm_certify, v_count, v_betti, v_zeta, c_rho, c_trace, c_gauss, c_pair}) {
    sub->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*field) return cmd_field(o);
    if (*group) return cmd_group(o);
    if (*norm_eval) return cmd_norm_eval(o);
    if (*norm_certify) return cmd_norm_certify(o);
    if (*v_count) return cmd_variety_count(o);
    if (*v_betti) return cmd_variety_betti(o);
    if (*v_zeta) return cmd_variety_zeta(o);
    if (*c_rho) return cmd_chars_rho(o);
    if (*c_trace) return cmd_chars_tracesum(o);
    if (*c_gauss) return cmd_chars_gauss(o);
    if (*c_pair) return cmd_chars_pairing(o);
    if (*suite) return cmd_suite(o, case_opt->count() > 0);
  } catch (const BudgetExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << '\n';
    return 3;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const GroupError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const FieldError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const CharError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const Json::exception& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
