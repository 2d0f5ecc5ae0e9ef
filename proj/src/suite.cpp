#include "maxvar/suite.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>

#include "maxvar/chars.hpp"
#include "maxvar/norm.hpp"
#include "maxvar/variety.hpp"

namespace maxvar {

namespace {

constexpr std::uint64_t kCharsMaxOrder = std::uint64_t{1} << 16;
constexpr std::uint64_t kCertifyMaxOrder = std::uint64_t{1} << 16;
constexpr std::uint64_t kBruteCrossCheckOps = std::uint64_t{1} << 26;

std::uint64_t group_order(const GroupSpec& s) {
  std::uint64_t r = 1;
  for (std::uint32_t i = 0; i < s.n * s.n; ++i) {
    if (r > kCharsMaxOrder * kCharsMaxOrder / s.q()) return UINT64_MAX;
    r *= s.q();
  }
  return r;
}

class Runner {
 public:
  explicit Runner(const SuiteConfig& c) : config_(c) {}

  // Runs body, which fills measured/expected and returns pass/fail; budget errors become skips.
  void run(const std::string& name, const std::string& provenance,
           const std::function<bool(CheckResult&)>& body) {
    CheckResult r;
    r.name = name;
    r.provenance = provenance;
    const Deadline clock(1e300);
    try {
      r.status = body(r) ? CheckStatus::Pass : CheckStatus::Fail;
    } catch (const BudgetExceeded& e) {
      r.status = CheckStatus::Skipped;
      r.note = e.what();
    } catch (const std::exception& e) {
      r.status = CheckStatus::Fail;
      r.note = e.what();
    }
    r.wall_time = clock.elapsed();
    report_.checks.push_back(std::move(r));
  }

  SuiteReport finish() {
    report_.name = config_.name;
    return std::move(report_);
  }

 private:
  const SuiteConfig& config_;
  SuiteReport report_;
};

CountOptions count_options(const SuiteConfig& c, CountMethod m) {
  CountOptions o;
  o.method = m;
  o.budget = c.budget;
  o.threads = c.threads;
  return o;
}

void zeta_checks(const SuiteConfig& c, Runner& run) {
  for (const auto& e : c.matrix) {
    for (std::uint32_t k = 1; k <= e.kmax; ++k) {
      run.run("zeta " + e.spec.label() + " k=" + std::to_string(k), "derived", [&](CheckResult& r) {
        const auto rep = count_points(e.spec, k, count_options(c, CountMethod::Fiber));
        r.measured = Json{{"counted", mpz_to_json(rep.total)}, {"per_component", rep.to_json()["per_component"]}};
        r.expected = Json{{"predicted", mpz_to_json(rep.predicted)}};
        bool balanced = true;
        for (const auto& [key, v] : rep.per_component) balanced = balanced && v == rep.per_component[0].second;
        return rep.match && balanced;
      });
    }
    if (count_cost(e.spec, 1, CountMethod::Brute) <= kBruteCrossCheckOps) {
      run.run("method-agreement " + e.spec.label() + " k=1", "derived", [&](CheckResult& r) {
        CountOptions o = count_options(c, CountMethod::Brute);
        o.cross_check = false;
        const auto brute = count_points(e.spec, 1, o);
        const auto fiber = count_points(e.spec, 1, count_options(c, CountMethod::Fiber));
        r.measured = Json{{"brute", brute.to_json()["per_component"]}};
        r.expected = Json{{"fiber", fiber.to_json()["per_component"]}};
        return brute.total == fiber.total && brute.per_component == fiber.per_component;
      });
    }
  }
}

void maximality_checks(const SuiteConfig& c, Runner& run) {
  for (const auto& e : c.matrix) {
    run.run("maximality " + e.spec.label(), "derived", [&](CheckResult& r) {
      const auto m = maximality_check(e.spec, count_options(c, CountMethod::Fiber));
      r.measured = Json{{"counted", mpz_to_json(m.counted)}};
      r.expected = Json{{"bound", mpz_to_json(m.bound)}};
      return m.match;
    });
  }
}

void betti_identity_checks(Runner& run) {
  for (std::uint32_t q : {2u, 3u, 4u, 5u}) {
    run.run("betti-identity q=" + std::to_string(q), "derived", [&](CheckResult& r) {
      const GroupSpec base = q == 4 ? GroupSpec{2, 2, 2, 1} : GroupSpec{q, 1, 2, 1};
      std::uint64_t tables = 0;
      std::uint64_t failures = 0;
      for (std::uint32_t n = 2; n <= 8; ++n) {
        for (int kase : {1, 2}) {
          GroupSpec s = base;
          s.n = n;
          s.kase = kase;
          ++tables;
          try {
            const BettiTable t = betti(s);
            mpz_class lhs = 0;
            mpz_class chars = 0;
            for (const auto& row : t.rows) {
              lhs += row.count * row.dim * mpz_pow(s.q(), static_cast<std::uint64_t>(n) * row.degree / 2);
              chars += row.count;
            }
            if (lhs != mpz_pow(s.q(), static_cast<std::uint64_t>(n) * n) || chars != mpz_pow(s.q(), n)) ++failures;
          } catch (const std::logic_error&) {
            ++failures;
          }
        }
      }
      r.measured = Json{{"tables", tables}, {"failures", failures}};
      r.expected = Json{{"tables", tables}, {"failures", 0}};
      return failures == 0;
    });
  }
}

void norm_checks(const SuiteConfig& c, Runner& run) {
  for (const auto& e : c.matrix) {
    run.run("norm-certify " + e.spec.label(), "derived", [&](CheckResult& r) {
      if (group_order(e.spec) > kCertifyMaxOrder) {
        throw BudgetExceeded("norm certificates are limited to |U| <= " + std::to_string(kCertifyMaxOrder));
      }
      const auto rep = drinfeld_certify(e.spec, kCertifyMaxOrder);
      r.measured = rep.to_json();
      r.expected = Json{{"certified", true}, {"hz_order", rep.group_order}};
      return rep.certified() && rep.hz_order == rep.group_order;
    });
  }
}

void rho_checks(const SuiteConfig& c, Runner& run) {
  for (const auto& e : c.matrix) {
    run.run("rho-irreducibility " + e.spec.label(), "derived", [&](CheckResult& r) {
      if (group_order(e.spec) > kCharsMaxOrder) {
        throw BudgetExceeded("character tables are limited to |U| <= " + std::to_string(kCharsMaxOrder));
      }
      const auto G = UnipotentGroup::over(e.spec);
      const FieldCtx& F = G.field();
      const auto table = betti(e.spec);
      const auto Z = std::make_shared<const PointSet>(G, SubgroupId{SubgroupKind::Z});
      std::vector<RhoPsi> rhos;
      std::uint64_t norm_one = 0, central_ok = 0, dim_ok = 0, hminus_ok = 0, divided = 0;
      std::map<std::uint32_t, mpz_class> per_degree;
      for (Code b = 0; b < F.size(); ++b) {
        RhoPsi rho = build_rho(G, b, c.budget);
        const ClassFn& chi = *rho.character;
        if (inner_product(chi, chi) == 1) ++norm_one;
        const AddChar psi{&F, b};
        bool central = true;
        for (const RingElem& z : *Z) {
          central = central && chi(z) == CycNum::zeta_pow(e.spec.p, psi.exponent(z.a[e.spec.n])) * mpq_class(rho.dim);
        }
        if (central) ++central_ok;
        for (const auto& row : table.rows) {
          if (row.d == rho.d && row.dim == rho.dim && row.degree == rho.degree) ++dim_ok;
        }
        const auto Hm = std::make_shared<const PointSet>(G, SubgroupId{SubgroupKind::Hminus, rho.d});
        const auto pr = psi_pr_n(G, b, {SubgroupKind::Hminus, rho.d}).to_class_fn();
        if (inner_product(restrict_to(chi, Hm), pr) >= 1) ++hminus_ok;
        if (rho.divided) ++divided;
        per_degree[rho.degree] += rho.dim;
        rhos.push_back(std::move(rho));
      }
      std::uint64_t orthogonal = 0, pairs = 0;
      for (std::size_t i = 0; i < rhos.size(); ++i) {
        for (std::size_t j = i + 1; j < rhos.size(); ++j) {
          ++pairs;
          if (inner_product(*rhos[i].character, *rhos[j].character) == 0) ++orthogonal;
        }
      }
      Json degrees = Json::object();
      Json betti_degrees = Json::object();
      for (const auto& [deg, dim] : per_degree) degrees[std::to_string(deg)] = mpz_to_json(dim);
      for (const auto& [deg, dim] : table.cohomology()) betti_degrees[std::to_string(deg)] = mpz_to_json(dim);
      Json dims = Json::object();
      for (const auto& rho : rhos) dims[std::to_string(rho.d)] = mpz_to_json(rho.dim);
      const std::uint64_t n_chars = rhos.size();
      r.measured = Json{{"characters", n_chars},       {"norm_one", norm_one},       {"central_ok", central_ok},
                        {"dims_match_index", dim_ok},  {"hminus_contains_psi", hminus_ok},
                        {"orthogonal_pairs", orthogonal}, {"divided", divided}, {"dims", dims},
                        {"dim_per_degree", degrees}};
      r.expected = Json{{"characters", n_chars},      {"norm_one", n_chars},        {"central_ok", n_chars},
                        {"dims_match_index", n_chars}, {"hminus_contains_psi", n_chars}, {"orthogonal_pairs", pairs},
                        {"dim_per_degree", betti_degrees}};
      return norm_one == n_chars && central_ok == n_chars && dim_ok == n_chars && hminus_ok == n_chars &&
             orthogonal == pairs && degrees == betti_degrees;
    });
  }
}

void trace_sum_checks(const SuiteConfig& c, Runner& run) {
  for (const auto& e : c.matrix) {
    for (std::uint32_t d : divisors(e.spec.n)) {
      run.run("trace-sums " + e.spec.label() + " d=" + std::to_string(d), "derived", [&](CheckResult& r) {
        if (group_order(e.spec) > kCharsMaxOrder) {
          throw BudgetExceeded("trace sums are limited to |U| <= " + std::to_string(kCharsMaxOrder));
        }
        const auto G = UnipotentGroup::over(e.spec);
        std::vector<mpz_class> values;
        mpz_class expected;
        bool ok = true;
        for (Code b = 0; b < G.field().size(); ++b) {
          if (conductor(e.spec, G.field(), b) != d) continue;
          const auto t = trace_sum(G, b, c.budget);
          expected = t.expected;
          ok = ok && t.match && t.positive;
          if (std::find(values.begin(), values.end(), t.value) == values.end()) values.push_back(t.value);
        }
        Json vs = Json::array();
        for (const auto& v : values) vs.push_back(mpz_to_json(v));
        r.measured = Json{{"values", vs}};
        r.expected = Json{{"value", mpz_to_json(expected)}};
        return ok;
      });
    }
  }
}

void gauss_checks(const SuiteConfig& c, Runner& run) {
  for (const auto& [p, f] : c.gauss_fields) {
    for (std::uint32_t k = 1; k <= c.gauss_kmax; ++k) {
      std::uint64_t q = 1;
      for (std::uint32_t i = 0; i < f; ++i) q *= p;
      run.run("gauss-sums q=" + std::to_string(q) + " k=" + std::to_string(k), k == 1 ? "published" : "derived",
              [&](CheckResult& r) {
                const auto g = gauss_sum(p, f, k, std::nullopt, c.budget);
                r.measured = Json{{"value", mpz_to_json(g.value)}};
                r.expected = Json{{"value", mpz_to_json(g.expected)}};
                return g.match;
              });
    }
  }
}

void pairing_checks(const SuiteConfig& c, Runner& run) {
  for (const auto& e : c.matrix) {
    if (e.spec.n % 2 != 0) continue;
    for (std::uint32_t d : divisors(e.spec.n)) {
      run.run("pairing " + e.spec.label() + " d=" + std::to_string(d), "derived", [&](CheckResult& r) {
        const auto G = UnipotentGroup::over(e.spec);
        std::uint64_t characters = 0, passed = 0, nondegenerate = 0, maximal = 0;
        const bool precondition = (e.spec.n / 2) % d != 0;
        for (Code b = 0; b < G.field().size(); ++b) {
          if (conductor(e.spec, G.field(), b) != d) continue;
          const auto rep = pairing_check(G, b, c.budget);
          ++characters;
          if (rep.passed) ++passed;
          if (rep.nondegenerate) ++nondegenerate;
          if (rep.maximal_isotropic) ++maximal;
        }
        r.measured = Json{{"characters", characters}, {"nondegenerate", nondegenerate}, {"maximal_isotropic", maximal},
                          {"passed", passed}};
        r.expected = Json{{"characters", characters},
                          {"nondegenerate", precondition ? characters : 0},
                          {"maximal_isotropic", precondition ? characters : 0},
                          {"passed", characters}};
        return passed == characters && nondegenerate == (precondition ? characters : 0);
      });
    }
  }
}

std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

std::string status_name(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Skipped: return "skipped";
  }
  return "?";
}

const std::vector<std::string>& all_checks() {
  static const std::vector<std::string> names = {"zeta",        "maximality",         "betti-identity",
                                                 "norm-certify", "rho-irreducibility", "trace-sums",
                                                 "gauss-sums",  "pairing"};
  return names;
}

void SuiteConfig::validate() const {
  for (const auto& c : checks) {
    if (std::find(all_checks().begin(), all_checks().end(), c) == all_checks().end()) {
      throw std::invalid_argument("unknown check '" + c + "'");
    }
  }
  for (const auto& e : matrix) {
    e.spec.validate();
    if (e.kmax == 0) throw std::invalid_argument("kmax must be positive");
  }
  if (budget.max_ops == 0 || !(budget.max_secs > 0)) throw std::invalid_argument("budgets must be positive");
}

SuiteConfig default_suite() {
  SuiteConfig c;
  c.name = "default";
  c.checks = all_checks();
  c.matrix = {{{2, 1, 2, 1}, 8}, {{2, 1, 2, 2}, 8}, {{3, 1, 2, 1}, 5}, {{3, 1, 2, 2}, 5}, {{2, 1, 3, 1}, 4},
              {{2, 1, 3, 2}, 4}, {{2, 1, 4, 1}, 2}, {{2, 1, 4, 2}, 2}, {{3, 1, 3, 1}, 2}};
  c.gauss_fields = {{2, 1}, {3, 1}};
  c.gauss_kmax = 3;
  return c;
}

SuiteReport run_suite(const SuiteConfig& config) {
  config.validate();
  Runner run(config);
  auto selected = [&](const std::string& name) {
    return std::find(config.checks.begin(), config.checks.end(), name) != config.checks.end();
  };
  if (selected("zeta")) zeta_checks(config, run);
  if (selected("maximality")) maximality_checks(config, run);
  if (selected("betti-identity")) betti_identity_checks(run);
  if (selected("norm-certify")) norm_checks(config, run);
  if (selected("rho-irreducibility")) rho_checks(config, run);
  if (selected("trace-sums")) trace_sum_checks(config, run);
  if (selected("gauss-sums")) gauss_checks(config, run);
  if (selected("pairing")) pairing_checks(config, run);
  return run.finish();
}

std::uint64_t SuiteReport::count(CheckStatus s) const {
  return static_cast<std::uint64_t>(
      std::count_if(checks.begin(), checks.end(), [&](const CheckResult& c) { return c.status == s; }));
}

int SuiteReport::exit_code() const {
  if (count(CheckStatus::Fail) > 0) return 1;
  if (count(CheckStatus::Pass) == 0) return 3;
  return 0;
}

Json SuiteReport::to_json(bool with_timings) const {
  Json cs = Json::array();
  for (const auto& c : checks) {
    Json j;
    j["name"] = c.name;
    j["status"] = status_name(c.status);
    j["measured"] = c.measured;
    j["expected"] = c.expected;
    j["provenance"] = c.provenance;
    if (!c.note.empty()) j["note"] = c.note;
    if (with_timings) j["wall_time"] = c.wall_time;
    cs.push_back(j);
  }
  Json j;
  j["suite"] = name;
  j["checks"] = cs;
  j["summary"] = Json{{"pass", count(CheckStatus::Pass)},
                      {"fail", count(CheckStatus::Fail)},
                      {"skipped", count(CheckStatus::Skipped)}};
  return j;
}

std::string SuiteReport::to_csv(bool with_timings) const {
  std::ostringstream os;
  os << "name,status,measured,expected,provenance,note";
  if (with_timings) os << ",wall_time";
  os << '\n';
  for (const auto& c : checks) {
    os << csv_cell(c.name) << ',' << status_name(c.status) << ',' << csv_cell(c.measured.dump()) << ','
       << csv_cell(c.expected.dump()) << ',' << c.provenance << ',' << csv_cell(c.note);
    if (with_timings) os << ',' << c.wall_time;
    os << '\n';
  }
  return os.str();
}

}  // namespace maxvar
