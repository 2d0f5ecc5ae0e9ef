#include "maxvar/variety.hpp"

#include <algorithm>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "maxvar/norm.hpp"
#include "maxvar/parallel.hpp"

namespace maxvar {

namespace {

constexpr std::uint64_t kChunk = 4096;

std::uint64_t checked_pow(std::uint64_t base, std::uint64_t e) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 0; i < e; ++i) {
    if (r > std::numeric_limits<std::uint64_t>::max() / base) return std::numeric_limits<std::uint64_t>::max();
    r *= base;
  }
  return r;
}

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) return std::numeric_limits<std::uint64_t>::max();
  return a * b;
}

// Ambient codes of F_q mapped to codes in the canonical presentation of F_q.
struct BaseFieldIndex {
  std::vector<std::pair<Code, Code>> pairs;  // sorted by ambient code

  explicit BaseFieldIndex(const UnipotentGroup& G) {
    const auto base = FieldCtx::make(G.spec().p, G.spec().f);
    for (Code c = 0; c < base->size(); ++c) pairs.emplace_back(embed(Fq(*base, c), G.field()).code(), c);
    std::sort(pairs.begin(), pairs.end());
  }

  std::size_t slot(Code ambient) const {
    auto it = std::lower_bound(pairs.begin(), pairs.end(), std::make_pair(ambient, Code{0}));
    if (it == pairs.end() || it->first != ambient) throw std::logic_error("norm value outside F_q on X");
    return static_cast<std::size_t>(it - pairs.begin());
  }
};

struct Tally {
  std::uint64_t points = 0;  // brute: points; fiber: solvable fibers
  std::vector<std::uint64_t> per_slot;
};

RingElem decode(const UnipotentGroup& G, std::uint64_t index, std::uint32_t coords) {
  RingElem g = G.one();
  const Code Q = G.field().size();
  for (std::uint32_t j = coords; j >= 1; --j) {
    g.a[j] = index % Q;
    index /= Q;
  }
  return g;
}

// Odometer step on a_1..a_coords with a_1 most significant.
void advance(RingElem& g, std::uint32_t coords, Code Q) {
  for (std::uint32_t j = coords; j >= 1; --j) {
    if (++g.a[j] < Q) return;
    g.a[j] = 0;
  }
}

struct Sweep {
  std::uint64_t points = 0;
  std::vector<std::uint64_t> per_slot;  // indexed like BaseFieldIndex::pairs
};

Sweep run_sweep(const UnipotentGroup& G, CountMethod method, const Budget& budget, unsigned threads) {
  const std::uint32_t n = G.n();
  const FieldCtx& F = G.field();
  const Code Q = F.size();
  const std::uint32_t coords = method == CountMethod::Brute ? n : n - 1;
  const std::uint64_t total = checked_pow(Q, coords);
  const std::uint32_t dn = G.rational_degree();
  const NormOracle N(G);
  const BaseFieldIndex base(G);
  const std::size_t slots = base.pairs.size();
  const Deadline deadline(budget.max_secs);

  Tally init;
  init.per_slot.assign(slots, 0);
  auto accs = parallel_chunks(total, kChunk, threads, init, [&](Tally& acc, std::uint64_t begin, std::uint64_t end) {
    if (deadline.expired()) {
      throw BudgetExceeded("wall-clock limit of " + std::to_string(budget.max_secs) + " s exceeded while counting " +
                           G.spec().label());
    }
    RingElem g = decode(G, begin, coords);
    for (std::uint64_t i = begin; i < end; ++i, advance(g, coords, Q)) {
      const Code v = G.pr_n(G.lang(g));
      if (method == CountMethod::Brute) {
        if (v != 0) continue;
        ++acc.points;
        ++acc.per_slot[base.slot(N.norm_morphism(g))];
      } else {
        // lang(g (1 + a e_n)) = lang(g) (1 + (a^{q^n} - a) e_n), so the fiber is a^{q^n} - a = -v.
        if (F.trace_to(v, dn) != 0) continue;
        const auto y = F.artin_schreier_solve(F.neg(v), dn);
        if (!y) throw std::logic_error("Artin-Schreier solver failed on a solvable equation");
        RingElem rep = g;
        rep.a[n] = *y;
        ++acc.points;
        ++acc.per_slot[base.slot(N.norm_morphism(rep))];
      }
    }
  });

  Sweep out;
  out.per_slot.assign(slots, 0);
  for (const auto& a : accs) {
    out.points += a.points;
    for (std::size_t s = 0; s < slots; ++s) out.per_slot[s] += a.per_slot[s];
  }
  return out;
}

}  // namespace

std::string method_name(CountMethod m) { return m == CountMethod::Brute ? "brute" : "fiber"; }

CountMethod parse_method(const std::string& text) {
  if (text == "brute") return CountMethod::Brute;
  if (text == "fiber") return CountMethod::Fiber;
  throw std::invalid_argument("unknown count method '" + text + "' (expected brute or fiber)");
}

Json mpz_to_json(const mpz_class& v) {
  if (v.fits_slong_p()) return Json(static_cast<std::int64_t>(v.get_si()));
  return Json(v.get_str());
}

std::uint64_t count_cost(const GroupSpec& spec, std::uint32_t k, CountMethod method) {
  const std::uint64_t Q = checked_pow(spec.q(), static_cast<std::uint64_t>(spec.n) * k);
  const std::uint32_t coords = method == CountMethod::Brute ? spec.n : spec.n - 1;
  const std::uint64_t per_point = static_cast<std::uint64_t>(spec.n) * spec.n * (spec.n + 2);
  return saturating_mul(checked_pow(Q, coords), per_point);
}

CountReport count_points(const GroupSpec& spec, std::uint32_t k, const CountOptions& options) {
  spec.validate();
  if (k == 0) throw std::invalid_argument("extension index k must be positive");
  const Deadline clock(std::numeric_limits<double>::infinity());
  const std::string what = "count " + spec.label() + " k=" + std::to_string(k) + " " + method_name(options.method);
  const std::uint64_t degree = static_cast<std::uint64_t>(spec.f) * spec.n * k;
  if (checked_pow(spec.p, degree) > FieldCtx::kMaxSize) {
    throw BudgetExceeded(what + ": field F_{" + std::to_string(spec.p) + "^" + std::to_string(degree) +
                         "} exceeds the supported size");
  }
  options.budget.require_ops(count_cost(spec, k, options.method), what);

  const auto G = UnipotentGroup::over(spec, k);
  const Sweep sweep = run_sweep(G, options.method, options.budget, options.threads);
  const BaseFieldIndex base(G);

  CountReport r;
  r.spec = spec;
  r.k = k;
  r.method = options.method;
  const mpz_class qn = mpz_pow(spec.q(), spec.n);
  if (options.method == CountMethod::Brute) {
    r.total = mpz_class(std::to_string(sweep.points));
  } else {
    r.total = mpz_class(std::to_string(sweep.points)) * qn;
  }

  // Component values of the fiber method: the fiber through rep is rep (1 + t e_n), t in rep.a_n + F_{q^n},
  // and N shifts by Tr_{F_{q^n}/F_q}(t), which takes each value of F_q exactly q^{n-1} times.
  std::vector<std::pair<Code, mpz_class>> comps;
  for (std::size_t s = 0; s < base.pairs.size(); ++s) {
    mpz_class c;
    if (options.method == CountMethod::Brute) {
      c = mpz_class(std::to_string(sweep.per_slot[s]));
    } else {
      c = mpz_class(std::to_string(sweep.points)) * (qn / spec.q());
    }
    comps.emplace_back(base.pairs[s].second, c);
  }
  std::sort(comps.begin(), comps.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  r.per_component = std::move(comps);

  mpz_class sum = 0;
  for (const auto& [c, v] : r.per_component) sum += v;
  if (sum != r.total) throw std::logic_error("component counts do not add up to the total");

  if (options.method == CountMethod::Brute && options.cross_check) {
    CountOptions fiber = options;
    fiber.method = CountMethod::Fiber;
    const CountReport other = count_points(spec, k, fiber);
    if (other.total != r.total) {
      throw std::logic_error("brute and fiber counts disagree for " + spec.label() + " k=" + std::to_string(k));
    }
  }

  r.predicted = predict_count(spec, k);
  r.match = r.total == r.predicted;
  r.wall_time = clock.elapsed();
  return r;
}

Json CountReport::to_json() const {
  Json comps = Json::object();
  for (const auto& [c, v] : per_component) comps[std::to_string(c)] = mpz_to_json(v);
  Json j;
  j["spec"] = spec.to_json();
  j["k"] = k;
  j["total"] = mpz_to_json(total);
  j["per_component"] = comps;
  j["predicted"] = mpz_to_json(predicted);
  j["match"] = match;
  return j;
}

int mobius(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("mobius(0)");
  int result = 1;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    n /= p;
    if (n % p == 0) return 0;
    result = -result;
  }
  if (n > 1) result = -result;
  return result;
}

std::vector<std::uint32_t> divisors(std::uint32_t n) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t d = 1; d <= n; ++d) {
    if (n % d == 0) out.push_back(d);
  }
  return out;
}

mpz_class mpz_pow(std::uint64_t base, std::uint64_t e) {
  mpz_class b(std::to_string(base));
  mpz_class r;
  mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
  return r;
}

BettiTable betti(const GroupSpec& spec) {
  spec.validate();
  const std::uint64_t q = spec.q();
  const std::uint32_t n = spec.n;
  BettiTable t;
  t.spec = spec;
  for (std::uint32_t d : divisors(n)) {
    BettiRow row;
    row.d = d;
    row.n1 = n / d;
    row.degree = n + row.n1 - 2;
    for (std::uint32_t e : divisors(d)) row.count += mobius(d / e) * mpz_pow(q, e);
    std::uint64_t exponent = static_cast<std::uint64_t>(n) * (n / 2 - row.n1 / 2);
    if (d % 2 == 0 && row.n1 % 2 == 1) exponent -= n / 2;
    row.dim = mpz_pow(q, exponent);
    row.sign = (n - row.n1) % 2 == 0 ? 1 : -1;
    t.rows.push_back(row);
  }
  mpz_class lhs = 0;
  for (const auto& row : t.rows) lhs += row.count * row.dim * mpz_pow(q, static_cast<std::uint64_t>(n) * row.degree / 2);
  if (lhs != mpz_pow(q, static_cast<std::uint64_t>(n) * n)) {
    throw std::logic_error("Betti table of " + spec.label() + " fails the point-count identity at k = 1");
  }
  return t;
}

std::vector<std::pair<std::uint32_t, mpz_class>> BettiTable::cohomology() const {
  std::vector<std::pair<std::uint32_t, mpz_class>> out;
  for (const auto& row : rows) {
    auto it = std::find_if(out.begin(), out.end(), [&](const auto& e) { return e.first == row.degree; });
    if (it == out.end()) {
      out.emplace_back(row.degree, row.count * row.dim);
    } else {
      it->second += row.count * row.dim;
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

Json BettiTable::to_json() const {
  Json rs = Json::array();
  for (const auto& row : rows) {
    Json r;
    r["d"] = row.d;
    r["n1"] = row.n1;
    r["degree"] = row.degree;
    r["count"] = mpz_to_json(row.count);
    r["dim"] = mpz_to_json(row.dim);
    r["sign"] = row.sign;
    rs.push_back(r);
  }
  Json h = Json::object();
  for (const auto& [deg, dim] : cohomology()) h[std::to_string(deg)] = mpz_to_json(dim);
  Json j;
  j["spec"] = spec.to_json();
  j["rows"] = rs;
  j["cohomology"] = h;
  return j;
}

std::string BettiTable::to_csv() const {
  std::ostringstream os;
  os << "d,n1,degree,count,dim,sign\n";
  for (const auto& row : rows) {
    os << row.d << ',' << row.n1 << ',' << row.degree << ',' << row.count.get_str() << ',' << row.dim.get_str() << ','
       << row.sign << '\n';
  }
  return os.str();
}

mpz_class predict_count(const GroupSpec& spec, std::uint32_t k) {
  const BettiTable t = betti(spec);
  mpz_class total = 0;
  for (const auto& row : t.rows) {
    const mpz_class term =
        row.count * row.dim * mpz_pow(spec.q(), static_cast<std::uint64_t>(spec.n) * row.degree * k / 2);
    const bool negative = (static_cast<std::uint64_t>(row.degree) * (k + 1)) % 2 == 1;
    total += negative ? mpz_class(-term) : term;
  }
  return total;
}

mpz_class maximal_bound(const BettiTable& table) {
  mpz_class total = 0;
  for (const auto& [deg, dim] : table.cohomology()) {
    total += dim * mpz_pow(table.spec.q(), static_cast<std::uint64_t>(table.spec.n) * deg / 2);
  }
  return total;
}

Json MaximalityReport::to_json() const {
  Json j;
  j["spec"] = spec.to_json();
  j["counted"] = mpz_to_json(counted);
  j["bound"] = mpz_to_json(bound);
  j["match"] = match;
  return j;
}

MaximalityReport maximality_check(const GroupSpec& spec, const CountOptions& options) {
  MaximalityReport r;
  r.spec = spec;
  r.counted = count_points(spec, 1, options).total;
  r.bound = maximal_bound(betti(spec));
  r.match = r.counted == r.bound;
  return r;
}

std::vector<ZetaRow> zeta_table(const GroupSpec& spec, std::uint32_t kmax, const CountOptions& options) {
  std::vector<ZetaRow> rows;
  for (std::uint32_t k = 1; k <= kmax; ++k) {
    ZetaRow row;
    row.k = k;
    row.predicted = predict_count(spec, k);
    try {
      row.counted = count_points(spec, k, options).total;
      row.match = row.counted == row.predicted;
    } catch (const BudgetExceeded& e) {
      row.skipped = true;
      row.skip_reason = e.what();
    }
    rows.push_back(row);
  }
  return rows;
}

std::string zeta_csv(const std::vector<ZetaRow>& rows) {
  std::ostringstream os;
  os << "k,counted,predicted,match\n";
  for (const auto& r : rows) {
    os << r.k << ',' << (r.skipped ? "skipped" : r.counted.get_str()) << ',' << r.predicted.get_str() << ','
       << (r.skipped ? "skipped" : (r.match ? "true" : "false")) << '\n';
  }
  return os.str();
}

}  // namespace maxvar
