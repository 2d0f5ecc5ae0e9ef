// One pass/fail line per acceptance criterion. Exit status 0 iff all pass.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "maxvar/chars.hpp"
#include "maxvar/norm.hpp"
#include "maxvar/suite.hpp"
#include "maxvar/variety.hpp"

using namespace maxvar;

namespace {

// Pinned limits.
constexpr std::uint64_t kIdentitySamples = 10000;
constexpr std::uint32_t kIdentityMaxK = 3;
constexpr std::uint64_t kExhaustivePairsOrder = std::uint64_t{1} << 12;
constexpr std::uint64_t kHomomorphismSamples = 10000;
constexpr std::uint64_t kClosedFormOrder = std::uint64_t{1} << 16;
constexpr double kBettiSecs = 1.0;
constexpr double kSuiteSecs = 600.0;
constexpr unsigned kThreadsA = 1;
constexpr unsigned kThreadsB = 4;

struct Outcome {
  bool pass = true;
  std::string first_failure;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) first_failure = what;
    pass = pass && ok;
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

GroupSpec spec(std::uint32_t p, std::uint32_t f, std::uint32_t n, int kase) { return GroupSpec{p, f, n, kase}; }

std::vector<GroupSpec> matrix_specs(const SuiteConfig& c) {
  std::vector<GroupSpec> out;
  for (const auto& e : c.matrix) out.push_back(e.spec);
  return out;
}

bool starts_with(const std::string& s, const std::string& prefix) { return s.rfind(prefix, 0) == 0; }

std::mt19937_64& rng() {
  static std::mt19937_64 gen(0x61636365ULL);
  return gen;
}

Code uniform(std::uint64_t bound) { return std::uniform_int_distribution<std::uint64_t>(0, bound - 1)(rng()); }

RingElem random_u(const UnipotentGroup& G) {
  RingElem g = G.one();
  for (std::uint32_t j = 1; j <= G.n(); ++j) g.a[j] = uniform(G.field().size());
  return g;
}

mpz_class ipow(std::uint64_t b, std::uint64_t e) {
  mpz_class r = 1;
  for (std::uint64_t i = 0; i < e; ++i) r *= b;
  return r;
}

// Number of elements of F_{q^n} generating exactly F_{q^d}, by peeling smaller subfields.
mpz_class exact_conductor_count(std::uint64_t q, std::uint32_t d) {
  mpz_class c = ipow(q, d);
  for (std::uint32_t e = 1; e < d; ++e) {
    if (d % e == 0) c -= exact_conductor_count(q, e);
  }
  return c;
}

// dim rho_psi for conductor q^d: q^{n(floor(n/2) - floor(n1/2))}, lowered by q^{n/2}
// when d is even and n1 is odd.
mpz_class expected_dim(std::uint64_t q, std::uint32_t n, std::uint32_t d) {
  const std::uint32_t n1 = n / d;
  std::uint64_t e2 = 2ull * n * (n / 2 - n1 / 2);
  if (d % 2 == 0 && n1 % 2 == 1) e2 -= n;
  return ipow(q, e2 / 2);
}

void criterion_zeta(const SuiteReport& report, const SuiteConfig& config, Outcome& o) {
  std::uint64_t rows = 0;
  std::map<std::string, std::uint32_t> per_spec;
  for (const auto& c : report.checks) {
    if (!starts_with(c.name, "zeta ") && !starts_with(c.name, "method-agreement ")) continue;
    o.require(c.status == CheckStatus::Pass, c.name + " " + status_name(c.status));
    if (starts_with(c.name, "zeta ")) {
      ++rows;
      ++per_spec[c.name.substr(5, c.name.rfind(' ') - 5)];
    }
  }
  for (const auto& e : config.matrix) {
    o.require(per_spec[e.spec.label()] == e.kmax, e.spec.label() + " missing zeta rows");
  }
  const std::vector<std::pair<std::uint32_t, long>> anchors22 = {{1, 16}, {2, 16}, {3, 160}};
  for (int kase : {1, 2}) {
    for (const auto& [k, v] : anchors22) {
      const auto r = count_points(spec(2, 1, 2, kase), k);
      o.require(r.total == v && r.predicted == v, "anchor q=2,n=2 k=" + std::to_string(k));
    }
    o.require(count_points(spec(2, 1, 3, kase), 1).total == 512, "anchor q=2,n=3 k=1");
    o.require(count_points(spec(2, 1, 4, kase), 1).total == 65536, "anchor q=2,n=4 k=1");
  }
  o.detail << rows << " zeta rows over " << config.matrix.size() << " specs, anchors 16,16,160,512,65536";
}

void criterion_maximality(const SuiteConfig& config, Outcome& o) {
  for (const auto& s : matrix_specs(config)) {
    const auto counted = count_points(s, 1).total;
    // Independent of predict_count: sum over rows of q^{n i/2} * c(d) * dim.
    mpz_class bound = 0;
    for (const auto& row : betti(s).rows) {
      const mpz_class q_half = ipow(s.q(), static_cast<std::uint64_t>(s.n) * row.degree);
      mpz_class root;
      mpz_sqrt(root.get_mpz_t(), q_half.get_mpz_t());
      bound += root * row.count * row.dim;
    }
    o.require(counted == bound, s.label() + " counted " + counted.get_str() + " bound " + bound.get_str());
  }
  const auto coh = betti(spec(2, 1, 2, 1)).cohomology();
  mpz_class anchor = 0;
  for (const auto& [deg, dim] : coh) anchor += ipow(2, deg) * dim;
  o.require(anchor == 16 && coh.size() == 2 && coh[0].first == 1 && coh[0].second == 4 && coh[1].first == 2 &&
                coh[1].second == 2,
            "anchor 16 = 2*4 + 4*2");
  o.detail << matrix_specs(config).size() << " specs, anchor 16 = 2*4 + 4*2";
}

void criterion_betti(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  std::uint64_t tables = 0;
  for (std::uint32_t q : {2u, 3u, 4u, 5u}) {
    const std::uint32_t p = q == 4 ? 2 : q;
    const std::uint32_t f = q == 4 ? 2 : 1;
    for (std::uint32_t n = 2; n <= 8; ++n) {
      for (int kase : {1, 2}) {
        const auto s = spec(p, f, n, kase);
        BettiTable table;
        try {
          table = betti(s);
        } catch (const std::exception& e) {
          o.require(false, s.label() + ": " + e.what());
          continue;
        }
        ++tables;
        mpz_class lhs = 0;
        for (std::uint32_t d = 1; d <= n; ++d) {
          if (n % d) continue;
          const std::uint32_t i = n + n / d - 2;
          const mpz_class c = exact_conductor_count(q, d);
          const mpz_class dim = expected_dim(q, n, d);
          const mpz_class qi = ipow(q, static_cast<std::uint64_t>(n) * i);
          mpz_class root;
          mpz_sqrt(root.get_mpz_t(), qi.get_mpz_t());
          lhs += c * dim * root;
          bool row_found = false;
          for (const auto& row : table.rows) {
            if (row.d == d) row_found = row.count == c && row.dim == dim && row.degree == i;
          }
          o.require(row_found, s.label() + " row d=" + std::to_string(d));
        }
        o.require(lhs == ipow(q, static_cast<std::uint64_t>(n) * n), s.label() + " identity");
      }
    }
  }
  const double secs = seconds_since(t0);
  o.require(secs < kBettiSecs, "took " + std::to_string(secs) + " s");
  o.detail << tables << " tables, n <= 8, q in {2,3,4,5}";
}

void criterion_norm(const SuiteConfig& config, Outcome& o) {
  std::uint64_t identity = 0, pairs = 0, closed = 0, certified = 0;
  for (const auto& s : matrix_specs(config)) {
    // (i) N^q - N = pr_n(lang)
    for (std::uint32_t k = 1; k <= kIdentityMaxK; ++k) {
      const auto G = UnipotentGroup::over(s, k);
      const FieldCtx& F = G.field();
      const NormOracle N(G);
      for (std::uint64_t t = 0; t < kIdentitySamples; ++t) {
        const RingElem g = random_u(G);
        const Code v = N.norm_morphism(g);
        if (F.sub(F.frob(v, s.f), v) != G.pr_n(G.lang(g))) {
          o.require(false, s.label() + " identity k=" + std::to_string(k));
          break;
        }
        ++identity;
      }
    }
    // (ii) N(gh) = N(g) + N(h) for rational h
    {
      const auto G1 = UnipotentGroup::over(s, 1);
      const FieldCtx& F1 = G1.field();
      const NormOracle N1(G1);
      const PointSet U(G1, SubgroupId{SubgroupKind::U});
      bool ok = true;
      if (U.size() <= kExhaustivePairsOrder) {
        for (const RingElem& g : U) {
          const Code ng = N1.norm_morphism(g);
          for (const RingElem& h : U) {
            ok = ok && N1.norm_morphism(G1.mul(g, h)) == F1.add(ng, N1.norm_morphism(h));
            ++pairs;
          }
        }
      } else {
        for (std::uint64_t t = 0; t < kHomomorphismSamples; ++t) {
          const RingElem g = U.at(uniform(U.size()));
          const RingElem h = U.at(uniform(U.size()));
          ok = ok && N1.norm_morphism(G1.mul(g, h)) == F1.add(N1.norm_morphism(g), N1.norm_morphism(h));
          ++pairs;
        }
      }
      // g over an extension, h rational.
      const auto G2 = UnipotentGroup::over(s, 2);
      const FieldCtx& F2 = G2.field();
      const NormOracle N2(G2);
      const PointSet U2(G2, SubgroupId{SubgroupKind::U});
      for (std::uint64_t t = 0; t < kHomomorphismSamples; ++t) {
        const RingElem g = random_u(G2);
        const RingElem h = U2.at(uniform(U2.size()));
        ok = ok && N2.norm_morphism(G2.mul(g, h)) == F2.add(N2.norm_morphism(g), N2.norm_morphism(h));
        ++pairs;
      }
      o.require(ok, s.label() + " homomorphism");
      // (iii) closed forms on every rational point
      if (U.size() <= kClosedFormOrder) {
        bool agree = true;
        for (const RingElem& g : U) {
          agree = agree && N1.reduced_norm_point(g) == N1.norm_morphism(g);
          ++closed;
        }
        o.require(agree, s.label() + " closed form");
      }
    }
  }
  // (iv)
  for (const auto& s : {spec(2, 1, 2, 1), spec(2, 1, 2, 2), spec(2, 1, 3, 1), spec(2, 1, 3, 2), spec(3, 1, 2, 1),
                        spec(3, 1, 2, 2)}) {
    const auto rep = drinfeld_certify(s);
    o.require(rep.certified(), s.label() + " certificate");
    if (rep.certified()) ++certified;
  }
  o.detail << identity << " identity samples, " << pairs << " homomorphism pairs, " << closed
           << " closed-form points, " << certified << " certificates";
}

void criterion_rho(Outcome& o) {
  std::uint64_t chars = 0, divided = 0;
  for (const auto& s : {spec(2, 1, 2, 1), spec(2, 1, 2, 2), spec(2, 1, 3, 1), spec(2, 1, 3, 2), spec(3, 1, 2, 1),
                        spec(3, 1, 2, 2)}) {
    const auto G = UnipotentGroup::over(s);
    const FieldCtx& F = G.field();
    const PointSet Z(G, SubgroupId{SubgroupKind::Z});
    std::vector<RhoPsi> rhos;
    for (Code b = 0; b < F.size(); ++b) {
      RhoPsi rho;
      try {
        rho = build_rho(G, b);
      } catch (const std::exception& e) {
        o.require(false, s.label() + " b=" + std::to_string(b) + ": " + e.what());
        continue;
      }
      const ClassFn& chi = *rho.character;
      o.require(inner_product(chi, chi) == 1, s.label() + " norm b=" + std::to_string(b));
      const AddChar psi{&F, b};
      for (const RingElem& z : Z) {
        o.require(chi(z) == CycNum::zeta_pow(s.p, psi.exponent(z.a[s.n])) * mpq_class(rho.dim),
                  s.label() + " central b=" + std::to_string(b));
      }
      const std::uint32_t d = conductor(s, F, b);
      o.require(rho.dim == expected_dim(s.q(), s.n, d), s.label() + " dim b=" + std::to_string(b));
      const bool branch = d % 2 == 0 && (s.n / d) % 2 == 1;
      o.require(rho.divided == branch, s.label() + " division branch b=" + std::to_string(b));
      if (rho.divided) ++divided;
      if (d == s.n && s.q() == 2 && s.n == 2) o.require(rho.dim == 2, "anchor dim 2");
      if (d == s.n && s.q() == 2 && s.n == 3) o.require(rho.dim == 8, "anchor dim 8");
      rhos.push_back(std::move(rho));
      ++chars;
    }
    for (std::size_t i = 0; i < rhos.size(); ++i) {
      for (std::size_t j = i + 1; j < rhos.size(); ++j) {
        o.require(inner_product(*rhos[i].character, *rhos[j].character) == 0, s.label() + " orthogonality");
      }
    }
  }
  o.require(divided > 0, "division branch not exercised");
  o.detail << chars << " characters, " << divided << " exact divisions by q^{n/2}";
}

void criterion_trace_sums(Outcome& o) {
  std::uint64_t sums = 0;
  for (const auto& s : {spec(2, 1, 2, 1), spec(2, 1, 2, 2), spec(2, 1, 3, 1), spec(2, 1, 3, 2)}) {
    const auto G = UnipotentGroup::over(s);
    const FieldCtx& F = G.field();
    for (Code b = 0; b < F.size(); ++b) {
      const auto r = trace_sum(G, b);
      const std::uint32_t d = conductor(s, F, b);
      const std::uint32_t n1 = s.n / d;
      const mpz_class mult = (d % 2 == 0 && n1 % 2 == 1) ? ipow(s.q(), s.n / 2) : mpz_class(1);
      const mpz_class expected = mult * ipow(s.q(), static_cast<std::uint64_t>(s.n) * (s.n + n1 - 2) / 2);
      o.require(r.value == expected && r.value > 0, s.label() + " b=" + std::to_string(b));
      if (s.n == 2 && d == 2) o.require(r.value == 4, "anchor 4");
      if (d == 1) o.require(r.value == ipow(s.q(), s.n * (s.n - 1)), "anchor q^{n(n-1)}");
      ++sums;
    }
  }
  o.detail << sums << " trace sums";
}

void criterion_gauss(Outcome& o) {
  std::uint64_t sums = 0;
  for (std::uint32_t q : {2u, 3u}) {
    for (std::uint32_t k = 1; k <= 3; ++k) {
      const auto r = gauss_sum(q, 1, k);
      const mpz_class expected = (k % 2 == 1 ? 1 : -1) * ipow(q, k + 1);
      o.require(r.value == expected, "q=" + std::to_string(q) + " k=" + std::to_string(k));
      ++sums;
    }
  }
  o.require(gauss_sum(2, 1, 1).value == 4, "anchor 4");
  o.detail << sums << " Gauss sums";
}

void criterion_pairing(Outcome& o) {
  std::uint64_t primitive = 0, degenerate = 0;
  for (const auto& s : {spec(2, 1, 2, 1), spec(2, 1, 2, 2), spec(3, 1, 2, 1), spec(3, 1, 2, 2)}) {
    const auto G = UnipotentGroup::over(s);
    const FieldCtx& F = G.field();
    for (Code b = 1; b < F.size(); ++b) {
      const auto r = pairing_check(G, b);
      if (r.d == s.n) {
        o.require(r.precondition && r.nondegenerate && r.subfield_isotropic && r.maximal_isotropic && r.passed,
                  s.label() + " primitive b=" + std::to_string(b));
        ++primitive;
      } else if ((s.n / 2) % r.d == 0) {
        o.require(!r.precondition && !r.nondegenerate && r.passed, s.label() + " degenerate b=" + std::to_string(b));
        ++degenerate;
      }
    }
  }
  o.require(primitive > 0 && degenerate > 0, "coverage");
  o.detail << primitive << " primitive, " << degenerate << " degenerate flagged";
}

void criterion_determinism(const std::string& json_a, const std::string& csv_a, double secs_a, Outcome& o) {
  SuiteConfig config = default_suite();
  config.threads = kThreadsB;
  const auto t0 = std::chrono::steady_clock::now();
  const SuiteReport b = run_suite(config);
  const double secs_b = seconds_since(t0);
  o.require(b.to_json().dump(2) == json_a, "json reports differ");
  o.require(b.to_csv() == csv_a, "csv reports differ");
  o.require(secs_a <= kSuiteSecs && secs_b <= kSuiteSecs, "runtime over limit");
  char buf[160];
  std::snprintf(buf, sizeof buf, "threads %u vs %u identical, %.1f s and %.1f s", kThreadsA, kThreadsB, secs_a,
                secs_b);
  o.detail << buf;
}

}  // namespace

int main() {
  SuiteConfig config = default_suite();
  config.threads = kThreadsA;
  const auto t0 = std::chrono::steady_clock::now();
  const SuiteReport report = run_suite(config);
  const double secs_a = seconds_since(t0);

  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria = {
      {"zeta agreement", [&](Outcome& o) { criterion_zeta(report, config, o); }},
      {"maximality", [&](Outcome& o) { criterion_maximality(config, o); }},
      {"betti identity", [&](Outcome& o) { criterion_betti(o); }},
      {"reduced norm", [&](Outcome& o) { criterion_norm(config, o); }},
      {"representation certificates", [&](Outcome& o) { criterion_rho(o); }},
      {"trace sums", [&](Outcome& o) { criterion_trace_sums(o); }},
      {"gauss sums", [&](Outcome& o) { criterion_gauss(o); }},
      {"pairing", [&](Outcome& o) { criterion_pairing(o); }},
      {"determinism", [&](Outcome& o) {
         criterion_determinism(report.to_json().dump(2), report.to_csv(), secs_a, o);
       }},
  };

  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    all = all && o.pass;
    std::cout << "criterion " << (i + 1) << " " << (o.pass ? "PASS" : "FAIL") << " " << criteria[i].first << ": "
              << o.detail.str();
    if (!o.pass) std::cout << " (first failure: " << o.first_failure << ")";
    std::cout << std::endl;
  }
  return all ? 0 : 1;
}
