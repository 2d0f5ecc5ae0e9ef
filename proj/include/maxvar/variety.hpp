#pragma once

// Points of X = lang^{-1}(Y) with Y = {a_n = 0}, Betti numbers and point-count
// predictions from the cohomology of X, and zeta tables.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "maxvar/budget.hpp"
#include "maxvar/unipotent.hpp"

namespace maxvar {

enum class CountMethod { Brute, Fiber };

std::string method_name(CountMethod m);
CountMethod parse_method(const std::string& text);

struct CountOptions {
  CountMethod method = CountMethod::Fiber;
  Budget budget;
  unsigned threads = 1;
  // With the brute method, also run the fiber method and require agreement.
  bool cross_check = true;
};

struct CountReport {
  GroupSpec spec;
  std::uint32_t k = 1;
  CountMethod method = CountMethod::Fiber;
  mpz_class total;
  // Keyed by the code of c in the canonical presentation of F_q, ascending.
  std::vector<std::pair<Code, mpz_class>> per_component;
  mpz_class predicted;
  bool match = false;
  double wall_time = 0.0;  // not serialized

  Json to_json() const;
};

// Estimated field operations of a count; compared against the budget.
std::uint64_t count_cost(const GroupSpec& spec, std::uint32_t k, CountMethod method);

// #X(F_{q^{nk}}), split by the value of the norm morphism. Throws BudgetExceeded
// when the estimate or the wall-clock limit is exceeded.
CountReport count_points(const GroupSpec& spec, std::uint32_t k, const CountOptions& options = {});

struct BettiRow {
  std::uint32_t d = 1;       // conductor exponent
  std::uint32_t n1 = 1;      // n / d
  std::uint32_t degree = 0;  // n + n1 - 2
  mpz_class count;           // characters of conductor exactly q^d
  mpz_class dim;             // dimension of rho_psi
  int sign = 1;              // (-1)^{n - n1}
};

struct BettiTable {
  GroupSpec spec;
  std::vector<BettiRow> rows;  // ascending d

  // (degree, dim H^degree_c) for nonzero degrees, ascending.
  std::vector<std::pair<std::uint32_t, mpz_class>> cohomology() const;
  Json to_json() const;
  // Header d,n1,degree,count,dim,sign.
  std::string to_csv() const;
};

int mobius(std::uint64_t n);
std::vector<std::uint32_t> divisors(std::uint32_t n);
mpz_class mpz_pow(std::uint64_t base, std::uint64_t e);

// Throws std::logic_error if sum_d c(d) dim(d) q^{n i(d)/2} != q^{n^2}.
BettiTable betti(const GroupSpec& spec);
// Lefschetz count with Frobenius eigenvalue (-1)^i q^{ni/2} on degree i.
mpz_class predict_count(const GroupSpec& spec, std::uint32_t k);
// sum_i q^{ni/2} dim H^i_c
mpz_class maximal_bound(const BettiTable& table);

struct MaximalityReport {
  GroupSpec spec;
  mpz_class counted;
  mpz_class bound;
  bool match = false;
  Json to_json() const;
};

MaximalityReport maximality_check(const GroupSpec& spec, const CountOptions& options = {});

struct ZetaRow {
  std::uint32_t k = 1;
  bool skipped = false;
  std::string skip_reason;
  mpz_class counted;
  mpz_class predicted;
  bool match = false;
};

std::vector<ZetaRow> zeta_table(const GroupSpec& spec, std::uint32_t kmax, const CountOptions& options = {});
// Header k,counted,predicted,match; skipped rows carry "skipped" in counted and match.
std::string zeta_csv(const std::vector<ZetaRow>& rows);

// Integers that fit in 64 bits as JSON numbers, larger ones as decimal strings.
Json mpz_to_json(const mpz_class& v);

}  // namespace maxvar
