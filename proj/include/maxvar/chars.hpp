#pragma once

// Exact character theory on U(F_{q^n}): additive characters and conductors, the
// linear characters psi~ on H(d), induced class functions, the representations
// rho_psi, and the exponential sums attached to them.
//
// Base character: psi_0(x) = zeta_p^{lift(x)}, lift: F_p -> {0, ..., p-1}.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "maxvar/budget.hpp"
#include "maxvar/cyclo.hpp"
#include "maxvar/unipotent.hpp"

namespace maxvar {

class CharError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// psi_b(x) = psi_0(Tr_{F/F_p}(b x)) on a finite field F.
struct AddChar {
  const FieldCtx* field = nullptr;
  Code b = 0;

  // Exponent of zeta_p in psi_b(x).
  std::uint32_t exponent(Code x) const { return field->prime_trace(field->mul(b, x)); }
};

// Exponent of zeta_p in psi_0(Tr_{F_{p^s}/F_p}(z)) for z in the degree-s subfield of F.
std::uint32_t subfield_prime_trace(const FieldCtx& F, Code z, std::uint32_t s);

// Least d | n with b in F_{q^d}.
std::uint32_t conductor(const GroupSpec& spec, const FieldCtx& F, Code b);

// Values on the canonical enumeration of a subgroup of U(F_{q^n}).
class ClassFn {
 public:
  ClassFn(std::shared_ptr<const PointSet> domain, std::vector<CycNum> values);

  const PointSet& domain() const noexcept { return *domain_; }
  std::shared_ptr<const PointSet> domain_ptr() const noexcept { return domain_; }
  const std::vector<CycNum>& values() const noexcept { return values_; }
  const CycNum& at_index(std::uint64_t i) const { return values_.at(i); }
  // Value at g, or zero when g lies outside the domain.
  CycNum operator()(const RingElem& g) const;

  // Header key,value; keys are element keys, values coefficient vectors.
  std::string to_csv() const;
  Json to_json() const;

 private:
  std::shared_ptr<const PointSet> domain_;
  std::vector<CycNum> values_;
};

// A function with values in mu_p given by exponents on a subgroup.
struct LinearFn {
  std::shared_ptr<const PointSet> domain;
  std::uint32_t p = 2;
  std::vector<std::uint32_t> exps;

  ClassFn to_class_fn() const;
};

// The trivial class function 1 on a subgroup, and the regular character of the trivial subgroup.
ClassFn trivial_fn(std::shared_ptr<const PointSet> domain);

// psi~ = psi_1 o Nm^{n1, q^d} o nu on H(d), d the conductor of psi_b.
LinearFn psi_tilde(const UnipotentGroup& G, Code b);
// psi o pr_n on a subgroup.
LinearFn psi_pr_n(const UnipotentGroup& G, Code b, SubgroupId id);

// Left coset representatives of H in the ambient set, least element of each coset.
std::vector<RingElem> coset_reps(const PointSet& H, const PointSet& G);

// (ind f)(g) = sum_i f0(x_i^{-1} g x_i). Throws CharError unless H is a subset of G.
ClassFn induce(const ClassFn& f, std::shared_ptr<const PointSet> G);
ClassFn induce(const LinearFn& f, std::shared_ptr<const PointSet> G);

// (1/|G|) sum f(g) conj(g'(g)); throws NotRational if the sum is irrational.
mpq_class inner_product(const ClassFn& f, const ClassFn& g);
CycNum inner_product_exact(const ClassFn& f, const ClassFn& g);
ClassFn restrict_to(const ClassFn& f, std::shared_ptr<const PointSet> H);

struct RhoPsi {
  GroupSpec spec;
  Code b = 0;
  std::uint32_t d = 1;
  std::uint32_t n1 = 1;
  bool divided = false;  // d even and n1 odd: character = ind(psi~) / q^{n/2}
  mpz_class dim;
  std::uint32_t degree = 0;
  int eigen_sign = 1;                // (-1)^degree
  std::uint64_t eigen_exponent2 = 0;  // eigenvalue = eigen_sign * q^{eigen_exponent2 / 2}
  std::shared_ptr<const ClassFn> character;

  Json to_json(bool include_table = false) const;
};

RhoPsi build_rho(const UnipotentGroup& G, Code b, const Budget& budget = {});

struct TraceSumReport {
  GroupSpec spec;
  Code b = 0;
  std::uint32_t d = 1;
  mpz_class value;
  mpz_class expected;
  bool positive = false;
  bool match = false;
  Json to_json() const;
};

// sum over Y(F_{q^n}) of ind_{H(d)}^U (psi o pr_n).
TraceSumReport trace_sum(const UnipotentGroup& G, Code b, const Budget& budget = {});

struct GaussSumReport {
  std::uint32_t p = 2;
  std::uint32_t f = 1;
  std::uint32_t k = 1;
  Code b = 0;  // in F_{q^{2k}}, lying in F_{q^2}
  mpz_class value;
  mpz_class expected;
  bool match = false;
  Json to_json() const;
};

// sum_{x in F_{q^{2k}}} psi(Tr_{F_{q^{2k}}/F_{q^2}}(x^{q+1})) with psi nontrivial on F_{q^2} and
// trivial on F_q. Without b, the least valid parameter is used; an invalid b throws CharError.
GaussSumReport gauss_sum(std::uint32_t p, std::uint32_t f, std::uint32_t k, std::optional<Code> b = std::nullopt,
                         const Budget& budget = {});

struct PairingReport {
  GroupSpec spec;
  Code b = 0;
  std::uint32_t d = 1;
  bool precondition = false;  // d does not divide n/2
  std::uint64_t radical_size = 0;
  bool nondegenerate = false;
  bool subfield_isotropic = false;
  std::uint64_t subfield_perp_size = 0;
  bool maximal_isotropic = false;
  // Nondegenerate with a Lagrangian subfield when the precondition holds, degenerate otherwise.
  bool passed = false;
  Json to_json() const;
};

// (x, y) -> psi(x y^{q^{n/2}} - y x^{q^{n/2}}) on F_{q^n}, n even.
PairingReport pairing_check(const UnipotentGroup& G, Code b, const Budget& budget = {});

}  // namespace maxvar
