#pragma once

// The twisted ring R(B) = {a_0 + a_1 e_1 + ... + a_n e_n} with e_i a = a^{q^i} e_i,
// its unit group, and the unipotent subgroup U = {a_0 = 1}.
//
// Case 1: e_i e_j = e_{i+j} when i + j <= n, else 0.
// Case 2: e_i e_j = e_n when i + j = n, else 0.

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "maxvar/fields.hpp"

namespace maxvar {

constexpr std::uint32_t kMaxRank = 16;

class GroupError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GroupSpec {
  std::uint32_t p = 2;
  std::uint32_t f = 1;
  std::uint32_t n = 2;
  int kase = 1;

  std::uint64_t q() const;
  // Throws GroupError unless p is prime, f >= 1, min_rank <= n <= kMaxRank and kase is 1 or 2.
  void validate(std::uint32_t min_rank = 2) const;
  std::string label() const;
  Json to_json() const;
  static GroupSpec from_json(const Json& j);
  friend bool operator==(const GroupSpec&, const GroupSpec&) = default;
};

struct RingElem {
  std::array<Code, kMaxRank + 1> a{};
  friend bool operator==(const RingElem&, const RingElem&) = default;
};

enum class SubgroupKind { U, Z, YcapU, H, Hplus, Hminus, Gamma, Usub };

struct SubgroupId {
  SubgroupKind kind = SubgroupKind::U;
  std::uint32_t d = 1;

  std::string label() const;
  static SubgroupId parse(const std::string& text);
  friend bool operator==(const SubgroupId&, const SubgroupId&) = default;
};

class UnipotentGroup {
 public:
  // Coefficients live in `ambient`, whose degree over F_p must be a multiple of f*n.
  UnipotentGroup(const GroupSpec& spec, std::shared_ptr<const FieldCtx> ambient, std::uint32_t min_rank = 2);
  // Ambient field F_{q^{nk}}.
  static UnipotentGroup over(const GroupSpec& spec, std::uint32_t k = 1, std::uint32_t min_rank = 2);

  const GroupSpec& spec() const noexcept { return spec_; }
  const FieldCtx& field() const noexcept { return *field_; }
  std::shared_ptr<const FieldCtx> field_ptr() const noexcept { return field_; }
  std::uint32_t n() const noexcept { return spec_.n; }
  // Degree of F_{q^n} over F_p.
  std::uint32_t rational_degree() const noexcept { return spec_.f * spec_.n; }

  RingElem one() const;
  // 1 + x e_j
  RingElem basic(std::uint32_t j, Code x) const;
  bool is_unipotent(const RingElem& g) const { return g.a[0] == 1; }

  RingElem mul(const RingElem& g, const RingElem& h) const;
  // Inverse of a unipotent element; throws GroupError if a_0 != 1.
  RingElem inv(const RingElem& g) const;
  // Inverse of any unit of R(B) (a_0 != 0).
  RingElem inv_unit(const RingElem& g) const;
  RingElem pow(const RingElem& g, std::uint64_t e) const;
  RingElem commutator(const RingElem& g, const RingElem& h) const;

  // x -> x^{q^j} on every coefficient.
  RingElem frob_q(const RingElem& g, std::int64_t j) const;
  // Fr_{q^n}(g) g^{-1}
  RingElem lang(const RingElem& g) const;
  Code pr_n(const RingElem& g) const { return g.a[n()]; }

  // b with g = (1 - b[1] e_1)(1 - b[2] e_2) ... (1 - b[n] e_n); b[0] is unused and zero.
  std::vector<Code> normal_form(const RingElem& g) const;
  RingElem from_factors(const std::vector<Code>& b) const;

  // lambda g lambda^{-1}: a_j -> lambda^{1 - q^j} a_j.
  RingElem gm_conj(Code lambda, const RingElem& g) const;
  // Coordinatewise addition of the nilpotent parts.
  RingElem boxplus(const RingElem& g, const RingElem& h) const;

  bool is_rational(const RingElem& g) const;

  // The subgroup U^{n/d, q^d} (same case, same ambient field).
  UnipotentGroup sub_group(std::uint32_t d) const;
  // Projection H(d) -> U^{n/d, q^d} discarding a_j with d not dividing j.
  RingElem nu(const RingElem& h, std::uint32_t d) const;
  // Inverse of nu restricted to the subgroup of indices divisible by d.
  RingElem lift_sub(const RingElem& h, std::uint32_t d) const;

  Json element_to_json(const RingElem& g) const;
  RingElem element_from_json(const Json& j) const;
  std::string element_key(const RingElem& g) const;

 private:
  GroupSpec spec_;
  std::shared_ptr<const FieldCtx> field_;
  // prod_[i][j] = index of e_i e_j, or -1 when the product vanishes.
  std::array<std::array<int, kMaxRank + 1>, kMaxRank + 1> prod_{};
};

// Point set of a distinguished subgroup, enumerated lexicographically in
// (a_1, ..., a_n) with a_1 most significant.
class PointSet {
 public:
  enum class Scope { Rational, Ambient };

  PointSet(const UnipotentGroup& group, SubgroupId id, Scope scope = Scope::Rational);

  const UnipotentGroup& group() const noexcept { return *group_; }
  const SubgroupId& id() const noexcept { return id_; }
  std::uint64_t size() const noexcept { return size_; }
  RingElem at(std::uint64_t index) const;
  std::optional<std::uint64_t> index_of(const RingElem& g) const;
  bool contains(const RingElem& g) const { return index_of(g).has_value(); }
  // Whether coordinate j may take the value x.
  bool slot_allows(std::uint32_t j, Code x) const;
  // Number of free coordinates per slot, for reporting.
  std::vector<std::uint64_t> slot_sizes() const;

  class Iterator {
   public:
    Iterator(const PointSet& set, std::uint64_t index);
    const RingElem& operator*() const noexcept { return current_; }
    std::uint64_t index() const noexcept { return index_; }
    Iterator& operator++();
    friend bool operator==(const Iterator& a, const Iterator& b) { return a.index_ == b.index_; }

   private:
    const PointSet* set_;
    std::uint64_t index_;
    std::array<std::uint64_t, kMaxRank + 1> digits_{};
    RingElem current_;
  };

  Iterator begin() const { return Iterator(*this, 0); }
  Iterator end() const { return Iterator(*this, size_); }
  Iterator iterator_at(std::uint64_t index) const { return Iterator(*this, index); }

 private:
  struct Slot {
    // Either an explicit sorted value list or the range 0..range-1.
    std::vector<Code> values;
    std::uint64_t range = 0;
    std::uint64_t count() const { return values.empty() ? range : values.size(); }
    Code value(std::uint64_t i) const { return values.empty() ? i : values[i]; }
  };

  const UnipotentGroup* group_;
  SubgroupId id_;
  std::array<Slot, kMaxRank + 1> slots_;
  std::uint64_t size_ = 1;
};

}  // namespace maxvar
