#pragma once

// Finite fields F_{p^d} in a fixed, reproducible presentation.
//
// Elements are stored as a packed coefficient vector ("code"): the element
// c_0 + c_1 t + ... + c_{d-1} t^{d-1} has code c_0 + c_1 p + ... + c_{d-1} p^{d-1}.
// Enumerating codes 0 .. p^d - 1 therefore enumerates the field in the order
// of its coefficient vectors.

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace maxvar {

using Code = std::uint64_t;
using Json = nlohmann::ordered_json;

class FieldError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

bool is_prime(std::uint64_t n);

// Returns s with p^s == value, or nullopt if value is not a power of p.
std::optional<std::uint32_t> log_base(std::uint64_t p, std::uint64_t value);

class FieldCtx {
 public:
  static constexpr std::uint64_t kMaxSize = std::uint64_t{1} << 40;
  static constexpr std::uint64_t kTableLimit = std::uint64_t{1} << 22;
  static constexpr std::uint64_t kSmallTableLimit = std::uint64_t{1} << 16;
  static constexpr std::uint64_t kAddTableLimit = std::uint64_t{1} << 10;

  // Canonical context for (p, d). Repeated calls return the same object.
  static std::shared_ptr<const FieldCtx> make(std::uint32_t p, std::uint32_t d);

  FieldCtx(const FieldCtx&) = delete;
  FieldCtx& operator=(const FieldCtx&) = delete;

  std::uint32_t characteristic() const noexcept { return p_; }
  std::uint32_t degree() const noexcept { return d_; }
  Code size() const noexcept { return size_; }
  // c_0, ..., c_d with c_d = 1.
  std::span<const std::uint32_t> modulus() const noexcept { return modulus_; }
  bool uses_tables() const noexcept { return !exp_.empty(); }

  Code add(Code a, Code b) const;
  Code sub(Code a, Code b) const;
  Code neg(Code a) const;
  Code scale(Code a, std::uint32_t c) const;
  Code mul(Code a, Code b) const;
  Code inv(Code a) const;
  Code div(Code a, Code b) const { return mul(a, inv(b)); }
  Code pow(Code a, std::uint64_t e) const;
  // a^{p^e}; negative e is taken modulo the Frobenius order d.
  Code frob(Code a, std::int64_t e) const;

  Code scalar(std::int64_t c) const;
  Code generator() const;

  // Tr / N from this field down to its subfield of degree `sub` over F_p.
  Code trace_to(Code a, std::uint32_t sub) const;
  Code norm_to(Code a, std::uint32_t sub) const;
  bool in_subfield(Code a, std::uint32_t sub) const { return frob(a, sub) == a; }
  // Absolute trace as an integer in [0, p).
  std::uint32_t prime_trace(Code a) const;
  // All elements of the degree-`sub` subfield, sorted by code.
  std::vector<Code> subfield_elements(std::uint32_t sub) const;
  // theta with Tr_{this / F_{p^sub}}(theta) = 1.
  Code unit_trace_element(std::uint32_t sub) const;

  // One solution y of y^{p^s} - y = c, if any.
  std::optional<Code> artin_schreier_solve(Code c, std::uint32_t s) const;

  std::vector<std::uint32_t> coeffs(Code a) const;
  Code from_coeffs(std::span<const std::uint32_t> c) const;

  Json to_json() const;
  Json element_to_json(Code a) const;
  Code element_from_json(const Json& j) const;

  // F_p-linear map x -> x^{p^e} as images of the power basis.
  const std::vector<Code>& frobenius_images(std::uint32_t e) const { return frob_images_.at(e % d_); }

 private:
  FieldCtx(std::uint32_t p, std::uint32_t d);

  void require_divides(std::uint32_t sub) const;
  Code poly_mul(Code a, Code b) const;
  void build_tables();

  std::uint32_t p_;
  std::uint32_t d_;
  Code size_;
  std::vector<std::uint32_t> modulus_;
  std::vector<Code> digit_weight_;            // p^i
  std::vector<std::vector<Code>> frob_images_;  // [e][i] = (t^i)^{p^e}
  std::vector<std::uint32_t> basis_trace_;    // Tr_{F/F_p}(t^i)
  std::vector<Code> unit_trace_;              // indexed by subfield degree
  // Zech-style tables, only when size_ <= kTableLimit.
  std::vector<std::uint32_t> exp_;
  std::vector<std::uint32_t> log_;
  std::vector<std::uint64_t> frob_exp_;  // p^e mod (size_ - 1)
  // Small fields only: frob_tab_[e * size_ + a] = a^{p^e}; add_tab_[a * size_ + b]; neg_tab_[a].
  std::vector<std::uint32_t> frob_tab_;
  std::vector<std::uint32_t> add_tab_;
  std::vector<std::uint32_t> neg_tab_;
};

// Lexicographically least monic irreducible of degree d over F_p, ordered by
// (c_0, c_1, ..., c_{d-1}). Returned as c_0..c_d.
std::vector<std::uint32_t> least_irreducible(std::uint32_t p, std::uint32_t d);
bool is_irreducible(std::uint32_t p, std::span<const std::uint32_t> poly);

class Fq {
 public:
  Fq(const FieldCtx& field, Code code) : field_(&field), code_(code) {}

  const FieldCtx& field() const noexcept { return *field_; }
  Code code() const noexcept { return code_; }
  bool is_zero() const noexcept { return code_ == 0; }

  friend Fq operator+(const Fq& a, const Fq& b) { return {*a.field_, a.field_->add(a.code_, a.same(b))}; }
  friend Fq operator-(const Fq& a, const Fq& b) { return {*a.field_, a.field_->sub(a.code_, a.same(b))}; }
  friend Fq operator*(const Fq& a, const Fq& b) { return {*a.field_, a.field_->mul(a.code_, a.same(b))}; }
  friend Fq operator/(const Fq& a, const Fq& b) { return {*a.field_, a.field_->div(a.code_, a.same(b))}; }
  Fq operator-() const { return {*field_, field_->neg(code_)}; }
  Fq pow(std::uint64_t e) const { return {*field_, field_->pow(code_, e)}; }
  Fq inv() const { return {*field_, field_->inv(code_)}; }

  friend bool operator==(const Fq& a, const Fq& b) { return a.field_ == b.field_ && a.code_ == b.code_; }

 private:
  Code same(const Fq& other) const {
    if (other.field_ != field_) throw FieldError("field mismatch");
    return other.code_;
  }

  const FieldCtx* field_;
  Code code_;
};

Fq frob(const Fq& x, std::int64_t e);
// x^{q^j} with q = p^f.
Fq frob_q(const Fq& x, std::uint32_t f, std::int64_t j);
Fq trace_to(const Fq& x, std::uint32_t sub);

// Ring embedding F_{p^a} -> F_{p^{ab}}. The canonical generator goes to the
// least root of its minimal polynomial, subject to agreeing with embeddings
// already fixed in this process along a tower.
Fq embed(const Fq& x, const FieldCtx& target);

// #{y : y^Q - y = c} in the field of c.
std::uint64_t artin_schreier_count(const Fq& c, std::uint64_t Q);
std::optional<Fq> artin_schreier_solve(const Fq& c, std::uint64_t Q);

}  // namespace maxvar
