#pragma once

// Exact elements of Q(zeta_p) in the power basis 1, zeta, ..., zeta^{p-2}.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "maxvar/fields.hpp"

namespace maxvar {

class NotRational : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CycNum {
 public:
  explicit CycNum(std::uint32_t p);
  CycNum(std::uint32_t p, const mpq_class& value);

  static CycNum zeta_pow(std::uint32_t p, std::int64_t k);
  // sum_k counts[k] zeta^k, counts indexed by exponent mod p.
  static CycNum from_counts(std::uint32_t p, const std::vector<std::int64_t>& counts);

  std::uint32_t p() const noexcept { return p_; }
  const std::vector<mpq_class>& coeffs() const noexcept { return c_; }

  bool is_zero() const;
  bool is_rational() const;
  bool is_integral() const;
  mpq_class as_rational() const;

  CycNum conj() const;

  CycNum& operator+=(const CycNum& o);
  CycNum& operator-=(const CycNum& o);
  CycNum& operator*=(const mpq_class& s);
  friend CycNum operator+(CycNum a, const CycNum& b) { return a += b; }
  friend CycNum operator-(CycNum a, const CycNum& b) { return a -= b; }
  friend CycNum operator*(const CycNum& a, const CycNum& b);
  friend CycNum operator*(CycNum a, const mpq_class& s) { return a *= s; }
  CycNum operator-() const;
  friend bool operator==(const CycNum& a, const CycNum& b) { return a.p_ == b.p_ && a.c_ == b.c_; }

  // {"p": p, "coeffs": [[num, den], ...]}
  Json to_json() const;
  static CycNum from_json(const Json& j);
  // Compact form for CSV cells: "c0;c1;..." with rationals as num or num/den.
  std::string to_string() const;

 private:
  void check(const CycNum& o) const;
  // Reduce a length-p vector (coefficients of zeta^0..zeta^{p-1}) to canonical form.
  static std::vector<mpq_class> reduce(std::uint32_t p, std::vector<mpq_class> full);

  std::uint32_t p_;
  std::vector<mpq_class> c_;
};

}  // namespace maxvar
