#include "maxvar/cyclo.hpp"

namespace maxvar {

namespace {

std::size_t mod_index(std::int64_t k, std::uint32_t p) {
  const std::int64_t m = p;
  return static_cast<std::size_t>(((k % m) + m) % m);
}

}  // namespace

CycNum::CycNum(std::uint32_t p) : p_(p), c_(p - 1) {
  if (!is_prime(p)) throw FieldError("cyclotomic order " + std::to_string(p) + " is not prime");
}

CycNum::CycNum(std::uint32_t p, const mpq_class& value) : CycNum(p) { c_[0] = value; }

std::vector<mpq_class> CycNum::reduce(std::uint32_t p, std::vector<mpq_class> full) {
  // zeta^{p-1} = -(1 + zeta + ... + zeta^{p-2})
  const mpq_class top = full[p - 1];
  full.pop_back();
  if (top != 0) {
    for (auto& v : full) v -= top;
  }
  return full;
}

CycNum CycNum::zeta_pow(std::uint32_t p, std::int64_t k) {
  std::vector<std::int64_t> counts(p, 0);
  counts[mod_index(k, p)] = 1;
  return from_counts(p, counts);
}

CycNum CycNum::from_counts(std::uint32_t p, const std::vector<std::int64_t>& counts) {
  CycNum out(p);
  std::vector<mpq_class> full(p);
  for (std::size_t k = 0; k < counts.size(); ++k) full[k % p] += counts[k];
  out.c_ = reduce(p, std::move(full));
  return out;
}

void CycNum::check(const CycNum& o) const {
  if (o.p_ != p_) throw FieldError("cyclotomic order mismatch");
}

bool CycNum::is_zero() const {
  for (const auto& v : c_)
    if (v != 0) return false;
  return true;
}

bool CycNum::is_rational() const {
  for (std::size_t i = 1; i < c_.size(); ++i)
    if (c_[i] != 0) return false;
  return true;
}

bool CycNum::is_integral() const {
  for (const auto& v : c_)
    if (v.get_den() != 1) return false;
  return true;
}

mpq_class CycNum::as_rational() const {
  if (!is_rational()) throw NotRational("value " + to_string() + " is not rational");
  return c_[0];
}

CycNum CycNum::conj() const {
  std::vector<mpq_class> full(p_);
  for (std::uint32_t k = 0; k + 1 < p_; ++k) full[(p_ - k) % p_] = c_[k];
  CycNum out(p_);
  out.c_ = reduce(p_, std::move(full));
  return out;
}

CycNum& CycNum::operator+=(const CycNum& o) {
  check(o);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

CycNum& CycNum::operator-=(const CycNum& o) {
  check(o);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

CycNum& CycNum::operator*=(const mpq_class& s) {
  for (auto& v : c_) v *= s;
  return *this;
}

CycNum CycNum::operator-() const {
  CycNum out(*this);
  for (auto& v : out.c_) v = -v;
  return out;
}

CycNum operator*(const CycNum& a, const CycNum& b) {
  a.check(b);
  const std::uint32_t p = a.p_;
  std::vector<mpq_class> full(p);
  for (std::uint32_t i = 0; i + 1 < p; ++i) {
    if (a.c_[i] == 0) continue;
    for (std::uint32_t j = 0; j + 1 < p; ++j) {
      if (b.c_[j] == 0) continue;
      full[(i + j) % p] += a.c_[i] * b.c_[j];
    }
  }
  CycNum out(p);
  out.c_ = CycNum::reduce(p, std::move(full));
  return out;
}

Json CycNum::to_json() const {
  // Integers that fit in a long are written as numbers, larger ones as strings.
  auto z_json = [](const mpz_class& z) { return z.fits_slong_p() ? Json(z.get_si()) : Json(z.get_str()); };
  Json coeffs = Json::array();
  for (const auto& v : c_) coeffs.push_back(Json::array({z_json(v.get_num()), z_json(v.get_den())}));
  return Json{{"p", p_}, {"coeffs", coeffs}};
}

CycNum CycNum::from_json(const Json& j) {
  CycNum out(j.at("p").get<std::uint32_t>());
  const auto& coeffs = j.at("coeffs");
  if (coeffs.size() != out.c_.size()) throw FieldError("cyclotomic coefficient vector has wrong length");
  auto to_z = [](const Json& v) { return v.is_string() ? mpz_class(v.get<std::string>()) : mpz_class(v.get<long>()); };
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    out.c_[i] = mpq_class(to_z(coeffs[i].at(0)), to_z(coeffs[i].at(1)));
    out.c_[i].canonicalize();
  }
  return out;
}

std::string CycNum::to_string() const {
  std::string s;
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (i) s += ';';
    s += c_[i].get_str();
  }
  return s;
}

}  // namespace maxvar
