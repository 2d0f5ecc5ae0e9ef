#include "maxvar/fields.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <tuple>

namespace maxvar {

namespace {

using Poly = std::vector<std::uint32_t>;  // little-endian coefficients mod p

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

std::uint64_t mod_inverse(std::uint64_t a, std::uint64_t p) {
  std::uint64_t result = 1;
  std::uint64_t e = p - 2;
  a %= p;
  while (e) {
    if (e & 1) result = result * a % p;
    a = a * a % p;
    e >>= 1;
  }
  return result;
}

Poly poly_mod(Poly a, const Poly& f, std::uint32_t p) {
  trim(a);
  const std::size_t df = f.size() - 1;
  const std::uint64_t lead_inv = mod_inverse(f.back(), p);
  while (a.size() > df) {
    const std::uint64_t c = a.back() * lead_inv % p;
    const std::size_t shift = a.size() - 1 - df;
    for (std::size_t i = 0; i <= df; ++i) {
      a[shift + i] = static_cast<std::uint32_t>((a[shift + i] + (p - c) * f[i]) % p);
    }
    trim(a);
  }
  return a;
}

Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& f, std::uint32_t p) {
  if (a.empty() || b.empty()) return {};
  std::vector<std::uint64_t> acc(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i]) continue;
    for (std::size_t j = 0; j < b.size(); ++j) acc[i + j] = (acc[i + j] + std::uint64_t{a[i]} * b[j]) % p;
  }
  Poly r(acc.begin(), acc.end());
  return poly_mod(std::move(r), f, p);
}

Poly poly_powmod(Poly base, std::uint64_t e, const Poly& f, std::uint32_t p) {
  Poly result{1};
  base = poly_mod(std::move(base), f, p);
  while (e) {
    if (e & 1) result = poly_mulmod(result, base, f, p);
    base = poly_mulmod(base, base, f, p);
    e >>= 1;
  }
  return result;
}

Poly poly_sub(Poly a, const Poly& b, std::uint32_t p) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] = (a[i] + p - b[i]) % p;
  trim(a);
  return a;
}

Poly poly_gcd(Poly a, Poly b, std::uint32_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = poly_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t r = 2; r * r <= n; ++r) {
    if (n % r == 0) {
      out.push_back(r);
      while (n % r == 0) n /= r;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t r = 2; r * r <= n; ++r) {
    if (n % r == 0) return false;
  }
  return true;
}

std::optional<std::uint32_t> log_base(std::uint64_t p, std::uint64_t value) {
  if (p < 2 || value == 0) return std::nullopt;
  std::uint32_t s = 0;
  while (value % p == 0) {
    value /= p;
    ++s;
  }
  if (value != 1) return std::nullopt;
  return s;
}

bool is_irreducible(std::uint32_t p, std::span<const std::uint32_t> poly) {
  Poly f(poly.begin(), poly.end());
  trim(f);
  if (f.size() < 2) return false;
  const std::size_t d = f.size() - 1;
  if (d == 1) return true;
  // Work with the monic associate.
  const std::uint64_t lead_inv = mod_inverse(f.back(), p);
  for (auto& c : f) c = static_cast<std::uint32_t>(c * lead_inv % p);

  const Poly x{0, 1};
  // x^{p^k} mod f for k = 0..d
  std::vector<Poly> frob_pows{poly_mod(x, f, p)};
  for (std::size_t k = 1; k <= d; ++k) frob_pows.push_back(poly_powmod(frob_pows.back(), p, f, p));
  if (!poly_sub(frob_pows[d], poly_mod(x, f, p), p).empty()) return false;
  for (std::uint64_t r : prime_factors(d)) {
    const Poly g = poly_gcd(f, poly_sub(frob_pows[d / r], x, p), p);
    if (g.size() != 1) return false;
  }
  return true;
}

std::vector<std::uint32_t> least_irreducible(std::uint32_t p, std::uint32_t d) {
  std::uint64_t total = 1;
  for (std::uint32_t i = 0; i < d; ++i) total *= p;
  Poly f(d + 1, 0);
  f[d] = 1;
  // c_0 is the most significant digit of n; for d > 1 it must be nonzero.
  for (std::uint64_t n = d > 1 ? total / p : 0; n < total; ++n) {
    std::uint64_t v = n;
    for (std::uint32_t i = d; i-- > 0;) {
      f[i] = static_cast<std::uint32_t>(v % p);
      v /= p;
    }
    if (is_irreducible(p, f)) return f;
  }
  throw FieldError("no irreducible polynomial found");
}

// ---------------------------------------------------------------------------

std::shared_ptr<const FieldCtx> FieldCtx::make(std::uint32_t p, std::uint32_t d) {
  static std::mutex mu;
  static std::map<std::pair<std::uint32_t, std::uint32_t>, std::shared_ptr<const FieldCtx>> cache;
  if (!is_prime(p)) throw FieldError("characteristic " + std::to_string(p) + " is not prime");
  if (d == 0) throw FieldError("extension degree must be positive");
  std::uint64_t size = 1;
  for (std::uint32_t i = 0; i < d; ++i) {
    if (size > kMaxSize / p) throw FieldError("field size exceeds 2^40");
    size *= p;
  }
  std::lock_guard lock(mu);
  auto& slot = cache[{p, d}];
  if (!slot) slot = std::shared_ptr<const FieldCtx>(new FieldCtx(p, d));
  return slot;
}

FieldCtx::FieldCtx(std::uint32_t p, std::uint32_t d) : p_(p), d_(d), size_(1) {
  for (std::uint32_t i = 0; i < d_; ++i) {
    digit_weight_.push_back(size_);
    size_ *= p_;
  }
  modulus_ = least_irreducible(p_, d_);

  // Frobenius images of the power basis.
  frob_images_.assign(d_, std::vector<Code>(d_));
  Code t_power = 1;
  const Code t = generator();
  for (std::uint32_t i = 0; i < d_; ++i) {
    frob_images_[0][i] = t_power;
    t_power = poly_mul(t_power, t);
  }
  if (d_ > 1) {
    Code tp = 1;
    for (std::uint32_t k = 0; k < p_; ++k) tp = poly_mul(tp, t);
    Code acc = 1;
    for (std::uint32_t i = 0; i < d_; ++i) {
      frob_images_[1][i] = acc;
      acc = poly_mul(acc, tp);
    }
    for (std::uint32_t e = 2; e < d_; ++e) {
      for (std::uint32_t i = 0; i < d_; ++i) {
        const auto c = coeffs(frob_images_[e - 1][i]);
        Code img = 0;
        for (std::uint32_t j = 0; j < d_; ++j) {
          if (c[j]) img = add(img, scale(frob_images_[1][j], c[j]));
        }
        frob_images_[e][i] = img;
      }
    }
  }
  for (std::uint32_t i = 0; i < d_; ++i) {
    Code tr = 0;
    for (std::uint32_t e = 0; e < d_; ++e) tr = add(tr, frob_images_[e][i]);
    basis_trace_.push_back(static_cast<std::uint32_t>(tr));
  }

  if (size_ <= kTableLimit) build_tables();

  unit_trace_.assign(d_ + 1, 0);
  for (std::uint32_t sub = 1; sub <= d_; ++sub) {
    if (d_ % sub) continue;
    for (Code c = 1; c < size_; ++c) {
      const Code tr = trace_to(c, sub);
      if (tr) {
        unit_trace_[sub] = div(c, tr);
        break;
      }
    }
  }
}

void FieldCtx::build_tables() {
  const std::uint64_t order = size_ - 1;
  const auto factors = prime_factors(order);
  auto slow_pow = [&](Code a, std::uint64_t e) {
    Code r = 1;
    while (e) {
      if (e & 1) r = poly_mul(r, a);
      a = poly_mul(a, a);
      e >>= 1;
    }
    return r;
  };
  Code g = 0;
  for (Code c = 1; c < size_; ++c) {
    bool primitive = true;
    for (auto r : factors) {
      if (slow_pow(c, order / r) == 1) {
        primitive = false;
        break;
      }
    }
    if (primitive) {
      g = c;
      break;
    }
  }
  exp_.resize(order);
  log_.assign(size_, 0);
  Code x = 1;
  for (std::uint64_t i = 0; i < order; ++i) {
    exp_[i] = static_cast<std::uint32_t>(x);
    log_[x] = static_cast<std::uint32_t>(i);
    x = poly_mul(x, g);
  }
  frob_exp_.resize(d_);
  std::uint64_t pe = 1;
  for (std::uint32_t e = 0; e < d_; ++e) {
    frob_exp_[e] = order ? pe % order : 0;
    pe = order ? (pe * p_) % order : 0;
  }
  if (size_ <= kSmallTableLimit) {
    frob_tab_.resize(size_ * d_);
    for (std::uint32_t e = 0; e < d_; ++e) {
      for (Code a = 0; a < size_; ++a) {
        frob_tab_[e * size_ + a] = a == 0 ? 0 : exp_[std::uint64_t{log_[a]} * frob_exp_[e] % order];
      }
    }
    if (p_ != 2) {
      std::vector<std::uint32_t> tab(size_);
      for (Code a = 0; a < size_; ++a) tab[a] = static_cast<std::uint32_t>(neg(a));
      neg_tab_ = std::move(tab);
    }
  }
  if (p_ != 2 && size_ <= kAddTableLimit) {
    std::vector<std::uint32_t> tab(size_ * size_);
    for (Code a = 0; a < size_; ++a) {
      for (Code b = 0; b < size_; ++b) tab[a * size_ + b] = static_cast<std::uint32_t>(add(a, b));
    }
    add_tab_ = std::move(tab);
  }
}

void FieldCtx::require_divides(std::uint32_t sub) const {
  if (sub == 0 || d_ % sub != 0) {
    throw FieldError("degree " + std::to_string(sub) + " does not divide " + std::to_string(d_));
  }
}

Code FieldCtx::add(Code a, Code b) const {
  if (p_ == 2) return a ^ b;
  if (!add_tab_.empty()) return add_tab_[a * size_ + b];
  Code r = 0;
  for (std::uint32_t i = 0; i < d_ && (a | b); ++i) {
    const Code s = (a % p_ + b % p_) % p_;
    r += s * digit_weight_[i];
    a /= p_;
    b /= p_;
  }
  return r;
}

Code FieldCtx::neg(Code a) const {
  if (p_ == 2) return a;
  if (!neg_tab_.empty()) return neg_tab_[a];
  Code r = 0;
  for (std::uint32_t i = 0; i < d_ && a; ++i) {
    const Code c = a % p_;
    if (c) r += (p_ - c) * digit_weight_[i];
    a /= p_;
  }
  return r;
}

Code FieldCtx::sub(Code a, Code b) const { return p_ == 2 ? a ^ b : add(a, neg(b)); }

Code FieldCtx::scale(Code a, std::uint32_t c) const {
  c %= p_;
  if (c == 0) return 0;
  if (c == 1) return a;
  Code r = 0;
  for (std::uint32_t i = 0; i < d_ && a; ++i) {
    r += (a % p_) * c % p_ * digit_weight_[i];
    a /= p_;
  }
  return r;
}

Code FieldCtx::poly_mul(Code a, Code b) const {
  if (a == 0 || b == 0) return 0;
  std::uint64_t da[64];
  std::uint64_t acc[128] = {};
  for (std::uint32_t i = 0; i < d_; ++i) {
    da[i] = a % p_;
    a /= p_;
  }
  for (std::uint32_t j = 0; j < d_ && b; ++j) {
    const std::uint64_t c = b % p_;
    b /= p_;
    if (!c) continue;
    for (std::uint32_t i = 0; i < d_; ++i) acc[i + j] = (acc[i + j] + da[i] * c) % p_;
  }
  for (std::uint32_t k = 2 * d_ - 1; k-- > d_;) {
    const std::uint64_t c = acc[k] % p_;
    if (!c) continue;
    const std::uint32_t shift = k - d_;
    for (std::uint32_t i = 0; i < d_; ++i) acc[shift + i] = (acc[shift + i] + (p_ - modulus_[i]) * c) % p_;
    acc[k] = 0;
  }
  Code r = 0;
  for (std::uint32_t i = d_; i-- > 0;) r = r * p_ + acc[i] % p_;
  return r;
}

Code FieldCtx::mul(Code a, Code b) const {
  if (a == 0 || b == 0) return 0;
  if (!exp_.empty()) {
    std::uint64_t s = std::uint64_t{log_[a]} + log_[b];
    const std::uint64_t order = size_ - 1;
    if (s >= order) s -= order;
    return exp_[s];
  }
  return poly_mul(a, b);
}

Code FieldCtx::pow(Code a, std::uint64_t e) const {
  if (e == 0) return 1;
  if (a == 0) return 0;
  if (!exp_.empty()) {
    const std::uint64_t order = size_ - 1;
    const auto s = static_cast<unsigned __int128>(log_[a]) * (e % order) % order;
    return exp_[static_cast<std::uint64_t>(s)];
  }
  Code r = 1;
  while (e) {
    if (e & 1) r = poly_mul(r, a);
    a = poly_mul(a, a);
    e >>= 1;
  }
  return r;
}

Code FieldCtx::inv(Code a) const {
  if (a == 0) throw FieldError("inverse of zero");
  if (!exp_.empty()) {
    const std::uint64_t order = size_ - 1;
    return exp_[(order - log_[a]) % order];
  }
  return pow(a, size_ - 2);
}

Code FieldCtx::frob(Code a, std::int64_t e) const {
  const std::int64_t d = d_;
  const auto k = static_cast<std::uint32_t>(((e % d) + d) % d);
  if (k == 0 || a == 0) return a;
  if (!frob_tab_.empty()) return frob_tab_[k * size_ + a];
  if (!exp_.empty()) {
    // log < 2^22 and frob_exp < 2^22, so the product fits in 64 bits.
    return exp_[std::uint64_t{log_[a]} * frob_exp_[k] % (size_ - 1)];
  }
  const auto& img = frob_images_[k];
  Code r = 0;
  for (std::uint32_t i = 0; i < d_ && a; ++i) {
    const auto c = static_cast<std::uint32_t>(a % p_);
    a /= p_;
    if (c) r = add(r, scale(img[i], c));
  }
  return r;
}

Code FieldCtx::scalar(std::int64_t c) const {
  const std::int64_t p = p_;
  return static_cast<Code>(((c % p) + p) % p);
}

Code FieldCtx::generator() const {
  if (d_ >= 2) return p_;
  return scalar(-static_cast<std::int64_t>(modulus_[0]));
}

Code FieldCtx::trace_to(Code a, std::uint32_t sub) const {
  require_divides(sub);
  Code r = 0;
  for (std::uint32_t i = 0; i < d_ / sub; ++i) r = add(r, frob(a, std::int64_t{sub} * i));
  return r;
}

Code FieldCtx::norm_to(Code a, std::uint32_t sub) const {
  require_divides(sub);
  Code r = 1;
  for (std::uint32_t i = 0; i < d_ / sub; ++i) r = mul(r, frob(a, std::int64_t{sub} * i));
  return r;
}

std::uint32_t FieldCtx::prime_trace(Code a) const {
  std::uint64_t r = 0;
  for (std::uint32_t i = 0; i < d_ && a; ++i) {
    r += (a % p_) * basis_trace_[i];
    a /= p_;
  }
  return static_cast<std::uint32_t>(r % p_);
}

std::vector<Code> FieldCtx::subfield_elements(std::uint32_t sub) const {
  require_divides(sub);
  // Kernel of (Frob^sub - id) over F_p by row reduction. Columns are basis images.
  std::vector<std::vector<std::int64_t>> m(d_, std::vector<std::int64_t>(d_, 0));
  for (std::uint32_t i = 0; i < d_; ++i) {
    const auto c = coeffs(sub == d_ ? frob_images_[0][i] : frob_images_[sub % d_][i]);
    for (std::uint32_t r = 0; r < d_; ++r) m[r][i] = c[r];
    m[i][i] = (m[i][i] + p_ - 1) % p_;
  }
  std::vector<int> pivot_col_of_row;
  std::vector<bool> is_pivot(d_, false);
  std::uint32_t row = 0;
  for (std::uint32_t col = 0; col < d_ && row < d_; ++col) {
    std::uint32_t sel = row;
    while (sel < d_ && m[sel][col] == 0) ++sel;
    if (sel == d_) continue;
    std::swap(m[sel], m[row]);
    const auto inv = static_cast<std::int64_t>(mod_inverse(m[row][col], p_));
    for (auto& v : m[row]) v = v * inv % p_;
    for (std::uint32_t r = 0; r < d_; ++r) {
      if (r == row || m[r][col] == 0) continue;
      const std::int64_t f = m[r][col];
      for (std::uint32_t k = 0; k < d_; ++k) m[r][k] = ((m[r][k] - f * m[row][k]) % p_ + p_) % p_;
    }
    pivot_col_of_row.push_back(static_cast<int>(col));
    is_pivot[col] = true;
    ++row;
  }
  std::vector<Code> basis;
  for (std::uint32_t free = 0; free < d_; ++free) {
    if (is_pivot[free]) continue;
    std::vector<std::uint32_t> v(d_, 0);
    v[free] = 1;
    for (std::size_t r = 0; r < pivot_col_of_row.size(); ++r) {
      v[pivot_col_of_row[r]] = static_cast<std::uint32_t>((p_ - m[r][free]) % p_);
    }
    basis.push_back(from_coeffs(v));
  }
  if (basis.size() != sub) throw FieldError("subfield kernel has unexpected dimension");
  std::vector<Code> out{0};
  for (Code b : basis) {
    const std::size_t prev = out.size();
    for (std::uint32_t c = 1; c < p_; ++c) {
      const Code sb = scale(b, c);
      for (std::size_t i = 0; i < prev; ++i) out.push_back(add(out[i], sb));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

Code FieldCtx::unit_trace_element(std::uint32_t sub) const {
  require_divides(sub);
  return unit_trace_[sub];
}

std::optional<Code> FieldCtx::artin_schreier_solve(Code c, std::uint32_t s) const {
  require_divides(s);
  if (trace_to(c, s) != 0) return std::nullopt;
  // Additive Hilbert 90: with S_i = c + c^Q + ... + c^{Q^i} and Tr(theta) = 1,
  // z = sum_i S_i theta^{Q^i} satisfies z^Q - z = -c.
  const std::uint32_t m = d_ / s;
  const Code theta = unit_trace_[s];
  Code partial = c;
  Code z = mul(partial, theta);
  for (std::uint32_t i = 1; i < m; ++i) {
    partial = add(partial, frob(c, std::int64_t{s} * i));
    z = add(z, mul(partial, frob(theta, std::int64_t{s} * i)));
  }
  return neg(z);
}

std::vector<std::uint32_t> FieldCtx::coeffs(Code a) const {
  std::vector<std::uint32_t> out(d_, 0);
  for (std::uint32_t i = 0; i < d_; ++i) {
    out[i] = static_cast<std::uint32_t>(a % p_);
    a /= p_;
  }
  return out;
}

Code FieldCtx::from_coeffs(std::span<const std::uint32_t> c) const {
  if (c.size() > d_) throw FieldError("too many coefficients for field of degree " + std::to_string(d_));
  Code r = 0;
  for (std::size_t i = c.size(); i-- > 0;) {
    if (c[i] >= p_) throw FieldError("coefficient out of range");
    r = r * p_ + c[i];
  }
  return r;
}

Json FieldCtx::to_json() const {
  return Json{{"p", p_}, {"d", d_}, {"modulus", modulus_}};
}

Json FieldCtx::element_to_json(Code a) const { return coeffs(a); }

Code FieldCtx::element_from_json(const Json& j) const {
  if (j.is_number_integer()) return scalar(j.get<std::int64_t>());
  if (!j.is_array()) throw FieldError("field element must be a coefficient array");
  std::vector<std::uint32_t> c;
  for (const auto& v : j) {
    const auto x = v.get<std::int64_t>();
    if (x < 0 || x >= static_cast<std::int64_t>(p_)) throw FieldError("coefficient out of range");
    c.push_back(static_cast<std::uint32_t>(x));
  }
  return from_coeffs(c);
}

// ---------------------------------------------------------------------------

Fq frob(const Fq& x, std::int64_t e) { return {x.field(), x.field().frob(x.code(), e)}; }

Fq frob_q(const Fq& x, std::uint32_t f, std::int64_t j) { return frob(x, std::int64_t{f} * j); }

Fq trace_to(const Fq& x, std::uint32_t sub) { return {x.field(), x.field().trace_to(x.code(), sub)}; }

namespace {

std::recursive_mutex embed_mu;
// (p, a, c) -> images of t^i, i < a, in F_{p^c}.
std::map<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>, std::vector<Code>> embed_registry;

Code apply_images(const FieldCtx& src, const FieldCtx& dst, const std::vector<Code>& images, Code x) {
  const auto c = src.coeffs(x);
  Code r = 0;
  for (std::uint32_t i = 0; i < src.degree(); ++i) {
    if (c[i]) r = dst.add(r, dst.scale(images[i], c[i]));
  }
  return r;
}

std::vector<Code> power_images(const FieldCtx& dst, Code gamma, std::uint32_t a) {
  std::vector<Code> images;
  Code g = 1;
  for (std::uint32_t i = 0; i < a; ++i) {
    images.push_back(g);
    g = dst.mul(g, gamma);
  }
  return images;
}

const std::vector<Code>& embedding_images(std::uint32_t p, std::uint32_t a, std::uint32_t c) {
  std::lock_guard lock(embed_mu);
  const auto key = std::make_tuple(p, a, c);
  if (auto it = embed_registry.find(key); it != embed_registry.end()) return it->second;

  const auto src = FieldCtx::make(p, a);
  const auto dst = FieldCtx::make(p, c);
  if (a == c) {
    return embed_registry[key] = power_images(*dst, dst->generator(), a);
  }
  // Forced through an already fixed embedding of an intermediate field.
  for (std::uint32_t b = a + 1; b < c; ++b) {
    if (b % a || c % b) continue;
    auto it = embed_registry.find(std::make_tuple(p, b, c));
    if (it == embed_registry.end()) continue;
    const auto upper = it->second;
    const auto mid = FieldCtx::make(p, b);
    const auto& lower = embedding_images(p, a, b);
    std::vector<Code> images;
    for (Code img : lower) images.push_back(apply_images(*mid, *dst, upper, img));
    return embed_registry[key] = std::move(images);
  }
  // Least root of the minimal polynomial of t, compatible with fixed embeddings
  // of subfields of the source.
  std::vector<std::pair<Code, Code>> constraints;  // (image of t_sub in source, required image in dst)
  for (std::uint32_t s = 2; s < a; ++s) {
    if (a % s) continue;
    auto it = embed_registry.find(std::make_tuple(p, s, c));
    if (it == embed_registry.end()) continue;
    const Code required = it->second[1];
    const Code in_src = embedding_images(p, s, a)[1];
    constraints.emplace_back(in_src, required);
  }
  const auto mod = src->modulus();
  for (Code r : dst->subfield_elements(a)) {
    Code v = 0;
    for (std::size_t i = mod.size(); i-- > 0;) v = dst->add(dst->mul(v, r), dst->scalar(mod[i]));
    if (v != 0) continue;
    const auto images = power_images(*dst, r, a);
    bool ok = true;
    for (const auto& [in_src, req] : constraints) {
      if (apply_images(*src, *dst, images, in_src) != req) {
        ok = false;
        break;
      }
    }
    if (ok) return embed_registry[key] = images;
  }
  throw FieldError("no compatible embedding exists");
}

}  // namespace

Fq embed(const Fq& x, const FieldCtx& target) {
  const FieldCtx& src = x.field();
  if (src.characteristic() != target.characteristic() || target.degree() % src.degree() != 0) {
    throw FieldError("cannot embed F_{p^" + std::to_string(src.degree()) + "} into F_{p^" +
                     std::to_string(target.degree()) + "}");
  }
  const auto& images = embedding_images(src.characteristic(), src.degree(), target.degree());
  return {target, apply_images(src, target, images, x.code())};
}

std::uint64_t artin_schreier_count(const Fq& c, std::uint64_t Q) {
  const FieldCtx& field = c.field();
  const auto s = log_base(field.characteristic(), Q);
  if (!s || *s == 0) throw FieldError("Q must be a positive power of the characteristic");
  return field.trace_to(c.code(), *s) == 0 ? Q : 0;
}

std::optional<Fq> artin_schreier_solve(const Fq& c, std::uint64_t Q) {
  const FieldCtx& field = c.field();
  const auto s = log_base(field.characteristic(), Q);
  if (!s || *s == 0) throw FieldError("Q must be a positive power of the characteristic");
  auto y = field.artin_schreier_solve(c.code(), *s);
  if (!y) return std::nullopt;
  return Fq(field, *y);
}

}  // namespace maxvar
