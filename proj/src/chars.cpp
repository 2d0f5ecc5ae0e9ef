#include "maxvar/chars.hpp"

#include <sstream>

#include "maxvar/norm.hpp"
#include "maxvar/variety.hpp"

namespace maxvar {

namespace {

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > UINT64_MAX / a) return UINT64_MAX;
  return a * b;
}

void require_k1(const UnipotentGroup& G) {
  if (G.field().degree() != G.rational_degree()) {
    throw CharError("character computations run over F_{q^n} (k = 1)");
  }
}

std::shared_ptr<const PointSet> point_set(const UnipotentGroup& G, SubgroupId id) {
  return std::make_shared<const PointSet>(G, id);
}

}  // namespace

std::uint32_t subfield_prime_trace(const FieldCtx& F, Code z, std::uint32_t s) {
  Code w = 0;
  Code t = z;
  for (std::uint32_t i = 0; i < s; ++i) {
    w = F.add(w, t);
    t = F.frob(t, 1);
  }
  if (w >= F.characteristic()) throw FieldError("partial trace left F_p: element not in the subfield");
  return static_cast<std::uint32_t>(w);
}

std::uint32_t conductor(const GroupSpec& spec, const FieldCtx& F, Code b) {
  for (std::uint32_t d : divisors(spec.n)) {
    if (F.in_subfield(b, spec.f * d)) return d;
  }
  throw CharError("character parameter does not lie in F_{q^n}");
}

ClassFn::ClassFn(std::shared_ptr<const PointSet> domain, std::vector<CycNum> values)
    : domain_(std::move(domain)), values_(std::move(values)) {
  if (values_.size() != domain_->size()) throw CharError("class function table does not cover its domain");
}

CycNum ClassFn::operator()(const RingElem& g) const {
  const auto i = domain_->index_of(g);
  if (!i) return CycNum(values_.empty() ? 2 : values_[0].p());
  return values_[*i];
}

std::string ClassFn::to_csv() const {
  std::ostringstream os;
  os << "key,value\n";
  const UnipotentGroup& G = domain_->group();
  for (auto it = domain_->begin(); it != domain_->end(); ++it) {
    os << G.element_key(*it) << ',' << values_[it.index()].to_string() << '\n';
  }
  return os.str();
}

Json ClassFn::to_json() const {
  const UnipotentGroup& G = domain_->group();
  Json rows = Json::array();
  for (auto it = domain_->begin(); it != domain_->end(); ++it) {
    rows.push_back(Json{{"key", G.element_key(*it)}, {"value", values_[it.index()].to_json()}});
  }
  return Json{{"domain", domain_->id().label()}, {"values", rows}};
}

ClassFn LinearFn::to_class_fn() const {
  std::vector<CycNum> v;
  v.reserve(exps.size());
  for (auto e : exps) v.push_back(CycNum::zeta_pow(p, e));
  return ClassFn(domain, std::move(v));
}

ClassFn trivial_fn(std::shared_ptr<const PointSet> domain) {
  const std::uint32_t p = domain->group().spec().p;
  std::vector<CycNum> v(domain->size(), CycNum(p, 1));
  return ClassFn(std::move(domain), std::move(v));
}

LinearFn psi_tilde(const UnipotentGroup& G, Code b) {
  require_k1(G);
  const GroupSpec& s = G.spec();
  const FieldCtx& F = G.field();
  const std::uint32_t d = conductor(s, F, b);
  LinearFn out;
  out.p = s.p;
  out.domain = point_set(G, {SubgroupKind::H, d});
  const UnipotentGroup sub = G.sub_group(d);
  const NormOracle N(sub);
  out.exps.reserve(out.domain->size());
  for (const RingElem& h : *out.domain) {
    const Code y = N.reduced_norm_point(G.nu(h, d));
    out.exps.push_back(subfield_prime_trace(F, F.mul(b, y), s.f * d));
  }
  return out;
}

LinearFn psi_pr_n(const UnipotentGroup& G, Code b, SubgroupId id) {
  require_k1(G);
  const AddChar psi{&G.field(), b};
  LinearFn out;
  out.p = G.spec().p;
  out.domain = point_set(G, id);
  out.exps.reserve(out.domain->size());
  for (const RingElem& h : *out.domain) out.exps.push_back(psi.exponent(G.pr_n(h)));
  return out;
}

std::vector<RingElem> coset_reps(const PointSet& H, const PointSet& G) {
  const UnipotentGroup& U = G.group();
  std::vector<bool> marked(G.size(), false);
  std::vector<RingElem> reps;
  for (auto it = G.begin(); it != G.end(); ++it) {
    if (marked[it.index()]) continue;
    reps.push_back(*it);
    for (const RingElem& h : H) {
      const auto idx = G.index_of(U.mul(*it, h));
      if (!idx) throw CharError("subgroup " + H.id().label() + " is not contained in " + G.id().label());
      marked[*idx] = true;
    }
  }
  if (saturating_mul(reps.size(), H.size()) != G.size()) throw CharError("coset decomposition failed");
  return reps;
}

namespace {

// Calls visit(i, j) whenever x^{-1} g_i x is the j-th element of H, over all representatives x.
// Conjugation fixes the leading term of g - 1 below e_n: the commutator with x lands in higher
// indices (case 1) or in e_n (case 2). So g has no conjugate in H when H forbids that term.
bool may_meet(const PointSet& H, const RingElem& g) {
  const std::uint32_t n = H.group().n();
  for (std::uint32_t j = 1; j < n; ++j) {
    if (g.a[j] != 0) return H.slot_allows(j, g.a[j]);
  }
  return true;
}

template <class Visit>
void conjugate_sweep(const PointSet& H, const PointSet& G, Visit visit) {
  const UnipotentGroup& U = G.group();
  const auto reps = coset_reps(H, G);
  std::vector<RingElem> inv;
  inv.reserve(reps.size());
  for (const auto& x : reps) inv.push_back(U.inv(x));
  for (auto it = G.begin(); it != G.end(); ++it) {
    if (!may_meet(H, *it)) continue;
    for (std::size_t r = 0; r < reps.size(); ++r) {
      const auto idx = H.index_of(U.mul(inv[r], U.mul(*it, reps[r])));
      if (idx) visit(it.index(), *idx);
    }
  }
}

}  // namespace

ClassFn induce(const LinearFn& f, std::shared_ptr<const PointSet> G) {
  std::vector<std::vector<std::int64_t>> counts(G->size(), std::vector<std::int64_t>(f.p, 0));
  conjugate_sweep(*f.domain, *G, [&](std::uint64_t i, std::uint64_t h) { ++counts[i][f.exps[h]]; });
  std::vector<CycNum> v;
  v.reserve(G->size());
  for (const auto& c : counts) v.push_back(CycNum::from_counts(f.p, c));
  return ClassFn(std::move(G), std::move(v));
}

ClassFn induce(const ClassFn& f, std::shared_ptr<const PointSet> G) {
  const std::uint32_t p = G->group().spec().p;
  std::vector<CycNum> v(G->size(), CycNum(p));
  conjugate_sweep(f.domain(), *G, [&](std::uint64_t i, std::uint64_t h) { v[i] += f.at_index(h); });
  return ClassFn(std::move(G), std::move(v));
}

CycNum inner_product_exact(const ClassFn& f, const ClassFn& g) {
  if (!(f.domain().id() == g.domain().id()) || f.domain().size() != g.domain().size()) {
    throw CharError("inner product of class functions on different subgroups");
  }
  const std::uint32_t p = f.domain().group().spec().p;
  CycNum sum(p);
  for (std::uint64_t i = 0; i < f.domain().size(); ++i) sum += f.at_index(i) * g.at_index(i).conj();
  sum *= mpq_class(1, 1) / mpq_class(mpz_class(std::to_string(f.domain().size())));
  return sum;
}

mpq_class inner_product(const ClassFn& f, const ClassFn& g) { return inner_product_exact(f, g).as_rational(); }

ClassFn restrict_to(const ClassFn& f, std::shared_ptr<const PointSet> H) {
  std::vector<CycNum> v;
  v.reserve(H->size());
  for (const RingElem& h : *H) {
    const auto idx = f.domain().index_of(h);
    if (!idx) throw CharError("restriction to a subgroup outside the domain");
    v.push_back(f.at_index(*idx));
  }
  return ClassFn(std::move(H), std::move(v));
}

RhoPsi build_rho(const UnipotentGroup& G, Code b, const Budget& budget) {
  require_k1(G);
  const GroupSpec& s = G.spec();
  RhoPsi r;
  r.spec = s;
  r.b = b;
  r.d = conductor(s, G.field(), b);
  r.n1 = s.n / r.d;
  auto U = point_set(G, {SubgroupKind::U});
  const PointSet H(G, {SubgroupKind::H, r.d});
  budget.require_ops(saturating_mul(U->size(), U->size() / H.size()), "rho " + s.label());

  ClassFn chi = induce(psi_tilde(G, b), U);
  r.divided = r.d % 2 == 0 && r.n1 % 2 == 1;
  if (r.divided) {
    const mpz_class m = mpz_pow(s.q(), s.n / 2);
    std::vector<CycNum> v;
    v.reserve(U->size());
    for (const auto& x : chi.values()) {
      CycNum y = x * (mpq_class(1) / mpq_class(m));
      if (!y.is_integral()) throw CharError("induced character is not divisible by q^{n/2}");
      v.push_back(std::move(y));
    }
    chi = ClassFn(U, std::move(v));
  }
  const mpq_class dim = chi(G.one()).as_rational();
  if (dim.get_den() != 1) throw CharError("character degree is not an integer");
  r.dim = dim.get_num();
  r.degree = s.n + r.n1 - 2;
  r.eigen_sign = r.degree % 2 == 0 ? 1 : -1;
  r.eigen_exponent2 = static_cast<std::uint64_t>(s.n) * r.degree;
  r.character = std::make_shared<const ClassFn>(std::move(chi));
  return r;
}

Json RhoPsi::to_json(bool include_table) const {
  const auto F = FieldCtx::make(spec.p, spec.f * spec.n);
  Json j;
  j["spec"] = spec.to_json();
  j["b"] = F->element_to_json(b);
  j["psi0"] = "zeta_p^lift(x)";
  j["conductor_exponent"] = d;
  j["n1"] = n1;
  j["dim"] = mpz_to_json(dim);
  j["degree"] = degree;
  j["eigenvalue"] = Json{{"sign", eigen_sign}, {"q_exponent_times_2", eigen_exponent2}};
  j["divided"] = divided;
  if (include_table && character) j["character"] = character->to_json();
  return j;
}

TraceSumReport trace_sum(const UnipotentGroup& G, Code b, const Budget& budget) {
  require_k1(G);
  const GroupSpec& s = G.spec();
  TraceSumReport r;
  r.spec = s;
  r.b = b;
  r.d = conductor(s, G.field(), b);
  const std::uint32_t n1 = s.n / r.d;
  const LinearFn f = psi_pr_n(G, b, {SubgroupKind::H, r.d});
  const PointSet U(G, {SubgroupKind::U});
  const PointSet Y(G, {SubgroupKind::YcapU});
  budget.require_ops(saturating_mul(Y.size(), U.size() / f.domain->size()), "trace sum " + s.label());

  const auto reps = coset_reps(*f.domain, U);
  std::vector<std::int64_t> counts(s.p, 0);
  for (const auto& x : reps) {
    const RingElem xi = G.inv(x);
    for (const RingElem& y : Y) {
      if (!may_meet(*f.domain, y)) continue;
      const auto idx = f.domain->index_of(G.mul(xi, G.mul(y, x)));
      if (idx) ++counts[f.exps[*idx]];
    }
  }
  const mpq_class v = CycNum::from_counts(s.p, counts).as_rational();
  if (v.get_den() != 1) throw CharError("trace sum is not an integer");
  r.value = v.get_num();
  r.expected = mpz_pow(s.q(), static_cast<std::uint64_t>(s.n) * (s.n + n1 - 2) / 2);
  if (r.d % 2 == 0 && n1 % 2 == 1) r.expected *= mpz_pow(s.q(), s.n / 2);
  r.positive = r.value > 0;
  r.match = r.value == r.expected;
  return r;
}

Json TraceSumReport::to_json() const {
  const auto F = FieldCtx::make(spec.p, spec.f * spec.n);
  Json j;
  j["spec"] = spec.to_json();
  j["b"] = F->element_to_json(b);
  j["conductor_exponent"] = d;
  j["value"] = mpz_to_json(value);
  j["expected"] = mpz_to_json(expected);
  j["positive"] = positive;
  j["match"] = match;
  return j;
}

GaussSumReport gauss_sum(std::uint32_t p, std::uint32_t f, std::uint32_t k, std::optional<Code> b,
                         const Budget& budget) {
  if (!is_prime(p) || f == 0 || k == 0) throw CharError("gauss sum needs p prime, f >= 1, k >= 1");
  const std::uint64_t degree = 2ull * f * k;
  std::uint64_t size = 1;
  for (std::uint64_t i = 0; i < degree; ++i) {
    size = saturating_mul(size, p);
  }
  budget.require_ops(saturating_mul(size, degree), "gauss sum");
  const auto E = FieldCtx::make(p, static_cast<std::uint32_t>(degree));
  const std::uint32_t s2 = 2 * f;

  auto valid = [&](Code c) { return c != 0 && E->in_subfield(c, s2) && E->add(c, E->frob(c, f)) == 0; };
  GaussSumReport r;
  r.p = p;
  r.f = f;
  r.k = k;
  if (b) {
    if (*b >= E->size() || !valid(*b)) {
      throw CharError("psi must be nontrivial on F_{q^2} and trivial on F_q");
    }
    r.b = *b;
  } else {
    Code c = 1;
    while (!valid(c)) ++c;
    r.b = c;
  }

  const std::uint64_t q = [&] {
    std::uint64_t v = 1;
    for (std::uint32_t i = 0; i < f; ++i) v *= p;
    return v;
  }();
  std::vector<std::int64_t> counts(p, 0);
  for (Code x = 0; x < E->size(); ++x) {
    const Code t = E->trace_to(E->pow(x, q + 1), s2);
    ++counts[subfield_prime_trace(*E, E->mul(r.b, t), s2)];
  }
  const mpq_class v = CycNum::from_counts(p, counts).as_rational();
  if (v.get_den() != 1) throw CharError("gauss sum is not an integer");
  r.value = v.get_num();
  r.expected = mpz_pow(q, k + 1);
  if (k % 2 == 0) r.expected = -r.expected;
  r.match = r.value == r.expected;
  return r;
}

Json GaussSumReport::to_json() const {
  const auto E = FieldCtx::make(p, 2 * f * k);
  Json j;
  j["p"] = p;
  j["f"] = f;
  j["k"] = k;
  j["b"] = E->element_to_json(b);
  j["value"] = mpz_to_json(value);
  j["expected"] = mpz_to_json(expected);
  j["match"] = match;
  return j;
}

PairingReport pairing_check(const UnipotentGroup& G, Code b, const Budget& budget) {
  require_k1(G);
  const GroupSpec& s = G.spec();
  if (s.n % 2 != 0) throw CharError("pairing needs n even");
  const FieldCtx& F = G.field();
  if (F.size() > (std::uint64_t{1} << 16)) {
    throw BudgetExceeded("pairing check is exhaustive and limited to q^n <= 2^16");
  }
  const std::uint32_t half = s.f * (s.n / 2);
  const std::vector<Code> A = F.subfield_elements(half);
  budget.require_ops(saturating_mul(F.size(), A.size() + F.degree()), "pairing " + s.label());

  PairingReport r;
  r.spec = s;
  r.b = b;
  r.d = conductor(s, F, b);
  r.precondition = (s.n / 2) % r.d != 0;

  auto e = [&](Code x, Code y) {
    return F.prime_trace(F.mul(b, F.sub(F.mul(x, F.frob(y, half)), F.mul(y, F.frob(x, half)))));
  };
  // F_p-bilinear, so the radical is cut out by a basis.
  std::vector<Code> basis;
  for (std::uint32_t i = 0; i < F.degree(); ++i) {
    std::vector<std::uint32_t> c(F.degree(), 0);
    c[i] = 1;
    basis.push_back(F.from_coeffs(c));
  }
  for (Code x = 0; x < F.size(); ++x) {
    bool in_radical = true;
    for (Code y : basis) {
      if (e(x, y) != 0) {
        in_radical = false;
        break;
      }
    }
    if (in_radical) ++r.radical_size;
    bool in_perp = true;
    for (Code a : A) {
      if (e(x, a) != 0) {
        in_perp = false;
        break;
      }
    }
    if (in_perp) ++r.subfield_perp_size;
  }
  r.nondegenerate = r.radical_size == 1;
  r.subfield_isotropic = true;
  for (Code x : A) {
    for (Code y : A) {
      if (e(x, y) != 0) r.subfield_isotropic = false;
    }
  }
  r.maximal_isotropic = r.subfield_isotropic && r.subfield_perp_size == A.size();
  r.passed = r.precondition ? (r.nondegenerate && r.subfield_isotropic && r.maximal_isotropic) : !r.nondegenerate;
  return r;
}

Json PairingReport::to_json() const {
  const auto F = FieldCtx::make(spec.p, spec.f * spec.n);
  Json j;
  j["spec"] = spec.to_json();
  j["b"] = F->element_to_json(b);
  j["conductor_exponent"] = d;
  j["precondition"] = precondition;
  j["radical_size"] = radical_size;
  j["nondegenerate"] = nondegenerate;
  j["subfield_isotropic"] = subfield_isotropic;
  j["subfield_perp_size"] = subfield_perp_size;
  j["maximal_isotropic"] = maximal_isotropic;
  j["passed"] = passed;
  return j;
}

}  // namespace maxvar
