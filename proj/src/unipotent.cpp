#include "maxvar/unipotent.hpp"

#include <algorithm>

namespace maxvar {

std::uint64_t GroupSpec::q() const {
  std::uint64_t q = 1;
  for (std::uint32_t i = 0; i < f; ++i) q *= p;
  return q;
}

void GroupSpec::validate(std::uint32_t min_rank) const {
  if (!is_prime(p)) throw GroupError("p = " + std::to_string(p) + " is not prime");
  if (f == 0) throw GroupError("f must be positive");
  if (n < min_rank || n > kMaxRank) {
    throw GroupError("rank n = " + std::to_string(n) + " outside [" + std::to_string(min_rank) + ", " +
                     std::to_string(kMaxRank) + "]");
  }
  if (kase != 1 && kase != 2) throw GroupError("case must be 1 or 2");
}

std::string GroupSpec::label() const {
  return "q=" + std::to_string(q()) + ",n=" + std::to_string(n) + ",case=" + std::to_string(kase);
}

Json GroupSpec::to_json() const { return Json{{"p", p}, {"f", f}, {"n", n}, {"case", kase}}; }

GroupSpec GroupSpec::from_json(const Json& j) {
  GroupSpec s;
  s.p = j.at("p").get<std::uint32_t>();
  s.f = j.at("f").get<std::uint32_t>();
  s.n = j.at("n").get<std::uint32_t>();
  s.kase = j.at("case").get<int>();
  s.validate();
  return s;
}

namespace {

const char* kind_name(SubgroupKind k) {
  switch (k) {
    case SubgroupKind::U: return "U";
    case SubgroupKind::Z: return "Z";
    case SubgroupKind::YcapU: return "Y";
    case SubgroupKind::H: return "H";
    case SubgroupKind::Hplus: return "H+";
    case SubgroupKind::Hminus: return "H-";
    case SubgroupKind::Gamma: return "Gamma";
    case SubgroupKind::Usub: return "Usub";
  }
  return "?";
}

bool takes_index(SubgroupKind k) {
  return k != SubgroupKind::U && k != SubgroupKind::Z && k != SubgroupKind::YcapU;
}

}  // namespace

std::string SubgroupId::label() const {
  std::string s = kind_name(kind);
  if (takes_index(kind)) s += "(" + std::to_string(d) + ")";
  return s;
}

SubgroupId SubgroupId::parse(const std::string& text) {
  std::string name = text;
  std::uint32_t d = 1;
  if (auto open = text.find('('); open != std::string::npos) {
    if (text.back() != ')') throw GroupError("bad subgroup name: " + text);
    name = text.substr(0, open);
    d = static_cast<std::uint32_t>(std::stoul(text.substr(open + 1, text.size() - open - 2)));
  }
  for (auto k : {SubgroupKind::U, SubgroupKind::Z, SubgroupKind::YcapU, SubgroupKind::H, SubgroupKind::Hplus,
                 SubgroupKind::Hminus, SubgroupKind::Gamma, SubgroupKind::Usub}) {
    if (name == kind_name(k)) return {k, d};
  }
  throw GroupError("unknown subgroup: " + text);
}

// ---------------------------------------------------------------------------

UnipotentGroup::UnipotentGroup(const GroupSpec& spec, std::shared_ptr<const FieldCtx> ambient,
                               std::uint32_t min_rank)
    : spec_(spec), field_(std::move(ambient)) {
  spec_.validate(min_rank);
  if (field_->characteristic() != spec_.p || field_->degree() % (spec_.f * spec_.n) != 0) {
    throw GroupError("ambient field does not contain F_{q^n}");
  }
  const int n = static_cast<int>(spec_.n);
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) {
      int idx = -1;
      if (i == 0 || j == 0) {
        idx = i + j;
      } else if (spec_.kase == 1) {
        idx = i + j <= n ? i + j : -1;
      } else {
        idx = i + j == n ? n : -1;
      }
      prod_[i][j] = idx;
    }
  }
}

UnipotentGroup UnipotentGroup::over(const GroupSpec& spec, std::uint32_t k, std::uint32_t min_rank) {
  spec.validate(min_rank);
  if (k == 0) throw GroupError("extension index k must be positive");
  return UnipotentGroup(spec, FieldCtx::make(spec.p, spec.f * spec.n * k), min_rank);
}

RingElem UnipotentGroup::one() const {
  RingElem g;
  g.a[0] = 1;
  return g;
}

RingElem UnipotentGroup::basic(std::uint32_t j, Code x) const {
  RingElem g = one();
  g.a.at(j) = field_->add(g.a[j], x);
  return g;
}

RingElem UnipotentGroup::mul(const RingElem& g, const RingElem& h) const {
  const FieldCtx& F = *field_;
  const std::uint32_t n = spec_.n;
  RingElem r;
  for (std::uint32_t i = 0; i <= n; ++i) {
    if (g.a[i] == 0) continue;
    const std::int64_t shift = std::int64_t{spec_.f} * i;
    for (std::uint32_t j = 0; j <= n; ++j) {
      const int idx = prod_[i][j];
      if (idx < 0 || h.a[j] == 0) continue;
      r.a[idx] = F.add(r.a[idx], F.mul(g.a[i], F.frob(h.a[j], shift)));
    }
  }
  return r;
}

RingElem UnipotentGroup::inv_unit(const RingElem& g) const {
  const FieldCtx& F = *field_;
  if (g.a[0] == 0) throw GroupError("element is not a unit");
  const std::uint32_t n = spec_.n;
  const Code a0_inv = F.inv(g.a[0]);
  // Solve g h = 1 index by index; every pair (i, j) with i >= 1 feeding index m has j < m.
  RingElem h;
  h.a[0] = a0_inv;
  for (std::uint32_t m = 1; m <= n; ++m) {
    Code acc = 0;
    for (std::uint32_t i = 1; i <= n; ++i) {
      if (g.a[i] == 0) continue;
      for (std::uint32_t j = 0; j < m; ++j) {
        if (prod_[i][j] != static_cast<int>(m) || h.a[j] == 0) continue;
        acc = F.add(acc, F.mul(g.a[i], F.frob(h.a[j], std::int64_t{spec_.f} * i)));
      }
    }
    h.a[m] = F.neg(F.mul(a0_inv, acc));
  }
  return h;
}

RingElem UnipotentGroup::inv(const RingElem& g) const {
  if (g.a[0] != 1) throw GroupError("inverse requested for a non-unipotent element");
  return inv_unit(g);
}

RingElem UnipotentGroup::pow(const RingElem& g, std::uint64_t e) const {
  RingElem result = one();
  RingElem base = g;
  while (e) {
    if (e & 1) result = mul(result, base);
    base = mul(base, base);
    e >>= 1;
  }
  return result;
}

RingElem UnipotentGroup::commutator(const RingElem& g, const RingElem& h) const {
  return mul(mul(inv_unit(g), inv_unit(h)), mul(g, h));
}

RingElem UnipotentGroup::frob_q(const RingElem& g, std::int64_t j) const {
  RingElem r;
  for (std::uint32_t i = 0; i <= spec_.n; ++i) r.a[i] = field_->frob(g.a[i], std::int64_t{spec_.f} * j);
  return r;
}

RingElem UnipotentGroup::lang(const RingElem& g) const { return mul(frob_q(g, spec_.n), inv_unit(g)); }

std::vector<Code> UnipotentGroup::normal_form(const RingElem& g) const {
  if (g.a[0] != 1) throw GroupError("normal form requested for a non-unipotent element");
  const FieldCtx& F = *field_;
  std::vector<Code> b(spec_.n + 1, 0);
  RingElem rest = g;
  // rest = (1 - b_j e_j)(1 - b_{j+1} e_{j+1})...; its e_j coefficient is -b_j.
  for (std::uint32_t j = 1; j <= spec_.n; ++j) {
    b[j] = F.neg(rest.a[j]);
    if (b[j] == 0) continue;
    rest = mul(inv(basic(j, F.neg(b[j]))), rest);
  }
  return b;
}

RingElem UnipotentGroup::from_factors(const std::vector<Code>& b) const {
  if (b.size() != spec_.n + 1) throw GroupError("normal form must have n + 1 entries (b_0 unused)");
  RingElem g = one();
  for (std::uint32_t j = 1; j <= spec_.n; ++j) {
    if (b[j]) g = mul(g, basic(j, field_->neg(b[j])));
  }
  return g;
}

RingElem UnipotentGroup::gm_conj(Code lambda, const RingElem& g) const {
  const FieldCtx& F = *field_;
  if (lambda == 0) throw GroupError("conjugation by zero");
  RingElem r;
  r.a[0] = g.a[0];
  for (std::uint32_t j = 1; j <= spec_.n; ++j) {
    if (g.a[j] == 0) continue;
    const Code scale = F.div(lambda, F.frob(lambda, std::int64_t{spec_.f} * j));
    r.a[j] = F.mul(scale, g.a[j]);
  }
  return r;
}

RingElem UnipotentGroup::boxplus(const RingElem& g, const RingElem& h) const {
  RingElem r = one();
  for (std::uint32_t j = 1; j <= spec_.n; ++j) r.a[j] = field_->add(g.a[j], h.a[j]);
  return r;
}

bool UnipotentGroup::is_rational(const RingElem& g) const {
  for (std::uint32_t j = 0; j <= spec_.n; ++j) {
    if (!field_->in_subfield(g.a[j], rational_degree())) return false;
  }
  return true;
}

UnipotentGroup UnipotentGroup::sub_group(std::uint32_t d) const {
  if (d == 0 || spec_.n % d) throw GroupError("subgroup index must divide n");
  GroupSpec s = spec_;
  s.f = spec_.f * d;
  s.n = spec_.n / d;
  return UnipotentGroup(s, field_, 1);
}

RingElem UnipotentGroup::nu(const RingElem& h, std::uint32_t d) const {
  if (d == 0 || spec_.n % d) throw GroupError("projection index must divide n");
  const std::uint32_t n = spec_.n;
  for (std::uint32_t j = 1; 2 * j <= n; ++j) {
    if (j % d && h.a[j] != 0) throw GroupError("element is not in H(" + std::to_string(d) + ")");
  }
  RingElem r;
  r.a[0] = h.a[0];
  for (std::uint32_t i = 1; i * d <= n; ++i) r.a[i] = h.a[i * d];
  return r;
}

RingElem UnipotentGroup::lift_sub(const RingElem& h, std::uint32_t d) const {
  if (d == 0 || spec_.n % d) throw GroupError("subgroup index must divide n");
  RingElem r;
  r.a[0] = h.a[0];
  for (std::uint32_t i = 1; i * d <= spec_.n; ++i) r.a[i * d] = h.a[i];
  return r;
}

Json UnipotentGroup::element_to_json(const RingElem& g) const {
  Json a = Json::array();
  for (std::uint32_t j = 0; j <= spec_.n; ++j) a.push_back(field_->element_to_json(g.a[j]));
  return Json{{"a", a}};
}

RingElem UnipotentGroup::element_from_json(const Json& j) const {
  const auto& a = j.at("a");
  if (!a.is_array() || a.size() != spec_.n + 1) {
    throw GroupError("element must list n + 1 = " + std::to_string(spec_.n + 1) + " coefficients");
  }
  RingElem g;
  for (std::uint32_t i = 0; i <= spec_.n; ++i) g.a[i] = field_->element_from_json(a[i]);
  return g;
}

std::string UnipotentGroup::element_key(const RingElem& g) const {
  std::string s;
  for (std::uint32_t j = 0; j <= spec_.n; ++j) {
    if (j) s += '|';
    s += std::to_string(g.a[j]);
  }
  return s;
}

// ---------------------------------------------------------------------------

PointSet::PointSet(const UnipotentGroup& group, SubgroupId id, Scope scope) : group_(&group), id_(id) {
  const std::uint32_t n = group.n();
  const std::uint32_t d = id.d;
  if (d == 0 || n % d) throw GroupError("subgroup index " + std::to_string(d) + " does not divide n");
  const std::uint32_t n1 = n / d;
  if (id.kind == SubgroupKind::Gamma && !(d % 2 == 0 && n1 % 2 == 1)) {
    throw GroupError("Gamma(" + std::to_string(d) + ") needs d even and n/d odd");
  }
  const FieldCtx& F = group.field();
  Slot zero;
  zero.values = {0};
  Slot full;
  if (scope == Scope::Ambient || F.degree() == group.rational_degree()) {
    full.range = F.size();
  } else {
    full.values = F.subfield_elements(group.rational_degree());
  }

  slots_[0].values = {1};
  for (std::uint32_t j = 1; j <= n; ++j) {
    const bool low = 2 * j <= n;         // j <= n/2
    const bool strictly_low = 2 * j < n;  // j < n/2
    const bool divisible = j % d == 0;
    bool free = false;
    switch (id.kind) {
      case SubgroupKind::U: free = true; break;
      case SubgroupKind::Z: free = j == n; break;
      case SubgroupKind::YcapU: free = j < n; break;
      case SubgroupKind::H: free = low ? divisible : true; break;
      case SubgroupKind::Hplus:
      case SubgroupKind::Gamma: free = strictly_low ? divisible : true; break;
      case SubgroupKind::Hminus: free = j == n || (!low && !divisible); break;
      case SubgroupKind::Usub: free = divisible; break;
    }
    slots_[j] = free ? full : zero;
    if (id.kind == SubgroupKind::Gamma && 2 * j == n) {
      // a_{n/2} restricted to F_{q^{n/2}}.
      slots_[j] = Slot{};
      slots_[j].values = F.subfield_elements(group.spec().f * (n / 2));
    }
  }
  for (std::uint32_t j = 1; j <= n; ++j) {
    const std::uint64_t c = slots_[j].count();
    if (size_ > (std::uint64_t{1} << 62) / c) throw GroupError("point set too large to index");
    size_ *= c;
  }
}

std::vector<std::uint64_t> PointSet::slot_sizes() const {
  std::vector<std::uint64_t> out;
  for (std::uint32_t j = 1; j <= group_->n(); ++j) out.push_back(slots_[j].count());
  return out;
}

RingElem PointSet::at(std::uint64_t index) const {
  if (index >= size_) throw GroupError("point index out of range");
  RingElem g;
  g.a[0] = 1;
  for (std::uint32_t j = group_->n(); j >= 1; --j) {
    const std::uint64_t c = slots_[j].count();
    g.a[j] = slots_[j].value(index % c);
    index /= c;
  }
  return g;
}

bool PointSet::slot_allows(std::uint32_t j, Code x) const {
  const Slot& s = slots_.at(j);
  if (s.values.empty()) return x < s.range;
  return std::binary_search(s.values.begin(), s.values.end(), x);
}

std::optional<std::uint64_t> PointSet::index_of(const RingElem& g) const {
  if (g.a[0] != 1) return std::nullopt;
  std::uint64_t index = 0;
  for (std::uint32_t j = 1; j <= group_->n(); ++j) {
    const Slot& s = slots_[j];
    std::uint64_t pos = 0;
    if (s.values.empty()) {
      if (g.a[j] >= s.range) return std::nullopt;
      pos = g.a[j];
    } else {
      auto it = std::lower_bound(s.values.begin(), s.values.end(), g.a[j]);
      if (it == s.values.end() || *it != g.a[j]) return std::nullopt;
      pos = static_cast<std::uint64_t>(it - s.values.begin());
    }
    index = index * s.count() + pos;
  }
  for (std::uint32_t j = group_->n() + 1; j <= kMaxRank; ++j) {
    if (g.a[j] != 0) return std::nullopt;
  }
  return index;
}

PointSet::Iterator::Iterator(const PointSet& set, std::uint64_t index) : set_(&set), index_(index) {
  if (index_ < set.size_) {
    current_ = set.at(index_);
    std::uint64_t rest = index_;
    for (std::uint32_t j = set.group_->n(); j >= 1; --j) {
      const std::uint64_t c = set.slots_[j].count();
      digits_[j] = rest % c;
      rest /= c;
    }
  }
}

PointSet::Iterator& PointSet::Iterator::operator++() {
  ++index_;
  if (index_ >= set_->size_) return *this;
  for (std::uint32_t j = set_->group_->n(); j >= 1; --j) {
    const Slot& s = set_->slots_[j];
    if (++digits_[j] < s.count()) {
      current_.a[j] = s.value(digits_[j]);
      break;
    }
    digits_[j] = 0;
    current_.a[j] = s.value(0);
  }
  return *this;
}

}  // namespace maxvar
