#include "maxvar/norm.hpp"

#include <deque>

namespace maxvar {

namespace {

Code primitive_element(const FieldCtx& F) {
  const std::uint64_t order = F.size() - 1;
  std::vector<std::uint64_t> primes;
  std::uint64_t m = order;
  for (std::uint64_t r = 2; r * r <= m; ++r) {
    if (m % r == 0) {
      primes.push_back(r);
      while (m % r == 0) m /= r;
    }
  }
  if (m > 1) primes.push_back(m);
  for (Code c = 1; c < F.size(); ++c) {
    bool ok = true;
    for (auto r : primes) {
      if (F.pow(c, order / r) == 1) {
        ok = false;
        break;
      }
    }
    if (ok) return c;
  }
  throw FieldError("no primitive element");
}

}  // namespace

NormOracle::NormOracle(const UnipotentGroup& group) : group_(group), nonzero_(group.n() + 1, false) {
  const std::uint32_t n = group.n();
  for (std::uint32_t j = 1; j <= n; ++j) {
    nonzero_[j] = group.spec().kase == 1 ? n % j == 0 : (j == n || 2 * j == n);
  }
}

Code NormOracle::neg_partial_trace(Code x, std::uint32_t k) const {
  const FieldCtx& F = group_.field();
  const std::int64_t f = group_.spec().f;
  Code s = 0;
  for (std::uint32_t t = 0; t < k; ++t) s = F.add(s, F.frob(x, f * t));
  return F.neg(s);
}

Code NormOracle::base_case(Code b) const { return neg_partial_trace(b, group_.n()); }

Code NormOracle::constant_base_case(Code b) const {
  const FieldCtx& F = group_.field();
  // -(1 + b^q + ... + b^{q^{n-1}})
  return F.sub(F.add(neg_partial_trace(b, group_.n()), b), 1);
}

Code NormOracle::norm_morphism(const RingElem& g) const {
  const UnipotentGroup& G = group_;
  const FieldCtx& F = G.field();
  const std::uint32_t n = G.n();
  const auto b = G.normal_form(g);

  Code value = base_case(b[n]);
  RingElem tail = G.basic(n, F.neg(b[n]));
  for (std::uint32_t k = n - 1; k >= 1; --k) {
    if (b[k] != 0) {
      // lang(tail) = 1 + sum_{j>k} c_j e_j; the constant term c_0 = 1 also feeds index n.
      const RingElem c = G.lang(tail);
      RingElem step;  // b_k e_k
      step.a[k] = b[k];
      RingElem power = step;  // (b_k e_k)^i
      for (std::uint32_t i = 1; i * k <= n; ++i) {
        const std::uint32_t j = n - i * k;
        if (c.a[j] != 0) {
          RingElem lead;  // c_j e_j
          lead.a[j] = c.a[j];
          const Code A = G.pr_n(G.mul(lead, power));
          value = F.add(value, neg_partial_trace(A, k));
        }
        power = G.mul(power, step);
      }
      tail = G.mul(G.basic(k, F.neg(b[k])), tail);
    }
  }
  return value;
}

Code NormOracle::closed_form_factor(std::uint32_t j, Code b) const {
  if (!nonzero_.at(j) || b == 0) return 0;
  const FieldCtx& F = group_.field();
  const std::int64_t f = group_.spec().f;
  // phi(b) = b^{1 + q^j + ... + q^{n-j}}
  Code phi = 1;
  for (std::uint32_t s = 0; s * j < group_.n(); ++s) phi = F.mul(phi, F.frob(b, f * j * s));
  return neg_partial_trace(phi, j);
}

Code NormOracle::reduced_norm_point(const RingElem& g) const {
  if (!group_.is_rational(g)) throw GroupError("reduced norm requested for a non-rational point");
  const FieldCtx& F = group_.field();
  const auto b = group_.normal_form(g);
  Code value = 0;
  for (std::uint32_t j = 1; j <= group_.n(); ++j) value = F.add(value, closed_form_factor(j, b[j]));
  return value;
}

// ---------------------------------------------------------------------------

bool DrinfeldReport::certified() const {
  return homomorphism_ok && invariance_ok && center_trace_ok && values_in_Fq_ok && closed_form_ok && generation_ok &&
         peeling_ok && implemented_identity_failures == 0;
}

Json DrinfeldReport::to_json() const {
  Json j;
  j["spec"] = spec.to_json();
  j["group_order"] = group_order;
  j["center_order"] = center_order;
  j["homomorphism"] = {{"pairs", homomorphism_pairs}, {"exhaustive", homomorphism_exhaustive}, {"ok", homomorphism_ok}};
  j["invariance"] = {{"checks", invariance_checks}, {"exhaustive", invariance_exhaustive}, {"ok", invariance_ok}};
  j["center_is_trace"] = center_trace_ok;
  j["values_in_Fq"] = values_in_Fq_ok;
  j["closed_form_matches_recursion"] = closed_form_ok;
  j["generation"] = {{"commutator_generators", commutator_generators},
                     {"H_order", generated_order},
                     {"HZ_order", hz_order},
                     {"ok", generation_ok}};
  j["peeling"] = {{"witnesses", peeling_witnesses}, {"max_steps", peeling_max_steps}, {"ok", peeling_ok}};
  j["base_case"] = {{"implemented", "F_n(b) = -(b + b^q + ... + b^(q^(n-1)))"},
                    {"identity_samples", identity_samples},
                    {"implemented_identity_failures", implemented_identity_failures},
                    {"constant_variant", "F_n(b) = -(1 + b^q + ... + b^(q^(n-1)))"},
                    {"constant_variant_N_of_1", constant_variant_at_one},
                    {"constant_variant_identity_failures", constant_variant_identity_failures}};
  j["certified"] = certified();
  return j;
}

DrinfeldReport drinfeld_certify(const GroupSpec& spec, std::uint64_t max_order) {
  spec.validate();
  DrinfeldReport r;
  r.spec = spec;
  const auto G = UnipotentGroup::over(spec, 1);
  const FieldCtx& F = G.field();
  const NormOracle N(G);
  const PointSet U(G, {SubgroupKind::U});
  const PointSet Z(G, {SubgroupKind::Z});
  if (U.size() > max_order) {
    throw BudgetExceeded("group of order " + std::to_string(U.size()) + " exceeds the exhaustive limit " +
                         std::to_string(max_order));
  }
  const std::uint32_t n = spec.n;
  const std::uint32_t fq = spec.f;  // F_q has degree f over F_p
  r.group_order = U.size();
  r.center_order = Z.size();

  std::vector<Code> norms(U.size());
  r.values_in_Fq_ok = true;
  r.closed_form_ok = true;
  for (auto it = U.begin(); it != U.end(); ++it) {
    const Code v = N.norm_morphism(*it);
    norms[it.index()] = v;
    if (!F.in_subfield(v, fq)) r.values_in_Fq_ok = false;
    if (N.reduced_norm_point(*it) != v) r.closed_form_ok = false;
  }
  auto norm_of = [&](const RingElem& g) { return norms[*U.index_of(g)]; };

  // Homomorphism.
  r.homomorphism_ok = true;
  if (U.size() * U.size() <= (std::uint64_t{1} << 24)) {
    r.homomorphism_exhaustive = true;
    for (std::uint64_t a = 0; a < U.size(); ++a) {
      const RingElem ga = U.at(a);
      for (auto it = U.begin(); it != U.end(); ++it) {
        ++r.homomorphism_pairs;
        if (norm_of(G.mul(ga, *it)) != F.add(norms[a], norms[it.index()])) r.homomorphism_ok = false;
      }
    }
  } else {
    // Against the generating set 1 + t^i e_j; additivity on generators implies it everywhere.
    std::vector<RingElem> gens;
    for (std::uint32_t j = 1; j <= n; ++j) {
      Code basis = 1;
      for (std::uint32_t i = 0; i < F.degree(); ++i, basis *= F.characteristic()) gens.push_back(G.basic(j, basis));
    }
    for (auto it = U.begin(); it != U.end(); ++it) {
      for (const auto& h : gens) {
        ++r.homomorphism_pairs;
        if (norm_of(G.mul(*it, h)) != F.add(norms[it.index()], norm_of(h))) r.homomorphism_ok = false;
      }
    }
  }

  // Invariance under F_{q^n}^x.
  const Code lambda0 = primitive_element(F);
  std::vector<Code> lambdas;
  r.invariance_exhaustive = U.size() * (F.size() - 1) <= (std::uint64_t{1} << 24);
  if (r.invariance_exhaustive) {
    for (Code l = 1; l < F.size(); ++l) lambdas.push_back(l);
  } else {
    lambdas.push_back(lambda0);
  }
  r.invariance_ok = true;
  for (Code l : lambdas) {
    for (auto it = U.begin(); it != U.end(); ++it) {
      ++r.invariance_checks;
      if (norm_of(G.gm_conj(l, *it)) != norms[it.index()]) r.invariance_ok = false;
    }
  }

  // Center.
  r.center_trace_ok = true;
  for (const RingElem& z : Z) {
    if (norm_of(z) != F.trace_to(z.a[n], fq)) r.center_trace_ok = false;
  }

  // Closure of the subgroup generated by g^{-1} (lambda g lambda^{-1}).
  std::vector<bool> is_gen(U.size(), false);
  std::vector<std::uint64_t> gens;
  for (Code l : lambdas) {
    for (const RingElem& g : U) {
      const auto idx = *U.index_of(G.mul(G.inv(g), G.gm_conj(l, g)));
      if (!is_gen[idx]) {
        is_gen[idx] = true;
        gens.push_back(idx);
      }
    }
  }
  r.commutator_generators = gens.size();
  {
    // Only generators outside the current closure enlarge it; each at least doubles
    // its order, so the closure is rebuilt at most log_p |U| times.
    std::vector<bool> in_h(U.size(), false);
    in_h[*U.index_of(G.one())] = true;
    std::vector<RingElem> useful;
    for (auto idx : gens) {
      if (in_h[idx]) continue;
      useful.push_back(U.at(idx));
      std::fill(in_h.begin(), in_h.end(), false);
      std::deque<std::uint64_t> queue{*U.index_of(G.one())};
      in_h[queue.front()] = true;
      while (!queue.empty()) {
        const RingElem h = U.at(queue.front());
        queue.pop_front();
        for (const auto& x : useful) {
          const auto next = *U.index_of(G.mul(h, x));
          if (!in_h[next]) {
            in_h[next] = true;
            queue.push_back(next);
          }
        }
      }
    }
    std::vector<bool> in_hz(U.size(), false);
    for (std::uint64_t i = 0; i < U.size(); ++i) {
      if (!in_h[i]) continue;
      ++r.generated_order;
      const RingElem h = U.at(i);
      for (const RingElem& z : Z) in_hz[*U.index_of(G.mul(h, z))] = true;
    }
    for (bool b : in_hz) r.hz_order += b;
    r.generation_ok = r.hz_order == U.size();
  }

  // Constructive decomposition g = c_1 ... c_r z following the lowest nonzero index.
  r.peeling_ok = true;
  for (const RingElem& g : U) {
    RingElem rest = g;
    RingElem product = G.one();
    std::uint64_t steps = 0;
    for (std::uint32_t k = 1; k < n; ++k) {
      if (rest.a[k] == 0) continue;
      const Code s = F.div(lambda0, F.frob(lambda0, std::int64_t{spec.f} * k));  // lambda^{1 - q^k}
      const Code b = F.div(rest.a[k], F.sub(s, 1));
      const RingElem g1 = G.basic(k, b);
      const RingElem c = G.mul(G.inv(g1), G.gm_conj(lambda0, g1));
      product = G.mul(product, c);
      rest = G.mul(G.inv(c), rest);
      ++steps;
      if (rest.a[k] != 0) r.peeling_ok = false;
    }
    const bool central = Z.contains(rest);
    if (central && G.mul(product, rest) == g) {
      ++r.peeling_witnesses;
    } else {
      r.peeling_ok = false;
    }
    r.peeling_max_steps = std::max(r.peeling_max_steps, steps);
  }

  // Base case: the implemented form against the constant variant.
  r.constant_variant_at_one = N.constant_base_case(0);
  const auto big = UnipotentGroup::over(spec, 2);
  const NormOracle NB(big);
  const FieldCtx& FB = big.field();
  const std::uint64_t samples = std::min<std::uint64_t>(FB.size(), 4096);
  for (std::uint64_t i = 0; i < samples; ++i) {
    const Code b = FB.size() <= 4096 ? i : (i * 0x9e3779b97f4a7c15ULL) % FB.size();
    const Code target = FB.sub(b, FB.frob(b, std::int64_t{spec.f} * n));
    auto as_defect = [&](Code v) { return FB.sub(FB.frob(v, spec.f), v) != target; };
    ++r.identity_samples;
    if (as_defect(NB.base_case(b))) ++r.implemented_identity_failures;
    if (as_defect(NB.constant_base_case(b))) ++r.constant_variant_identity_failures;
  }
  return r;
}

}  // namespace maxvar
