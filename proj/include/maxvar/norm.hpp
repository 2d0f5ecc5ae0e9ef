#pragma once

// The reduced norm morphism N: U -> G_a, pinned by N(1) = 0 and
// N(g)^q - N(g) = pr_n(lang(g)), and its restriction Nm to rational points.

#include <cstdint>
#include <vector>

#include "maxvar/budget.hpp"
#include "maxvar/unipotent.hpp"

namespace maxvar {

class NormOracle {
 public:
  explicit NormOracle(const UnipotentGroup& group);

  const UnipotentGroup& group() const noexcept { return group_; }

  // Descending recursion over the normal form g = (1 - b_1 e_1)...(1 - b_n e_n).
  Code norm_morphism(const RingElem& g) const;
  // Sum of the one-parameter closed forms over the normal form; g must be rational.
  Code reduced_norm_point(const RingElem& g) const;

  // Closed form of N(1 - b e_j), valid for every b in the ambient field.
  Code closed_form_factor(std::uint32_t j, Code b) const;
  bool closed_form_nonzero(std::uint32_t j) const { return nonzero_[j]; }

  // F_n(b) = -(b + b^q + ... + b^{q^{n-1}}).
  Code base_case(Code b) const;
  // The variant -(1 + b^q + ... + b^{q^{n-1}}); kept only to report that it fails
  // the normalization N(1) = 0 and the defining identity.
  Code constant_base_case(Code b) const;

 private:
  // -(x + x^q + ... + x^{q^{k-1}})
  Code neg_partial_trace(Code x, std::uint32_t k) const;

  UnipotentGroup group_;
  std::vector<bool> nonzero_;
};

struct DrinfeldReport {
  GroupSpec spec;
  std::uint64_t group_order = 0;
  std::uint64_t center_order = 0;

  std::uint64_t homomorphism_pairs = 0;
  bool homomorphism_exhaustive = false;
  bool homomorphism_ok = false;

  std::uint64_t invariance_checks = 0;
  bool invariance_exhaustive = false;
  bool invariance_ok = false;

  bool center_trace_ok = false;
  bool values_in_Fq_ok = false;
  bool closed_form_ok = false;

  std::uint64_t commutator_generators = 0;
  std::uint64_t generated_order = 0;  // |H|
  std::uint64_t hz_order = 0;         // |H * Z|
  bool generation_ok = false;

  std::uint64_t peeling_witnesses = 0;
  std::uint64_t peeling_max_steps = 0;
  bool peeling_ok = false;

  // Base-case variant with a constant term.
  Code constant_variant_at_one = 0;
  std::uint64_t constant_variant_identity_failures = 0;
  std::uint64_t identity_samples = 0;
  std::uint64_t implemented_identity_failures = 0;

  bool certified() const;
  Json to_json() const;
};

// Exhaustive verification of the characterization of Nm on U(F_{q^n}) and of the
// decomposition U = H * Z with H generated by g^{-1} (lambda g lambda^{-1}).
DrinfeldReport drinfeld_certify(const GroupSpec& spec, std::uint64_t max_order = std::uint64_t{1} << 20);

}  // namespace maxvar
