#include <doctest.h>

#include <complex>
#include <numbers>

#include "maxvar/cyclo.hpp"
#include "oracles.hpp"

using namespace maxvar;

namespace {

CycNum random_cyc(std::uint32_t p) {
  std::vector<std::int64_t> counts(p);
  for (auto& c : counts) c = static_cast<std::int64_t>(oracle::uniform(11)) - 5;
  CycNum x = CycNum::from_counts(p, counts);
  return x * mpq_class(1, static_cast<long>(oracle::uniform(3) + 1));
}

// Numerical value under zeta -> exp(2 pi i / p).
std::complex<double> embed_c(const CycNum& x) {
  std::complex<double> z = 0;
  for (std::size_t k = 0; k < x.coeffs().size(); ++k)
    z += x.coeffs()[k].get_d() * std::polar(1.0, 2 * std::numbers::pi * static_cast<double>(k) / x.p());
  return z;
}

// Tr_{Q(zeta_p)/Q}: (p-1) c_0 - sum_{k>0} c_k.
mpq_class absolute_trace(const CycNum& x) {
  mpq_class t = x.coeffs()[0] * (x.p() - 1);
  for (std::size_t k = 1; k < x.coeffs().size(); ++k) t -= x.coeffs()[k];
  return t;
}

}  // namespace

TEST_CASE("zeta powers") {
  CHECK(CycNum::zeta_pow(3, 0) == CycNum(3, 1));
  CHECK(CycNum::zeta_pow(2, 1) == CycNum(2, -1));
  CycNum expected(3, -1);
  expected -= CycNum::zeta_pow(3, 1);
  CHECK(CycNum::zeta_pow(3, 2) == expected);
  CHECK(CycNum::zeta_pow(5, -1) == CycNum::zeta_pow(5, 4));
  CHECK(CycNum::zeta_pow(7, 15) == CycNum::zeta_pow(7, 1));
  CHECK_THROWS_AS(CycNum::zeta_pow(6, 1), FieldError);
}

TEST_CASE("conjugation") {
  CHECK(CycNum::zeta_pow(3, 1).conj() == CycNum::zeta_pow(3, 2));
  CHECK(CycNum(5, 5).conj() == CycNum(5, 5));
  const CycNum sym = CycNum(5, 1) + CycNum::zeta_pow(5, 1) + CycNum::zeta_pow(5, 4);
  CHECK(sym.conj() == sym);
  for (std::uint32_t p : {2u, 3u, 5u, 7u}) {
    for (int i = 0; i < 200; ++i) {
      const CycNum x = random_cyc(p);
      CHECK(x.conj().conj() == x);
      CHECK(std::abs(embed_c(x.conj()) - std::conj(embed_c(x))) < 1e-9);
    }
  }
}

TEST_CASE("rational values") {
  CHECK(CycNum::from_counts(3, {1, 1, 1}).as_rational() == 0);
  for (std::uint32_t p : {2u, 3u, 5u, 7u, 11u}) {
    CHECK(CycNum::from_counts(p, std::vector<std::int64_t>(p, 1)).as_rational() == 0);
  }
  CHECK_THROWS_AS(CycNum::zeta_pow(3, 1).as_rational(), NotRational);
  CHECK(CycNum(3, mpq_class(7, 3)).as_rational() == mpq_class(7, 3));
  CHECK_FALSE(CycNum(3, mpq_class(7, 3)).is_integral());
}

TEST_CASE("ring axioms against a numerical embedding") {
  for (std::uint32_t p : {2u, 3u, 5u, 7u}) {
    for (int i = 0; i < 10000 / 4; ++i) {
      const CycNum x = random_cyc(p), y = random_cyc(p), z = random_cyc(p);
      REQUIRE((x * y) * z == x * (y * z));
      REQUIRE(x * (y + z) == x * y + x * z);
      REQUIRE(x * y == y * x);
      REQUIRE((x - x).is_zero());
      REQUIRE(std::abs(embed_c(x * y) - embed_c(x) * embed_c(y)) < 1e-6);
      REQUIRE(std::abs(embed_c(x + y) - (embed_c(x) + embed_c(y))) < 1e-9);
      REQUIRE(absolute_trace(x * x.conj()) >= 0);
    }
  }
}

TEST_CASE("nontrivial additive characters sum to zero") {
  for (auto [p, d] : std::vector<std::pair<std::uint32_t, std::uint32_t>>{{2, 1}, {3, 1}, {2, 2}, {2, 4}, {3, 2}, {3, 3}, {2, 6}, {2, 8}}) {
    const auto field = FieldCtx::make(p, d);
    for (Code b = 1; b < field->size(); ++b) {
      std::vector<std::int64_t> counts(p, 0);
      for (Code x = 0; x < field->size(); ++x) ++counts[field->prime_trace(field->mul(b, x))];
      CHECK(CycNum::from_counts(p, counts).is_zero());
    }
    std::vector<std::int64_t> trivial(p, 0);
    trivial[0] = static_cast<std::int64_t>(field->size());
    CHECK(CycNum::from_counts(p, trivial).as_rational() == field->size());
  }
}

TEST_CASE("cyclotomic json") {
  CycNum x = CycNum::zeta_pow(3, 2) * mpq_class(1, 2);
  CHECK(x.to_json().dump() == R"({"p":3,"coeffs":[[-1,2],[-1,2]]})");
  CHECK(CycNum::from_json(x.to_json()) == x);
  CycNum big(5, mpq_class(mpz_class("123456789012345678901234567890")));
  CHECK(CycNum::from_json(big.to_json()) == big);
}
