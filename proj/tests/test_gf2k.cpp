#include "doctest.h"

#include <numeric>
#include <set>

#include "support.hpp"
#include "wittlab/gf2k.hpp"
#include "wittlab/matrix.hpp"

using namespace wittlab;
using testing_support::random_fel;
using testing_support::random_nonzero;
using testing_support::slow_mul;

TEST_CASE("spec examples in GF(2) and GF(4)") {
  const auto& f2 = FieldCtx::get(1);
  const auto& f4 = FieldCtx::get(2);
  CHECK((f2(1) + f2(1)).is_zero());
  CHECK(f4.modulus() == 0b111u);

  // schoolbook oracle
  CHECK(slow_mul(0b10, 0b10, 0b111, 2) == 0b11u);
  CHECK((f4(0b10) * f4(0b10)).bits() == 0b11u);

  std::uint32_t inv = 0;
  for (std::uint32_t z = 1; z < 4; ++z) {
    if (slow_mul(0b10, z, 0b111, 2) == 1) inv = z;
  }
  CHECK(inv == 0b11u);
  CHECK(f4(0b10).inv().bits() == 0b11u);

  CHECK(frobenius(f2(1), 5).bits() == 1u);
  CHECK(frobenius(f4(0b10), 1).bits() == 0b11u);
  CHECK(trace(f2(1)) == 1u);
  CHECK(trace(f4(0b10)) == 1u);
  CHECK(trace(f4(0)) == 0u);
  CHECK(sqrt(f4(0)).bits() == 0u);
  CHECK(sqrt(f4(1)).bits() == 1u);
  CHECK(sqrt(f4(0b11)).bits() == 0b10u);

  auto z0 = solve_artin_schreier(f4(0));
  REQUIRE(z0);
  CHECK((*z0)[0].bits() == 0u);
  CHECK((*z0)[1].bits() == 1u);
  CHECK_FALSE(solve_artin_schreier(f2(1)));
  auto z1 = solve_artin_schreier(f4(1));
  REQUIRE(z1);
  CHECK((*z1)[0].bits() == 0b10u);
  CHECK((*z1)[1].bits() == 0b11u);

  auto c2 = cube_roots(f2(1));
  REQUIRE(c2.size() == 1);
  CHECK(c2[0].bits() == 1u);
  auto c4 = cube_roots(f4(1));
  REQUIRE(c4.size() == 3);
  CHECK(c4[0].bits() == 1u);
  CHECK(c4[1].bits() == 2u);
  CHECK(c4[2].bits() == 3u);
  auto c0 = cube_roots(f4(0));
  REQUIRE(c0.size() == 1);
  CHECK(c0[0].bits() == 0u);
}

TEST_CASE("errors") {
  const auto& f4 = FieldCtx::get(2);
  const auto& f8 = FieldCtx::get(3);
  CHECK_THROWS_AS(f4(0).inv(), ArithmeticError);
  CHECK_THROWS_AS(f4(4), ValidationError);
  CHECK_THROWS_AS(f4(1) + f8(1), ContextError);
  CHECK_THROWS_AS(f4(1) * Fel(), ContextError);
  CHECK_THROWS_AS(FieldCtx::get(21), FieldCapError);
  CHECK_THROWS_AS(FieldCtx::get(0), ValidationError);
  CHECK_THROWS_AS(embed(f4(1), f8), ValidationError);
}

TEST_CASE("defining polynomials are irreducible and primitive") {
  for (int k = 1; k <= kMaxFieldDegree; ++k) {
    const auto& f = FieldCtx::get(k);
    CHECK((f.modulus() >> k) == 1u);
    // x has order exactly 2^k - 1: x^(n/p) != 1 for each prime p | n.
    const std::uint64_t n = f.size() - 1;
    CHECK(f.pow(f.generator().bits(), n) == 1u);
    std::uint64_t m = n;
    for (std::uint64_t p = 2; p * p <= m || m > 1; ++p) {
      if (p * p > m) p = m;
      if (m % p != 0) continue;
      while (m % p == 0) m /= p;
      CHECK(f.pow(f.generator().bits(), n / p) != 1u);
    }
  }
}

TEST_CASE("table and schoolbook paths agree with the slow oracle") {
  for (int k : {1, 2, 4, 8, 11, 16, 17, 20}) {
    const auto& f = FieldCtx::get(k);
    for (int i = 0; i < 2000; ++i) {
      const auto a = testing_support::random_bits(f);
      const auto b = testing_support::random_bits(f);
      const auto want = slow_mul(a, b, f.modulus(), k);
      CHECK(f.mul(a, b) == want);
      CHECK(f.mul_schoolbook(a, b) == want);
      if (a != 0) CHECK(f.mul(a, f.inv(a)) == 1u);
    }
  }
}

TEST_CASE("field properties on random elements") {
  for (int k : {1, 3, 4, 6, 10, 16, 19, 20}) {
    const auto& f = FieldCtx::get(k);
    for (int i = 0; i < 300; ++i) {
      const Fel a = random_fel(f), b = random_fel(f), c = random_fel(f);
      CHECK((a * b) * c == a * (b * c));
      CHECK(a * b == b * a);
      CHECK(a * (b + c) == a * b + a * c);
      CHECK((a + b).square() == a.square() + b.square());
      CHECK((a * b).square() == a.square() * b.square());
      CHECK(sqrt(a).square() == a);
      CHECK(sqrt(a.square()) == a);
      CHECK(frobenius(a, static_cast<unsigned>(k)) == a);
      CHECK(frobenius(a, 0) == a);
      CHECK(trace(a.square()) == trace(a));
      CHECK(trace(a + b) == (trace(a) ^ trace(b)));

      // trace as the sum of conjugates
      Fel s = f.zero();
      for (int j = 0; j < k; ++j) s += frobenius(a, static_cast<unsigned>(j));
      CHECK(s.bits() == trace(a));

      auto as = solve_artin_schreier(a);
      CHECK(as.has_value() == (trace(a) == 0));
      if (as) {
        for (const auto& z : *as) CHECK(z.square() + z == a);
        CHECK((*as)[0] + (*as)[1] == f.one());
        CHECK((*as)[0] < (*as)[1]);
      }
      if (!a.is_zero()) {
        CHECK(a.pow(-1) == a.inv());
        CHECK(a.pow(3) == a * a * a);
      }
      for (const auto& z : cube_roots(a)) CHECK(z * z * z == a);
    }
    CHECK(cube_roots(f.one()).size() == std::gcd(3u, f.size() - 1));
  }
}

TEST_CASE("cube roots agree with exhaustive search") {
  for (int k : {2, 3, 4, 6, 8}) {
    const auto& f = FieldCtx::get(k);
    for (std::uint32_t c = 0; c < f.size(); ++c) {
      std::vector<std::uint32_t> want;
      for (std::uint32_t z = 0; z < f.size(); ++z) {
        if (f.mul(z, f.mul(z, z)) == c) want.push_back(z);
      }
      std::vector<std::uint32_t> got;
      for (const auto& z : cube_roots(f(c))) got.push_back(z.bits());
      CHECK(got == want);
    }
  }
  // discrete-log path without tables
  const auto& big = FieldCtx::get(18);
  for (int i = 0; i < 20; ++i) {
    const auto z = random_nonzero(big);
    const auto roots = cube_roots(z * z * z);
    CHECK(roots.size() == 3);
    CHECK(std::find(roots.begin(), roots.end(), z) != roots.end());
  }
}

TEST_CASE("embedding") {
  const auto& f4 = FieldCtx::get(2);
  const auto& f16 = FieldCtx::get(4);
  CHECK(embed(f4(0), f16).bits() == 0u);
  CHECK(embed(f4(1), f16).bits() == 1u);
  CHECK(embed(FieldCtx::get(1)(1), f4).bits() == 1u);

  // smallest root of x^2 + x + 1 in GF(16), by exhaustive search
  std::uint32_t smallest = 0;
  for (std::uint32_t z = 0; z < 16; ++z) {
    if ((f16.mul(z, z) ^ z ^ 1u) == 0) {
      smallest = z;
      break;
    }
  }
  CHECK(embed(f4(0b10), f16).bits() == smallest);

  const int pairs[][2] = {{1, 4}, {2, 4}, {2, 8}, {4, 8}, {3, 6}, {2, 6}, {4, 16}, {5, 20}, {2, 20}, {8, 16}};
  for (const auto& pr : pairs) {
    const auto& from = FieldCtx::get(pr[0]);
    const auto& to = FieldCtx::get(pr[1]);
    for (int i = 0; i < 1000; ++i) {
      const Fel a = random_fel(from), b = random_fel(from);
      CHECK(embed(a + b, to) == embed(a, to) + embed(b, to));
      CHECK(embed(a * b, to) == embed(a, to) * embed(b, to));
    }
  }
  // The smallest-root rule is not transitive, but a chain lands on a Galois
  // conjugate of the direct image.
  const auto& f256 = FieldCtx::get(8);
  for (std::uint32_t x = 0; x < 4; ++x) {
    const Fel chained = embed(embed(f4(x), f16), f256);
    const Fel direct = embed(f4(x), f256);
    bool conjugate = false;
    for (unsigned j = 0; j < 8; ++j) conjugate = conjugate || frobenius(direct, j) == chained;
    CHECK(conjugate);
  }
}

TEST_CASE("matrix basics") {
  const auto& f = FieldCtx::get(4);
  auto m = FieldMatrix::from_bits(f, {{1, 2, 3}, {0, 1, 4}, {5, 6, 0}});
  auto inv = inverse(m);
  CHECK(m * inv == FieldMatrix::identity(f, 3));
  CHECK(rank(m) == 3);
  CHECK_FALSE(determinant(m).is_zero());
  auto sing = FieldMatrix::from_bits(f, {{1, 2}, {2, f.mul(2, 2)}});
  CHECK(rank(sing) == 1);
  CHECK(determinant(sing).is_zero());
  CHECK_THROWS_AS(inverse(sing), ArithmeticError);
  CHECK(rank(FieldMatrix(f, 5, 5)) == 0);
  CHECK(rank(FieldMatrix::identity(f, 5)) == 5);

  for (int trial = 0; trial < 50; ++trial) {
    FieldMatrix a(f, 4, 4), b(f, 4, 4);
    for (int r = 0; r < 4; ++r) {
      for (int c = 0; c < 4; ++c) {
        a.set(r, c, random_fel(f));
        b.set(r, c, random_fel(f));
      }
    }
    CHECK(determinant(a * b) == determinant(a) * determinant(b));
    CHECK((rank(a) == 4) == !determinant(a).is_zero());
  }
}

TEST_CASE("polynomial roots agree with exhaustive evaluation") {
  for (int k : {1, 2, 3, 5, 8, 11}) {
    const auto& f = FieldCtx::get(k);
    for (int trial = 0; trial < 60; ++trial) {
      // half the trials are built from chosen roots so that splitting is exercised
      std::vector<std::uint32_t> coeffs = {1};
      const int deg = 1 + static_cast<int>(testing_support::rng()() % 8);
      if (trial % 2 == 0) {
        for (int i = 0; i < deg; ++i) {
          const auto r = testing_support::random_bits(f);
          std::vector<std::uint32_t> next(coeffs.size() + 1, 0);
          for (std::size_t j = 0; j < coeffs.size(); ++j) {
            next[j + 1] ^= coeffs[j];
            next[j] ^= f.mul(coeffs[j], r);
          }
          coeffs = next;
        }
      } else {
        coeffs.assign(static_cast<std::size_t>(deg) + 1, 0);
        for (auto& c : coeffs) c = testing_support::random_bits(f);
      }
      std::vector<std::uint32_t> brute;
      for (std::uint32_t z = 0; z < f.size(); ++z) {
        std::uint32_t acc = 0;
        for (std::size_t i = coeffs.size(); i-- > 0;) acc = testing_support::slow_mul(acc, z, f.modulus(), k) ^ coeffs[i];
        if (acc == 0) brute.push_back(z);
      }
      bool all_zero = true;
      for (auto c : coeffs) all_zero = all_zero && c == 0;
      if (all_zero) continue;
      CHECK(f.poly_roots(coeffs) == brute);
    }
  }
  const auto& f16 = FieldCtx::get(16);
  CHECK(f16.poly_roots({0, 0, 5}) == std::vector<std::uint32_t>{0});
  CHECK(f16.poly_roots({7}).empty());
  CHECK(f16.poly_roots({0, 0}).size() == f16.size());
}
