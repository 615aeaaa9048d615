#include <doctest.h>

#include "support.hpp"
#include "wittlab/invariants.hpp"
#include "wittlab/quotients.hpp"
#include "wittlab/symmetry.hpp"

using namespace wittlab;
using testing_support::random_fel;
using testing_support::random_nonzero;

namespace {

std::vector<std::uint32_t> bits_of(const std::vector<Fel>& v) {
  std::vector<std::uint32_t> out;
  for (const auto& x : v) out.push_back(x.bits());
  return out;
}

// F2 as displayed, Laurent coefficients x^-2..x^5, evaluated at x2 != 0.
Fel f2_laurent(const FamilyS& s, const Fel& g, const Fel& x) {
  const auto& f = x.ctx();
  const Fel b2 = embed(s.b2, f), b3 = embed(s.b3, f), one = f.one();
  const Fel d = (b3 * b3 * b3).inv();
  Fel v = d * x.pow(5) + (g + one) * d * x.pow(4) + g * g * d * x.pow(3) + (g.pow(3) + g * g) * d * x * x +
          (b2 * b3 * b3 + g * g + one) * d * x +
          (g * b2 * b3 * b3 + g.pow(3) + b2 * b2 * b3 + g * g + g + one) * d;
  v += (g * b2 + b2) / b3 * x.inv();
  v += (g * g * b2 * b2 + b2 * b2) / (b3 * b3) * x.pow(-2);
  return v;
}

Fel eval(const std::vector<Fel>& p, const Fel& x) {
  Fel acc = x.ctx().zero();
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
  return acc;
}

}  // namespace

TEST_CASE("quotient by iota is the supersingular elliptic curve") {
  const auto& f2 = FieldCtx::get(1);
  const auto& f4 = FieldCtx::get(2);
  for (const FamilyS& s : {FamilyS(f2.zero(), f2.one(), f2.zero()), FamilyS(f2.one(), f2.one(), f2.zero()),
                           FamilyS(f4.zero(), f4.generator(), f4.one())}) {
    const EllipticModel e = quotient_iota(s);
    CHECK(e.to_string() == "y^2+y=x^3");
    CHECK(bits_of(e.coefficients(s.ctx())) == std::vector<std::uint32_t>{0, 0, 0, 1});
  }
}

TEST_CASE("quotients by eta and iota*eta") {
  const auto& f2 = FieldCtx::get(1);
  const FamilyS s(f2.zero(), f2.one(), f2.zero());
  const EtaQuotient q = quotient_eta(s, EtaWhich::Eta);
  CHECK(q.g2.is_zero());
  CHECK(q.c_minus1.is_zero());
  CHECK(bits_of(q.model.f) == std::vector<std::uint32_t>{1, 1, 0, 0, 1, 1});
  CHECK(q.model.to_string() == "y^2+y=x^5+x^4+x+1");
  const EtaQuotient qi = quotient_eta(s, EtaWhich::IotaEta);
  CHECK(qi.g2.is_one());

  CHECK_THROWS_AS(quotient_eta(FamilyS(f2.one(), f2.zero(), f2.one()), EtaWhich::Eta), ValidationError);

  for (int k : {2, 4, 5}) {
    const auto& f = FieldCtx::get(k);
    for (int trial = 0; trial < 20; ++trial) {
      FamilyS s2(random_fel(f), random_nonzero(f), random_fel(f));
      if (trial == 0) s2.b2 = f.zero();
      const EtaQuotient a = quotient_eta(s2, EtaWhich::Eta);
      const EtaQuotient b = quotient_eta(s2, EtaWhich::IotaEta);
      const auto& K = *a.result_ctx;
      CHECK(a.g2 * a.g2 + a.g2 == embed(s2.b8, K));
      CHECK(b.g2 == a.g2 + K.one());
      CHECK(a.model.f.size() == 6);
      CHECK_FALSE(a.model.f[5].is_zero());
      CHECK(a.model.f[5] * embed(s2.b3, K).pow(3) == K.one());
      CHECK(a.c_minus1 * a.c_minus1 == a.c_minus2);
      if (s2.b2.is_zero()) CHECK(a.c_minus1.is_zero());
      // F3 + c_{-1}/x + c_{-2}/x^2 is the displayed F2 and the tail is c^2 + c for c = c_{-1}/x
      for (int i = 0; i < 5; ++i) {
        const Fel x = random_nonzero(K);
        const Fel tail = a.c_minus1 / x;
        CHECK(f2_laurent(s2, a.g2, x) == eval(a.model.f, x) + tail + tail * tail);
      }
    }
  }
}

TEST_CASE("L_C splits into the quotient factors") {
  const auto& f2 = FieldCtx::get(1);
  CHECK(decomposition_check(FamilyS(f2.zero(), f2.one(), f2.zero())));
  CHECK(decomposition_check(FamilyS(f2.one(), f2.one(), f2.zero())));

  const Decomposition d = decompose(FamilyS(f2.zero(), f2.one(), f2.zero()));
  CHECK(d.ok);
  CHECK(d.elliptic.c == std::vector<Int128>{1, 0, 2});
  // negative control with an ordinary elliptic factor
  CHECK(lpoly_product({{1, -1, 2}, d.eta.c, d.iota_eta.c}) != d.curve.c);

  const auto& f4 = FieldCtx::get(2);
  for (std::uint32_t b2 = 0; b2 < 4; ++b2) {
    for (std::uint32_t b3 = 1; b3 < 4; ++b3) {
      const FamilyS s(f4(b2), f4(b3), f4(b3 == 1 ? 0u : 1u));
      const Decomposition x = decompose(s);
      CHECK(x.ok);
      CHECK(is_supersingular(newton_polygon(x.curve)));
      for (const LPoly* l : {&x.eta, &x.iota_eta}) {
        // 2-rank 0 quotients: c_1 is even
        CHECK(l->c[1] % 2 == 0);
        CHECK(is_supersingular(newton_polygon(*l)));
      }
    }
  }
  const auto& f16 = FieldCtx::get(4);
  Fel odd = f16.one();
  while (trace(odd) == 0) odd = random_nonzero(f16);
  // g2 lives in GF(2^8), and counting to m = 5 there passes the cap
  CHECK_THROWS_AS(decompose(FamilyS(f16.one(), f16.one(), odd)), FieldCapError);
  CHECK(lpoly_product({{1, 1}, {1, -1}}) == std::vector<Int128>{1, 0, -1});
}
