#include <doctest.h>

#include <random>
#include <set>

#include "support.hpp"
#include "wittlab/curves.hpp"
#include "wittlab/points.hpp"

using namespace wittlab;
using testing_support::random_fel;
using testing_support::random_nonzero;
using testing_support::rng;

namespace {

QForm q(const FieldCtx& f, const char* text) { return parse_quadric(text, f); }

// Jacobian rank from symbolic partials, evaluated and row reduced generically.
int jacobian_rank_oracle(const CurveModel& c, const Point& p) {
  const auto& f = p[0].ctx();
  FieldMatrix j(f, 3, kNumVars);
  int r = 0;
  for (const auto& qq : c.quadrics()) {
    auto d = partials(qq.to_mpoly());
    for (int v = 0; v < kNumVars; ++v) j.set(r, v, evaluate(d[static_cast<std::size_t>(v)], p));
    ++r;
  }
  return rank(j);
}

// Projective points with first nonzero coordinate 1, all of P^4 over f.
template <typename Fn>
void for_each_projective_point(const FieldCtx& f, Fn fn) {
  const std::uint64_t qn = f.size();
  for (int lead = 0; lead < kNumVars; ++lead) {
    std::uint64_t tail = 1;
    for (int i = lead + 1; i < kNumVars; ++i) tail *= qn;
    for (std::uint64_t n = 0; n < tail; ++n) {
      RawPoint p{};
      p[static_cast<std::size_t>(lead)] = 1;
      std::uint64_t rest = n;
      for (int i = lead + 1; i < kNumVars; ++i) {
        p[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(rest % qn);
        rest /= qn;
      }
      fn(p);
    }
  }
}

RawPoint normalize(const FieldCtx& f, RawPoint p) {
  std::uint32_t lead = 0;
  for (auto x : p) {
    if (x != 0) {
      lead = x;
      break;
    }
  }
  const auto inv = f.inv(lead);
  for (auto& x : p) x = f.mul(x, inv);
  return p;
}

std::set<RawPoint> naive_points(const CurveModel& c, const FieldCtx& f) {
  const CurveModel e = c.embed(f);
  std::set<RawPoint> out;
  for_each_projective_point(f, [&](const RawPoint& p) {
    for (const auto& qq : e.quadrics()) {
      if (qq.eval_raw(p) != 0) return;
    }
    out.insert(p);
  });
  return out;
}

FamilyGeneral random_general(const FieldCtx& f, bool nonsingular_a) {
  FamilyGeneral g(f);
  for (auto& x : g.as) x = random_fel(f);
  for (auto& x : g.bs) x = random_fel(f);
  if (nonsingular_a) {
    g.a(1) = random_nonzero(f);
    g.a(8) = random_nonzero(f);
  }
  return g;
}

FamilyNF random_nf(const FieldCtx& f) {
  FamilyNF nf(f);
  for (Fel* x : {&nf.a3, &nf.b2, &nf.b3, &nf.b6, &nf.b8, &nf.b9, &nf.b10, &nf.b11, &nf.b12}) *x = random_fel(f);
  return nf;
}

StabParams random_stab(const FieldCtx& f, bool i1_zero) {
  StabParams p(f);
  do {
    for (Fel* x : {&p.a, &p.b, &p.c, &p.d, &p.e1, &p.f1, &p.g1, &p.h1, &p.i1, &p.e2, &p.f2, &p.g2, &p.h2, &p.i2}) {
      *x = random_fel(f);
    }
    if (i1_zero) p.i1 = f.zero();
  } while (!p.valid());
  return p;
}

Point point_of(const FieldCtx& f, RawPoint p) {
  return {f(p[0]), f(p[1]), f(p[2]), f(p[3]), f(p[4])};
}

}  // namespace

TEST_CASE("family records materialize to the displayed quadrics") {
  const auto& f2 = FieldCtx::get(1);
  const auto& f16 = FieldCtx::get(4);

  SUBCASE("R with b6 = 1, others 0") {
    const CurveModel c = to_curve(FamilyR(f2.zero(), f2.zero(), f2.one(), f2.zero()));
    CHECK(c.q1() == q(f2, "X^2+Y*Z"));
    CHECK(c.q2() == q(f2, "X*Y+Z*T+T^2"));
    CHECK(c.q3() == q(f2, "Y*T+Z*U+U^2"));
  }
  SUBCASE("S sets b6 = b3^2") {
    const CurveModel c = to_curve(FamilyS(f2.zero(), f2.one(), f2.zero()));
    CHECK(c.q3() == q(f2, "X*T+Y*T+Z*U+U^2"));
    const Fel b3 = f16(6);
    const FamilyR r = FamilyS(f16(3), b3, f16(9)).to_r();
    CHECK(r.b6 == b3 * b3);
    CHECK(r.b2 == f16(3));
    CHECK(r.b8 == f16(9));
  }
  SUBCASE("general with a1 = a8 = 1 only") {
    FamilyGeneral g(f2);
    g.a(1) = g.a(8) = f2.one();
    const CurveModel c = to_curve(g);
    CHECK(c.q2() == q(f2, "X*Y+Z*T+T^2"));
    CHECK(c.q3() == q(f2, "U^2"));
    CHECK(to_curve(FamilyNF(f2)).quadrics() == c.quadrics());
  }
  SUBCASE("Rres") {
    const CurveModel c = to_curve(FamilyRres(f16(2), f16(3), f16(5)));
    CHECK(c.q3() == q(f16, "2*X*Z+3*Y*T+5*Z*T+U^2"));
  }
  SUBCASE("every coefficient lands on its monomial") {
    FamilyGeneral g(f16);
    const char* a_mono[] = {"X*Y", "X*Z", "X*T", "Y^2", "Y*Z", "Y*T", "Z^2", "Z*T"};
    const char* b_mono[] = {"X*Y", "X*Z", "X*T", "Y^2", "Y*Z", "Y*T", "Z^2", "Z*T", "X*U", "Y*U", "Z*U", "T*U"};
    for (int i = 1; i <= 8; ++i) {
      FamilyGeneral h(f16);
      h.a(i) = f16(7);
      CHECK(to_curve(h).q2() == q(f16, (std::string("7*") + a_mono[i - 1] + "+T^2").c_str()));
    }
    for (int j = 1; j <= 12; ++j) {
      FamilyGeneral h(f16);
      h.b(j) = f16(11);
      CHECK(to_curve(h).q3() == q(f16, (std::string("11*") + b_mono[j - 1] + "+U^2").c_str()));
    }
  }
  SUBCASE("record invariants") {
    CHECK_THROWS_AS(FamilyR(f2.zero(), f2.zero(), f2.zero(), f2.zero()), ValidationError);
    CHECK_THROWS_AS(FamilyRres(f2.zero(), f2.one(), f2.zero()), ValidationError);
    CHECK_THROWS_AS(FamilyRres(f2.one(), f2.zero(), f2.zero()), ValidationError);
    CHECK_THROWS_AS(FamilyS(f2.one(), f2.zero(), f2.one()), ValidationError);
    CHECK_THROWS_AS(FamilyR(f2.one(), f16.one(), f2.one(), f2.one()), ContextError);
    CHECK_THROWS_AS(CurveModel(q(f2, "X^2+Y*Z"), q(f2, "T^2"), q(f2, "X^2+Y*Z+T^2")), ValidationError);
  }
}

TEST_CASE("general form is recovered from any basis of the span") {
  for (int k : {1, 2, 4, 8}) {
    const auto& f = FieldCtx::get(k);
    for (int trial = 0; trial < 40; ++trial) {
      const FamilyGeneral g = random_general(f, false);
      const CurveModel c = to_curve(g);
      FieldMatrix mix(f, 3, 3);
      do {
        for (int r = 0; r < 3; ++r) {
          for (int s = 0; s < 3; ++s) mix.set(r, s, random_fel(f));
        }
      } while (rank(mix) < 3);
      const auto qs = c.quadrics();
      std::array<QForm, 3> mixed = {QForm(f), QForm(f), QForm(f)};
      for (int r = 0; r < 3; ++r) {
        for (int s = 0; s < 3; ++s) mixed[r] = mixed[r] + mix(r, s) * qs[s];
      }
      const CurveModel scrambled(mixed[0], mixed[1], mixed[2]);
      CHECK(same_span(scrambled.quadrics(), c.quadrics()));
      CHECK(to_general_form(scrambled) == g);
    }
  }
  const auto& f2 = FieldCtx::get(1);
  CHECK_THROWS_AS(to_general_form(CurveModel(q(f2, "X^2"), q(f2, "T^2"), q(f2, "U^2"))), ValidationError);
}

TEST_CASE("normal form readings") {
  const auto& f = FieldCtx::get(4);
  const FamilyNF nf = random_nf(f);
  CHECK(as_nf(nf.to_general()) == nf);
  FamilyGeneral g = nf.to_general();
  g.b(5) = f.one();
  CHECK_FALSE(as_nf(g).has_value());
  const FamilyR r(f(3), f(0), f(9), f(1));
  CHECK(as_r(r.to_nf().to_general()) == r);
  CHECK_FALSE(as_r(FamilyRres(f(1), f(2), f(3)).to_nf().to_general()).has_value());
}

TEST_CASE("jacobian rank") {
  const auto& f2 = FieldCtx::get(1);
  const Point y = {f2.zero(), f2.one(), f2.zero(), f2.zero(), f2.zero()};

  const CurveModel cor = to_curve(FamilyR(f2.zero(), f2.zero(), f2.one(), f2.zero()));
  CHECK(jacobian_rank_at(cor, y) == 3);
  CHECK(jacobian_rank_oracle(cor, y) == 3);

  FamilyNF nf(f2);
  nf.b11 = f2.one();
  const CurveModel b6zero = to_curve(nf);
  CHECK(jacobian_rank_at(b6zero, y) < 3);

  FamilyGeneral g(f2);
  g.a(8) = f2.one();
  const CurveModel a1zero = to_curve(g);
  CHECK(jacobian_rank_at(a1zero, y) < 3);

  CHECK_THROWS_AS(jacobian_rank_at(cor, Point{f2.one(), f2.zero(), f2.zero(), f2.zero(), f2.zero()}), ValidationError);

  SUBCASE("agrees with symbolic partials on random points") {
    for (int k : {1, 2, 3}) {
      const auto& f = FieldCtx::get(k);
      for (int trial = 0; trial < 20; ++trial) {
        const CurveModel c = to_curve(random_general(f, false));
        const auto& big = FieldCtx::get(2 * k);
        for (const auto& p : naive_points(c, big)) {
          const Point pt = point_of(big, p);
          CHECK(jacobian_rank_at(c, pt) == jacobian_rank_oracle(c, pt));
        }
      }
    }
  }
}

TEST_CASE("cone enumerator matches brute force") {
  for (int k : {1, 2}) {
    const auto& f = FieldCtx::get(k);
    for (int trial = 0; trial < 25; ++trial) {
      const CurveModel c = trial % 2 == 0 ? to_curve(random_general(f, false)) : to_curve(random_nf(f));
      for (int m = 1; m * k <= 4; ++m) {
        ConeEnumerator en(c, m);
        const auto expected = naive_points(c, en.field());
        CHECK(en.count() == expected.size());
        CHECK(en.count(4) == expected.size());
        std::set<RawPoint> seen;
        std::size_t visited = 0;
        en.visit([&](const RawPoint& p) {
          seen.insert(normalize(en.field(), p));
          ++visited;
          return true;
        });
        CHECK(visited == expected.size());
        CHECK(seen == expected);
      }
    }
  }
  SUBCASE("q2 with a U term uses the slower chart walk") {
    const auto& f = FieldCtx::get(2);
    for (int trial = 0; trial < 10; ++trial) {
      const CurveModel base = to_curve(random_general(f, false));
      const CurveModel c(base.q1(), base.q2() + base.q3(), base.q3());
      ConeEnumerator en(c, 1);
      CHECK(en.count() == naive_points(c, f).size());
    }
  }
  SUBCASE("find_first is independent of the worker count") {
    const auto& f = FieldCtx::get(1);
    const CurveModel c = to_curve(FamilyR(f.zero(), f.zero(), f.one(), f.zero()));
    ConeEnumerator en(c, 8);
    auto pred = [](const RawPoint& p) { return p[3] > 100 && p[4] % 7 == 3; };
    const auto a = en.find_first(pred, 1);
    const auto b = en.find_first(pred, 4);
    CHECK(a == b);
    std::optional<RawPoint> first;
    en.visit([&](const RawPoint& p) {
      if (!pred(p)) return true;
      first = p;
      return false;
    });
    CHECK(a == first);
  }
}

TEST_CASE("quadratic roots") {
  const auto& f = FieldCtx::get(5);
  for (std::uint32_t a = 0; a < f.size(); a += 3) {
    for (std::uint32_t b = 0; b < f.size(); b += 5) {
      for (std::uint32_t c = 0; c < f.size(); c += 7) {
        std::vector<std::uint32_t> brute;
        for (std::uint32_t w = 0; w < f.size(); ++w) {
          if ((f.mul(a, f.sqr(w)) ^ f.mul(b, w) ^ c) == 0) brute.push_back(w);
        }
        std::array<std::uint32_t, 2> out{};
        const int n = quadratic_roots(f, a, b, c, out);
        CHECK(quadratic_root_count(f, a, b, c) == n);
        if (a == 0 && b == 0 && c == 0) {
          CHECK(n == -1);
          continue;
        }
        REQUIRE(n == static_cast<int>(brute.size()));
        for (int i = 0; i < n; ++i) CHECK(out[static_cast<std::size_t>(i)] == brute[static_cast<std::size_t>(i)]);
      }
    }
  }
}

TEST_CASE("smoothness scan") {
  const auto& f2 = FieldCtx::get(1);
  SUBCASE("the b6 = 1 member of R is smooth up to degree 5") {
    const auto v = smoothness_scan(to_curve(FamilyR(f2.zero(), f2.zero(), f2.one(), f2.zero())), 5, 2);
    CHECK_FALSE(v.singular);
    CHECK(v.n_max == 5);
  }
  SUBCASE("b11 = 0 with b3 = 1 is singular") {
    FamilyNF nf(f2);
    nf.b3 = nf.b6 = f2.one();
    CHECK(smoothness_scan(nf, 3).singular);
  }
  SUBCASE("b6 = 0 is singular at (0:1:0:0:0)") {
    FamilyNF nf(f2);
    nf.b11 = f2.one();
    const auto v = smoothness_scan(nf, 3);
    CHECK(v.singular);
    CHECK(v.point == RawPoint{0, 1, 0, 0, 0});
  }
  SUBCASE("field cap") {
    const auto& f8 = FieldCtx::get(8);
    CHECK_THROWS_AS(smoothness_scan(FamilyNF(f8), 3), FieldCapError);
  }
  SUBCASE("enumerated verdicts match an exhaustive Jacobian check") {
    for (int k : {1, 2}) {
      const auto& f = FieldCtx::get(k);
      for (int trial = 0; trial < 30; ++trial) {
        const CurveModel c = to_curve(random_general(f, false));
        const int n = 4 / k;
        const auto v = smoothness_scan(c, n);
        if (v.singular && v.degree == 0) continue;  // symbolic verdict
        bool brute_singular = false;
        for (int m = 1; m <= n && !brute_singular; ++m) {
          const auto& big = FieldCtx::get(m * k);
          for (const auto& p : naive_points(c, big)) {
            if (jacobian_rank_oracle(c, point_of(big, p)) < 3) {
              brute_singular = true;
              break;
            }
          }
        }
        CHECK(v.singular == brute_singular);
        if (v.singular) {
          const auto& big = FieldCtx::get(v.degree * k);
          CHECK(jacobian_rank_oracle(c, point_of(big, v.point)) < 3);
        }
      }
    }
  }
  SUBCASE("a clean verdict at n implies one at n - 1") {
    for (int trial = 0; trial < 30; ++trial) {
      const CurveModel c = to_curve(random_nf(f2));
      for (int n = 2; n <= 4; ++n) {
        if (!smoothness_scan(c, n).singular) CHECK_FALSE(smoothness_scan(c, n - 1).singular);
      }
    }
  }
}

TEST_CASE("stabilizer matrices fix the cone") {
  for (int k : {1, 3, 4}) {
    const auto& f = FieldCtx::get(k);
    for (int trial = 0; trial < 50; ++trial) {
      const StabParams p = random_stab(f, false);
      const QForm moved = substitute_linear(cone_quadric(f), stabilizer_matrix(p));
      CHECK(moved == (p.a * p.d + p.b * p.c).square() * cone_quadric(f));
      CHECK_FALSE(determinant(stabilizer_matrix(p)).is_zero());
    }
  }
  const auto& f = FieldCtx::get(2);
  CHECK(stabilizer_matrix(StabParams::identity(f)) == FieldMatrix::identity(f, 5));
  CHECK_THROWS_AS(stabilizer_matrix(StabParams(f)), ValidationError);
}

TEST_CASE("normal form reduction") {
  SUBCASE("normal forms are fixed") {
    const auto& f = FieldCtx::get(4);
    for (int trial = 0; trial < 10; ++trial) {
      const FamilyNF nf = random_nf(f);
      const Reduction r = reduce_to_normal_form(nf.to_general());
      CHECK(r.nf == nf);
      CHECK(r.transform == FieldMatrix::identity(f, 5));
      CHECK(r.result_ctx == &f);
    }
  }
  SUBCASE("singular inputs are rejected") {
    const auto& f = FieldCtx::get(2);
    FamilyGeneral g(f);
    g.a(8) = f.one();
    CHECK_THROWS_AS(reduce_to_normal_form(g), ValidationError);
    // no T-linear term in q2: the gradients of q1, q2 align over a conic point
    FamilyGeneral h(f);
    h.a(1) = h.b(6) = h.b(11) = f.one();
    CHECK(smoothness_scan(to_curve(h), 4).singular);
    CHECK_THROWS_AS(reduce_to_normal_form(h), ValidationError);
  }
  SUBCASE("moved normal forms reduce to isomorphic curves") {
    for (int k : {1, 2, 3, 4}) {
      const auto& f = FieldCtx::get(k);
      for (int trial = 0; trial < 12; ++trial) {
        const FamilyNF nf = random_nf(f);
        const CurveModel moved = transform(to_curve(nf), stabilizer_matrix(random_stab(f, true)));
        const FamilyGeneral g = to_general_form(moved);
        std::optional<Reduction> red;
        try {
          red = reduce_to_normal_form(g);
        } catch (const ValidationError&) {
          // a1 or a8 can only vanish on singular models
          CHECK(smoothness_scan(moved, 20 / k).singular);
          continue;
        }
        const Reduction& r = *red;
        const auto& K = *r.result_ctx;
        CHECK(K.degree() % k == 0);
        CHECK(same_span(transform(to_curve(g), r.transform).quadrics(), to_curve(r.nf).quadrics()));
        if (K.degree() <= 8) {
          CHECK(ConeEnumerator(to_curve(r.nf), 1).count() == ConeEnumerator(moved.embed(K), 1).count());
        }
      }
    }
  }
}

TEST_CASE("normal form over GF(2) exists exactly when some stabilizer reaches it") {
  const auto& f = FieldCtx::get(1);
  std::mt19937_64 gen(11);
  int smooth = 0;
  for (int trial = 0; trial < 400 && smooth < 25; ++trial) {
    FamilyGeneral g(f);
    for (auto& x : g.as) x = f(gen() & 1u);
    for (auto& x : g.bs) x = f(gen() & 1u);
    const CurveModel c = to_curve(g);
    if (smoothness_scan(c, 6).singular) continue;
    ++smooth;
    bool brute = false;
    for (std::uint32_t mask = 0; mask < (1u << 14) && !brute; ++mask) {
      StabParams p(f);
      Fel* fields[] = {&p.a, &p.b, &p.c, &p.d, &p.e1, &p.f1, &p.g1, &p.h1, &p.i1, &p.e2, &p.f2, &p.g2, &p.h2, &p.i2};
      for (int i = 0; i < 14; ++i) *fields[i] = f((mask >> i) & 1u);
      if (!p.valid()) continue;
      try {
        brute = as_nf(to_general_form(transform(c, stabilizer_matrix(p)))).has_value();
      } catch (const ValidationError&) {
      }
    }
    bool over_base = false;
    try {
      over_base = reduce_to_normal_form(g).result_ctx->degree() == 1;
    } catch (const FieldCapError&) {
    }
    CHECK(over_base == brute);
  }
  CHECK(smooth >= 10);
}
