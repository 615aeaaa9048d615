#include "wittlab/curves.hpp"

#include <algorithm>
#include <stdexcept>

#include "wittlab/points.hpp"

namespace wittlab {

namespace {

int idx(Var i, Var j) { return QForm::index(i, j); }

// Monomials carrying a1..a8 and b1..b12 in the general form.
constexpr std::array<std::array<Var, 2>, 8> kAMono = {{
    {Var::X, Var::Y}, {Var::X, Var::Z}, {Var::X, Var::T}, {Var::Y, Var::Y},
    {Var::Y, Var::Z}, {Var::Y, Var::T}, {Var::Z, Var::Z}, {Var::Z, Var::T},
}};
constexpr std::array<std::array<Var, 2>, 12> kBMono = {{
    {Var::X, Var::Y}, {Var::X, Var::Z}, {Var::X, Var::T}, {Var::Y, Var::Y},
    {Var::Y, Var::Z}, {Var::Y, Var::T}, {Var::Z, Var::Z}, {Var::Z, Var::T},
    {Var::X, Var::U}, {Var::Y, Var::U}, {Var::Z, Var::U}, {Var::T, Var::U},
}};

void require_ctx(const Fel& x, const FieldCtx& f, const char* what) {
  if (x.ctx_ptr() != &f) throw ContextError(std::string(what) + " is not in the record's field");
}

QForm row_to_qform(const FieldMatrix& m, int r) {
  QForm q(m.ctx());
  for (int i = 0; i < QForm::kTerms; ++i) q.set_raw(i, m.raw(r, i));
  return q;
}

}  // namespace

// --- models --------------------------------------------------------------------

CurveModel::CurveModel(QForm q1, QForm q2, QForm q3) : q1_(std::move(q1)), q2_(std::move(q2)), q3_(std::move(q3)) {
  if (&q1_.ctx() != &q2_.ctx() || &q1_.ctx() != &q3_.ctx()) throw ContextError("quadrics over different fields");
  if (rank(quadric_matrix({q1_, q2_, q3_})) != 3) throw ValidationError("quadrics are linearly dependent");
}

CurveModel CurveModel::embed(const FieldCtx& to) const {
  return CurveModel(q1_.embed(to), q2_.embed(to), q3_.embed(to));
}

std::string CurveModel::to_string() const {
  return "{" + q1_.to_string() + ", " + q2_.to_string() + ", " + q3_.to_string() + "} over GF(2^" +
         std::to_string(ctx().degree()) + ")";
}

QForm cone_quadric(const FieldCtx& ctx) {
  QForm q(ctx);
  q.set_raw(idx(Var::X, Var::X), 1);
  q.set_raw(idx(Var::Y, Var::Z), 1);
  return q;
}

FieldMatrix quadric_matrix(const std::vector<QForm>& qs) {
  if (qs.empty()) throw ValidationError("no quadrics");
  FieldMatrix m(qs.front().ctx(), static_cast<int>(qs.size()), QForm::kTerms);
  for (std::size_t r = 0; r < qs.size(); ++r) {
    if (&qs[r].ctx() != &qs.front().ctx()) throw ContextError("quadrics over different fields");
    for (int i = 0; i < QForm::kTerms; ++i) m.set_raw(static_cast<int>(r), i, qs[r].raw(i));
  }
  return m;
}

bool same_span(const std::array<QForm, 3>& a, const std::array<QForm, 3>& b) {
  const int ra = rank(quadric_matrix({a[0], a[1], a[2]}));
  const int rb = rank(quadric_matrix({b[0], b[1], b[2]}));
  const int rab = rank(quadric_matrix({a[0], a[1], a[2], b[0], b[1], b[2]}));
  return ra == rb && rab == ra;
}

// --- families ------------------------------------------------------------------

FamilyGeneral::FamilyGeneral(const FieldCtx& ctx) : field(&ctx) {
  as.fill(ctx.zero());
  bs.fill(ctx.zero());
}

void FamilyGeneral::validate() const {
  for (const auto& x : as) require_ctx(x, *field, "coefficient");
  for (const auto& x : bs) require_ctx(x, *field, "coefficient");
}

FamilyNF::FamilyNF(const FieldCtx& ctx)
    : field(&ctx), a3(ctx.zero()), b2(ctx.zero()), b3(ctx.zero()), b6(ctx.zero()), b8(ctx.zero()),
      b9(ctx.zero()), b10(ctx.zero()), b11(ctx.zero()), b12(ctx.zero()) {}

void FamilyNF::validate() const {
  for (const Fel* x : {&a3, &b2, &b3, &b6, &b8, &b9, &b10, &b11, &b12}) require_ctx(*x, *field, "coefficient");
}

FamilyGeneral FamilyNF::to_general() const {
  validate();
  FamilyGeneral g(*field);
  g.a(1) = field->one();
  g.a(3) = a3;
  g.a(8) = field->one();
  g.b(2) = b2;
  g.b(3) = b3;
  g.b(6) = b6;
  g.b(8) = b8;
  g.b(9) = b9;
  g.b(10) = b10;
  g.b(11) = b11;
  g.b(12) = b12;
  return g;
}

FamilyR::FamilyR(Fel b2_, Fel b3_, Fel b6_, Fel b8_) : b2(b2_), b3(b3_), b6(b6_), b8(b8_) {
  const auto& f = b2.ctx();
  require_ctx(b3, f, "b3");
  require_ctx(b6, f, "b6");
  require_ctx(b8, f, "b8");
  if (b6.is_zero()) throw ValidationError("FamilyR needs b6 != 0");
}

FamilyNF FamilyR::to_nf() const {
  FamilyNF nf(ctx());
  nf.b2 = b2;
  nf.b3 = b3;
  nf.b6 = b6;
  nf.b8 = b8;
  nf.b11 = ctx().one();
  return nf;
}

FamilyR FamilyR::embed(const FieldCtx& to) const {
  return FamilyR(wittlab::embed(b2, to), wittlab::embed(b3, to), wittlab::embed(b6, to), wittlab::embed(b8, to));
}

FamilyRres::FamilyRres(Fel b2_, Fel b6_, Fel b8_) : b2(b2_), b6(b6_), b8(b8_) {
  const auto& f = b2.ctx();
  require_ctx(b6, f, "b6");
  require_ctx(b8, f, "b8");
  if (b2.is_zero()) throw ValidationError("FamilyRres needs b2 != 0");
  if (b6.is_zero()) throw ValidationError("FamilyRres needs b6 != 0");
}

FamilyNF FamilyRres::to_nf() const {
  FamilyNF nf(ctx());
  nf.b2 = b2;
  nf.b6 = b6;
  nf.b8 = b8;
  return nf;
}

FamilyS::FamilyS(Fel b2_, Fel b3_, Fel b8_) : b2(b2_), b3(b3_), b8(b8_) {
  const auto& f = b2.ctx();
  require_ctx(b3, f, "b3");
  require_ctx(b8, f, "b8");
  if (b3.is_zero()) throw ValidationError("FamilyS needs b3 != 0");
}

FamilyR FamilyS::to_r() const { return FamilyR(b2, b3, b3.square(), b8); }

FamilyS FamilyS::embed(const FieldCtx& to) const {
  return FamilyS(wittlab::embed(b2, to), wittlab::embed(b3, to), wittlab::embed(b8, to));
}

CurveModel to_curve(const FamilyGeneral& g) {
  g.validate();
  const auto& f = g.ctx();
  QForm q2(f), q3(f);
  for (std::size_t i = 0; i < kAMono.size(); ++i) q2.set(kAMono[i][0], kAMono[i][1], g.as[i]);
  q2.set_raw(idx(Var::T, Var::T), 1);
  for (std::size_t j = 0; j < kBMono.size(); ++j) q3.set(kBMono[j][0], kBMono[j][1], g.bs[j]);
  q3.set_raw(idx(Var::U, Var::U), 1);
  return CurveModel(cone_quadric(f), q2, q3);
}

CurveModel to_curve(const FamilyNF& nf) { return to_curve(nf.to_general()); }
CurveModel to_curve(const FamilyR& r) { return to_curve(r.to_nf()); }
CurveModel to_curve(const FamilyRres& r) { return to_curve(r.to_nf()); }
CurveModel to_curve(const FamilyS& s) { return to_curve(s.to_r()); }

FamilyGeneral to_general_form(const CurveModel& c) {
  const auto& f = c.ctx();
  const QForm cone = cone_quadric(f);
  FieldMatrix span = quadric_matrix({c.q1(), c.q2(), c.q3()});
  row_reduce(span);
  if (rank(quadric_matrix({c.q1(), c.q2(), c.q3(), cone})) != 3) {
    throw ValidationError("the quadrics do not contain X^2+YZ in their span");
  }

  // Combinations of the span rows with no U anywhere.
  const std::array<int, 5> ucols = {idx(Var::X, Var::U), idx(Var::Y, Var::U), idx(Var::Z, Var::U),
                                    idx(Var::T, Var::U), idx(Var::U, Var::U)};
  FieldMatrix upart(f, 5, 3);
  for (int r = 0; r < 5; ++r) {
    for (int s = 0; s < 3; ++s) upart.set_raw(r, s, span.raw(s, ucols[static_cast<std::size_t>(r)]));
  }
  const FieldMatrix kernel = null_space(upart);
  if (kernel.rows() != 2) throw ValidationError("span does not have exactly one U-free direction besides X^2+YZ");

  auto combine = [&](int krow) {
    QForm q(f);
    for (int s = 0; s < 3; ++s) q = q + kernel(krow, s) * row_to_qform(span, s);
    return q;
  };
  auto strip = [&](QForm q, const QForm& by, int col) {
    const auto coef = q.raw(col);
    return coef == 0 ? q : q + f(coef) * by;
  };

  QForm q2 = combine(0);
  if (rank(quadric_matrix({q2, cone})) < 2) q2 = combine(1);
  q2 = strip(q2, cone, idx(Var::X, Var::X));
  const auto t2 = q2.raw(idx(Var::T, Var::T));
  if (t2 == 0) throw ValidationError("the U-free quadric has no T^2 term");
  q2 = f(f.inv(t2)) * q2;

  QForm q3(f);
  for (int s = 0; s < 3; ++s) {
    const QForm row = row_to_qform(span, s);
    if (rank(quadric_matrix({cone, q2, row})) == 3) {
      q3 = row;
      break;
    }
  }
  q3 = strip(q3, cone, idx(Var::X, Var::X));
  q3 = strip(q3, q2, idx(Var::T, Var::T));
  const auto u2 = q3.raw(idx(Var::U, Var::U));
  if (u2 == 0) throw ValidationError("no quadric in the span has a U^2 term");
  q3 = f(f.inv(u2)) * q3;

  FamilyGeneral g(f);
  for (std::size_t i = 0; i < kAMono.size(); ++i) g.as[i] = q2.coeff(kAMono[i][0], kAMono[i][1]);
  for (std::size_t j = 0; j < kBMono.size(); ++j) g.bs[j] = q3.coeff(kBMono[j][0], kBMono[j][1]);
  return g;
}

std::optional<FamilyNF> as_nf(const FamilyGeneral& g) {
  if (!g.a(1).is_one() || !g.a(8).is_one()) return std::nullopt;
  for (int i : {2, 4, 5, 6, 7}) {
    if (!g.a(i).is_zero()) return std::nullopt;
  }
  for (int j : {1, 4, 5, 7}) {
    if (!g.b(j).is_zero()) return std::nullopt;
  }
  FamilyNF nf(g.ctx());
  nf.a3 = g.a(3);
  nf.b2 = g.b(2);
  nf.b3 = g.b(3);
  nf.b6 = g.b(6);
  nf.b8 = g.b(8);
  nf.b9 = g.b(9);
  nf.b10 = g.b(10);
  nf.b11 = g.b(11);
  nf.b12 = g.b(12);
  return nf;
}

std::optional<FamilyR> as_r(const FamilyGeneral& g) {
  auto nf = as_nf(g);
  if (!nf || !nf->a3.is_zero() || !nf->b9.is_zero() || !nf->b10.is_zero() || !nf->b12.is_zero() ||
      !nf->b11.is_one() || nf->b6.is_zero()) {
    return std::nullopt;
  }
  return FamilyR(nf->b2, nf->b3, nf->b6, nf->b8);
}

// --- smoothness ------------------------------------------------------------------

namespace {

// Rank of the Jacobian of the three quadrics at p; everything raw in f.
int jacobian_rank_raw(const FieldCtx& f, const std::array<const QForm*, 3>& qs, const RawPoint& p) {
  std::array<std::array<std::uint32_t, kNumVars>, 3> rows{};
  for (std::size_t r = 0; r < 3; ++r) {
    const auto& c = qs[r]->raw_coeffs();
    for (int l = 0; l < kNumVars; ++l) {
      std::uint32_t acc = 0;
      for (int j = 0; j < kNumVars; ++j) {
        if (j == l) continue;
        const auto coef = c[static_cast<std::size_t>(QForm::index(static_cast<Var>(l), static_cast<Var>(j)))];
        if (coef != 0 && p[static_cast<std::size_t>(j)] != 0) acc ^= f.mul(coef, p[static_cast<std::size_t>(j)]);
      }
      rows[r][static_cast<std::size_t>(l)] = acc;
    }
  }
  int rk = 0;
  for (int col = 0; col < kNumVars && rk < 3; ++col) {
    int sel = -1;
    for (int r = rk; r < 3; ++r) {
      if (rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)] != 0) {
        sel = r;
        break;
      }
    }
    if (sel < 0) continue;
    std::swap(rows[static_cast<std::size_t>(sel)], rows[static_cast<std::size_t>(rk)]);
    const auto& pr = rows[static_cast<std::size_t>(rk)];
    const auto inv = f.inv(pr[static_cast<std::size_t>(col)]);
    for (int r = rk + 1; r < 3; ++r) {
      auto& row = rows[static_cast<std::size_t>(r)];
      const auto factor = f.mul(row[static_cast<std::size_t>(col)], inv);
      if (factor == 0) continue;
      for (int c = col; c < kNumVars; ++c) row[static_cast<std::size_t>(c)] ^= f.mul(factor, pr[static_cast<std::size_t>(c)]);
    }
    ++rk;
  }
  return rk;
}

}  // namespace

int jacobian_rank_at(const CurveModel& c, const Point& p) {
  const FieldCtx& f = p[0].ctx();
  RawPoint raw{};
  bool nonzero = false;
  for (std::size_t i = 0; i < kNumVars; ++i) {
    if (p[i].ctx_ptr() != &f) throw ContextError("point coordinates from different fields");
    raw[i] = p[i].bits();
    nonzero = nonzero || raw[i] != 0;
  }
  if (!nonzero) throw ValidationError("the zero vector is not a projective point");
  const CurveModel e = c.embed(f);
  for (const auto& q : e.quadrics()) {
    if (q.eval_raw(raw) != 0) throw ValidationError("point is not on the curve");
  }
  return jacobian_rank_raw(f, {&e.q1(), &e.q2(), &e.q3()}, raw);
}

SmoothnessVerdict smoothness_scan(const CurveModel& c, int n_max, int workers) {
  const int k = c.ctx().degree();
  if (n_max < 1) throw ValidationError("n_max must be positive");
  if (static_cast<long>(n_max) * k > kMaxFieldDegree) {
    throw FieldCapError("smoothness scan to degree " + std::to_string(n_max * k) + " exceeds the field cap");
  }
  SmoothnessVerdict v;
  v.n_max = n_max;

  // Necessary conditions from the 2-rank-0 analysis of the normal form.
  std::optional<FamilyNF> nf;
  try {
    nf = as_nf(to_general_form(c));
  } catch (const ValidationError&) {
  }
  if (nf && nf->a3.is_zero() && nf->b9.is_zero() && nf->b10.is_zero() && nf->b12.is_zero()) {
    if (nf->b6.is_zero()) {
      v.singular = true;
      v.degree = 1;
      v.point = {0, 1, 0, 0, 0};
      v.reason = "b6 = 0: singular at (0:1:0:0:0)";
      return v;
    }
    if (nf->b11.is_zero() && !(nf->b3.is_zero() && !nf->b2.is_zero())) {
      v.singular = true;
      v.reason = "b11 = 0 without (b3 = 0, b2 != 0): singular in the chart Z != 0";
      return v;
    }
  }

  for (int m = 1; m <= n_max; ++m) {
    ConeEnumerator en(c, m);
    const CurveModel e = c.embed(en.field());
    const auto& f = en.field();
    const std::array<const QForm*, 3> qs = {&e.q1(), &e.q2(), &e.q3()};
    auto hit = en.find_first([&](const RawPoint& p) { return jacobian_rank_raw(f, qs, p) < 3; }, workers);
    if (hit) {
      v.singular = true;
      v.degree = m;
      v.point = *hit;
      v.reason = "Jacobian rank below 3";
      return v;
    }
  }
  return v;
}

SmoothnessVerdict smoothness_scan(const FamilyNF& nf, int n_max, int workers) {
  return smoothness_scan(to_curve(nf), n_max, workers);
}

// --- stabilizer ------------------------------------------------------------------

StabParams::StabParams(const FieldCtx& ctx)
    : a(ctx.zero()), b(ctx.zero()), c(ctx.zero()), d(ctx.zero()), e1(ctx.zero()), f1(ctx.zero()),
      g1(ctx.zero()), h1(ctx.zero()), i1(ctx.zero()), e2(ctx.zero()), f2(ctx.zero()), g2(ctx.zero()),
      h2(ctx.zero()), i2(ctx.zero()) {}

StabParams StabParams::identity(const FieldCtx& ctx) {
  StabParams p(ctx);
  p.a = p.d = p.h1 = p.i2 = ctx.one();
  return p;
}

bool StabParams::valid() const {
  return !(a * d + b * c).is_zero() && !(h1 * i2 + i1 * h2).is_zero();
}

StabParams StabParams::embed(const FieldCtx& to) const {
  StabParams p(to);
  Fel StabParams::*fields[] = {&StabParams::a,  &StabParams::b,  &StabParams::c,  &StabParams::d,
                                     &StabParams::e1, &StabParams::f1, &StabParams::g1, &StabParams::h1,
                                     &StabParams::i1, &StabParams::e2, &StabParams::f2, &StabParams::g2,
                                     &StabParams::h2, &StabParams::i2};
  for (auto fp : fields) p.*fp = wittlab::embed(this->*fp, to);
  return p;
}

FieldMatrix stabilizer_matrix(const StabParams& p) {
  const auto& f = p.ctx();
  for (const Fel* x : {&p.b, &p.c, &p.d, &p.e1, &p.f1, &p.g1, &p.h1, &p.i1, &p.e2, &p.f2, &p.g2, &p.h2, &p.i2}) {
    require_ctx(*x, f, "stabilizer parameter");
  }
  if (!p.valid()) throw ValidationError("degenerate stabilizer parameters (ad-bc or h1*i2-i1*h2 vanishes)");
  FieldMatrix m(f, 5, 5);
  m.set(0, 0, p.a * p.d + p.b * p.c);
  m.set(0, 1, p.a * p.c);
  m.set(0, 2, p.b * p.d);
  m.set(1, 1, p.a.square());
  m.set(1, 2, p.b.square());
  m.set(2, 1, p.c.square());
  m.set(2, 2, p.d.square());
  const Fel row4[] = {p.e1, p.f1, p.g1, p.h1, p.i1};
  const Fel row5[] = {p.e2, p.f2, p.g2, p.h2, p.i2};
  for (int j = 0; j < 5; ++j) {
    m.set(3, j, row4[j]);
    m.set(4, j, row5[j]);
  }
  return m;
}

CurveModel transform(const CurveModel& c, const FieldMatrix& m) {
  const int deg = common_degree(c.ctx().degree(), m.ctx().degree());
  if (deg > kMaxFieldDegree) throw FieldCapError("no common field within the cap");
  const auto& f = FieldCtx::get(deg);
  const CurveModel e = c.embed(f);
  const FieldMatrix me = embed(m, f);
  return CurveModel(substitute_linear(e.q1(), me), substitute_linear(e.q2(), me), substitute_linear(e.q3(), me));
}

// --- normal form -----------------------------------------------------------------

namespace {

using UPoly = std::vector<Fel>;  // coefficients, constant first

UPoly upoly_mul(const UPoly& a, const UPoly& b) {
  const auto& f = a.front().ctx();
  UPoly out(a.size() + b.size() - 1, f.zero());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

UPoly upoly_add(UPoly a, const UPoly& b) {
  if (a.size() < b.size()) a.resize(b.size(), b.front().ctx().zero());
  for (std::size_t i = 0; i < b.size(); ++i) a[i] += b[i];
  return a;
}

UPoly upoly_scale(UPoly a, const Fel& s) {
  for (auto& x : a) x *= s;
  return a;
}

std::vector<Fel> upoly_roots(const UPoly& p) {
  const auto& f = p.front().ctx();
  std::vector<std::uint32_t> coeffs;
  for (const auto& x : p) coeffs.push_back(x.bits());
  std::vector<Fel> out;
  for (auto r : f.poly_roots(coeffs)) out.push_back(f(r));
  return out;
}

// Roots of a w^2 + b w + c, ascending; just 0 when the polynomial vanishes.
std::vector<Fel> quadratic_solutions(const Fel& a, const Fel& b, const Fel& c) {
  const auto& f = a.ctx();
  std::array<std::uint32_t, 2> roots{};
  const int n = quadratic_roots(f, a.bits(), b.bits(), c.bits(), roots);
  if (n < 0) return {f.zero()};
  std::vector<Fel> out;
  for (int i = 0; i < n; ++i) out.push_back(f(roots[static_cast<std::size_t>(i)]));
  return out;
}

[[noreturn]] void internal(const std::string& what) {
  throw std::logic_error("normal form reduction: " + what);
}

Fel eval_upoly(const UPoly& p, const Fel& x) {
  Fel acc = x.ctx().zero();
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
  return acc;
}

// The steps of the reduction, each offering every root it could use in the
// current field (ascending). A later step with no root sends the search back
// to the next candidate of an earlier one.
class Reducer {
 public:
  explicit Reducer(const FamilyGeneral& g) : f_(g.ctx()), start_(g) {}

  bool run() {
    State s{start_, FieldMatrix::identity(f_, 5)};
    // The a6 step needs a3 or a8; swapping Y and Z trades a8 for a6.
    if (s.g.a(3).is_zero() && s.g.a(8).is_zero()) {
      if (s.g.a(6).is_zero()) throw ValidationError("q2 has no T-linear term: singular over the conic point a1 Y = a2 Z");
      auto p = base();
      p.a = p.d = f_.zero();
      p.b = p.c = f_.one();
      s = apply(s, p);
    }
    return search(s, 0);
  }

  const FamilyGeneral& state() const { return result_->g; }
  const FieldMatrix& total() const { return result_->total; }

 private:
  struct State {
    FamilyGeneral g;
    FieldMatrix total;
  };

  StabParams base() const { return StabParams::identity(f_); }

  static State apply(const State& s, const StabParams& p) {
    const FieldMatrix m = stabilizer_matrix(p);
    return {to_general_form(transform(to_curve(s.g), m)), s.total * m};
  }

  static void expect_zero(const FamilyGeneral& g, std::initializer_list<int> as, std::initializer_list<int> bs,
                          const char* step) {
    for (int i : as) {
      if (!g.a(i).is_zero()) internal(std::string(step) + " left a" + std::to_string(i) + " nonzero");
    }
    for (int j : bs) {
      if (!g.b(j).is_zero()) internal(std::string(step) + " left b" + std::to_string(j) + " nonzero");
    }
  }

  bool search(const State& s, int step) {
    if (step == kSteps) {
      result_ = s;
      return true;
    }
    for (const auto& p : candidates(s.g, step)) {
      State next = p ? apply(s, *p) : s;
      check(next.g, step);
      if (search(next, step + 1)) return true;
    }
    return false;
  }

  static constexpr int kSteps = 7;

  // nullopt stands for "nothing to do".
  std::vector<std::optional<StabParams>> candidates(const FamilyGeneral& g, int step) const {
    std::vector<std::optional<StabParams>> out;
    auto none = [&] { out.emplace_back(std::nullopt); };
    switch (step) {
      case 0:  // a6' = a6 a^2 + a3 a c + a8 c^2 with a = d = 1, b = 0
        if (g.a(6).is_zero()) {
          none();
          break;
        }
        for (const auto& c : quadratic_solutions(g.a(8), g.a(3), g.a(6))) {
          auto p = base();
          p.c = c;
          out.emplace_back(p);
        }
        break;
      case 1:  // a4' = f1^2 + f1 a6 + a4 with a6 = 0
        if (g.a(4).is_zero()) {
          none();
          break;
        }
        {
          auto p = base();
          p.f1 = sqrt(g.a(4));
          out.emplace_back(p);
        }
        break;
      case 2:  // b4' = f2^2 + b10 f2 + b4
        if (g.b(4).is_zero()) {
          none();
          break;
        }
        for (const auto& f2 : quadratic_solutions(f_.one(), g.b(10), g.b(4))) {
          auto p = base();
          p.f2 = f2;
          out.emplace_back(p);
        }
        break;
      case 3:
        kill_a2_a5_a7(g, out);
        break;
      case 4:  // b4' = f2^2 + b10 f2, b7' = g2^2 + b11 g2 + b7, b5' = e2^2 + b9 e2 + b11 f2 + b10 g2 + b5
        if (g.b(5).is_zero() && g.b(7).is_zero()) {
          none();
          break;
        }
        for (const auto& f2 : quadratic_solutions(f_.one(), g.b(10), g.b(4))) {
          for (const auto& g2 : quadratic_solutions(f_.one(), g.b(11), g.b(7))) {
            for (const auto& e2 : quadratic_solutions(f_.one(), g.b(9), g.b(11) * f2 + g.b(10) * g2 + g.b(5))) {
              auto p = base();
              p.e2 = e2;
              p.f2 = f2;
              p.g2 = g2;
              out.emplace_back(p);
            }
          }
        }
        break;
      case 5:  // XY and ZT pick up a^3 d and d^2 h1 against h1^2 on T^2: d = 1, a^3 = a8^2 / a1, h1 = a8
        if (g.a(1).is_one() && g.a(8).is_one()) {
          none();
          break;
        }
        for (const auto& a : cube_roots(g.a(8).square() / g.a(1))) {
          auto p = base();
          p.a = a;
          p.h1 = g.a(8);
          out.emplace_back(p);
        }
        break;
      case 6:  // h2^2 + b12 h2 + b1 = 0
        if (g.b(1).is_zero()) {
          none();
          break;
        }
        for (const auto& h2 : quadratic_solutions(f_.one(), g.b(12), g.b(1))) {
          auto p = base();
          p.h2 = h2;
          out.emplace_back(p);
        }
        break;
    }
    return out;
  }

  static void check(const FamilyGeneral& g, int step) {
    switch (step) {
      case 0:
        expect_zero(g, {6}, {}, "a6 step");
        break;
      case 1:
        expect_zero(g, {4, 6}, {}, "a4 step");
        break;
      case 2:
        expect_zero(g, {4, 6}, {4}, "b4 step");
        // (0:1:0:0:0) now lies on the curve and a1 = 0 makes it singular.
        if (g.a(1).is_zero()) throw ValidationError("a1 = 0 after normalization: singular at (0:1:0:0:0)");
        break;
      case 3:
        expect_zero(g, {2, 4, 5, 6, 7}, {}, "a2/a5/a7 step");
        if (g.a(8).is_zero()) internal("a8 vanished");
        break;
      case 4:
        expect_zero(g, {2, 4, 5, 6, 7}, {4, 5, 7}, "b4/b5/b7 step");
        break;
      case 5:
        if (!g.a(1).is_one() || !g.a(8).is_one()) internal("scaling did not normalize a1, a8");
        expect_zero(g, {2, 4, 5, 6, 7}, {4, 5, 7}, "scaling step");
        break;
      default:
        break;
    }
  }

  // Case analysis on a3 with c = f1 = 0 and unknowns b, e1, g1.
  void kill_a2_a5_a7(const FamilyGeneral& g, std::vector<std::optional<StabParams>>& out) const {
    const Fel a1 = g.a(1), a2 = g.a(2), a3 = g.a(3), a5 = g.a(5), a7 = g.a(7), a8 = g.a(8);
    if (a2.is_zero() && a5.is_zero() && a7.is_zero()) {
      if (a8.is_zero()) throw ValidationError("a8 = 0 after normalization: singular at (0:0:1:0:0)");
      out.emplace_back(std::nullopt);
      return;
    }
    if (a3.is_zero()) {
      // a8' = a8 here, and with a2 = a5 = a7 = 0 the point (0:0:1:0:0) is singular.
      if (a8.is_zero()) throw ValidationError("a8 = 0 after normalization: singular at (0:0:1:0:0)");
      // e1^2 = a1 b + a5, then a1^2 b^4 + a8^2 a1 b + a2^2 + a8^2 a5 = 0.
      const UPoly quartic = {a2.square() + a8.square() * a5, a8.square() * a1, f_.zero(), f_.zero(), a1.square()};
      for (const auto& b : upoly_roots(quartic)) {
        const Fel k0 = a1 * b * b * b + a2 * b + a5 * b * b + a7;
        for (const auto& g1 : quadratic_solutions(f_.one(), a8, k0)) {
          auto p = base();
          p.b = b;
          p.e1 = sqrt(a1 * b + a5);
          p.g1 = g1;
          out.emplace_back(p);
        }
      }
      return;
    }
    // b = (e1^2 + a3 e1 + a5) / a1 and g1 = (a1 b^2 + a2 + a3 b e1 + a8 e1) / a3
    // leave a7'(e1) = a1 b^3 + a2 b + a3 b g1 + a5 b^2 + a7 + a8 g1 + g1^2.
    const Fel inv_a1 = a1.inv();
    const Fel inv_a3 = a3.inv();
    const UPoly e1 = {f_.zero(), f_.one()};
    const UPoly bpoly = upoly_scale({a5, a3, f_.one()}, inv_a1);
    const UPoly b2 = upoly_mul(bpoly, bpoly);
    UPoly g1poly = upoly_scale(b2, a1);
    g1poly = upoly_add(g1poly, {a2});
    g1poly = upoly_add(g1poly, upoly_scale(upoly_mul(bpoly, e1), a3));
    g1poly = upoly_add(g1poly, upoly_scale(e1, a8));
    g1poly = upoly_scale(g1poly, inv_a3);
    UPoly a7p = upoly_scale(upoly_mul(b2, bpoly), a1);
    a7p = upoly_add(a7p, upoly_scale(bpoly, a2));
    a7p = upoly_add(a7p, upoly_scale(upoly_mul(bpoly, g1poly), a3));
    a7p = upoly_add(a7p, upoly_scale(b2, a5));
    a7p = upoly_add(a7p, {a7});
    a7p = upoly_add(a7p, upoly_scale(g1poly, a8));
    a7p = upoly_add(a7p, upoly_mul(g1poly, g1poly));
    for (const auto& r : upoly_roots(a7p)) {
      const Fel b = eval_upoly(bpoly, r);
      // every root gives an isomorphic model, so one with a8' = 0 is enough
      if ((a3 * b + a8).is_zero()) throw ValidationError("a8 = 0 after normalization: singular at (0:0:1:0:0)");
      auto p = base();
      p.b = b;
      p.e1 = r;
      p.g1 = eval_upoly(g1poly, r);
      out.emplace_back(p);
    }
  }

  const FieldCtx& f_;
  FamilyGeneral start_;
  std::optional<State> result_;
};

}  // namespace

namespace {

// Moves that put the ruling plane through a rational point of the curve at
// {X = Z = 0}, so that the a4/b4 steps land that point on (0:1:0:0:0).
std::vector<StabParams> ruling_moves(const CurveModel& c, std::size_t limit) {
  const auto& f = c.ctx();
  std::vector<StabParams> out;
  std::vector<std::uint32_t> seen;
  ConeEnumerator(c, 1).visit([&](const RawPoint& p) {
    // (X:Y:Z) = (a c : a^2 : c^2) for the new Y axis
    auto s = StabParams::identity(f);
    std::uint32_t key;
    if (p[1] != 0) {
      s.c = f(f.div(p[0], p[1]));
      key = s.c.bits();
    } else {
      s.a = s.d = f.zero();
      s.b = s.c = f.one();
      key = f.size();
    }
    if (std::find(seen.begin(), seen.end(), key) == seen.end()) {
      seen.push_back(key);
      out.push_back(s);
    }
    return out.size() < limit;
  });
  return out;
}

constexpr std::size_t kMaxRulingMoves = 64;

}  // namespace

Reduction reduce_to_normal_form(const FamilyGeneral& g) {
  g.validate();
  const auto& base = g.ctx();
  if (auto nf = as_nf(g)) return {*nf, FieldMatrix::identity(base, 5), &base};

  for (int m = 1; m * base.degree() <= kMaxFieldDegree; ++m) {
    const auto& K = FieldCtx::get(m * base.degree());
    FamilyGeneral ge(K);
    for (std::size_t i = 0; i < ge.as.size(); ++i) ge.as[i] = embed(g.as[i], K);
    for (std::size_t j = 0; j < ge.bs.size(); ++j) ge.bs[j] = embed(g.bs[j], K);
    const CurveModel curve = to_curve(ge);

    std::vector<std::optional<StabParams>> starts = {std::nullopt};
    bool moves_listed = false;
    for (std::size_t i = 0; i < starts.size(); ++i) {
      FieldMatrix pre = FieldMatrix::identity(K, 5);
      FamilyGeneral start = ge;
      if (starts[i]) {
        pre = stabilizer_matrix(*starts[i]);
        start = to_general_form(transform(curve, pre));
      }
      Reducer r(start);
      if (r.run()) {
        auto nf = as_nf(r.state());
        if (!nf) internal("result is not in normal form");
        const FieldMatrix total = pre * r.total();
        if (!same_span(transform(curve, total).quadrics(), to_curve(*nf).quadrics())) {
          internal("transform does not match the normal form");
        }
        return {*nf, total, &K};
      }
      if (!moves_listed) {
        moves_listed = true;
        for (const auto& s : ruling_moves(curve, kMaxRulingMoves)) starts.emplace_back(s);
      }
    }
  }
  throw FieldCapError("normal form needs a field beyond GF(2^" + std::to_string(kMaxFieldDegree) + ")");
}

}  // namespace wittlab
