#include "wittlab/symmetry.hpp"

#include <algorithm>
#include <set>
#include <tuple>

#include "wittlab/error.hpp"

namespace wittlab {

namespace {

FieldMatrix normalized(FieldMatrix m) {
  for (int r = 0; r < m.rows(); ++r) {
    for (int c = 0; c < m.cols(); ++c) {
      if (m.raw(r, c) != 0) return scale(m, m(r, c).inv());
    }
  }
  return m;
}

const FieldCtx& field_or_cap(int degree) {
  if (degree > kMaxFieldDegree) throw FieldCapError("automorphism enumeration needs GF(2^" + std::to_string(degree) + ")");
  return FieldCtx::get(degree);
}

// One choice of (a, b, g1) with the derived last-row entries and image parameters.
struct Branch {
  Fel a, b, g1, e2, h2, as_const;
  Fel b2p, b3p, b6p, b8p;
};

std::vector<Branch> branches(const FamilyR& r, const FieldCtx& f) {
  const Fel b2 = embed(r.b2, f), b3 = embed(r.b3, f), b6 = embed(r.b6, f), b8 = embed(r.b8, f);
  const auto units = cube_roots(f.one());
  std::vector<Fel> bs = {f.zero()};
  bs.insert(bs.end(), units.begin(), units.end());
  std::vector<Branch> out;
  for (const Fel& a : units) {
    for (const Fel& b : bs) {
      const Fel b_cubed = b * b * b;
      // b^3 is 0 or 1, so both roots lie in GF(4)
      for (const Fel& g1 : *solve_artin_schreier(b_cubed)) {
        Branch x;
        x.a = a;
        x.b = b;
        x.g1 = g1;
        const Fel e1 = a * b * b;
        const Fel a2 = a * a;
        x.e2 = sqrt(a2 * b * b * b3 + a2 * g1 * b6);
        x.h2 = sqrt(a * a2 * b * b * b6);
        x.as_const = b * b2 + b * g1 * b3 + b * b * g1 * b6 + g1 * b8;
        x.b2p = a * b2 + a * g1 * b3 + b3 * b * e1 + b6 * b * b * e1 + b8 * e1 + x.e2;
        x.b3p = a * b3;
        x.b6p = a2 * b6;
        x.b8p = b * b3 + b * b * b6 + b8 + x.h2 + x.h2 * x.h2;
        out.push_back(x);
      }
    }
  }
  return out;
}

StabParams params_of(const Branch& x, const Fel& g2) {
  const auto& f = x.a.ctx();
  StabParams p(f);
  p.a = x.a;
  p.b = x.b;
  p.d = f.one();
  p.e1 = x.a * x.b * x.b;
  p.g1 = x.g1;
  p.h1 = f.one();
  p.e2 = x.e2;
  p.g2 = g2;
  p.h2 = x.h2;
  p.i2 = f.one();
  return p;
}

bool fixes(const Branch& x, const FamilyR& r, const FieldCtx& f) {
  return x.b2p == embed(r.b2, f) && x.b3p == embed(r.b3, f) && x.b6p == embed(r.b6, f) && x.b8p == embed(r.b8, f);
}

}  // namespace

ProjMap::ProjMap(const FieldMatrix& m) {
  if (m.rows() != kNumVars || m.cols() != kNumVars) throw ValidationError("projective map must be 5x5");
  if (determinant(m).is_zero()) throw ValidationError("projective map is singular");
  m_ = normalized(m);
}

ProjMap ProjMap::identity(const FieldCtx& ctx) { return ProjMap(FieldMatrix::identity(ctx, kNumVars)); }

ProjMap ProjMap::embed(const FieldCtx& to) const { return ProjMap(wittlab::embed(m_, to)); }

ProjMap ProjMap::inverse() const { return ProjMap(wittlab::inverse(m_)); }

bool ProjMap::is_identity() const { return m_ == FieldMatrix::identity(ctx(), kNumVars); }

ProjMap operator*(const ProjMap& a, const ProjMap& b) {
  const auto& f = FieldCtx::get(common_degree(a.ctx().degree(), b.ctx().degree()));
  return ProjMap(embed(a.m_, f) * embed(b.m_, f));
}

ProjMap to_projmap(const StabParams& p) { return ProjMap(stabilizer_matrix(p)); }

bool preserves_curve(const ProjMap& m, const CurveModel& c) {
  const CurveModel moved = transform(c, m.matrix());
  return same_span(moved.quadrics(), c.embed(moved.ctx()).quadrics());
}

ProjMap iota(const FieldCtx& ctx) {
  StabParams p = StabParams::identity(ctx);
  p.g2 = ctx.one();
  return to_projmap(p);
}

EtaMap eta(const FamilyS& s) {
  const FieldCtx* f = &s.ctx();
  if (trace(s.b8) == 1) f = &field_or_cap(2 * f->degree());
  const auto roots = solve_artin_schreier(embed(s.b8, *f));
  StabParams p = StabParams::identity(*f);
  p.g1 = f->one();
  p.e2 = embed(s.b3, *f);
  p.g2 = (*roots)[0];
  return {to_projmap(p), p.g2, f};
}

std::string to_string(AutClass c) {
  switch (c) {
    case AutClass::Order2: return "Order2";
    case AutClass::KleinFour: return "KleinFour";
    case AutClass::Larger: return "Larger";
  }
  return "?";
}

std::vector<ProjMap> AutGroup::maps() const {
  std::vector<ProjMap> out;
  for (const auto& p : elements) out.push_back(to_projmap(p));
  return out;
}

std::vector<ProjMap> AutGroup::generators() const {
  const auto all = maps();
  std::vector<ProjMap> gens;
  std::vector<ProjMap> span = {ProjMap::identity(*ctx)};
  for (const auto& m : all) {
    if (std::find(span.begin(), span.end(), m) != span.end()) continue;
    gens.push_back(m);
    // close under right multiplication by the generators
    for (std::size_t i = 0; i < span.size(); ++i) {
      for (const auto& g : gens) {
        const ProjMap n = span[i] * g;
        if (std::find(span.begin(), span.end(), n) == span.end()) span.push_back(n);
      }
    }
  }
  return gens;
}

AutGroup automorphisms_R(const FamilyR& r) {
  if (r.b6.is_zero()) throw ValidationError("FamilyR needs b6 != 0");
  const int k = r.ctx().degree();
  const FieldCtx* f = &field_or_cap(common_degree(k, 2));
  auto candidates = branches(r, *f);
  std::erase_if(candidates, [&](const Branch& x) { return !fixes(x, r, *f); });
  if (std::any_of(candidates.begin(), candidates.end(), [](const Branch& x) { return trace(x.as_const) == 1; })) {
    f = &field_or_cap(2 * f->degree());
    candidates = branches(r, *f);
    std::erase_if(candidates, [&](const Branch& x) { return !fixes(x, r, *f); });
  }
  AutGroup g;
  g.ctx = f;
  for (const auto& x : candidates) {
    const auto roots = solve_artin_schreier(x.as_const);
    for (const Fel& g2 : *roots) g.elements.push_back(params_of(x, g2));
  }
  const StabParams id = StabParams::identity(*f);
  std::sort(g.elements.begin(), g.elements.end(), [&](const StabParams& p, const StabParams& q) {
    auto key = [&](const StabParams& s) {
      return std::make_tuple(!(s == id), s.a.bits(), s.b.bits(), s.g1.bits(), s.g2.bits());
    };
    return key(p) < key(q);
  });
  g.order = static_cast<int>(g.elements.size());
  g.classification = g.order <= 2 ? AutClass::Order2 : g.order == 4 ? AutClass::KleinFour : AutClass::Larger;
  return g;
}

IsoParams isomorphic_params(const FamilyR& r) {
  if (r.b6.is_zero()) throw ValidationError("FamilyR needs b6 != 0");
  const FieldCtx& f = field_or_cap(common_degree(r.ctx().degree(), 2));
  std::set<std::array<std::uint32_t, 4>> seen;
  IsoParams out;
  out.ctx = &f;
  for (const auto& x : branches(r, f)) {
    if (seen.insert({x.b2p.bits(), x.b3p.bits(), x.b6p.bits(), x.b8p.bits()}).second) {
      out.params.emplace_back(x.b2p, x.b3p, x.b6p, x.b8p);
    }
  }
  std::sort(out.params.begin(), out.params.end(), [](const FamilyR& p, const FamilyR& q) {
    return std::make_tuple(p.b2.bits(), p.b3.bits(), p.b6.bits(), p.b8.bits()) <
           std::make_tuple(q.b2.bits(), q.b3.bits(), q.b6.bits(), q.b8.bits());
  });
  return out;
}

}  // namespace wittlab
