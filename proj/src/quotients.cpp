#include "wittlab/quotients.hpp"

#include <sstream>

#include "wittlab/error.hpp"

namespace wittlab {

namespace {

const FieldCtx& g2_field(const FamilyS& s) {
  const int k = s.ctx().degree();
  if (trace(s.b8) == 0) return s.ctx();
  if (2 * k > kMaxFieldDegree) throw FieldCapError("g2 needs GF(2^" + std::to_string(2 * k) + ")");
  return FieldCtx::get(2 * k);
}

Int128 mul_checked(Int128 a, Int128 b) {
  Int128 r;
  if (__builtin_mul_overflow(a, b, &r)) throw ArithmeticError("L-polynomial product overflows 128 bits");
  return r;
}

}  // namespace

std::vector<Fel> EllipticModel::coefficients(const FieldCtx& ctx) const {
  return {ctx.zero(), ctx.zero(), ctx.zero(), ctx.one()};
}

std::string Genus2Model::to_string() const {
  std::ostringstream out;
  out << "y^2+y=";
  bool first = true;
  for (int i = static_cast<int>(f.size()) - 1; i >= 0; --i) {
    const auto bits = f[static_cast<std::size_t>(i)].bits();
    if (bits == 0) continue;
    if (!first) out << '+';
    first = false;
    if (bits != 1 || i == 0) out << bits;
    if (bits != 1 && i > 0) out << '*';
    if (i > 0) out << 'x';
    if (i > 1) out << '^' << i;
  }
  if (first) out << '0';
  return out.str();
}

EllipticModel quotient_iota(const FamilyS&) { return {}; }

EtaQuotient quotient_eta(const FamilyS& s, EtaWhich which) {
  if (s.b3.is_zero()) throw ValidationError("FamilyS needs b3 != 0");
  const FieldCtx& f = g2_field(s);
  const Fel b2 = embed(s.b2, f), b3 = embed(s.b3, f), b8 = embed(s.b8, f);
  Fel g = (*solve_artin_schreier(b8))[0];
  if (which == EtaWhich::IotaEta) g = g + f.one();
  const Fel one = f.one();
  const Fel g2 = g * g, g3 = g2 * g;
  const Fel b3sq = b3 * b3;
  const Fel inv3 = (b3sq * b3).inv();

  EtaQuotient q;
  q.g2 = g;
  q.result_ctx = &f;
  q.model.ctx = &f;
  q.model.f = {
      (g * b2 * b3sq + g3 + b2 * b2 * b3 + g2 + g + one) * inv3,
      (b2 * b3sq + g2 + one) * inv3,
      (g3 + g2) * inv3,
      g2 * inv3,
      (g + one) * inv3,
      inv3,
  };
  q.c_minus1 = (g * b2 + b2) / b3;
  q.c_minus2 = (g2 * b2 * b2 + b2 * b2) / b3sq;
  // y -> y + c_{-1}/x removes the tail exactly when c_{-1}^2 = c_{-2}
  if (!(q.c_minus1 * q.c_minus1 == q.c_minus2)) throw std::logic_error("Laurent tail cannot be absorbed");
  return q;
}

std::vector<Int128> lpoly_product(const std::vector<std::vector<Int128>>& factors) {
  std::vector<Int128> out = {1};
  for (const auto& p : factors) {
    std::vector<Int128> next(out.size() + p.size() - 1, 0);
    for (std::size_t i = 0; i < out.size(); ++i) {
      for (std::size_t j = 0; j < p.size(); ++j) {
        if (__builtin_add_overflow(next[i + j], mul_checked(out[i], p[j]), &next[i + j])) {
          throw ArithmeticError("L-polynomial product overflows 128 bits");
        }
      }
    }
    out = std::move(next);
  }
  return out;
}

Decomposition decompose(const FamilyS& s, int workers) {
  if (s.b3.is_zero()) throw ValidationError("FamilyS needs b3 != 0");
  const FieldCtx& f = g2_field(s);
  if (5 * f.degree() > kMaxFieldDegree) {
    throw FieldCapError("counting C to m = 5 over GF(2^" + std::to_string(f.degree()) + ") exceeds the cap");
  }
  const CurveModel c = to_curve(s);
  const int n_max = std::min(4, kMaxFieldDegree / s.ctx().degree());
  const auto verdict = smoothness_scan(c, n_max, workers);
  if (verdict.singular) throw ValidationError("singular member: " + verdict.reason);

  Decomposition d;
  d.ctx = &f;
  d.curve = l_polynomial(count_vector(c.embed(f), 5, workers), 5);

  CountVector e{f.degree(), {count_artin_schreier_plane(EllipticModel{}.coefficients(f), 1)}};
  d.elliptic = l_polynomial(e, 1);
  const EtaQuotient q1 = quotient_eta(s, EtaWhich::Eta);
  const EtaQuotient q2 = quotient_eta(s, EtaWhich::IotaEta);
  auto genus2 = [&](const EtaQuotient& q) {
    CountVector v{f.degree(), {}};
    for (int m = 1; m <= 2; ++m) v.counts.push_back(count_artin_schreier_plane(q.model.f, m));
    return l_polynomial(v, 2);
  };
  d.eta = genus2(q1);
  d.iota_eta = genus2(q2);
  d.ok = lpoly_product({d.elliptic.c, d.eta.c, d.iota_eta.c}) == d.curve.c;
  return d;
}

bool decomposition_check(const FamilyS& s, int workers) { return decompose(s, workers).ok; }

}  // namespace wittlab
