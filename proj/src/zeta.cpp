#include "wittlab/zeta.hpp"

#include <algorithm>
#include <numeric>

#include "wittlab/points.hpp"

namespace wittlab {

namespace {

Int128 checked_mul(Int128 a, Int128 b) {
  Int128 out;
  if (__builtin_mul_overflow(a, b, &out)) throw ArithmeticError("128-bit overflow in L-polynomial arithmetic");
  return out;
}

Int128 checked_add(Int128 a, Int128 b) {
  Int128 out;
  if (__builtin_add_overflow(a, b, &out)) throw ArithmeticError("128-bit overflow in L-polynomial arithmetic");
  return out;
}

Int128 checked_pow(Int128 base, int e) {
  Int128 out = 1;
  for (int i = 0; i < e; ++i) out = checked_mul(out, base);
  return out;
}

int v2(Int128 x) {
  int v = 0;
  while ((x & 1) == 0) {
    x >>= 1;
    ++v;
  }
  return v;
}

// sum_{j=1}^{m} s_j c_{m-j}, with c_i = 0 beyond the stored range
Int128 newton_sum(const std::vector<Int128>& s, const std::vector<Int128>& c, int m) {
  Int128 acc = 0;
  for (int j = 1; j <= m; ++j) {
    const int i = m - j;
    if (i >= static_cast<int>(c.size())) continue;
    acc = checked_add(acc, checked_mul(s[static_cast<std::size_t>(j)], c[static_cast<std::size_t>(i)]));
  }
  return acc;
}

}  // namespace

std::string to_string(Int128 v) {
  if (v == 0) return "0";
  const bool neg = v < 0;
  // work with the negative value so the minimum fits
  std::string out;
  Int128 x = neg ? v : -v;
  while (x != 0) {
    out.push_back(static_cast<char>('0' - static_cast<int>(x % 10)));
    x /= 10;
  }
  if (neg) out.push_back('-');
  std::reverse(out.begin(), out.end());
  return out;
}

void CountVector::validate() const {
  if (k < 1 || k > kMaxFieldDegree) throw ValidationError("base field degree out of range");
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const int m = static_cast<int>(i) + 1;
    if (k * m <= 24) {
      // #P^4(GF(Q)) = Q^4 + Q^3 + Q^2 + Q + 1
      const Int128 qm = Int128{1} << (k * m);
      const Int128 bound = qm * qm * qm * qm + qm * qm * qm + qm * qm + qm + 1;
      if (static_cast<Int128>(counts[i]) > bound) {
        throw InconsistentCountsError("N_" + std::to_string(m) + " exceeds the points of P^4");
      }
    }
    for (std::size_t d = 1; d < i + 1; ++d) {
      if ((i + 1) % d == 0 && counts[d - 1] > counts[i]) {
        throw InconsistentCountsError("N_" + std::to_string(d) + " > N_" + std::to_string(m));
      }
    }
  }
}

std::uint64_t count_points(const CurveModel& c, int m, int workers) {
  return ConeEnumerator(c, m).count(workers);
}

CountVector count_vector(const CurveModel& c, int m_max, int workers) {
  CountVector v;
  v.k = c.ctx().degree();
  for (int m = 1; m <= m_max; ++m) v.counts.push_back(count_points(c, m, workers));
  return v;
}

std::uint64_t count_points_naive(const CurveModel& c, int m, std::uint64_t budget) {
  if (m < 1) throw ValidationError("extension degree must be positive");
  const long degree = static_cast<long>(c.ctx().degree()) * m;
  if (degree > kMaxFieldDegree || (std::uint64_t{1} << degree) > budget) {
    throw BudgetError("naive count over GF(2^" + std::to_string(degree) + ") exceeds the budget q^m <= " +
                      std::to_string(budget));
  }
  const auto& f = FieldCtx::get(static_cast<int>(degree));
  const CurveModel e = c.embed(f);
  const std::uint64_t qn = f.size();
  std::uint64_t total = 0;
  // chart i: x_0 = ... = x_{i-1} = 0, x_i = 1
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
      if (e.q1().eval_raw(p) == 0 && e.q2().eval_raw(p) == 0 && e.q3().eval_raw(p) == 0) ++total;
    }
  }
  return total;
}

// --- L-polynomials -------------------------------------------------------------

std::vector<std::string> LPoly::coefficient_strings() const {
  std::vector<std::string> out;
  for (auto x : c) out.push_back(wittlab::to_string(x));
  return out;
}

std::string LPoly::to_string() const {
  std::string out = "(";
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i > 0) out += ", ";
    out += wittlab::to_string(c[i]);
  }
  return out + ")";
}

LPoly l_polynomial(const CountVector& counts, int genus) {
  counts.validate();
  if (genus < 0) throw ValidationError("negative genus");
  const int big_m = static_cast<int>(counts.counts.size());
  if (big_m < genus) {
    throw ValidationError("need at least " + std::to_string(genus) + " counts, got " + std::to_string(big_m));
  }
  const Int128 q = Int128{1} << counts.k;

  std::vector<Int128> t(static_cast<std::size_t>(big_m) + 1, 0);
  for (int m = 1; m <= big_m; ++m) {
    t[static_cast<std::size_t>(m)] =
        checked_add(checked_add(checked_pow(q, m), 1), -static_cast<Int128>(counts.counts[static_cast<std::size_t>(m - 1)]));
  }

  LPoly l;
  l.genus = genus;
  l.k = counts.k;
  l.c.assign(static_cast<std::size_t>(2 * genus) + 1, 0);
  l.c[0] = 1;
  std::vector<Int128> known(1, 1);  // c_0..c_{m-1} while running the identities
  for (int m = 1; m <= genus; ++m) {
    const Int128 sum = newton_sum(t, known, m);
    if (sum % m != 0) {
      throw InconsistentCountsError("Newton identity for c_" + std::to_string(m) + " is not integral");
    }
    l.c[static_cast<std::size_t>(m)] = -sum / m;
    known.push_back(l.c[static_cast<std::size_t>(m)]);
  }
  for (int i = 0; i < genus; ++i) {
    l.c[static_cast<std::size_t>(2 * genus - i)] = checked_mul(checked_pow(q, genus - i), l.c[static_cast<std::size_t>(i)]);
  }

  // Extra counts must agree with what the polynomial predicts.
  for (int m = genus + 1; m <= std::min(big_m, 2 * genus); ++m) {
    const std::vector<Int128> head(l.c.begin(), l.c.begin() + m);
    const Int128 sum = newton_sum(t, head, m);
    if (sum % m != 0 || -sum / m != l.c[static_cast<std::size_t>(m)]) {
      throw InconsistentCountsError("N_" + std::to_string(m) + " contradicts the functional equation");
    }
  }
  if (big_m > 2 * genus) {
    const auto predicted = power_sums(l, big_m);
    for (int m = 2 * genus + 1; m <= big_m; ++m) {
      if (predicted[static_cast<std::size_t>(m - 1)] != t[static_cast<std::size_t>(m)]) {
        throw InconsistentCountsError("N_" + std::to_string(m) + " contradicts the L-polynomial");
      }
    }
  }
  return l;
}

std::vector<Int128> power_sums(const LPoly& l, int n) {
  const int two_g = 2 * l.genus;
  std::vector<Int128> s(static_cast<std::size_t>(n) + 1, 0);
  for (int m = 1; m <= n; ++m) {
    Int128 acc = 0;
    for (int j = 1; j < m && j <= two_g; ++j) {
      acc = checked_add(acc, checked_mul(l.c[static_cast<std::size_t>(j)], s[static_cast<std::size_t>(m - j)]));
    }
    if (m <= two_g) acc = checked_add(acc, checked_mul(m, l.c[static_cast<std::size_t>(m)]));
    s[static_cast<std::size_t>(m)] = -acc;
  }
  s.erase(s.begin());
  return s;
}

std::vector<std::uint64_t> counts_from_lpoly(const LPoly& l, int n) {
  const auto s = power_sums(l, n);
  std::vector<std::uint64_t> out;
  for (int m = 1; m <= n; ++m) {
    const Int128 count = checked_add(checked_add(checked_pow(l.q(), m), 1), -s[static_cast<std::size_t>(m - 1)]);
    if (count < 0 || count > static_cast<Int128>(UINT64_MAX)) throw ArithmeticError("count out of range");
    out.push_back(static_cast<std::uint64_t>(count));
  }
  return out;
}

LPoly base_change(const LPoly& l, int r) {
  if (r < 1) throw ValidationError("base change degree must be positive");
  const int two_g = 2 * l.genus;
  const auto s = power_sums(l, two_g * r);
  LPoly out;
  out.genus = l.genus;
  out.k = l.k * r;
  out.c.assign(static_cast<std::size_t>(two_g) + 1, 0);
  out.c[0] = 1;
  for (int m = 1; m <= two_g; ++m) {
    Int128 acc = 0;
    for (int j = 1; j <= m; ++j) {
      acc = checked_add(acc, checked_mul(s[static_cast<std::size_t>(j * r - 1)], out.c[static_cast<std::size_t>(m - j)]));
    }
    if (acc % m != 0) throw ArithmeticError("base change produced a non-integral coefficient");
    out.c[static_cast<std::size_t>(m)] = -acc / m;
  }
  return out;
}

// --- Newton polygon ------------------------------------------------------------

std::string Slope::to_string() const {
  if (num == 0) return "0";
  if (den == 1) return std::to_string(num);
  return std::to_string(num) + "/" + std::to_string(den);
}

int NewtonPolygon::total_multiplicity() const {
  int n = 0;
  for (const auto& s : slopes) n += s.multiplicity;
  return n;
}

int NewtonPolygon::multiplicity_of(std::int64_t num, std::int64_t den) const {
  for (const auto& s : slopes) {
    if (s.num * den == num * s.den) return s.multiplicity;
  }
  return 0;
}

std::string NewtonPolygon::to_string() const {
  std::string out;
  for (const auto& s : slopes) {
    if (!out.empty()) out += ';';
    out += s.to_string() + "x" + std::to_string(s.multiplicity);
  }
  return out;
}

NewtonPolygon newton_polygon(const LPoly& l) {
  if (l.c.empty() || l.c[0] != 1) throw ValidationError("L-polynomial must start with 1");
  // Hull over (i, v2(c_i)); dividing by k afterwards does not move the hull.
  std::vector<std::pair<std::int64_t, std::int64_t>> pts;
  for (std::size_t i = 0; i < l.c.size(); ++i) {
    if (l.c[i] != 0) pts.emplace_back(static_cast<std::int64_t>(i), v2(l.c[i] < 0 ? -l.c[i] : l.c[i]));
  }
  std::vector<std::pair<std::int64_t, std::int64_t>> hull;
  for (const auto& p : pts) {
    while (hull.size() >= 2) {
      const auto& a = hull[hull.size() - 2];
      const auto& b = hull.back();
      // drop b when it lies on or above the segment a -> p
      const std::int64_t cross = (b.first - a.first) * (p.second - a.second) - (b.second - a.second) * (p.first - a.first);
      if (cross <= 0) {
        hull.pop_back();
      } else {
        break;
      }
    }
    hull.push_back(p);
  }
  NewtonPolygon np;
  for (std::size_t i = 1; i < hull.size(); ++i) {
    const std::int64_t dx = hull[i].first - hull[i - 1].first;
    std::int64_t num = hull[i].second - hull[i - 1].second;
    std::int64_t den = dx * l.k;
    const std::int64_t g = std::gcd(num, den);
    if (g != 0) {
      num /= g;
      den /= g;
    }
    if (!np.slopes.empty() && np.slopes.back().num == num && np.slopes.back().den == den) {
      np.slopes.back().multiplicity += static_cast<int>(dx);
    } else {
      np.slopes.push_back({num, den, static_cast<int>(dx)});
    }
  }
  return np;
}

bool is_supersingular(const NewtonPolygon& np) {
  for (const auto& s : np.slopes) {
    if (!(s.num * 2 == s.den)) return false;
  }
  return true;
}

// --- Artin-Schreier plane curves --------------------------------------------------

std::uint64_t count_artin_schreier_plane(const std::vector<Fel>& f, int m) {
  if (f.empty()) throw ValidationError("empty polynomial");
  const FieldCtx& base = f.front().ctx();
  int deg = -1;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i].ctx_ptr() != &base) throw ContextError("coefficients from different fields");
    if (!f[i].is_zero()) deg = static_cast<int>(i);
  }
  if (deg != 3 && deg != 5) {
    throw ValidationError("y^2 + y = F(x) needs deg F in {3, 5}, got " + std::to_string(deg));
  }
  if (m < 1) throw ValidationError("extension degree must be positive");
  const long degree = static_cast<long>(base.degree()) * m;
  if (degree > kMaxFieldDegree) throw FieldCapError("GF(2^" + std::to_string(degree) + ") exceeds the field cap");
  const auto& K = FieldCtx::get(static_cast<int>(degree));
  std::vector<std::uint32_t> coeffs;
  for (int i = 0; i <= deg; ++i) coeffs.push_back(K.embed_from(base, f[static_cast<std::size_t>(i)].bits()));
  std::uint64_t total = 1;
  for (std::uint32_t x = 0; x < K.size(); ++x) {
    std::uint32_t acc = 0;
    for (int i = deg; i >= 0; --i) acc = K.mul(acc, x) ^ coeffs[static_cast<std::size_t>(i)];
    if (K.trace(acc) == 0) total += 2;
  }
  return total;
}

}  // namespace wittlab
