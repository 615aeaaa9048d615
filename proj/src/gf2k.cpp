#include "wittlab/gf2k.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace wittlab {
namespace {

// Conway polynomials over GF(2) for degrees 1..20 (bit i = coefficient of x^i).
constexpr std::array<std::uint32_t, kMaxFieldDegree + 1> kConway = {
    0x0,     0x3,     0x7,     0xb,     0x13,    0x25,     0x5b,
    0x83,    0x11d,   0x211,   0x46f,   0x805,   0x10eb,   0x201b,
    0x40a9,  0x8035,  0x1002d, 0x20009, 0x41403, 0x80027,  0x1006f3,
};

int bit_degree(std::uint64_t v) { return 63 - std::countl_zero(v); }

}  // namespace

std::uint32_t conway_polynomial(int degree) {
  if (degree < 1) throw ValidationError("field degree must be positive");
  if (degree > kMaxFieldDegree) {
    throw FieldCapError("field degree " + std::to_string(degree) + " exceeds cap " +
                        std::to_string(kMaxFieldDegree));
  }
  return kConway[static_cast<std::size_t>(degree)];
}

const FieldCtx& FieldCtx::get(int degree) {
  conway_polynomial(degree);  // range check
  static std::array<std::once_flag, kMaxFieldDegree + 1> flags;
  static std::array<std::unique_ptr<FieldCtx>, kMaxFieldDegree + 1> contexts;
  const auto idx = static_cast<std::size_t>(degree);
  std::call_once(flags[idx], [&] { contexts[idx].reset(new FieldCtx(degree)); });
  return *contexts[idx];
}

FieldCtx::FieldCtx(int degree)
    : degree_(degree), size_(1u << degree), modulus_(kConway[static_cast<std::size_t>(degree)]) {
  const auto k = static_cast<unsigned>(degree);
  sqr_basis_.resize(k);
  for (unsigned i = 0; i < k; ++i) sqr_basis_[i] = mul_schoolbook(1u << i, 1u << i);

  sqrt_basis_.resize(k);
  for (unsigned i = 0; i < k; ++i) {
    std::uint32_t v = 1u << i;
    for (unsigned j = 0; j + 1 < k; ++j) v = sqr(v);
    sqrt_basis_[i] = v;
  }

  for (unsigned i = 0; i < k; ++i) {
    std::uint32_t v = 1u << i;
    std::uint32_t t = 0;
    for (unsigned j = 0; j < k; ++j) {
      t ^= v;
      v = sqr(v);
    }
    // t lies in GF(2), so it is 0 or 1.
    if (t == 1) trace_mask_ |= 1u << i;
  }

  as_rows_.assign(k, {0u, 0u});
  for (unsigned i = 0; i < k; ++i) {
    std::uint32_t img = sqr(1u << i) ^ (1u << i);
    std::uint32_t pre = 1u << i;
    while (img != 0) {
      const auto p = static_cast<unsigned>(bit_degree(img));
      if (as_rows_[p].first == 0) {
        as_rows_[p] = {img, pre};
        break;
      }
      img ^= as_rows_[p].first;
      pre ^= as_rows_[p].second;
    }
  }

  if (degree <= kMaxTableDegree) {
    const std::uint32_t order = size_ - 1;
    log_.assign(size_, 0);
    exp_.assign(2 * static_cast<std::size_t>(order) + 1, 0);
    const std::uint32_t gen = degree == 1 ? 1u : 2u;
    std::uint32_t cur = 1;
    for (std::uint32_t i = 0; i < order; ++i) {
      exp_[i] = cur;
      log_[cur] = i;
      cur = mul_schoolbook(cur, gen);
    }
    for (std::uint32_t i = order; i < exp_.size(); ++i) exp_[i] = exp_[i - order];
  }
}

Fel FieldCtx::zero() const { return Fel(this, 0, Fel::Unchecked{}); }
Fel FieldCtx::one() const { return Fel(this, 1, Fel::Unchecked{}); }
Fel FieldCtx::generator() const { return Fel(this, degree_ == 1 ? 1u : 2u, Fel::Unchecked{}); }
Fel FieldCtx::operator()(std::uint32_t bits) const { return Fel(*this, bits); }

std::uint32_t FieldCtx::mul_schoolbook(std::uint32_t a, std::uint32_t b) const noexcept {
  std::uint64_t r = 0;
  std::uint64_t aa = a;
  while (b != 0) {
    if (b & 1u) r ^= aa;
    aa <<= 1;
    b >>= 1;
  }
  for (int bit = 2 * degree_ - 2; bit >= degree_; --bit) {
    if ((r >> bit) & 1u) r ^= static_cast<std::uint64_t>(modulus_) << (bit - degree_);
  }
  return static_cast<std::uint32_t>(r);
}

std::uint32_t FieldCtx::mul(std::uint32_t a, std::uint32_t b) const noexcept {
  if (!log_.empty()) {
    if (a == 0 || b == 0) return 0;
    return exp_[log_[a] + log_[b]];
  }
  return mul_schoolbook(a, b);
}

std::uint32_t FieldCtx::sqr(std::uint32_t a) const noexcept {
  std::uint32_t r = 0;
  for (unsigned i = 0; a != 0; ++i, a >>= 1) {
    if (a & 1u) r ^= sqr_basis_[i];
  }
  return r;
}

std::uint32_t FieldCtx::sqrt(std::uint32_t a) const noexcept {
  std::uint32_t r = 0;
  for (unsigned i = 0; a != 0; ++i, a >>= 1) {
    if (a & 1u) r ^= sqrt_basis_[i];
  }
  return r;
}

std::uint32_t FieldCtx::inv(std::uint32_t a) const {
  if (a == 0) throw ArithmeticError("inversion of zero in GF(2^" + std::to_string(degree_) + ")");
  if (!log_.empty()) return exp_[(size_ - 1) - log_[a]];
  // Binary extended Euclid on GF(2)[x].
  std::uint64_t u = a, v = modulus_, g1 = 1, g2 = 0;
  while (u != 1) {
    int j = bit_degree(u) - bit_degree(v);
    if (j < 0) {
      std::swap(u, v);
      std::swap(g1, g2);
      j = -j;
    }
    u ^= v << j;
    g1 ^= g2 << j;
  }
  return static_cast<std::uint32_t>(g1);
}

std::uint32_t FieldCtx::pow(std::uint32_t a, std::uint64_t e) const noexcept {
  if (e == 0) return 1;
  if (a == 0) return 0;
  e %= (size_ - 1);
  if (e == 0) e = size_ - 1;
  std::uint32_t r = 1;
  while (e != 0) {
    if (e & 1u) r = mul(r, a);
    a = mul(a, a);
    e >>= 1;
  }
  return r;
}

std::uint32_t FieldCtx::frobenius(std::uint32_t a, unsigned j) const noexcept {
  j %= static_cast<unsigned>(degree_);
  for (unsigned i = 0; i < j; ++i) a = sqr(a);
  return a;
}

unsigned FieldCtx::trace(std::uint32_t a) const noexcept {
  return static_cast<unsigned>(std::popcount(a & trace_mask_) & 1);
}

std::optional<std::uint32_t> FieldCtx::artin_schreier_root(std::uint32_t c) const noexcept {
  std::uint32_t z = 0;
  for (int bit = degree_ - 1; bit >= 0; --bit) {
    const auto& row = as_rows_[static_cast<std::size_t>(bit)];
    if (((c >> bit) & 1u) && row.first != 0) {
      c ^= row.first;
      z ^= row.second;
    }
  }
  if (c != 0) return std::nullopt;
  return z & ~1u;
}

std::uint64_t FieldCtx::discrete_log(std::uint32_t a) const {
  if (!log_.empty()) return log_[a];
  const std::uint64_t order = size_ - 1;
  const auto m = static_cast<std::uint64_t>(std::ceil(std::sqrt(static_cast<double>(order))));
  const std::uint32_t g = generator().bits();
  std::unordered_map<std::uint32_t, std::uint64_t> baby;
  baby.reserve(m);
  std::uint32_t cur = 1;
  for (std::uint64_t j = 0; j < m; ++j) {
    baby.emplace(cur, j);
    cur = mul(cur, g);
  }
  const std::uint32_t giant = inv(pow(g, m));
  std::uint32_t gamma = a;
  for (std::uint64_t i = 0; i <= m; ++i) {
    if (auto it = baby.find(gamma); it != baby.end()) return (i * m + it->second) % order;
    gamma = mul(gamma, giant);
  }
  throw ArithmeticError("discrete log failed");
}

std::vector<std::uint32_t> FieldCtx::cube_roots(std::uint32_t c) const {
  if (c == 0) return {0};
  const std::uint64_t order = size_ - 1;
  if (order % 3 != 0) {
    const std::uint64_t e = (order % 3 == 2) ? (order + 1) / 3 : (2 * order + 1) / 3;
    return {pow(c, e)};
  }
  const std::uint64_t l = discrete_log(c);
  if (l % 3 != 0) return {};
  const std::uint32_t g = generator().bits();
  std::vector<std::uint32_t> roots;
  for (std::uint64_t j = 0; j < 3; ++j) roots.push_back(pow(g, l / 3 + j * (order / 3)));
  std::sort(roots.begin(), roots.end());
  return roots;
}

namespace {

using Coeffs = std::vector<std::uint32_t>;  // constant term first, no trailing zeros

void trim(Coeffs& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

Coeffs poly_mod(Coeffs a, const Coeffs& m, const FieldCtx& f) {
  const auto lead_inv = f.inv(m.back());
  while (a.size() >= m.size()) {
    const auto factor = f.mul(a.back(), lead_inv);
    const std::size_t shift = a.size() - m.size();
    for (std::size_t i = 0; i < m.size(); ++i) a[shift + i] ^= f.mul(factor, m[i]);
    trim(a);
  }
  return a;
}

Coeffs poly_mulmod(const Coeffs& a, const Coeffs& b, const Coeffs& m, const FieldCtx& f) {
  if (a.empty() || b.empty()) return {};
  Coeffs out(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] ^= f.mul(a[i], b[j]);
  }
  trim(out);
  return poly_mod(std::move(out), m, f);
}

Coeffs poly_gcd(Coeffs a, Coeffs b, const FieldCtx& f) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    a = poly_mod(std::move(a), b, f);
    std::swap(a, b);
  }
  if (!a.empty()) {
    const auto inv = f.inv(a.back());
    for (auto& c : a) c = f.mul(c, inv);
  }
  return a;
}

Coeffs poly_div_exact(Coeffs a, const Coeffs& m, const FieldCtx& f) {
  Coeffs q(a.size() - m.size() + 1, 0);
  const auto lead_inv = f.inv(m.back());
  while (a.size() >= m.size()) {
    const auto factor = f.mul(a.back(), lead_inv);
    const std::size_t shift = a.size() - m.size();
    q[shift] = factor;
    for (std::size_t i = 0; i < m.size(); ++i) a[shift + i] ^= f.mul(factor, m[i]);
    trim(a);
  }
  return q;
}

// g monic, squarefree, a product of distinct linear factors.
void split_linear(const Coeffs& g, const FieldCtx& f, std::vector<std::uint32_t>& roots) {
  if (g.size() == 2) {
    roots.push_back(g[0]);
    return;
  }
  // Tr(beta x) mod g vanishes on about half the roots; walk beta through powers of x.
  std::uint32_t beta = 1;
  // The powers of x form a basis, so one of the first k separates any two roots.
  for (int attempt = 0; attempt < f.degree(); ++attempt) {
    Coeffs lin = {0, beta};
    Coeffs acc = poly_mod(lin, g, f);
    Coeffs sq = acc;
    for (int i = 1; i < f.degree(); ++i) {
      sq = poly_mulmod(sq, sq, g, f);
      Coeffs sum(std::max(acc.size(), sq.size()), 0);
      for (std::size_t j = 0; j < acc.size(); ++j) sum[j] ^= acc[j];
      for (std::size_t j = 0; j < sq.size(); ++j) sum[j] ^= sq[j];
      trim(sum);
      acc = std::move(sum);
    }
    const Coeffs d = poly_gcd(g, acc, f);
    if (d.size() > 1 && d.size() < g.size()) {
      split_linear(d, f, roots);
      split_linear(poly_div_exact(g, d, f), f, roots);
      return;
    }
    if (f.size() == 2) break;
    beta = f.mul(beta, 2);
  }
  throw std::logic_error("root splitting did not converge");
}

}  // namespace

std::vector<std::uint32_t> FieldCtx::poly_roots(const std::vector<std::uint32_t>& coeffs) const {
  Coeffs p = coeffs;
  trim(p);
  std::vector<std::uint32_t> roots;
  if (p.empty()) {
    roots.resize(size_);
    std::iota(roots.begin(), roots.end(), 0u);
    return roots;
  }
  std::size_t zeros = 0;
  while (p[zeros] == 0) ++zeros;
  if (zeros > 0) {
    roots.push_back(0);
    p.erase(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(zeros));
  }
  if (p.size() > 1) {
    const auto inv_lead = inv(p.back());
    for (auto& c : p) c = mul(c, inv_lead);
    // gcd(p, x^q - x) keeps exactly the distinct roots in this field.
    Coeffs h = poly_mod({0, 1}, p, *this);
    for (int i = 0; i < degree_; ++i) h = poly_mulmod(h, h, p, *this);
    if (h.size() < 2) h.resize(2, 0);
    h[1] ^= 1;
    trim(h);
    const Coeffs g = poly_gcd(p, h, *this);
    if (h.empty()) {
      split_linear(p, *this, roots);
    } else if (g.size() > 1) {
      split_linear(g, *this, roots);
    }
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

const std::vector<std::uint32_t>& FieldCtx::embedding_basis(const FieldCtx& from) const {
  const int d = from.degree();
  if (degree_ % d != 0) {
    throw ValidationError("cannot embed GF(2^" + std::to_string(d) + ") into GF(2^" +
                          std::to_string(degree_) + ")");
  }
  std::lock_guard lock(embed_mutex_);
  if (auto it = embed_cache_.find(d); it != embed_cache_.end()) return it->second;

  auto is_root = [&](std::uint32_t r) {
    std::uint32_t acc = 0;
    for (int i = d; i >= 0; --i) acc = mul(acc, r) ^ ((from.modulus() >> i) & 1u);
    return acc == 0;
  };
  // The norm of x is a root of the degree-d Conway polynomial; its Frobenius
  // orbit is the full root set.
  const std::uint64_t cofactor = (static_cast<std::uint64_t>(size_) - 1) / ((1ull << d) - 1);
  std::uint32_t r = pow(generator().bits(), cofactor);
  std::uint32_t best = r;
  for (int i = 1; i < d; ++i) {
    r = sqr(r);
    best = std::min(best, r);
  }
  if (!is_root(best)) throw std::logic_error("Conway compatibility violated");

  std::vector<std::uint32_t> basis(static_cast<std::size_t>(d));
  std::uint32_t p = 1;
  for (int i = 0; i < d; ++i) {
    basis[static_cast<std::size_t>(i)] = p;
    p = mul(p, best);
  }
  return embed_cache_.emplace(d, std::move(basis)).first->second;
}

std::uint32_t FieldCtx::embed_from(const FieldCtx& from, std::uint32_t bits) const {
  if (&from == this) return bits;
  const auto& basis = embedding_basis(from);
  std::uint32_t r = 0;
  for (unsigned i = 0; bits != 0; ++i, bits >>= 1) {
    if (bits & 1u) r ^= basis[i];
  }
  return r;
}

// --- Fel -------------------------------------------------------------------

Fel::Fel(const FieldCtx& ctx, std::uint32_t bits) : ctx_(&ctx), bits_(bits) {
  if (bits >= ctx.size()) {
    throw ValidationError("element " + std::to_string(bits) + " out of range for GF(2^" +
                          std::to_string(ctx.degree()) + ")");
  }
}

const FieldCtx& Fel::ctx() const {
  if (ctx_ == nullptr) throw ContextError("detached field element");
  return *ctx_;
}

const FieldCtx& same_ctx(const Fel& a, const Fel& b) {
  if (a.ctx_ptr() == nullptr || b.ctx_ptr() == nullptr) throw ContextError("detached field element");
  if (a.ctx_ptr() != b.ctx_ptr()) {
    throw ContextError("mixing GF(2^" + std::to_string(a.ctx().degree()) + ") and GF(2^" +
                       std::to_string(b.ctx().degree()) + ")");
  }
  return *a.ctx_ptr();
}

Fel operator+(const Fel& a, const Fel& b) {
  const auto& f = same_ctx(a, b);
  return Fel(&f, a.bits_ ^ b.bits_, Fel::Unchecked{});
}

Fel operator*(const Fel& a, const Fel& b) {
  const auto& f = same_ctx(a, b);
  return Fel(&f, f.mul(a.bits_, b.bits_), Fel::Unchecked{});
}

Fel operator/(const Fel& a, const Fel& b) {
  const auto& f = same_ctx(a, b);
  return Fel(&f, f.div(a.bits_, b.bits_), Fel::Unchecked{});
}

Fel Fel::inv() const {
  const auto& f = ctx();
  return Fel(&f, f.inv(bits_), Unchecked{});
}

Fel Fel::square() const {
  const auto& f = ctx();
  return Fel(&f, f.sqr(bits_), Unchecked{});
}

Fel Fel::pow(std::int64_t e) const {
  const auto& f = ctx();
  if (e < 0) return inv().pow(-e);
  return Fel(&f, f.pow(bits_, static_cast<std::uint64_t>(e)), Unchecked{});
}

Fel frobenius(const Fel& a, unsigned j) { return a.ctx()(a.ctx().frobenius(a.bits(), j)); }

unsigned trace(const Fel& a) { return a.ctx().trace(a.bits()); }

Fel sqrt(const Fel& a) { return a.ctx()(a.ctx().sqrt(a.bits())); }

std::optional<std::array<Fel, 2>> solve_artin_schreier(const Fel& c) {
  const auto& f = c.ctx();
  auto z = f.artin_schreier_root(c.bits());
  if (!z) return std::nullopt;
  return std::array<Fel, 2>{f(*z), f(*z ^ 1u)};
}

std::vector<Fel> cube_roots(const Fel& c) {
  const auto& f = c.ctx();
  std::vector<Fel> out;
  for (auto r : f.cube_roots(c.bits())) out.push_back(f(r));
  return out;
}

Fel embed(const Fel& a, const FieldCtx& to) { return to(to.embed_from(a.ctx(), a.bits())); }

int common_degree(int a, int b) { return std::lcm(a, b); }

}  // namespace wittlab
