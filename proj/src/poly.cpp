#include "wittlab/poly.hpp"

#include <cctype>
#include <sstream>

namespace wittlab {

Monomial Monomial::var(Var v) {
  Monomial m;
  m.exps[static_cast<std::size_t>(v)] = 1;
  return m;
}

Monomial Monomial::of(int x, int y, int z, int t, int u) {
  Monomial m;
  m.exps = {static_cast<std::uint8_t>(x), static_cast<std::uint8_t>(y), static_cast<std::uint8_t>(z),
            static_cast<std::uint8_t>(t), static_cast<std::uint8_t>(u)};
  return m;
}

int Monomial::degree() const {
  int d = 0;
  for (auto e : exps) d += e;
  return d;
}

Monomial operator*(const Monomial& a, const Monomial& b) {
  Monomial m;
  for (std::size_t i = 0; i < kNumVars; ++i) m.exps[i] = static_cast<std::uint8_t>(a.exps[i] + b.exps[i]);
  return m;
}

std::string Monomial::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < kNumVars; ++i) {
    if (exps[i] == 0) continue;
    if (!out.empty()) out += '*';
    out += kVarNames[i];
    if (exps[i] > 1) out += "^" + std::to_string(exps[i]);
  }
  return out.empty() ? "1" : out;
}

bool GradedLexLess::operator()(const Monomial& a, const Monomial& b) const {
  const int da = a.degree();
  const int db = b.degree();
  if (da != db) return da < db;
  return a.exps > b.exps;
}

// --- MPoly -------------------------------------------------------------------

MPoly MPoly::constant(const Fel& c) { return monomial(c, Monomial{}); }

MPoly MPoly::variable(const FieldCtx& ctx, Var v) { return monomial(ctx.one(), Monomial::var(v)); }

MPoly MPoly::monomial(const Fel& c, const Monomial& m) {
  MPoly p(c.ctx());
  p.add_raw(m, c.bits());
  return p;
}

int MPoly::degree() const {
  int d = -1;
  for (const auto& [m, c] : terms_) d = std::max(d, m.degree());
  return d;
}

bool MPoly::is_homogeneous(int d) const {
  for (const auto& [m, c] : terms_) {
    if (m.degree() != d) return false;
  }
  return true;
}

Fel MPoly::coeff(const Monomial& m) const {
  auto it = terms_.find(m);
  return (*ctx_)(it == terms_.end() ? 0u : it->second);
}

void MPoly::add_term(const Monomial& m, const Fel& c) {
  if (c.ctx_ptr() != ctx_) throw ContextError("coefficient from a different field");
  add_raw(m, c.bits());
}

void MPoly::add_raw(const Monomial& m, std::uint32_t c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second ^= c;
    if (it->second == 0) terms_.erase(it);
  }
}

MPoly operator+(const MPoly& a, const MPoly& b) {
  if (a.ctx_ != b.ctx_) throw ContextError("polynomial sum across fields");
  MPoly out = a;
  for (const auto& [m, c] : b.terms_) out.add_raw(m, c);
  return out;
}

MPoly operator*(const MPoly& a, const MPoly& b) {
  if (a.ctx_ != b.ctx_) throw ContextError("polynomial product across fields");
  const auto& f = *a.ctx_;
  MPoly out(f);
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) out.add_raw(ma * mb, f.mul(ca, cb));
  }
  return out;
}

MPoly operator*(const Fel& s, const MPoly& a) {
  if (s.ctx_ptr() != a.ctx_) throw ContextError("scalar from a different field");
  MPoly out(*a.ctx_);
  for (const auto& [m, c] : a.terms_) out.add_raw(m, a.ctx_->mul(s.bits(), c));
  return out;
}

MPoly MPoly::embed(const FieldCtx& to) const {
  MPoly out(to);
  for (const auto& [m, c] : terms_) out.add_raw(m, to.embed_from(*ctx_, c));
  return out;
}

std::string MPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [m, c] : terms_) {
    if (!out.empty()) out += '+';
    if (c != 1 || m.degree() == 0) {
      out += std::to_string(c);
      if (m.degree() > 0) out += '*';
    }
    if (m.degree() > 0) out += m.to_string();
  }
  return out;
}

MPoly mpoly_mul(const MPoly& a, const MPoly& b) { return a * b; }

Fel coeff(const MPoly& a, const Monomial& m) { return a.coeff(m); }

MPoly substitute_linear(const MPoly& a, const FieldMatrix& m) {
  const auto& f = a.ctx();
  if (m.ctx_ptr() != &f) throw ContextError("substitution matrix from a different field");
  if (m.rows() != kNumVars || m.cols() != kNumVars) throw ValidationError("substitution needs a 5x5 matrix");

  std::array<MPoly, kNumVars> images{MPoly(f), MPoly(f), MPoly(f), MPoly(f), MPoly(f)};
  for (int i = 0; i < kNumVars; ++i) {
    for (int j = 0; j < kNumVars; ++j) {
      if (m.raw(i, j) != 0) images[static_cast<std::size_t>(i)].add_term(Monomial::var(static_cast<Var>(j)), m(i, j));
    }
  }
  MPoly out(f);
  for (const auto& [mono, c] : a.terms()) {
    MPoly term = MPoly::constant(f(c));
    for (std::size_t v = 0; v < kNumVars; ++v) {
      for (int e = 0; e < mono.exps[v]; ++e) term = term * images[v];
    }
    out = out + term;
  }
  return out;
}

std::array<MPoly, kNumVars> partials(const MPoly& a) {
  const auto& f = a.ctx();
  std::array<MPoly, kNumVars> out{MPoly(f), MPoly(f), MPoly(f), MPoly(f), MPoly(f)};
  for (const auto& [mono, c] : a.terms()) {
    for (std::size_t v = 0; v < kNumVars; ++v) {
      // d/dx x^e = e x^(e-1), and even e vanish in characteristic 2.
      if (mono.exps[v] % 2 == 0) continue;
      Monomial d = mono;
      d.exps[v] = static_cast<std::uint8_t>(d.exps[v] - 1);
      out[v].add_term(d, f(c));
    }
  }
  return out;
}

Fel evaluate(const MPoly& a, const Point& p) {
  const FieldCtx& to = p[0].ctx();
  for (const auto& x : p) {
    if (x.ctx_ptr() != &to) throw ContextError("point coordinates from different fields");
  }
  if (to.degree() % a.ctx().degree() != 0) {
    throw ValidationError("point field does not contain the coefficient field");
  }
  std::uint32_t acc = 0;
  for (const auto& [mono, c] : a.terms()) {
    std::uint32_t term = to.embed_from(a.ctx(), c);
    for (std::size_t v = 0; v < kNumVars; ++v) {
      for (int e = 0; e < mono.exps[v]; ++e) term = to.mul(term, p[v].bits());
    }
    acc ^= term;
  }
  return to(acc);
}

// --- QForm -------------------------------------------------------------------

namespace {

constexpr std::array<std::array<int, 2>, QForm::kTerms> kIndexPair = {{
    {0, 0}, {0, 1}, {0, 2}, {0, 3}, {0, 4}, {1, 1}, {1, 2}, {1, 3},
    {1, 4}, {2, 2}, {2, 3}, {2, 4}, {3, 3}, {3, 4}, {4, 4},
}};

}  // namespace

static_assert(QForm::index(Var::U, Var::U) == 14 && QForm::index(Var::T, Var::Y) == 7);

Monomial QForm::monomial_at(int idx) {
  const auto& pr = kIndexPair.at(static_cast<std::size_t>(idx));
  return Monomial::var(static_cast<Var>(pr[0])) * Monomial::var(static_cast<Var>(pr[1]));
}

QForm QForm::from_mpoly(const MPoly& p) {
  if (!p.is_homogeneous(2)) throw ValidationError("not a homogeneous quadratic form: " + p.to_string());
  QForm q(p.ctx());
  for (const auto& [m, c] : p.terms()) {
    int vars[2];
    int n = 0;
    for (int v = 0; v < kNumVars; ++v) {
      for (int e = 0; e < m.exps[static_cast<std::size_t>(v)]; ++e) vars[n++] = v;
    }
    q.coeffs_[static_cast<std::size_t>(index(static_cast<Var>(vars[0]), static_cast<Var>(vars[1])))] = c;
  }
  return q;
}

void QForm::set(Var i, Var j, const Fel& v) {
  if (v.ctx_ptr() != ctx_) throw ContextError("coefficient from a different field");
  coeffs_[static_cast<std::size_t>(index(i, j))] = v.bits();
}

bool QForm::is_zero() const {
  for (auto c : coeffs_) {
    if (c != 0) return false;
  }
  return true;
}

MPoly QForm::to_mpoly() const {
  MPoly p(*ctx_);
  for (int i = 0; i < kTerms; ++i) {
    if (coeffs_[static_cast<std::size_t>(i)] != 0) p.add_term(monomial_at(i), (*ctx_)(coeffs_[static_cast<std::size_t>(i)]));
  }
  return p;
}

QForm QForm::embed(const FieldCtx& to) const {
  QForm q(to);
  for (std::size_t i = 0; i < kTerms; ++i) q.coeffs_[i] = to.embed_from(*ctx_, coeffs_[i]);
  return q;
}

std::uint32_t QForm::eval_raw(const std::array<std::uint32_t, kNumVars>& p) const {
  const auto& f = *ctx_;
  std::uint32_t acc = 0;
  for (std::size_t i = 0; i < kTerms; ++i) {
    const auto c = coeffs_[i];
    if (c == 0) continue;
    const auto& pr = kIndexPair[i];
    acc ^= f.mul(c, f.mul(p[static_cast<std::size_t>(pr[0])], p[static_cast<std::size_t>(pr[1])]));
  }
  return acc;
}

QForm operator+(const QForm& a, const QForm& b) {
  if (a.ctx_ != b.ctx_) throw ContextError("quadric sum across fields");
  QForm out = a;
  for (std::size_t i = 0; i < QForm::kTerms; ++i) out.coeffs_[i] ^= b.coeffs_[i];
  return out;
}

QForm operator*(const Fel& s, const QForm& a) {
  if (s.ctx_ptr() != a.ctx_) throw ContextError("scalar from a different field");
  QForm out = a;
  for (auto& c : out.coeffs_) c = a.ctx_->mul(c, s.bits());
  return out;
}

QForm substitute_linear(const QForm& q, const FieldMatrix& m) {
  return QForm::from_mpoly(substitute_linear(q.to_mpoly(), m));
}

// --- parser --------------------------------------------------------------------

namespace {

class QuadricParser {
 public:
  QuadricParser(std::string_view text, const FieldCtx& ctx) : text_(text), ctx_(ctx) {}

  QForm run() {
    MPoly acc(ctx_);
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError("empty quadric", pos_);
    while (true) {
      acc = acc + term();
      skip_ws();
      if (pos_ >= text_.size()) break;
      if (text_[pos_] != '+') throw ParseError(std::string("unexpected '") + text_[pos_] + "'", pos_);
      ++pos_;
    }
    return QForm::from_mpoly(acc);
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  std::uint64_t number() {
    skip_ws();
    const std::size_t start = pos_;
    std::uint64_t v = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      v = v * 10 + static_cast<std::uint64_t>(text_[pos_] - '0');
      if (v > (1ull << 32)) throw ParseError("number too large", start);
      ++pos_;
    }
    if (pos_ == start) throw ParseError("expected a number", start);
    return v;
  }

  int variable() {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError("expected a variable", pos_);
    const char c = static_cast<char>(std::toupper(static_cast<unsigned char>(text_[pos_])));
    for (int v = 0; v < kNumVars; ++v) {
      if (kVarNames[static_cast<std::size_t>(v)] == c) {
        ++pos_;
        return v;
      }
    }
    throw ParseError(std::string("unknown variable '") + text_[pos_] + "'", pos_);
  }

  void factor(Monomial& m) {
    const int v = variable();
    int e = 1;
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == '^') {
      ++pos_;
      e = static_cast<int>(number());
    }
    m.exps[static_cast<std::size_t>(v)] = static_cast<std::uint8_t>(m.exps[static_cast<std::size_t>(v)] + e);
  }

  MPoly term() {
    skip_ws();
    const std::size_t start = pos_;
    std::uint32_t c = 1;
    Monomial m;
    if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      const auto v = number();
      if (v >= ctx_.size()) {
        throw ParseError("coefficient " + std::to_string(v) + " outside GF(2^" + std::to_string(ctx_.degree()) + ")",
                         start);
      }
      c = static_cast<std::uint32_t>(v);
      skip_ws();
      if (pos_ >= text_.size() || text_[pos_] != '*') throw ParseError("degree 0 term", start);
      ++pos_;
    }
    factor(m);
    while (true) {
      skip_ws();
      if (pos_ < text_.size() && text_[pos_] == '*') {
        ++pos_;
        factor(m);
      } else {
        break;
      }
    }
    if (m.degree() != 2) {
      throw ParseError("term of degree " + std::to_string(m.degree()) + ", expected 2", start);
    }
    return MPoly::monomial(ctx_(c), m);
  }

  std::string_view text_;
  const FieldCtx& ctx_;
  std::size_t pos_ = 0;
};

}  // namespace

QForm parse_quadric(std::string_view text, const FieldCtx& ctx) { return QuadricParser(text, ctx).run(); }

}  // namespace wittlab
