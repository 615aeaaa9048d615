#pragma once

// Sparse polynomials in the five projective coordinates X, Y, Z, T, U.

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>

#include "wittlab/gf2k.hpp"
#include "wittlab/matrix.hpp"

namespace wittlab {

inline constexpr int kNumVars = 5;
enum class Var : int { X = 0, Y = 1, Z = 2, T = 3, U = 4 };
inline constexpr std::array<char, kNumVars> kVarNames = {'X', 'Y', 'Z', 'T', 'U'};

using Point = std::array<Fel, kNumVars>;

struct Monomial {
  std::array<std::uint8_t, kNumVars> exps{};

  static Monomial var(Var v);
  static Monomial of(int x, int y, int z, int t, int u);

  int degree() const;
  friend Monomial operator*(const Monomial& a, const Monomial& b);
  friend bool operator==(const Monomial&, const Monomial&) = default;
  std::string to_string() const;
};

/// Graded order: lower total degree first; within a degree, higher powers of
/// earlier variables first (X^2 < XY < ... < U^2).
struct GradedLexLess {
  bool operator()(const Monomial& a, const Monomial& b) const;
};

class MPoly {
 public:
  using Terms = std::map<Monomial, std::uint32_t, GradedLexLess>;

  explicit MPoly(const FieldCtx& ctx) : ctx_(&ctx) {}
  static MPoly constant(const Fel& c);
  static MPoly variable(const FieldCtx& ctx, Var v);
  static MPoly monomial(const Fel& c, const Monomial& m);

  const FieldCtx& ctx() const { return *ctx_; }
  const Terms& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  std::size_t size() const noexcept { return terms_.size(); }
  /// Degree of the highest term; -1 for the zero polynomial.
  int degree() const;
  bool is_homogeneous(int d) const;

  Fel coeff(const Monomial& m) const;
  void add_term(const Monomial& m, const Fel& c);

  friend MPoly operator+(const MPoly& a, const MPoly& b);
  friend MPoly operator*(const MPoly& a, const MPoly& b);
  friend MPoly operator*(const Fel& s, const MPoly& a);
  friend bool operator==(const MPoly& a, const MPoly& b) {
    return a.ctx_ == b.ctx_ && a.terms_ == b.terms_;
  }

  /// Coefficients mapped into a field containing this one.
  MPoly embed(const FieldCtx& to) const;
  std::string to_string() const;

 private:
  void add_raw(const Monomial& m, std::uint32_t c);

  const FieldCtx* ctx_;
  Terms terms_;
};

MPoly mpoly_mul(const MPoly& a, const MPoly& b);
Fel coeff(const MPoly& a, const Monomial& m);

/// a(M v): each variable is replaced by the matching row of M applied to
/// (X, Y, Z, T, U). Composition: substitute_linear(substitute_linear(a, M), N)
/// equals substitute_linear(a, M * N).
MPoly substitute_linear(const MPoly& a, const FieldMatrix& m);
std::array<MPoly, kNumVars> partials(const MPoly& a);
/// Evaluation at a point whose field contains the coefficient field.
Fel evaluate(const MPoly& a, const Point& p);

/// A homogeneous quadratic form, coefficients indexed by the 15 degree-2
/// monomials in graded order (X^2, XY, XZ, XT, XU, Y^2, YZ, ..., TU, U^2).
class QForm {
 public:
  static constexpr int kTerms = 15;

  explicit QForm(const FieldCtx& ctx) : ctx_(&ctx) {}
  static QForm from_mpoly(const MPoly& p);

  /// Position of x_i x_j in the coefficient vector (symmetric in i, j).
  static constexpr int index(Var i, Var j) {
    int a = static_cast<int>(i), b = static_cast<int>(j);
    if (a > b) std::swap(a, b);
    // rows of the upper triangle have lengths 5, 4, 3, 2, 1
    return a * kNumVars - a * (a - 1) / 2 + (b - a);
  }
  static Monomial monomial_at(int idx);

  const FieldCtx& ctx() const { return *ctx_; }
  Fel coeff(Var i, Var j) const { return (*ctx_)(coeffs_[static_cast<std::size_t>(index(i, j))]); }
  void set(Var i, Var j, const Fel& v);
  std::uint32_t raw(int idx) const { return coeffs_[static_cast<std::size_t>(idx)]; }
  void set_raw(int idx, std::uint32_t bits) { coeffs_[static_cast<std::size_t>(idx)] = bits; }
  const std::array<std::uint32_t, kTerms>& raw_coeffs() const noexcept { return coeffs_; }
  bool is_zero() const;

  MPoly to_mpoly() const;
  QForm embed(const FieldCtx& to) const;
  /// Raw evaluation; the point's coordinates must already live in ctx().
  std::uint32_t eval_raw(const std::array<std::uint32_t, kNumVars>& p) const;
  std::string to_string() const { return to_mpoly().to_string(); }

  friend QForm operator+(const QForm& a, const QForm& b);
  friend QForm operator*(const Fel& s, const QForm& a);
  friend bool operator==(const QForm& a, const QForm& b) = default;

 private:
  const FieldCtx* ctx_;
  std::array<std::uint32_t, kTerms> coeffs_{};
};

QForm substitute_linear(const QForm& q, const FieldMatrix& m);

/// Parses `[coeff*]VAR[^e][*VAR[^e]]...` terms joined by `+`. Whitespace is
/// ignored; coefficients are decimal element bit patterns; each term must have
/// total degree 2.
QForm parse_quadric(std::string_view text, const FieldCtx& ctx);

}  // namespace wittlab
