#pragma once

// Genus-5 curve models on the cone X^2 + YZ = 0 in P^4 and the nested
// parameter families built on it.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "wittlab/gf2k.hpp"
#include "wittlab/matrix.hpp"
#include "wittlab/poly.hpp"

namespace wittlab {

/// Three quadrics cutting out a curve. The quadrics must be linearly
/// independent; they need not be normalized.
class CurveModel {
 public:
  CurveModel(QForm q1, QForm q2, QForm q3);

  const FieldCtx& ctx() const { return q1_.ctx(); }
  const QForm& q1() const noexcept { return q1_; }
  const QForm& q2() const noexcept { return q2_; }
  const QForm& q3() const noexcept { return q3_; }
  std::array<QForm, 3> quadrics() const { return {q1_, q2_, q3_}; }

  /// Same quadrics with coefficients pushed into an extension field.
  CurveModel embed(const FieldCtx& to) const;
  std::string to_string() const;

 private:
  QForm q1_, q2_, q3_;
};

/// X^2 + YZ over the given field.
QForm cone_quadric(const FieldCtx& ctx);

/// 3 x 15 coefficient matrix of the quadrics (rows in order).
FieldMatrix quadric_matrix(const std::vector<QForm>& qs);
/// True when both triples span the same 3-dimensional space of quadrics.
bool same_span(const std::array<QForm, 3>& a, const std::array<QForm, 3>& b);

/// The general quadrics: q2 = a1 XY + ... + a8 ZT + T^2 and
/// q3 = b1 XY + ... + b12 TU + U^2; indices are 1-based.
struct FamilyGeneral {
  explicit FamilyGeneral(const FieldCtx& ctx);

  const FieldCtx& ctx() const { return *field; }
  Fel& a(int i) { return as.at(static_cast<std::size_t>(i - 1)); }
  const Fel& a(int i) const { return as.at(static_cast<std::size_t>(i - 1)); }
  Fel& b(int j) { return bs.at(static_cast<std::size_t>(j - 1)); }
  const Fel& b(int j) const { return bs.at(static_cast<std::size_t>(j - 1)); }
  void validate() const;

  friend bool operator==(const FamilyGeneral&, const FamilyGeneral&) = default;

  const FieldCtx* field;
  std::array<Fel, 8> as;
  std::array<Fel, 12> bs;
};

/// q2 = XY + a3 XT + ZT + T^2, q3 = b2 XZ + b3 XT + b6 YT + b8 ZT + b9 XU +
/// b10 YU + b11 ZU + b12 TU + U^2.
struct FamilyNF {
  explicit FamilyNF(const FieldCtx& ctx);

  const FieldCtx& ctx() const { return *field; }
  void validate() const;
  FamilyGeneral to_general() const;
  friend bool operator==(const FamilyNF&, const FamilyNF&) = default;

  const FieldCtx* field;
  Fel a3, b2, b3, b6, b8, b9, b10, b11, b12;
};

/// q3 = b2 XZ + b3 XT + b6 YT + b8 ZT + ZU + U^2 with b6 != 0.
struct FamilyR {
  FamilyR(Fel b2, Fel b3, Fel b6, Fel b8);
  const FieldCtx& ctx() const { return b2.ctx(); }
  FamilyNF to_nf() const;
  FamilyR embed(const FieldCtx& to) const;
  friend bool operator==(const FamilyR&, const FamilyR&) = default;

  Fel b2, b3, b6, b8;
};

/// q3 = b2 XZ + b6 YT + b8 ZT + U^2 with b2, b6 != 0.
struct FamilyRres {
  FamilyRres(Fel b2, Fel b6, Fel b8);
  const FieldCtx& ctx() const { return b2.ctx(); }
  FamilyNF to_nf() const;

  Fel b2, b6, b8;
};

/// FamilyR with b6 = b3^2, b3 != 0.
struct FamilyS {
  FamilyS(Fel b2, Fel b3, Fel b8);
  const FieldCtx& ctx() const { return b2.ctx(); }
  FamilyR to_r() const;
  FamilyS embed(const FieldCtx& to) const;
  friend bool operator==(const FamilyS&, const FamilyS&) = default;

  Fel b2, b3, b8;
};

CurveModel to_curve(const FamilyGeneral& g);
CurveModel to_curve(const FamilyNF& nf);
CurveModel to_curve(const FamilyR& r);
CurveModel to_curve(const FamilyRres& r);
CurveModel to_curve(const FamilyS& s);

/// The canonical general-shaped generators of the span of the curve's quadrics:
/// q2 is the U-free member with no X^2 term and T^2 coefficient 1, q3 the
/// remaining direction with no X^2 or T^2 term and U^2 coefficient 1. Throws
/// ValidationError when the span does not contain X^2 + YZ or lacks that shape.
FamilyGeneral to_general_form(const CurveModel& c);
/// NF-shaped reading of a general record; nullopt if any non-NF coefficient
/// is nonzero or a1, a8 differ from 1.
std::optional<FamilyNF> as_nf(const FamilyGeneral& g);
std::optional<FamilyR> as_r(const FamilyGeneral& g);

/// Rank of the 3 x 5 Jacobian at P (coordinates in a field containing the
/// curve's). Throws ValidationError when P is not on the curve.
int jacobian_rank_at(const CurveModel& c, const Point& p);

struct SmoothnessVerdict {
  bool singular = false;
  int n_max = 0;
  /// Field multiplier m of the residue field GF(2^(k m)) where a singular point
  /// was found; 0 for symbolic verdicts.
  int degree = 0;
  /// Coordinates (bits over GF(2^(k degree))) of the singular point.
  std::array<std::uint32_t, kNumVars> point{};
  std::string reason;
};

/// Bounded search for singular points over GF(2^(k m)), m = 1..n_max, after
/// the symbolic conditions for 2-rank-0 normal forms. Throws FieldCapError when
/// n_max * k > 20.
SmoothnessVerdict smoothness_scan(const CurveModel& c, int n_max, int workers = 1);
SmoothnessVerdict smoothness_scan(const FamilyNF& nf, int n_max, int workers = 1);

/// The PGL_5 stabilizer of X^2 + YZ as 14 parameters.
struct StabParams {
  explicit StabParams(const FieldCtx& ctx);
  static StabParams identity(const FieldCtx& ctx);

  const FieldCtx& ctx() const { return a.ctx(); }
  /// ad - bc != 0 and h1 i2 - i1 h2 != 0.
  bool valid() const;
  StabParams embed(const FieldCtx& to) const;
  friend bool operator==(const StabParams&, const StabParams&) = default;

  Fel a, b, c, d, e1, f1, g1, h1, i1, e2, f2, g2, h2, i2;
};

FieldMatrix stabilizer_matrix(const StabParams& p);

/// M.q for each quadric of the curve (M embedded into a common field).
CurveModel transform(const CurveModel& c, const FieldMatrix& m);

struct Reduction {
  FamilyNF nf;
  FieldMatrix transform;
  const FieldCtx* result_ctx;
};

/// Normal form reduction. The transform M satisfies
/// span{M.q1, M.q2, M.q3} = span of the normal form's quadrics, over the
/// smallest GF(2^(k m)), m >= 1, in which every solve succeeds.
Reduction reduce_to_normal_form(const FamilyGeneral& g);

}  // namespace wittlab
