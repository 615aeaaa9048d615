#pragma once

// Projective maps fixing X^2 + YZ, automorphisms of the R family and the
// finitely many R-parameters of isomorphic curves.

#include <string>
#include <vector>

#include "wittlab/curves.hpp"

namespace wittlab {

/// An invertible 5x5 matrix modulo scalars, stored with its first nonzero
/// entry (row-major) scaled to 1.
class ProjMap {
 public:
  /// Throws ValidationError for non-square or singular input.
  explicit ProjMap(const FieldMatrix& m);
  static ProjMap identity(const FieldCtx& ctx);

  const FieldCtx& ctx() const { return m_.ctx(); }
  const FieldMatrix& matrix() const noexcept { return m_; }
  ProjMap embed(const FieldCtx& to) const;
  ProjMap inverse() const;
  bool is_identity() const;

  /// Matrix product; as substitutions, (M * N).q = N.(M.q).
  friend ProjMap operator*(const ProjMap& a, const ProjMap& b);
  friend bool operator==(const ProjMap& a, const ProjMap& b) = default;

 private:
  FieldMatrix m_;
};

ProjMap to_projmap(const StabParams& p);

/// span{M.q1, M.q2, M.q3} = span{q1, q2, q3}, over a common field.
bool preserves_curve(const ProjMap& m, const CurveModel& c);

/// U -> U + Z.
ProjMap iota(const FieldCtx& ctx);

struct EtaMap {
  ProjMap map;
  Fel g2;
  const FieldCtx* result_ctx;
};

/// T -> T + Z, U -> b3 X + g2 Z + U with g2 the smaller root of g2^2 + g2 = b8,
/// over a quadratic extension when the base field has none.
EtaMap eta(const FamilyS& s);

enum class AutClass { Order2, KleinFour, Larger };
std::string to_string(AutClass c);

struct AutGroup {
  int order = 0;
  /// Stabilizer parameters with d = h1 = i2 = 1, identity first.
  std::vector<StabParams> elements;
  AutClass classification = AutClass::Order2;
  const FieldCtx* ctx = nullptr;

  std::vector<ProjMap> maps() const;
  /// A small generating set, picked greedily from `elements`.
  std::vector<ProjMap> generators() const;
};

/// Every automorphism of the R-model, over the smallest field of degree a
/// multiple of lcm(k, 2) holding all the roots involved. Throws FieldCapError.
AutGroup automorphisms_R(const FamilyR& r);

struct IsoParams {
  const FieldCtx* ctx = nullptr;
  /// Sorted by (b2, b3, b6, b8) bits, without repeats.
  std::vector<FamilyR> params;
};

/// The R-parameters of curves isomorphic to r through the cone stabilizer.
IsoParams isomorphic_params(const FamilyR& r);

}  // namespace wittlab
