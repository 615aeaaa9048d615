#pragma once

// Point enumeration on curves lying on the cone X^2 + YZ = 0.
//
// On Z = 1 the cone forces Y = X^2, so a point is fixed by (X, T, U); q3 is a
// quadratic in U with constant leading coefficient. When some member of the
// span is free of U (every family here), it is a quadratic in T for each X and
// the whole chart costs O(q) root solves. On Z = 0 the cone forces X = 0 and
// the rest is a plane conic problem handled by direct iteration.

#include <array>
#include <cstdint>
#include <functional>
#include <optional>

#include "wittlab/curves.hpp"

namespace wittlab {

using RawPoint = std::array<std::uint32_t, kNumVars>;

/// Roots of a w^2 + b w + c over f. Returns the number of roots (0, 1 or 2)
/// and writes them ascending into `out`; returns -1 when a = b = c = 0.
int quadratic_roots(const FieldCtx& f, std::uint32_t a, std::uint32_t b, std::uint32_t c,
                    std::array<std::uint32_t, 2>& out);
/// Same count without computing the roots.
int quadratic_root_count(const FieldCtx& f, std::uint32_t a, std::uint32_t b, std::uint32_t c);

class ConeEnumerator {
 public:
  /// Points over GF(2^(k m)), k the curve's degree. Throws FieldCapError above
  /// the cap and ValidationError when the span has no X^2 + YZ member or no
  /// member with a U^2 term.
  ConeEnumerator(const CurveModel& c, int m);

  const FieldCtx& field() const { return *field_; }
  std::uint64_t count(int workers = 1) const;
  /// All points in a fixed chart order (Z = 1 by increasing X, then Z = 0).
  /// The visitor returns false to stop early; visit then returns false.
  bool visit(const std::function<bool(const RawPoint&)>& visitor) const;
  /// First point in chart order satisfying pred; chunks of the Z = 1 chart are
  /// searched in parallel, the answer does not depend on `workers`.
  std::optional<RawPoint> find_first(const std::function<bool(const RawPoint&)>& pred,
                                     int workers = 1) const;

 private:
  template <typename Sink>
  bool run_slice(std::uint32_t x_lo, std::uint32_t x_hi, Sink& sink) const;
  template <typename Sink>
  bool run_z0(Sink& sink) const;

  const FieldCtx* field_;
  // q2 has no U^2 term; q3 has U^2 coefficient 1.
  QForm q2_;
  QForm q3_;
  bool q2_u_free_ = false;
};

}  // namespace wittlab
