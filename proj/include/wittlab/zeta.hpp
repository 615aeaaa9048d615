#pragma once

// Point counts, L-polynomials and Newton polygons.

#include <cstdint>
#include <string>
#include <vector>

#include "wittlab/curves.hpp"

namespace wittlab {

using Int128 = __int128;

std::string to_string(Int128 v);

/// N_m = #C(GF(q^m)) for m = 1..counts.size(), q = 2^k.
struct CountVector {
  int k = 1;
  std::vector<std::uint64_t> counts;

  std::uint64_t q() const { return std::uint64_t{1} << k; }
  void validate() const;
};

/// Points over GF(2^(k m)), k the curve's field degree, by fiber enumeration
/// over the cone. Throws FieldCapError beyond the cap and ValidationError when
/// the span has no X^2 + YZ member or no U^2 term.
std::uint64_t count_points(const CurveModel& c, int m, int workers = 1);
CountVector count_vector(const CurveModel& c, int m_max, int workers = 1);

inline constexpr std::uint64_t kNaiveBudget = 32;

/// Every point of P^4 tested against all three quadrics. Throws BudgetError
/// when q^m exceeds `budget`.
std::uint64_t count_points_naive(const CurveModel& c, int m, std::uint64_t budget = kNaiveBudget);

/// 1 + c_1 t + ... + c_{2g} t^{2g} over GF(2^k).
struct LPoly {
  int genus = 0;
  int k = 1;
  std::vector<Int128> c;

  Int128 q() const { return Int128{1} << k; }
  friend bool operator==(const LPoly&, const LPoly&) = default;
  std::vector<std::string> coefficient_strings() const;
  std::string to_string() const;
};

/// Newton's identities for c_1..c_g, the functional equation for the rest.
/// Counts beyond g are checked against the result. Throws
/// InconsistentCountsError on non-integral or contradictory data and
/// ArithmeticError on 128-bit overflow.
LPoly l_polynomial(const CountVector& counts, int genus);

/// Power sums s_m = sum of the m-th powers of the inverse roots, m = 1..n.
std::vector<Int128> power_sums(const LPoly& l, int n);
/// N_m = q^m + 1 - s_m for m = 1..n.
std::vector<std::uint64_t> counts_from_lpoly(const LPoly& l, int n);
/// The L-polynomial of the same curve over GF(2^(k r)).
LPoly base_change(const LPoly& l, int r);

struct Slope {
  std::int64_t num = 0;
  std::int64_t den = 1;
  int multiplicity = 0;

  std::string to_string() const;
  friend bool operator==(const Slope&, const Slope&) = default;
};

/// Slopes ascending, valuation normalized so v(q) = 1.
struct NewtonPolygon {
  std::vector<Slope> slopes;

  int total_multiplicity() const;
  int multiplicity_of(std::int64_t num, std::int64_t den) const;
  /// "1/3x3;1/2x4;2/3x3"
  std::string to_string() const;
  friend bool operator==(const NewtonPolygon&, const NewtonPolygon&) = default;
};

NewtonPolygon newton_polygon(const LPoly& l);
bool is_supersingular(const NewtonPolygon& np);

/// Points of the smooth model of y^2 + y = F(x) over GF(2^(k m)), the point at
/// infinity included; coefficients constant first, deg F must be 3 or 5.
std::uint64_t count_artin_schreier_plane(const std::vector<Fel>& f, int m);

}  // namespace wittlab
