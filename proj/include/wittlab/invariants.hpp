#pragma once

// Hasse-Witt matrix of a canonical genus-5 model, 2-rank and a-number.

#include "wittlab/curves.hpp"
#include "wittlab/matrix.hpp"

namespace wittlab {

/// 5x5 over the curve's field.
using HWMatrix = FieldMatrix;

/// H[i][j] is the coefficient of X^e in q1 q2 q3 with e = (1,1,1,1,1) - e_i + 2 e_j.
HWMatrix hasse_witt(const CurveModel& c);

/// H H^s ... H^(s^(m-1)), s entrywise squaring.
HWMatrix sigma_product(const HWMatrix& h, int m);

/// rank(sigma_product(H, 5)); throws std::logic_error if m = 6, 7 disagree.
int p_rank(const CurveModel& c);
int p_rank(const HWMatrix& h);
int a_number(const CurveModel& c);
int a_number(const HWMatrix& h);

}  // namespace wittlab
