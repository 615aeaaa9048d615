#include "wittlab/invariants.hpp"

#include <stdexcept>

#include "wittlab/error.hpp"

namespace wittlab {

HWMatrix hasse_witt(const CurveModel& c) {
  const auto& f = c.ctx();
  const auto& q = c.quadrics();
  const MPoly prod = q[0].to_mpoly() * q[1].to_mpoly() * q[2].to_mpoly();
  HWMatrix h(f, kNumVars, kNumVars);
  for (int i = 0; i < kNumVars; ++i) {
    for (int j = 0; j < kNumVars; ++j) {
      std::array<int, kNumVars> e = {1, 1, 1, 1, 1};
      e[static_cast<std::size_t>(i)] -= 1;
      e[static_cast<std::size_t>(j)] += 2;
      h.set(i, j, prod.coeff(Monomial::of(e[0], e[1], e[2], e[3], e[4])));
    }
  }
  return h;
}

HWMatrix sigma_product(const HWMatrix& h, int m) {
  if (m < 1) throw ValidationError("sigma_product needs m >= 1");
  HWMatrix out = h;
  for (int j = 1; j < m; ++j) out = out * frobenius_twist(h, static_cast<unsigned>(j));
  return out;
}

int p_rank(const HWMatrix& h) {
  const int r = rank(sigma_product(h, 5));
  for (int m = 6; m <= 7; ++m) {
    if (rank(sigma_product(h, m)) != r) throw std::logic_error("sigma product rank not stable at 5 factors");
  }
  return r;
}

int p_rank(const CurveModel& c) { return p_rank(hasse_witt(c)); }

int a_number(const HWMatrix& h) { return kNumVars - rank(h); }

int a_number(const CurveModel& c) { return a_number(hasse_witt(c)); }

}  // namespace wittlab
