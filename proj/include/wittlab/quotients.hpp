#pragma once

// Quotients of S-members by iota, eta and iota*eta, and the splitting of
// L_C into the three quotient factors.

#include <string>
#include <vector>

#include "wittlab/curves.hpp"
#include "wittlab/zeta.hpp"

namespace wittlab {

/// y^2 + y = x^3.
struct EllipticModel {
  /// Coefficients of x^3, constant first.
  std::vector<Fel> coefficients(const FieldCtx& ctx) const;
  std::string to_string() const { return "y^2+y=x^3"; }
};

/// y^2 + y = F(x) with deg F = 5.
struct Genus2Model {
  const FieldCtx* ctx = nullptr;
  /// Constant first, six entries.
  std::vector<Fel> f;

  std::string to_string() const;
};

EllipticModel quotient_iota(const FamilyS& s);

enum class EtaWhich { Eta, IotaEta };

struct EtaQuotient {
  Genus2Model model;
  /// The root of g2^2 + g2 = b8 the quotient was built from.
  Fel g2;
  const FieldCtx* result_ctx = nullptr;
  /// Coefficients of x^-1 and x^-2 in the Laurent form before absorption.
  Fel c_minus1, c_minus2;
};

/// Throws ValidationError if b3 = 0, FieldCapError if g2 needs a field past the cap.
EtaQuotient quotient_eta(const FamilyS& s, EtaWhich which);

struct Decomposition {
  const FieldCtx* ctx = nullptr;
  LPoly curve, elliptic, eta, iota_eta;
  bool ok = false;
};

/// L-polynomials of C and of its three quotients, all over the field holding g2.
/// Throws ValidationError when the scan finds C singular.
Decomposition decompose(const FamilyS& s, int workers = 1);

/// true iff L_C = L_E * L_D1 * L_D2.
bool decomposition_check(const FamilyS& s, int workers = 1);

/// Product of integer polynomials, checked for overflow.
std::vector<Int128> lpoly_product(const std::vector<std::vector<Int128>>& factors);

}  // namespace wittlab
