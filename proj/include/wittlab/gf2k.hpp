#pragma once

// Arithmetic in GF(2^k), 1 <= k <= 20.
//
// Elements are stored in the power basis of the Conway polynomial of degree k:
// bit i of an element is the coefficient of x^i. Contexts are interned, one per
// degree, so a `const FieldCtx&` is valid for the lifetime of the program and
// two elements share a field exactly when they share a context pointer.

#include <array>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <vector>

#include "wittlab/error.hpp"

namespace wittlab {

inline constexpr int kMaxFieldDegree = 20;
inline constexpr int kMaxTableDegree = 16;

/// Conway polynomial of degree k over GF(2), leading bit included.
std::uint32_t conway_polynomial(int degree);

class Fel;

class FieldCtx {
 public:
  /// The interned context of degree k. Throws FieldCapError above the cap.
  static const FieldCtx& get(int degree);

  FieldCtx(const FieldCtx&) = delete;
  FieldCtx& operator=(const FieldCtx&) = delete;

  int degree() const noexcept { return degree_; }
  std::uint32_t size() const noexcept { return size_; }
  std::uint32_t modulus() const noexcept { return modulus_; }
  bool has_tables() const noexcept { return !log_.empty(); }

  Fel zero() const;
  Fel one() const;
  /// The class of x; a primitive element since Conway polynomials are primitive.
  Fel generator() const;
  /// Element from its bit pattern; throws ValidationError when bits >= 2^k.
  Fel operator()(std::uint32_t bits) const;

  // Bit-level kernel. Operands are assumed reduced (< size()).
  static std::uint32_t add(std::uint32_t a, std::uint32_t b) noexcept { return a ^ b; }
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const noexcept;
  std::uint32_t mul_schoolbook(std::uint32_t a, std::uint32_t b) const noexcept;
  std::uint32_t sqr(std::uint32_t a) const noexcept;
  std::uint32_t inv(std::uint32_t a) const;
  std::uint32_t div(std::uint32_t a, std::uint32_t b) const { return mul(a, inv(b)); }
  std::uint32_t pow(std::uint32_t a, std::uint64_t e) const noexcept;
  std::uint32_t frobenius(std::uint32_t a, unsigned j) const noexcept;
  std::uint32_t sqrt(std::uint32_t a) const noexcept;
  unsigned trace(std::uint32_t a) const noexcept;
  /// Some z with z^2 + z = c, or nullopt when Tr(c) = 1. The returned root is
  /// the smaller of the pair {z, z+1}.
  std::optional<std::uint32_t> artin_schreier_root(std::uint32_t c) const noexcept;
  /// All z with z^3 = c, ascending.
  std::vector<std::uint32_t> cube_roots(std::uint32_t c) const;
  /// All roots in this field of sum_i coeffs[i] z^i, ascending (brute force).
  std::vector<std::uint32_t> poly_roots(const std::vector<std::uint32_t>& coeffs) const;

  /// Images of x^0..x^(d-1) under the fixed embedding GF(2^d) -> this field.
  const std::vector<std::uint32_t>& embedding_basis(const FieldCtx& from) const;
  std::uint32_t embed_from(const FieldCtx& from, std::uint32_t bits) const;

 private:
  explicit FieldCtx(int degree);

  std::uint64_t discrete_log(std::uint32_t a) const;

  int degree_;
  std::uint32_t size_;
  std::uint32_t modulus_;
  std::uint32_t trace_mask_ = 0;
  std::vector<std::uint32_t> sqr_basis_;
  std::vector<std::uint32_t> sqrt_basis_;
  // Echelon basis of the image of z -> z^2 + z: pivot bit -> (image, preimage).
  std::vector<std::pair<std::uint32_t, std::uint32_t>> as_rows_;
  std::vector<std::uint32_t> log_;
  std::vector<std::uint32_t> exp_;

  mutable std::mutex embed_mutex_;
  mutable std::map<int, std::vector<std::uint32_t>> embed_cache_;
};

/// An element of a specific GF(2^k).
///
/// A default-constructed Fel is detached (no field); any arithmetic on it
/// throws ContextError.
class Fel {
 public:
  Fel() = default;
  Fel(const FieldCtx& ctx, std::uint32_t bits);

  const FieldCtx& ctx() const;
  const FieldCtx* ctx_ptr() const noexcept { return ctx_; }
  std::uint32_t bits() const noexcept { return bits_; }
  bool is_zero() const noexcept { return bits_ == 0; }
  bool is_one() const noexcept { return bits_ == 1; }
  bool attached() const noexcept { return ctx_ != nullptr; }

  Fel inv() const;
  Fel pow(std::int64_t e) const;
  Fel square() const;

  friend Fel operator+(const Fel& a, const Fel& b);
  friend Fel operator-(const Fel& a, const Fel& b) { return a + b; }
  friend Fel operator*(const Fel& a, const Fel& b);
  friend Fel operator/(const Fel& a, const Fel& b);
  Fel operator-() const { return *this; }
  Fel& operator+=(const Fel& o) { return *this = *this + o; }
  Fel& operator*=(const Fel& o) { return *this = *this * o; }

  friend bool operator==(const Fel& a, const Fel& b) noexcept {
    return a.ctx_ == b.ctx_ && a.bits_ == b.bits_;
  }
  friend bool operator<(const Fel& a, const Fel& b) noexcept { return a.bits_ < b.bits_; }

 private:
  friend class FieldCtx;
  struct Unchecked {};
  Fel(const FieldCtx* ctx, std::uint32_t bits, Unchecked) : ctx_(ctx), bits_(bits) {}

  const FieldCtx* ctx_ = nullptr;
  std::uint32_t bits_ = 0;
};

const FieldCtx& same_ctx(const Fel& a, const Fel& b);

Fel frobenius(const Fel& a, unsigned j);
unsigned trace(const Fel& a);
Fel sqrt(const Fel& a);

/// Both roots of z^2 + z = c in ascending order, or nullopt if Tr(c) = 1.
std::optional<std::array<Fel, 2>> solve_artin_schreier(const Fel& c);
std::vector<Fel> cube_roots(const Fel& c);

/// Image of `a` under the fixed embedding into `to`: the generator of the
/// source field goes to the numerically smallest root of its defining
/// polynomial in `to`. Throws ValidationError unless deg(source) | deg(to).
Fel embed(const Fel& a, const FieldCtx& to);

/// Smallest extension degree that is a multiple of both.
int common_degree(int a, int b);

}  // namespace wittlab
