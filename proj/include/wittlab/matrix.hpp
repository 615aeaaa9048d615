#pragma once

#include <cstdint>
#include <initializer_list>
#include <vector>

#include "wittlab/gf2k.hpp"

namespace wittlab {

/// Dense row-major matrix over one GF(2^k).
class FieldMatrix {
 public:
  FieldMatrix() = default;
  FieldMatrix(const FieldCtx& ctx, int rows, int cols);

  static FieldMatrix identity(const FieldCtx& ctx, int n);
  /// Rows of bit patterns; validated against the field size.
  static FieldMatrix from_bits(const FieldCtx& ctx,
                               const std::vector<std::vector<std::uint32_t>>& rows);

  const FieldCtx& ctx() const;
  const FieldCtx* ctx_ptr() const noexcept { return ctx_; }
  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }

  Fel operator()(int r, int c) const;
  void set(int r, int c, const Fel& v);
  std::uint32_t raw(int r, int c) const { return data_[index(r, c)]; }
  void set_raw(int r, int c, std::uint32_t bits) { data_[index(r, c)] = bits; }

  std::vector<std::vector<std::uint32_t>> to_bits() const;
  bool is_zero() const;

  friend FieldMatrix operator*(const FieldMatrix& a, const FieldMatrix& b);
  friend FieldMatrix operator+(const FieldMatrix& a, const FieldMatrix& b);
  friend bool operator==(const FieldMatrix& a, const FieldMatrix& b) = default;

 private:
  std::size_t index(int r, int c) const;

  const FieldCtx* ctx_ = nullptr;
  int rows_ = 0;
  int cols_ = 0;
  std::vector<std::uint32_t> data_;
};

/// Entrywise 2^j-th powers.
FieldMatrix frobenius_twist(const FieldMatrix& m, unsigned j);
FieldMatrix scale(const FieldMatrix& m, const Fel& s);
FieldMatrix embed(const FieldMatrix& m, const FieldCtx& to);

/// Reduced row echelon form in place; returns the rank.
int row_reduce(FieldMatrix& m);
int rank(FieldMatrix m);
Fel determinant(FieldMatrix m);
/// Throws ArithmeticError for singular input.
FieldMatrix inverse(const FieldMatrix& m);
/// Basis of {v : m v = 0}, one vector per row of the result.
FieldMatrix null_space(const FieldMatrix& m);

}  // namespace wittlab
