#include "wittlab/matrix.hpp"

#include <string>
#include <utility>

namespace wittlab {

FieldMatrix::FieldMatrix(const FieldCtx& ctx, int rows, int cols)
    : ctx_(&ctx), rows_(rows), cols_(cols),
      data_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), 0u) {
  if (rows < 0 || cols < 0) throw ValidationError("negative matrix dimension");
}

FieldMatrix FieldMatrix::identity(const FieldCtx& ctx, int n) {
  FieldMatrix m(ctx, n, n);
  for (int i = 0; i < n; ++i) m.set_raw(i, i, 1);
  return m;
}

FieldMatrix FieldMatrix::from_bits(const FieldCtx& ctx,
                                   const std::vector<std::vector<std::uint32_t>>& rows) {
  const int r = static_cast<int>(rows.size());
  const int c = r == 0 ? 0 : static_cast<int>(rows.front().size());
  FieldMatrix m(ctx, r, c);
  for (int i = 0; i < r; ++i) {
    if (static_cast<int>(rows[static_cast<std::size_t>(i)].size()) != c) {
      throw ValidationError("ragged matrix rows");
    }
    for (int j = 0; j < c; ++j) m.set(i, j, ctx(rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]));
  }
  return m;
}

const FieldCtx& FieldMatrix::ctx() const {
  if (ctx_ == nullptr) throw ContextError("matrix without field");
  return *ctx_;
}

std::size_t FieldMatrix::index(int r, int c) const {
  if (r < 0 || r >= rows_ || c < 0 || c >= cols_) {
    throw std::out_of_range("matrix index (" + std::to_string(r) + "," + std::to_string(c) + ")");
  }
  return static_cast<std::size_t>(r) * static_cast<std::size_t>(cols_) + static_cast<std::size_t>(c);
}

Fel FieldMatrix::operator()(int r, int c) const { return ctx()(raw(r, c)); }

void FieldMatrix::set(int r, int c, const Fel& v) {
  if (v.ctx_ptr() != ctx_) throw ContextError("matrix entry from a different field");
  set_raw(r, c, v.bits());
}

std::vector<std::vector<std::uint32_t>> FieldMatrix::to_bits() const {
  std::vector<std::vector<std::uint32_t>> out(static_cast<std::size_t>(rows_));
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < cols_; ++j) out[static_cast<std::size_t>(i)].push_back(raw(i, j));
  }
  return out;
}

bool FieldMatrix::is_zero() const {
  for (auto v : data_) {
    if (v != 0) return false;
  }
  return true;
}

FieldMatrix operator*(const FieldMatrix& a, const FieldMatrix& b) {
  if (a.ctx_ != b.ctx_) throw ContextError("matrix product across fields");
  if (a.cols_ != b.rows_) throw ValidationError("matrix shape mismatch in product");
  const auto& f = a.ctx();
  FieldMatrix out(f, a.rows_, b.cols_);
  for (int i = 0; i < a.rows_; ++i) {
    for (int j = 0; j < b.cols_; ++j) {
      std::uint32_t acc = 0;
      for (int l = 0; l < a.cols_; ++l) acc ^= f.mul(a.raw(i, l), b.raw(l, j));
      out.set_raw(i, j, acc);
    }
  }
  return out;
}

FieldMatrix operator+(const FieldMatrix& a, const FieldMatrix& b) {
  if (a.ctx_ != b.ctx_) throw ContextError("matrix sum across fields");
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw ValidationError("matrix shape mismatch in sum");
  FieldMatrix out = a;
  for (std::size_t i = 0; i < out.data_.size(); ++i) out.data_[i] ^= b.data_[i];
  return out;
}

FieldMatrix frobenius_twist(const FieldMatrix& m, unsigned j) {
  FieldMatrix out = m;
  const auto& f = m.ctx();
  for (int r = 0; r < m.rows(); ++r) {
    for (int c = 0; c < m.cols(); ++c) out.set_raw(r, c, f.frobenius(m.raw(r, c), j));
  }
  return out;
}

FieldMatrix scale(const FieldMatrix& m, const Fel& s) {
  FieldMatrix out = m;
  const auto& f = m.ctx();
  if (s.ctx_ptr() != &f) throw ContextError("scalar from a different field");
  for (int r = 0; r < m.rows(); ++r) {
    for (int c = 0; c < m.cols(); ++c) out.set_raw(r, c, f.mul(m.raw(r, c), s.bits()));
  }
  return out;
}

FieldMatrix embed(const FieldMatrix& m, const FieldCtx& to) {
  FieldMatrix out(to, m.rows(), m.cols());
  const auto& from = m.ctx();
  for (int r = 0; r < m.rows(); ++r) {
    for (int c = 0; c < m.cols(); ++c) out.set_raw(r, c, to.embed_from(from, m.raw(r, c)));
  }
  return out;
}

int row_reduce(FieldMatrix& m) {
  const auto& f = m.ctx();
  int pivot_row = 0;
  for (int col = 0; col < m.cols() && pivot_row < m.rows(); ++col) {
    int sel = -1;
    for (int r = pivot_row; r < m.rows(); ++r) {
      if (m.raw(r, col) != 0) {
        sel = r;
        break;
      }
    }
    if (sel < 0) continue;
    if (sel != pivot_row) {
      for (int c = 0; c < m.cols(); ++c) {
        const auto t = m.raw(sel, c);
        m.set_raw(sel, c, m.raw(pivot_row, c));
        m.set_raw(pivot_row, c, t);
      }
    }
    const auto inv = f.inv(m.raw(pivot_row, col));
    for (int c = 0; c < m.cols(); ++c) m.set_raw(pivot_row, c, f.mul(m.raw(pivot_row, c), inv));
    for (int r = 0; r < m.rows(); ++r) {
      if (r == pivot_row) continue;
      const auto factor = m.raw(r, col);
      if (factor == 0) continue;
      for (int c = 0; c < m.cols(); ++c) {
        m.set_raw(r, c, m.raw(r, c) ^ f.mul(factor, m.raw(pivot_row, c)));
      }
    }
    ++pivot_row;
  }
  return pivot_row;
}

int rank(FieldMatrix m) { return row_reduce(m); }

Fel determinant(FieldMatrix m) {
  if (m.rows() != m.cols()) throw ValidationError("determinant of a non-square matrix");
  const auto& f = m.ctx();
  std::uint32_t det = 1;
  const int n = m.rows();
  for (int col = 0; col < n; ++col) {
    int sel = -1;
    for (int r = col; r < n; ++r) {
      if (m.raw(r, col) != 0) {
        sel = r;
        break;
      }
    }
    if (sel < 0) return f.zero();
    if (sel != col) {
      // Row swaps change the sign, which is invisible in characteristic 2.
      for (int c = 0; c < n; ++c) {
        const auto t = m.raw(sel, c);
        m.set_raw(sel, c, m.raw(col, c));
        m.set_raw(col, c, t);
      }
    }
    const auto piv = m.raw(col, col);
    det = f.mul(det, piv);
    const auto inv = f.inv(piv);
    for (int r = col + 1; r < n; ++r) {
      const auto factor = f.mul(m.raw(r, col), inv);
      if (factor == 0) continue;
      for (int c = col; c < n; ++c) m.set_raw(r, c, m.raw(r, c) ^ f.mul(factor, m.raw(col, c)));
    }
  }
  return f(det);
}

FieldMatrix inverse(const FieldMatrix& m) {
  if (m.rows() != m.cols()) throw ValidationError("inverse of a non-square matrix");
  const int n = m.rows();
  const auto& f = m.ctx();
  FieldMatrix aug(f, n, 2 * n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) aug.set_raw(r, c, m.raw(r, c));
    aug.set_raw(r, n + r, 1);
  }
  row_reduce(aug);
  FieldMatrix out(f, n, n);
  for (int r = 0; r < n; ++r) {
    if (aug.raw(r, r) != 1) throw ArithmeticError("matrix is singular");
    for (int c = 0; c < n; ++c) out.set_raw(r, c, aug.raw(r, n + c));
  }
  return out;
}

FieldMatrix null_space(const FieldMatrix& m) {
  FieldMatrix r = m;
  const int rk = row_reduce(r);
  std::vector<int> pivot_col(static_cast<std::size_t>(rk), -1);
  std::vector<bool> is_pivot(static_cast<std::size_t>(m.cols()), false);
  for (int i = 0; i < rk; ++i) {
    for (int c = 0; c < m.cols(); ++c) {
      if (r.raw(i, c) != 0) {
        pivot_col[static_cast<std::size_t>(i)] = c;
        is_pivot[static_cast<std::size_t>(c)] = true;
        break;
      }
    }
  }
  FieldMatrix out(m.ctx(), m.cols() - rk, m.cols());
  int row = 0;
  for (int free = 0; free < m.cols(); ++free) {
    if (is_pivot[static_cast<std::size_t>(free)]) continue;
    out.set_raw(row, free, 1);
    // Characteristic 2: moving the free column across flips no signs.
    for (int i = 0; i < rk; ++i) out.set_raw(row, pivot_col[static_cast<std::size_t>(i)], r.raw(i, free));
    ++row;
  }
  return out;
}

}  // namespace wittlab
