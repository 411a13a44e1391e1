#pragma once

#include <cstddef>
#include <vector>

#include "dualhash/bitvector.hpp"

namespace dualhash {

// Dense row-major matrix over F2, meant for verification-scale instances.
class BitMatrix {
 public:
  static constexpr std::size_t max_entries = std::size_t{1} << 24;

  BitMatrix() = default;
  BitMatrix(std::size_t rows, std::size_t cols) : cols_(cols) {
    if (rows * cols > max_entries) throw dimension_error("BitMatrix: rows*cols exceeds 2^24");
    rows_.assign(rows, BitVector(cols));
  }

  static BitMatrix identity(std::size_t n) {
    BitMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i);
    return m;
  }

  static BitMatrix from_rows(std::vector<BitVector> rows, std::size_t cols) {
    BitMatrix m(0, cols);
    for (const auto& r : rows)
      if (r.size() != cols) throw dimension_error("from_rows: ragged rows");
    m.rows_ = std::move(rows);
    return m;
  }

  // Matrix whose j-th column is columns[j].
  static BitMatrix from_columns(const std::vector<BitVector>& columns, std::size_t rows) {
    BitMatrix m(rows, columns.size());
    for (std::size_t j = 0; j < columns.size(); ++j) {
      if (columns[j].size() != rows) throw dimension_error("from_columns: ragged columns");
      for (std::size_t i = 0; i < rows; ++i)
        if (columns[j].get(i)) m.set(i, j);
    }
    return m;
  }

  std::size_t rows() const { return rows_.size(); }
  std::size_t cols() const { return cols_; }

  bool get(std::size_t i, std::size_t j) const { return rows_[i].get(j); }
  void set(std::size_t i, std::size_t j, bool b = true) { rows_[i].set(j, b); }
  const BitVector& row(std::size_t i) const { return rows_[i]; }
  BitVector& row(std::size_t i) { return rows_[i]; }

  friend bool operator==(const BitMatrix&, const BitMatrix&) = default;

  BitMatrix transpose() const {
    BitMatrix t(cols_, rows());
    for (std::size_t i = 0; i < rows(); ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        if (get(i, j)) t.set(j, i);
    return t;
  }

  bool is_zero() const {
    for (const auto& r : rows_)
      if (!r.is_zero()) return false;
    return true;
  }

  // (A | B)
  static BitMatrix hstack(const BitMatrix& a, const BitMatrix& b) {
    if (a.rows() != b.rows()) throw dimension_error("hstack: row count mismatch");
    BitMatrix out(0, a.cols_ + b.cols_);
    out.rows_.reserve(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) out.rows_.push_back(BitVector::concat(a.rows_[i], b.rows_[i]));
    return out;
  }

  static BitMatrix vstack(const BitMatrix& a, const BitMatrix& b) {
    if (a.cols_ != b.cols_) throw dimension_error("vstack: column count mismatch");
    BitMatrix out = a;
    out.rows_.insert(out.rows_.end(), b.rows_.begin(), b.rows_.end());
    return out;
  }

  friend BitMatrix operator*(const BitMatrix& a, const BitMatrix& b) {
    if (a.cols_ != b.rows()) throw dimension_error("matrix product: inner dimension mismatch");
    BitMatrix out(a.rows(), b.cols_);
    for (std::size_t i = 0; i < a.rows(); ++i)
      for (std::size_t k = 0; k < a.cols_; ++k)
        if (a.get(i, k)) out.rows_[i] ^= b.rows_[k];
    return out;
  }

  // Row-reduce a copy; returns the rank.
  std::size_t rank() const {
    auto work = rows_;
    return eliminate(work, cols_).size();
  }

  // Basis (as rows) of {x : M x = 0}.
  BitMatrix null_space() const {
    auto work = rows_;
    const auto pivots = eliminate(work, cols_);
    std::vector<bool> is_pivot(cols_, false);
    for (auto p : pivots) is_pivot[p] = true;
    std::vector<BitVector> basis;
    for (std::size_t free = 0; free < cols_; ++free) {
      if (is_pivot[free]) continue;
      BitVector v(cols_);
      v.set(free);
      for (std::size_t r = 0; r < pivots.size(); ++r)
        if (work[r].get(free)) v.set(pivots[r]);
      basis.push_back(std::move(v));
    }
    return from_rows(std::move(basis), cols_);
  }

 private:
  // Reduced row echelon form in place; returns pivot column per nonzero row.
  static std::vector<std::size_t> eliminate(std::vector<BitVector>& rows, std::size_t cols) {
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
      std::size_t p = r;
      while (p < rows.size() && !rows[p].get(c)) ++p;
      if (p == rows.size()) continue;
      std::swap(rows[r], rows[p]);
      for (std::size_t i = 0; i < rows.size(); ++i)
        if (i != r && rows[i].get(c)) rows[i] ^= rows[r];
      pivots.push_back(c);
      ++r;
    }
    rows.resize(r);
    return pivots;
  }

  std::size_t cols_ = 0;
  std::vector<BitVector> rows_;
};

// y_i = XOR_j M_ij x_j
inline BitVector dense_mul(const BitMatrix& m, const BitVector& x) {
  if (m.cols() != x.size()) throw dimension_error("dense_mul: matrix columns != vector length");
  BitVector y(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    if (dot(m.row(i), x)) y.set(i);
  return y;
}

}  // namespace dualhash
