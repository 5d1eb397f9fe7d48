#pragma once

// Column-compressed sparse matrix with exact entries.

#include <algorithm>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "ybh/common.hpp"

namespace ybh {

template <class T>
struct SparseEntry {
  std::uint32_t row;
  T value;

  friend bool operator==(const SparseEntry&, const SparseEntry&) = default;
};

/// Sort by row, merge duplicates and drop zeros in place.
template <class T>
void normalize_entries(std::vector<SparseEntry<T>>& entries) {
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) { return a.row < b.row; });
  std::size_t out = 0;
  for (std::size_t i = 0; i < entries.size();) {
    const auto row = entries[i].row;
    T sum = entries[i].value;
    std::size_t j = i + 1;
    for (; j < entries.size() && entries[j].row == row; ++j) sum += entries[j].value;
    if (sum != T{}) entries[out++] = SparseEntry<T>{row, sum};
    i = j;
  }
  entries.resize(out);
}

/// Compressed sparse column storage. Invariant: within a column rows are
/// strictly increasing and no stored value is zero.
template <class T>
class SparseMatrix {
 public:
  using Entry = SparseEntry<T>;

  SparseMatrix() = default;
  SparseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), col_ptr_(cols + 1, 0) {}

  /// Build from per-column entry lists (normalized on the way in).
  static SparseMatrix from_columns(std::size_t rows, std::vector<std::vector<Entry>> columns) {
    SparseMatrix a(rows, columns.size());
    std::size_t nnz = 0;
    for (auto& c : columns) {
      normalize_entries(c);
      nnz += c.size();
    }
    a.entries_.reserve(nnz);
    for (std::size_t j = 0; j < columns.size(); ++j) {
      for (const auto& e : columns[j]) {
        if (e.row >= rows) throw Error("sparse entry row out of range");
        a.entries_.push_back(e);
      }
      a.col_ptr_[j + 1] = a.entries_.size();
    }
    return a;
  }

  /// Build from (row, col, value) triplets; duplicates are summed.
  static SparseMatrix from_triplets(std::size_t rows, std::size_t cols,
                                    const std::vector<std::tuple<std::size_t, std::size_t, T>>& triplets) {
    std::vector<std::vector<Entry>> columns(cols);
    for (const auto& [r, c, v] : triplets) {
      if (r >= rows || c >= cols) throw Error("triplet index out of range");
      columns[c].push_back(Entry{static_cast<std::uint32_t>(r), v});
    }
    return from_columns(rows, std::move(columns));
  }

  /// Concatenate independently built column blocks (in order).
  static SparseMatrix concat_columns(std::size_t rows, std::vector<SparseMatrix> blocks) {
    std::size_t cols = 0, nnz = 0;
    for (const auto& b : blocks) {
      cols += b.cols();
      nnz += b.nnz();
    }
    SparseMatrix a(rows, cols);
    a.entries_.reserve(nnz);
    std::size_t j = 0;
    for (const auto& b : blocks) {
      for (std::size_t k = 0; k < b.cols(); ++k, ++j) {
        const auto col = b.column(k);
        a.entries_.insert(a.entries_.end(), col.begin(), col.end());
        a.col_ptr_[j + 1] = a.entries_.size();
      }
    }
    return a;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t nnz() const { return entries_.size(); }

  std::span<const Entry> column(std::size_t j) const {
    return std::span<const Entry>(entries_).subspan(col_ptr_[j], col_ptr_[j + 1] - col_ptr_[j]);
  }

  T at(std::size_t r, std::size_t c) const {
    for (const auto& e : column(c))
      if (e.row == r) return e.value;
    return T{};
  }

  SparseMatrix transpose() const {
    std::vector<std::vector<Entry>> columns(rows_);
    for (std::size_t j = 0; j < cols_; ++j)
      for (const auto& e : column(j)) columns[e.row].push_back(Entry{static_cast<std::uint32_t>(j), e.value});
    return from_columns(cols_, std::move(columns));
  }

  /// Row-major dense copy.
  std::vector<std::vector<T>> to_dense() const {
    std::vector<std::vector<T>> d(rows_, std::vector<T>(cols_, T{}));
    for (std::size_t j = 0; j < cols_; ++j)
      for (const auto& e : column(j)) d[e.row][j] = e.value;
    return d;
  }

  static SparseMatrix from_dense(const std::vector<std::vector<T>>& d, std::size_t cols) {
    std::vector<std::vector<Entry>> columns(cols);
    for (std::size_t i = 0; i < d.size(); ++i)
      for (std::size_t j = 0; j < cols; ++j)
        if (d[i][j] != T{}) columns[j].push_back(Entry{static_cast<std::uint32_t>(i), d[i][j]});
    return from_columns(d.size(), std::move(columns));
  }

  friend bool operator==(const SparseMatrix&, const SparseMatrix&) = default;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<std::size_t> col_ptr_{0};
  std::vector<Entry> entries_;
};

using SparseIntMatrix = SparseMatrix<std::int64_t>;

/// Dump format: "rows cols nnz" then one "r c v" line per entry, 0-based.
template <class T>
void write_matrix(std::ostream& out, const SparseMatrix<T>& a) {
  out << a.rows() << ' ' << a.cols() << ' ' << a.nnz() << '\n';
  for (std::size_t j = 0; j < a.cols(); ++j)
    for (const auto& e : a.column(j)) out << e.row << ' ' << j << ' ' << e.value << '\n';
}

inline SparseIntMatrix read_matrix(std::istream& in) {
  std::size_t rows = 0, cols = 0, nnz = 0;
  if (!(in >> rows >> cols >> nnz)) throw ParseError("bad matrix header");
  std::vector<std::tuple<std::size_t, std::size_t, std::int64_t>> t;
  t.reserve(nnz);
  for (std::size_t k = 0; k < nnz; ++k) {
    std::size_t r = 0, c = 0;
    std::int64_t v = 0;
    if (!(in >> r >> c >> v)) throw ParseError("truncated matrix entry list");
    if (r >= rows || c >= cols) throw ParseError("matrix entry index out of range");
    t.emplace_back(r, c, v);
  }
  return SparseIntMatrix::from_triplets(rows, cols, t);
}

}  // namespace ybh
