#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace decomp {

struct Triplet {
  std::size_t row;
  std::size_t col;
  double value;
};

/// Symmetric sparse matrix holding only its lower triangle in compressed
/// column form. Row indices within a column are strictly increasing and no
/// stored value is zero.
class SparseSymmetric {
 public:
  SparseSymmetric() = default;

  /// Entries may come from either triangle; (i, j) and (j, i) address the
  /// same stored element. Duplicates are summed, exact zeros dropped.
  static SparseSymmetric from_triplets(std::size_t n, std::span<const Triplet> triplets);

  static SparseSymmetric identity(std::size_t n);

  std::size_t size() const noexcept { return n_; }
  std::size_t nonzeros() const noexcept { return values_.size(); }

  std::span<const std::size_t> col_ptr() const noexcept { return col_ptr_; }
  std::span<const std::size_t> row_index() const noexcept { return row_index_; }
  std::span<const double> values() const noexcept { return values_; }

  double coeff(std::size_t i, std::size_t j) const;

  std::vector<double> multiply(std::span<const double> x) const;

  /// scale * A + shift * I. The diagonal is always stored in the result when
  /// shift is nonzero.
  SparseSymmetric scaled_plus_identity(double scale, double shift) const;

  std::vector<std::vector<double>> to_dense() const;

  /// Calls f(row, col, value) for every stored lower-triangle entry,
  /// column by column.
  template <class F>
  void for_each_entry(F&& f) const {
    for (std::size_t j = 0; j < n_; ++j)
      for (std::size_t p = col_ptr_[j]; p < col_ptr_[j + 1]; ++p) f(row_index_[p], j, values_[p]);
  }

  friend bool operator==(const SparseSymmetric&, const SparseSymmetric&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::size_t> col_ptr_{0};
  std::vector<std::size_t> row_index_;
  std::vector<double> values_;
};

/// x' A x.
double quad_form(const SparseSymmetric& a, std::span<const double> x);

}  // namespace decomp
