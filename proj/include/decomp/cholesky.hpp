#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "decomp/random.hpp"
#include "decomp/sparse_symmetric.hpp"

namespace decomp {

/// Fill-reducing ordering and the nonzero pattern of the factor. Depends only
/// on the sparsity pattern, so one analysis serves every matrix sharing it
/// (e.g. kappa_u R + kappa_v I for all kappa values).
class SymbolicCholesky {
 public:
  /// Minimum-degree ordering, ties broken by lowest index.
  static std::shared_ptr<const SymbolicCholesky> analyze(const SparseSymmetric& pattern);

  std::size_t size() const noexcept { return perm_.size(); }

  /// perm()[k] is the original index placed at position k.
  std::span<const std::size_t> perm() const noexcept { return perm_; }
  std::span<const std::size_t> inverse_perm() const noexcept { return iperm_; }

  std::size_t factor_nonzeros() const noexcept { return row_index_.size(); }

 private:
  friend class CholeskyFactor;

  std::vector<std::size_t> perm_;
  std::vector<std::size_t> iperm_;
  // Pattern of L in permuted indexing, diagonal first in each column.
  std::vector<std::size_t> col_ptr_;
  std::vector<std::size_t> row_index_;
  // For each row k, the columns j < k with L(k, j) structurally nonzero.
  std::vector<std::size_t> row_ptr_;
  std::vector<std::size_t> row_cols_;
};

/// P A P' = L L'. Immutable; concurrent solves are safe.
class CholeskyFactor {
 public:
  /// Analyzes and factorizes. Throws NotPositiveDefinite on a non-positive
  /// pivot.
  explicit CholeskyFactor(const SparseSymmetric& a);

  /// Reuses an analysis. The pattern of `a` must be contained in the
  /// analyzed pattern.
  CholeskyFactor(std::shared_ptr<const SymbolicCholesky> symbolic, const SparseSymmetric& a);

  std::size_t size() const noexcept { return symbolic_->size(); }
  const SymbolicCholesky& symbolic() const noexcept { return *symbolic_; }
  std::span<const std::size_t> perm() const noexcept { return symbolic_->perm(); }

  /// Solves A x = b.
  std::vector<double> solve(std::span<const double> b) const;

  /// x = P' L^{-T} z: for z ~ N(0, I), x ~ N(0, A^{-1}).
  std::vector<double> apply_inverse_transpose_factor(std::span<const double> z) const;

  double log_determinant() const;

  /// L as a dense matrix in permuted indexing.
  std::vector<std::vector<double>> dense_lower() const;

 private:
  void factorize(const SparseSymmetric& a);
  void lower_solve_in_place(std::span<double> x) const;
  void upper_solve_in_place(std::span<double> x) const;

  std::shared_ptr<const SymbolicCholesky> symbolic_;
  std::vector<double> values_;
};

CholeskyFactor cholesky(const SparseSymmetric& a);

std::vector<double> solve(const CholeskyFactor& f, std::span<const double> b);

/// Draw from N(mean, A^{-1}) where f factors A. Consumes exactly n standard
/// normals from rng, in order.
std::vector<double> sample_gaussian_precision(const CholeskyFactor& f,
                                              std::span<const double> mean, Rng& rng);

}  // namespace decomp
