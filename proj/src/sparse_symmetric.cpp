#include "decomp/sparse_symmetric.hpp"

#include <algorithm>
#include <string>

#include "decomp/error.hpp"

namespace decomp {

namespace {

void check_length(std::size_t expected, std::size_t got, const char* what) {
  if (expected != got)
    throw DimensionError(std::string(what) + ": expected length " + std::to_string(expected) +
                         ", got " + std::to_string(got));
}

}  // namespace

SparseSymmetric SparseSymmetric::from_triplets(std::size_t n, std::span<const Triplet> triplets) {
  std::vector<Triplet> lower;
  lower.reserve(triplets.size());
  for (const auto& t : triplets) {
    if (t.row >= n || t.col >= n)
      throw DimensionError("triplet (" + std::to_string(t.row) + ", " + std::to_string(t.col) +
                           ") outside a " + std::to_string(n) + "x" + std::to_string(n) +
                           " matrix");
    lower.push_back(t.row >= t.col ? t : Triplet{t.col, t.row, t.value});
  }
  std::stable_sort(lower.begin(), lower.end(), [](const Triplet& a, const Triplet& b) {
    return a.col != b.col ? a.col < b.col : a.row < b.row;
  });

  SparseSymmetric m;
  m.n_ = n;
  m.col_ptr_.assign(n + 1, 0);
  for (std::size_t k = 0; k < lower.size();) {
    const std::size_t r = lower[k].row;
    const std::size_t c = lower[k].col;
    double sum = 0.0;
    for (; k < lower.size() && lower[k].row == r && lower[k].col == c; ++k) sum += lower[k].value;
    if (sum == 0.0) continue;
    m.row_index_.push_back(r);
    m.values_.push_back(sum);
    ++m.col_ptr_[c + 1];
  }
  for (std::size_t j = 0; j < n; ++j) m.col_ptr_[j + 1] += m.col_ptr_[j];
  return m;
}

SparseSymmetric SparseSymmetric::identity(std::size_t n) {
  std::vector<Triplet> t;
  t.reserve(n);
  for (std::size_t i = 0; i < n; ++i) t.push_back({i, i, 1.0});
  return from_triplets(n, t);
}

double SparseSymmetric::coeff(std::size_t i, std::size_t j) const {
  if (i >= n_ || j >= n_) throw DimensionError("coefficient index out of range");
  if (i < j) std::swap(i, j);
  const auto first = row_index_.begin() + static_cast<std::ptrdiff_t>(col_ptr_[j]);
  const auto last = row_index_.begin() + static_cast<std::ptrdiff_t>(col_ptr_[j + 1]);
  const auto it = std::lower_bound(first, last, i);
  if (it == last || *it != i) return 0.0;
  return values_[static_cast<std::size_t>(it - row_index_.begin())];
}

std::vector<double> SparseSymmetric::multiply(std::span<const double> x) const {
  check_length(n_, x.size(), "multiply");
  std::vector<double> y(n_, 0.0);
  for_each_entry([&](std::size_t i, std::size_t j, double a) {
    y[i] += a * x[j];
    if (i != j) y[j] += a * x[i];
  });
  return y;
}

SparseSymmetric SparseSymmetric::scaled_plus_identity(double scale, double shift) const {
  std::vector<Triplet> t;
  t.reserve(values_.size() + n_);
  for_each_entry([&](std::size_t i, std::size_t j, double a) { t.push_back({i, j, scale * a}); });
  if (shift != 0.0)
    for (std::size_t i = 0; i < n_; ++i) t.push_back({i, i, shift});
  return from_triplets(n_, t);
}

std::vector<std::vector<double>> SparseSymmetric::to_dense() const {
  std::vector<std::vector<double>> d(n_, std::vector<double>(n_, 0.0));
  for_each_entry([&](std::size_t i, std::size_t j, double a) {
    d[i][j] = a;
    d[j][i] = a;
  });
  return d;
}

double quad_form(const SparseSymmetric& a, std::span<const double> x) {
  check_length(a.size(), x.size(), "quad_form");
  double sum = 0.0;
  a.for_each_entry([&](std::size_t i, std::size_t j, double v) {
    sum += (i == j ? 1.0 : 2.0) * v * x[i] * x[j];
  });
  return sum;
}

}  // namespace decomp
