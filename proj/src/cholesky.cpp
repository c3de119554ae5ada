#include "decomp/cholesky.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <utility>

#include "decomp/error.hpp"

namespace decomp {

namespace {

constexpr double kPivotTolerance = 1e-13;

void check_length(std::size_t expected, std::size_t got, const char* what) {
  if (expected != got)
    throw DimensionError(std::string(what) + ": expected length " + std::to_string(expected) +
                         ", got " + std::to_string(got));
}

}  // namespace

std::shared_ptr<const SymbolicCholesky> SymbolicCholesky::analyze(const SparseSymmetric& pattern) {
  const std::size_t n = pattern.size();
  std::vector<std::set<std::size_t>> adj(n);
  pattern.for_each_entry([&](std::size_t i, std::size_t j, double) {
    if (i != j) {
      adj[i].insert(j);
      adj[j].insert(i);
    }
  });

  // Minimum degree on the explicit elimination graph. The neighbors of a node
  // at the moment it is eliminated are exactly the below-diagonal pattern of
  // its column in L.
  std::set<std::pair<std::size_t, std::size_t>> queue;
  for (std::size_t i = 0; i < n; ++i) queue.emplace(adj[i].size(), i);

  auto sym = std::make_shared<SymbolicCholesky>();
  sym->perm_.reserve(n);
  std::vector<std::vector<std::size_t>> column_nodes;
  column_nodes.reserve(n);
  while (!queue.empty()) {
    const std::size_t p = queue.begin()->second;
    queue.erase(queue.begin());
    std::vector<std::size_t> nbrs(adj[p].begin(), adj[p].end());
    for (const std::size_t a : nbrs) queue.erase({adj[a].size(), a});
    for (const std::size_t a : nbrs) {
      adj[a].erase(p);
      for (const std::size_t b : nbrs)
        if (a != b) adj[a].insert(b);
    }
    for (const std::size_t a : nbrs) queue.emplace(adj[a].size(), a);
    adj[p].clear();
    sym->perm_.push_back(p);
    column_nodes.push_back(std::move(nbrs));
  }

  sym->iperm_.assign(n, 0);
  for (std::size_t k = 0; k < n; ++k) sym->iperm_[sym->perm_[k]] = k;

  sym->col_ptr_.assign(n + 1, 0);
  std::vector<std::size_t> row_count(n, 0);
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<std::size_t> rows;
    rows.reserve(column_nodes[k].size());
    for (const std::size_t a : column_nodes[k]) rows.push_back(sym->iperm_[a]);
    std::sort(rows.begin(), rows.end());
    sym->row_index_.push_back(k);
    for (const std::size_t r : rows) {
      sym->row_index_.push_back(r);
      ++row_count[r];
    }
    sym->col_ptr_[k + 1] = sym->row_index_.size();
  }

  sym->row_ptr_.assign(n + 1, 0);
  for (std::size_t k = 0; k < n; ++k) sym->row_ptr_[k + 1] = sym->row_ptr_[k] + row_count[k];
  sym->row_cols_.resize(sym->row_ptr_[n]);
  std::vector<std::size_t> fill(sym->row_ptr_.begin(), sym->row_ptr_.end() - 1);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t q = sym->col_ptr_[j] + 1; q < sym->col_ptr_[j + 1]; ++q)
      sym->row_cols_[fill[sym->row_index_[q]]++] = j;
  return sym;
}

CholeskyFactor::CholeskyFactor(const SparseSymmetric& a)
    : CholeskyFactor(SymbolicCholesky::analyze(a), a) {}

CholeskyFactor::CholeskyFactor(std::shared_ptr<const SymbolicCholesky> symbolic,
                               const SparseSymmetric& a)
    : symbolic_(std::move(symbolic)) {
  check_length(symbolic_->size(), a.size(), "cholesky");
  factorize(a);
}

void CholeskyFactor::factorize(const SparseSymmetric& a) {
  const auto& s = *symbolic_;
  const std::size_t n = s.size();
  values_.assign(s.row_index_.size(), 0.0);

  a.for_each_entry([&](std::size_t i, std::size_t j, double v) {
    std::size_t pi = s.iperm_[i];
    std::size_t pj = s.iperm_[j];
    if (pi < pj) std::swap(pi, pj);
    const auto first = s.row_index_.begin() + static_cast<std::ptrdiff_t>(s.col_ptr_[pj]);
    const auto last = s.row_index_.begin() + static_cast<std::ptrdiff_t>(s.col_ptr_[pj + 1]);
    const auto it = std::lower_bound(first, last, pi);
    if (it == last || *it != pi)
      throw Error("matrix pattern is not covered by the symbolic analysis");
    values_[static_cast<std::size_t>(it - s.row_index_.begin())] += v;
  });

  std::vector<double> diag(n);
  for (std::size_t k = 0; k < n; ++k) diag[k] = std::abs(values_[s.col_ptr_[k]]);

  // Left-looking column factorization.
  std::vector<double> work(n, 0.0);
  std::vector<std::size_t> next(n);
  for (std::size_t j = 0; j < n; ++j) next[j] = s.col_ptr_[j] + 1;

  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t begin = s.col_ptr_[k];
    const std::size_t end = s.col_ptr_[k + 1];
    for (std::size_t q = begin; q < end; ++q) work[s.row_index_[q]] = values_[q];

    for (std::size_t r = s.row_ptr_[k]; r < s.row_ptr_[k + 1]; ++r) {
      const std::size_t j = s.row_cols_[r];
      const std::size_t p = next[j]++;
      const double lkj = values_[p];
      for (std::size_t q = p; q < s.col_ptr_[j + 1]; ++q)
        work[s.row_index_[q]] -= values_[q] * lkj;
    }

    // A pivot that cancels to round-off relative to its original diagonal is
    // a structural zero (e.g. the null space of an intrinsic matrix).
    const double d = work[k];
    if (!(d > kPivotTolerance * diag[k]) || !std::isfinite(d)) throw NotPositiveDefinite(s.perm_[k]);
    const double lkk = std::sqrt(d);
    values_[begin] = lkk;
    work[k] = 0.0;
    for (std::size_t q = begin + 1; q < end; ++q) {
      const std::size_t i = s.row_index_[q];
      values_[q] = work[i] / lkk;
      work[i] = 0.0;
    }
  }
}

void CholeskyFactor::lower_solve_in_place(std::span<double> x) const {
  const auto& s = *symbolic_;
  for (std::size_t k = 0; k < s.size(); ++k) {
    x[k] /= values_[s.col_ptr_[k]];
    const double xk = x[k];
    for (std::size_t q = s.col_ptr_[k] + 1; q < s.col_ptr_[k + 1]; ++q)
      x[s.row_index_[q]] -= values_[q] * xk;
  }
}

void CholeskyFactor::upper_solve_in_place(std::span<double> x) const {
  const auto& s = *symbolic_;
  for (std::size_t k = s.size(); k-- > 0;) {
    double sum = x[k];
    for (std::size_t q = s.col_ptr_[k] + 1; q < s.col_ptr_[k + 1]; ++q)
      sum -= values_[q] * x[s.row_index_[q]];
    x[k] = sum / values_[s.col_ptr_[k]];
  }
}

std::vector<double> CholeskyFactor::solve(std::span<const double> b) const {
  check_length(size(), b.size(), "solve");
  const auto& s = *symbolic_;
  std::vector<double> y(size());
  for (std::size_t k = 0; k < size(); ++k) y[k] = b[s.perm_[k]];
  lower_solve_in_place(y);
  upper_solve_in_place(y);
  std::vector<double> x(size());
  for (std::size_t k = 0; k < size(); ++k) x[s.perm_[k]] = y[k];
  return x;
}

std::vector<double> CholeskyFactor::apply_inverse_transpose_factor(std::span<const double> z) const {
  check_length(size(), z.size(), "apply_inverse_transpose_factor");
  const auto& s = *symbolic_;
  std::vector<double> w(z.begin(), z.end());
  upper_solve_in_place(w);
  std::vector<double> x(size());
  for (std::size_t k = 0; k < size(); ++k) x[s.perm_[k]] = w[k];
  return x;
}

double CholeskyFactor::log_determinant() const {
  double sum = 0.0;
  for (std::size_t k = 0; k < size(); ++k) sum += std::log(values_[symbolic_->col_ptr_[k]]);
  return 2.0 * sum;
}

std::vector<std::vector<double>> CholeskyFactor::dense_lower() const {
  const auto& s = *symbolic_;
  std::vector<std::vector<double>> l(size(), std::vector<double>(size(), 0.0));
  for (std::size_t j = 0; j < size(); ++j)
    for (std::size_t q = s.col_ptr_[j]; q < s.col_ptr_[j + 1]; ++q) l[s.row_index_[q]][j] = values_[q];
  return l;
}

CholeskyFactor cholesky(const SparseSymmetric& a) { return CholeskyFactor(a); }

std::vector<double> solve(const CholeskyFactor& f, std::span<const double> b) { return f.solve(b); }

std::vector<double> sample_gaussian_precision(const CholeskyFactor& f,
                                              std::span<const double> mean, Rng& rng) {
  check_length(f.size(), mean.size(), "sample_gaussian_precision");
  std::normal_distribution<double> normal;
  std::vector<double> z(f.size());
  for (auto& zi : z) zi = normal(rng);
  auto x = f.apply_inverse_transpose_factor(z);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] += mean[i];
  return x;
}

}  // namespace decomp
