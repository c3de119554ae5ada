#pragma once

// Independent reference computations for tests. Nothing here calls into the
// library's factorization or smoothing code.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <random>
#include <utility>
#include <vector>

namespace oracle {

using Dense = std::vector<std::vector<double>>;

inline Dense zeros(std::size_t n) { return Dense(n, std::vector<double>(n, 0.0)); }

inline std::vector<double> solve(Dense a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a[i][k]) > std::abs(a[piv][k])) piv = i;
    std::swap(a[k], a[piv]);
    std::swap(b[k], b[piv]);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = a[i][k] / a[k][k];
      for (std::size_t j = k; j < n; ++j) a[i][j] -= f * a[k][j];
      b[i] -= f * b[k];
    }
  }
  std::vector<double> x(n);
  for (std::size_t k = n; k-- > 0;) {
    double s = b[k];
    for (std::size_t j = k + 1; j < n; ++j) s -= a[k][j] * x[j];
    x[k] = s / a[k][k];
  }
  return x;
}

inline Dense inverse(const Dense& a) {
  const std::size_t n = a.size();
  Dense inv = zeros(n);
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<double> e(n, 0.0);
    e[j] = 1.0;
    const auto col = solve(a, e);
    for (std::size_t i = 0; i < n; ++i) inv[i][j] = col[i];
  }
  return inv;
}

inline std::vector<double> multiply(const Dense& a, const std::vector<double>& x) {
  std::vector<double> y(a.size(), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j) y[i] += a[i][j] * x[j];
  return y;
}

inline double quad(const Dense& a, const std::vector<double>& x) {
  const auto ax = multiply(a, x);
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * ax[i];
  return s;
}

/// Cyclic Jacobi eigenvalues of a symmetric matrix, ascending.
inline std::vector<double> eigenvalues(Dense a) {
  const std::size_t n = a.size();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a[p][q]) < 1e-300) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
      }
  }
  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = a[i][i];
  std::sort(ev.begin(), ev.end());
  return ev;
}

/// sum over edges of (u_i - u_j)^2.
inline double edge_sum(const std::vector<std::pair<std::size_t, std::size_t>>& edges,
                       const std::vector<double>& u) {
  double s = 0.0;
  for (const auto& [i, j] : edges) s += (u[i] - u[j]) * (u[i] - u[j]);
  return s;
}

/// sum_j (sum_{i~j} x_i - 4 x_j)^2 on a row-major grid padded by replicating
/// the border.
inline double grid_second_order(std::size_t nrow, std::size_t ncol, const std::vector<double>& x) {
  auto at = [&](long r, long c) {
    r = std::clamp<long>(r, 0, static_cast<long>(nrow) - 1);
    c = std::clamp<long>(c, 0, static_cast<long>(ncol) - 1);
    return x[static_cast<std::size_t>(r) * ncol + static_cast<std::size_t>(c)];
  };
  double s = 0.0;
  for (long r = 0; r < static_cast<long>(nrow); ++r)
    for (long c = 0; c < static_cast<long>(ncol); ++c) {
      const double d = at(r - 1, c) + at(r + 1, c) + at(r, c - 1) + at(r, c + 1) - 4.0 * at(r, c);
      s += d * d;
    }
  return s;
}

/// Random edge list on n nodes. When `connected`, starts from a random tree.
template <class Rng>
std::vector<std::pair<std::size_t, std::size_t>> random_edges(std::size_t n, double density,
                                                              bool connected, Rng& rng) {
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  if (connected)
    for (std::size_t i = 1; i < n; ++i) {
      std::uniform_int_distribution<std::size_t> pick(0, i - 1);
      edges.emplace_back(pick(rng), i);
    }
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (unif(rng) < density) edges.emplace_back(i, j);
  for (auto& [a, b] : edges)
    if (a > b) std::swap(a, b);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

template <class Rng>
std::vector<double> random_vector(std::size_t n, Rng& rng, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  std::vector<double> x(n);
  for (auto& v : x) v = normal(rng);
  return x;
}

inline double max_abs(const std::vector<double>& x) {
  double m = 0.0;
  for (const double v : x) m = std::max(m, std::abs(v));
  return m;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace oracle
