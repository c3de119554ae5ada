#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "decomp/cholesky.hpp"
#include "decomp/sampler.hpp"
#include "decomp/sparse_symmetric.hpp"

namespace decomp {

/// Smoothing parameters 0 = lambda_1 < ... < lambda_{L-1}; the terminal
/// lambda_L = infinity is implicit.
class ScaleSet {
 public:
  explicit ScaleSet(std::vector<double> lambdas);

  std::span<const double> lambdas() const noexcept { return lambdas_; }
  /// L, the number of levels including the mean field.
  std::size_t levels() const noexcept { return lambdas_.size() + 1; }

  friend bool operator==(const ScaleSet&, const ScaleSet&) = default;

 private:
  std::vector<double> lambdas_;
};

/// z[0..L-2] are the details z_1..z_{L-1}; z[L-1] is the mean field z_L.
struct DetailSet {
  std::vector<std::vector<double>> z;

  friend bool operator==(const DetailSet&, const DetailSet&) = default;
};

/// (I + lambda R)^{-1} x; lambda = 0 returns x unchanged.
std::vector<double> smooth(std::span<const double> x, double lambda, const SparseSymmetric& r);

/// Per-component mean of x, i.e. the projection onto the null space of R.
std::vector<double> smooth_infinity(std::span<const double> x,
                                    std::span<const std::size_t> components);

/// Penalty smoothers for a fixed structure matrix and scale set. Factorizes
/// I + lambda R once per positive lambda; safe to share across threads.
class MultiscaleSmoother {
 public:
  MultiscaleSmoother(SparseSymmetric r, std::vector<std::size_t> components, ScaleSet scales);

  std::size_t size() const noexcept { return r_.size(); }
  const ScaleSet& scales() const noexcept { return scales_; }

  /// S_{lambda_l} x for level index l in [0, L-1); level L-1 gives the mean field.
  std::vector<double> smooth_at(std::size_t level, std::span<const double> x) const;

  DetailSet details(std::span<const double> x) const;

 private:
  SparseSymmetric r_;
  std::vector<std::size_t> components_;
  ScaleSet scales_;
  std::vector<std::unique_ptr<CholeskyFactor>> factors_;  // null for lambda = 0
};

DetailSet details(std::span<const double> x, const ScaleSet& scales, const SparseSymmetric& r,
                  std::span<const std::size_t> components);

/// log(e) + u + v, the logarithm of the reconstructed rates.
std::vector<double> log_field(const CountData& data, const ChainState& state);

/// One DetailSet per retained sample, in sample order. `workers` > 1
/// spreads samples over threads; the result does not depend on it.
std::vector<DetailSet> decompose_samples(const PosteriorSamples& samples, const CountData& data,
                                         const MultiscaleSmoother& smoother,
                                         unsigned workers = 1);

}  // namespace decomp
