#include "decomp/decompose.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>

#include "decomp/error.hpp"
#include "decomp/graph.hpp"

namespace decomp {

ScaleSet::ScaleSet(std::vector<double> lambdas) : lambdas_(std::move(lambdas)) {
  if (lambdas_.empty() || lambdas_.front() != 0.0)
    throw Error("scale set must start with lambda = 0");
  for (std::size_t l = 0; l < lambdas_.size(); ++l) {
    if (!std::isfinite(lambdas_[l]) || lambdas_[l] < 0.0)
      throw Error("scales must be finite and non-negative");
    if (l > 0 && !(lambdas_[l] > lambdas_[l - 1]))
      throw Error("scales must be strictly increasing");
  }
}

std::vector<double> smooth(std::span<const double> x, double lambda, const SparseSymmetric& r) {
  if (x.size() != r.size()) throw DimensionError("smooth: dimension mismatch");
  if (!std::isfinite(lambda) || lambda < 0.0)
    throw Error("smooth: lambda must be finite and non-negative");
  if (lambda == 0.0) return {x.begin(), x.end()};
  return CholeskyFactor(r.scaled_plus_identity(lambda, 1.0)).solve(x);
}

std::vector<double> smooth_infinity(std::span<const double> x,
                                    std::span<const std::size_t> components) {
  if (x.size() != components.size()) throw DimensionError("smooth_infinity: dimension mismatch");
  const std::size_t k = component_count(components);
  std::vector<double> sum(k, 0.0);
  std::vector<double> count(k, 0.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    sum[components[i]] += x[i];
    count[components[i]] += 1.0;
  }
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = sum[components[i]] / count[components[i]];
  return out;
}

MultiscaleSmoother::MultiscaleSmoother(SparseSymmetric r, std::vector<std::size_t> components,
                                       ScaleSet scales)
    : r_(std::move(r)), components_(std::move(components)), scales_(std::move(scales)) {
  if (components_.size() != r_.size())
    throw DimensionError("component labels do not match the structure matrix");
  const auto pattern = SymbolicCholesky::analyze(r_.scaled_plus_identity(1.0, 1.0));
  for (const double lambda : scales_.lambdas()) {
    if (lambda == 0.0)
      factors_.push_back(nullptr);
    else
      factors_.push_back(
          std::make_unique<CholeskyFactor>(pattern, r_.scaled_plus_identity(lambda, 1.0)));
  }
}

std::vector<double> MultiscaleSmoother::smooth_at(std::size_t level,
                                                  std::span<const double> x) const {
  if (x.size() != size()) throw DimensionError("smooth_at: dimension mismatch");
  if (level + 1 >= scales_.levels()) return smooth_infinity(x, components_);
  if (!factors_[level]) return {x.begin(), x.end()};
  return factors_[level]->solve(x);
}

DetailSet MultiscaleSmoother::details(std::span<const double> x) const {
  const std::size_t levels = scales_.levels();
  DetailSet out;
  out.z.reserve(levels);
  auto current = smooth_at(0, x);
  for (std::size_t l = 0; l + 1 < levels; ++l) {
    auto next = smooth_at(l + 1, x);
    std::vector<double> z(x.size());
    for (std::size_t i = 0; i < z.size(); ++i) z[i] = current[i] - next[i];
    out.z.push_back(std::move(z));
    current = std::move(next);
  }
  out.z.push_back(std::move(current));
  return out;
}

DetailSet details(std::span<const double> x, const ScaleSet& scales, const SparseSymmetric& r,
                  std::span<const std::size_t> components) {
  return MultiscaleSmoother(r, {components.begin(), components.end()}, scales).details(x);
}

std::vector<double> log_field(const CountData& data, const ChainState& state) {
  if (state.u.size() != data.size() || state.v.size() != data.size())
    throw DimensionError("log_field: dimension mismatch");
  std::vector<double> out(data.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = std::log(data.e()[i]) + state.u[i] + state.v[i];
  return out;
}

std::vector<DetailSet> decompose_samples(const PosteriorSamples& samples, const CountData& data,
                                         const MultiscaleSmoother& smoother, unsigned workers) {
  if (samples.n != data.size() || smoother.size() != data.size())
    throw DimensionError("decompose_samples: samples, data and structure disagree in size (" +
                         std::to_string(samples.n) + ", " + std::to_string(data.size()) + ", " +
                         std::to_string(smoother.size()) + ")");
  std::vector<DetailSet> out(samples.states.size());
  auto work = [&](std::size_t begin, std::size_t stride) {
    for (std::size_t s = begin; s < out.size(); s += stride)
      out[s] = smoother.details(log_field(data, samples.states[s]));
  };
  workers = std::max(1u, workers);
  if (workers == 1 || out.size() < 2) {
    work(0, 1);
    return out;
  }
  std::vector<std::jthread> pool;
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
  pool.clear();
  return out;
}

}  // namespace decomp
