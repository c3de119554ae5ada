#pragma once

#include <cstddef>
#include <cmath>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "decomp/cholesky.hpp"
#include "decomp/graph.hpp"
#include "decomp/random.hpp"
#include "decomp/sparse_symmetric.hpp"

namespace decomp {

/// Observed counts y and expected counts e per region.
class CountData {
 public:
  CountData() = default;
  CountData(std::vector<std::uint64_t> y, std::vector<double> e,
            std::vector<std::string> labels = {});

  std::size_t size() const noexcept { return y_.size(); }
  std::span<const std::uint64_t> y() const noexcept { return y_; }
  std::span<const double> e() const noexcept { return e_; }
  std::span<const std::string> labels() const noexcept { return labels_; }

  /// Region identifier; falls back to the index when no labels were given.
  std::string label(std::size_t i) const;

 private:
  std::vector<std::uint64_t> y_;
  std::vector<double> e_;
  std::vector<std::string> labels_;
};

/// Gamma priors are shape/rate. Proposals are random-walk normal on eta.
struct Hyperparams {
  double a_u = 1.0;
  double b_u = 0.5;
  double a_v = 1.0;
  double b_v = 0.01;
  double proposal_sd = 0.3;
  std::uint64_t iterations = 110000;
  std::uint64_t burn_in = 10000;
  std::uint64_t thinning = 10;
  std::uint64_t seed = 1;

  void validate() const;
  std::size_t retained_count() const { return (iterations - burn_in) / thinning; }

  friend bool operator==(const Hyperparams&, const Hyperparams&) = default;
};

struct ChainState {
  std::vector<double> u;  // structured log-relative risk, centered per component
  std::vector<double> v;  // unstructured noise
  double kappa_u = 1.0;
  double kappa_v = 1.0;

  std::vector<double> eta() const;

  friend bool operator==(const ChainState&, const ChainState&) = default;
};

struct PosteriorSamples {
  std::size_t n = 0;
  Hyperparams hyper;
  std::vector<ChainState> states;
  std::vector<std::uint64_t> accepted;  // per site, over all iterations
  std::vector<std::uint64_t> proposed;  // per site, over all iterations

  friend bool operator==(const PosteriorSamples&, const PosteriorSamples&) = default;
};

/// sum_i (y_i eta_i - e_i exp(eta_i)), dropping the log(y_i!) constant.
double log_likelihood(const CountData& data, std::span<const double> eta);

/// Unnormalized log full conditional of eta_i given u_i and kappa_v.
inline double eta_log_target(double y, double e, double u, double kappa_v, double eta) {
  const double d = eta - u;
  return y * eta - e * std::exp(eta) - 0.5 * kappa_v * d * d;
}

/// Rates e_i exp(u_i + v_i).
std::vector<double> reconstruct_field(const CountData& data, const ChainState& state);

/// Gibbs sampler with a per-site Metropolis-Hastings step for the
/// Poisson / intrinsic-CAR / iid-noise model. Holds the structure matrix and
/// its symbolic factorization, so the per-sweep cost is one numeric
/// factorization.
class BymSampler {
 public:
  BymSampler(CountData data, const AdjacencyGraph& graph, Hyperparams hyper);

  const CountData& data() const noexcept { return data_; }
  const Hyperparams& hyper() const noexcept { return hyper_; }
  const SparseSymmetric& structure() const noexcept { return r_; }
  std::span<const std::size_t> components() const noexcept { return components_; }
  std::size_t component_count() const noexcept { return n_components_; }

  /// eta_i = log((y_i + 0.5) / e_i), u = eta centered per component,
  /// v = eta - u, both precisions 10.
  ChainState initial_state() const;

  /// One random-walk MH proposal per site, in index order. Updates v only.
  /// Returns 1 for accepted sites, 0 otherwise.
  std::vector<std::uint8_t> step_eta(ChainState& state, Rng& rng) const;

  /// Draw from u | eta, kappa without the centering constraint:
  /// N(A^{-1} kappa_v eta, A^{-1}) with A = kappa_u R + kappa_v I.
  std::vector<double> draw_u_unconstrained(const ChainState& state, Rng& rng) const;

  /// Exact Gibbs draw of u given eta under the per-component sum-to-zero
  /// constraint. eta = u + v is unchanged.
  void step_u(ChainState& state, Rng& rng) const;

  /// Gamma(a_u + (n - k)/2, b_u + u'Ru/2), k = number of components.
  void step_kappa_u(ChainState& state, Rng& rng) const;

  /// Gamma(a_v + n/2, b_v + v'v/2).
  void step_kappa_v(ChainState& state, Rng& rng) const;

  /// Sweeps in the order eta, u, kappa_u, kappa_v from initial_state(),
  /// seeded with hyper().seed.
  PosteriorSamples run() const;

 private:
  void center(std::span<double> u) const;

  CountData data_;
  Hyperparams hyper_;
  SparseSymmetric r_;
  std::vector<std::size_t> components_;
  std::vector<double> component_sizes_;
  std::size_t n_components_ = 0;
  std::shared_ptr<const SymbolicCholesky> symbolic_;
};

PosteriorSamples run_chain(const CountData& data, const AdjacencyGraph& graph,
                           const Hyperparams& hyper);

}  // namespace decomp
