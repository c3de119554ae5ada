#include "decomp/sampler.hpp"

#include <cmath>
#include <string>
#include <unordered_set>

#include "decomp/error.hpp"

namespace decomp {

CountData::CountData(std::vector<std::uint64_t> y, std::vector<double> e,
                     std::vector<std::string> labels)
    : y_(std::move(y)), e_(std::move(e)), labels_(std::move(labels)) {
  if (y_.size() != e_.size())
    throw DimensionError("counts and expected counts differ in length (" +
                         std::to_string(y_.size()) + " vs " + std::to_string(e_.size()) + ")");
  for (std::size_t i = 0; i < e_.size(); ++i)
    if (!(e_[i] > 0.0) || !std::isfinite(e_[i]))
      throw Error("expected count at region " + std::to_string(i) + " must be positive");
  if (!labels_.empty()) {
    if (labels_.size() != y_.size()) throw DimensionError("label count does not match counts");
    std::unordered_set<std::string> seen;
    for (const auto& l : labels_)
      if (!seen.insert(l).second) throw Error("duplicate region identifier '" + l + "'");
  }
}

std::string CountData::label(std::size_t i) const {
  return labels_.empty() ? std::to_string(i) : labels_.at(i);
}

void Hyperparams::validate() const {
  auto positive = [](double x, const char* name) {
    if (!(x > 0.0) || !std::isfinite(x))
      throw Error(std::string("hyperparameter ") + name + " must be positive and finite");
  };
  positive(a_u, "a_u");
  positive(b_u, "b_u");
  positive(a_v, "a_v");
  positive(b_v, "b_v");
  positive(proposal_sd, "proposal_sd");
  if (burn_in > iterations) throw Error("burn_in exceeds iterations");
  if (thinning < 1) throw Error("thinning must be at least 1");
}

std::vector<double> ChainState::eta() const {
  std::vector<double> out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = u[i] + v[i];
  return out;
}

double log_likelihood(const CountData& data, std::span<const double> eta) {
  if (eta.size() != data.size()) throw DimensionError("log_likelihood: dimension mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < eta.size(); ++i) {
    if (!std::isfinite(eta[i]))
      throw Error("log_likelihood: non-finite eta at region " + std::to_string(i));
    sum += static_cast<double>(data.y()[i]) * eta[i] - data.e()[i] * std::exp(eta[i]);
  }
  return sum;
}

std::vector<double> reconstruct_field(const CountData& data, const ChainState& state) {
  if (state.u.size() != data.size() || state.v.size() != data.size())
    throw DimensionError("reconstruct_field: dimension mismatch");
  std::vector<double> rate(data.size());
  for (std::size_t i = 0; i < rate.size(); ++i)
    rate[i] = data.e()[i] * std::exp(state.u[i] + state.v[i]);
  return rate;
}

BymSampler::BymSampler(CountData data, const AdjacencyGraph& graph, Hyperparams hyper)
    : data_(std::move(data)), hyper_(hyper) {
  if (graph.size() != data_.size())
    throw DimensionError("graph has " + std::to_string(graph.size()) + " regions, data has " +
                         std::to_string(data_.size()));
  hyper_.validate();
  r_ = build_igmrf1_precision(graph);
  components_ = connected_components(graph);
  n_components_ = decomp::component_count(components_);
  component_sizes_.assign(n_components_, 0.0);
  for (const std::size_t c : components_) component_sizes_[c] += 1.0;
  symbolic_ = SymbolicCholesky::analyze(r_.scaled_plus_identity(1.0, 1.0));
}

void BymSampler::center(std::span<double> u) const {
  std::vector<double> sums(n_components_, 0.0);
  for (std::size_t i = 0; i < u.size(); ++i) sums[components_[i]] += u[i];
  for (std::size_t c = 0; c < n_components_; ++c) sums[c] /= component_sizes_[c];
  for (std::size_t i = 0; i < u.size(); ++i) u[i] -= sums[components_[i]];
}

ChainState BymSampler::initial_state() const {
  ChainState s;
  const std::size_t n = data_.size();
  std::vector<double> eta(n);
  for (std::size_t i = 0; i < n; ++i)
    eta[i] = std::log((static_cast<double>(data_.y()[i]) + 0.5) / data_.e()[i]);
  s.u = eta;
  center(s.u);
  s.v.resize(n);
  for (std::size_t i = 0; i < n; ++i) s.v[i] = eta[i] - s.u[i];
  s.kappa_u = 10.0;
  s.kappa_v = 10.0;
  return s;
}

std::vector<std::uint8_t> BymSampler::step_eta(ChainState& state, Rng& rng) const {
  std::normal_distribution<double> step(0.0, hyper_.proposal_sd);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<std::uint8_t> accepted(data_.size(), 0);
  for (std::size_t i = 0; i < data_.size(); ++i) {
    const double y = static_cast<double>(data_.y()[i]);
    const double e = data_.e()[i];
    const double u = state.u[i];
    const double eta = u + state.v[i];
    const double proposal = eta + step(rng);
    const double delta = eta_log_target(y, e, u, state.kappa_v, proposal) -
                         eta_log_target(y, e, u, state.kappa_v, eta);
    if (std::log(unif(rng)) < delta) {
      state.v[i] = proposal - u;
      accepted[i] = 1;
    }
  }
  return accepted;
}

std::vector<double> BymSampler::draw_u_unconstrained(const ChainState& state, Rng& rng) const {
  const CholeskyFactor factor(symbolic_, r_.scaled_plus_identity(state.kappa_u, state.kappa_v));
  auto rhs = state.eta();
  for (auto& x : rhs) x *= state.kappa_v;
  const auto mean = factor.solve(rhs);
  return sample_gaussian_precision(factor, mean, rng);
}

void BymSampler::step_u(ChainState& state, Rng& rng) const {
  // A 1_c = kappa_v 1_c for every component indicator, so conditioning the
  // Gaussian draw on the per-component sums reduces to subtracting the
  // component means.
  const auto eta = state.eta();
  state.u = draw_u_unconstrained(state, rng);
  center(state.u);
  for (std::size_t i = 0; i < eta.size(); ++i) state.v[i] = eta[i] - state.u[i];
}

void BymSampler::step_kappa_u(ChainState& state, Rng& rng) const {
  const double shape =
      hyper_.a_u + 0.5 * static_cast<double>(data_.size() - n_components_);
  const double rate = hyper_.b_u + 0.5 * quad_form(r_, state.u);
  std::gamma_distribution<double> gamma(shape, 1.0 / rate);
  state.kappa_u = gamma(rng);
}

void BymSampler::step_kappa_v(ChainState& state, Rng& rng) const {
  double vv = 0.0;
  for (const double x : state.v) vv += x * x;
  const double shape = hyper_.a_v + 0.5 * static_cast<double>(data_.size());
  const double rate = hyper_.b_v + 0.5 * vv;
  std::gamma_distribution<double> gamma(shape, 1.0 / rate);
  state.kappa_v = gamma(rng);
}

PosteriorSamples BymSampler::run() const {
  const std::size_t n = data_.size();
  PosteriorSamples out;
  out.n = n;
  out.hyper = hyper_;
  out.accepted.assign(n, 0);
  out.proposed.assign(n, 0);
  out.states.reserve(hyper_.retained_count());

  Rng rng(hyper_.seed);
  ChainState state = initial_state();
  for (std::uint64_t t = 1; t <= hyper_.iterations; ++t) {
    const auto flags = step_eta(state, rng);
    for (std::size_t i = 0; i < n; ++i) {
      out.accepted[i] += flags[i];
      ++out.proposed[i];
    }
    step_u(state, rng);
    step_kappa_u(state, rng);
    step_kappa_v(state, rng);
    if (t > hyper_.burn_in && (t - hyper_.burn_in) % hyper_.thinning == 0)
      out.states.push_back(state);
  }
  return out;
}

PosteriorSamples run_chain(const CountData& data, const AdjacencyGraph& graph,
                           const Hyperparams& hyper) {
  return BymSampler(data, graph, hyper).run();
}

}  // namespace decomp
