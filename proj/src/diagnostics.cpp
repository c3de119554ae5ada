#include "decomp/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <limits>

#include "decomp/error.hpp"

namespace decomp {

namespace {

double mean_of(std::span<const double> x) {
  double s = 0.0;
  for (const double v : x) s += v;
  return s / static_cast<double>(x.size());
}

constexpr double kGewekeWarn = 3.0;

}  // namespace

AcceptanceRates acceptance_rate(const PosteriorSamples& samples) {
  AcceptanceRates out;
  out.per_site.resize(samples.accepted.size(), 0.0);
  std::uint64_t acc = 0;
  std::uint64_t prop = 0;
  for (std::size_t i = 0; i < samples.accepted.size(); ++i) {
    const auto p = samples.proposed.at(i);
    if (p > 0)
      out.per_site[i] = static_cast<double>(samples.accepted[i]) / static_cast<double>(p);
    acc += samples.accepted[i];
    prop += p;
  }
  out.overall = prop > 0 ? static_cast<double>(acc) / static_cast<double>(prop) : 0.0;
  return out;
}

double batch_means_variance(std::span<const double> trace, std::size_t batches) {
  const std::size_t count = std::min(batches, trace.size());
  if (count < 2) throw Error("batch means need at least two values");
  const std::size_t size = trace.size() / count;
  std::vector<double> means(count);
  for (std::size_t b = 0; b < count; ++b) means[b] = mean_of(trace.subspan(b * size, size));
  const double grand = mean_of(means);
  double ss = 0.0;
  for (const double m : means) ss += (m - grand) * (m - grand);
  return static_cast<double>(size) * ss / static_cast<double>(count - 1);
}

GewekeResult geweke_z(std::span<const double> trace, double first_frac, double last_frac) {
  if (trace.size() < 100) throw Error("Geweke diagnostic needs at least 100 values");
  if (!(first_frac > 0.0) || !(last_frac > 0.0) || first_frac + last_frac > 1.0)
    throw Error("Geweke segment fractions must be positive and sum to at most 1");
  const auto n = static_cast<double>(trace.size());
  const auto n_first = static_cast<std::size_t>(std::floor(first_frac * n));
  const auto n_last = static_cast<std::size_t>(std::floor(last_frac * n));
  const auto first = trace.first(n_first);
  const auto last = trace.last(n_last);

  const double se2 = batch_means_variance(first) / static_cast<double>(n_first) +
                     batch_means_variance(last) / static_cast<double>(n_last);
  if (!(se2 > 0.0)) return {std::numeric_limits<double>::quiet_NaN(), true};
  return {(mean_of(first) - mean_of(last)) / std::sqrt(se2), false};
}

EssResult effective_sample_size(std::span<const double> trace) {
  const std::size_t n = trace.size();
  if (n < 10) throw Error("effective sample size needs at least 10 values");
  const double mean = mean_of(trace);
  auto autocov = [&](std::size_t lag) {
    double s = 0.0;
    for (std::size_t t = 0; t + lag < n; ++t) s += (trace[t] - mean) * (trace[t + lag] - mean);
    return s / static_cast<double>(n);
  };
  const double gamma0 = autocov(0);
  if (!(gamma0 > 0.0)) return {std::numeric_limits<double>::quiet_NaN(), true};

  double pair_sum = 0.0;
  for (std::size_t lag = 0; lag + 1 < n; lag += 2) {
    const double pair = (autocov(lag) + autocov(lag + 1)) / gamma0;
    if (pair <= 0.0) break;
    pair_sum += pair;
  }
  const double tau = 2.0 * pair_sum - 1.0;
  const double dn = static_cast<double>(n);
  return {tau > 1.0 ? dn / tau : dn, false};
}

std::vector<std::size_t> sentinel_sites(std::size_t n) {
  std::vector<std::size_t> out;
  if (n == 0) return out;
  for (const double q : {0.0, 0.25, 0.5, 0.75, 1.0})
    out.push_back(static_cast<std::size_t>(std::lround(q * static_cast<double>(n - 1))));
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<MonitoredTrace> monitored_traces(const PosteriorSamples& samples,
                                             const CountData& data) {
  const auto sites = sentinel_sites(samples.n);
  std::vector<MonitoredTrace> out;
  out.push_back({"kappa_u", {}});
  out.push_back({"kappa_v", {}});
  out.push_back({"log_likelihood", {}});
  for (const std::size_t s : sites) out.push_back({fmt::format("eta[{}]", s), {}});
  for (auto& m : out) m.values.reserve(samples.states.size());

  for (const auto& st : samples.states) {
    const auto eta = st.eta();
    out[0].values.push_back(st.kappa_u);
    out[1].values.push_back(st.kappa_v);
    out[2].values.push_back(log_likelihood(data, eta));
    for (std::size_t k = 0; k < sites.size(); ++k) out[3 + k].values.push_back(eta[sites[k]]);
  }
  return out;
}

TraceSummary summarize(const PosteriorSamples& samples, const CountData& data) {
  TraceSummary out;
  out.acceptance = acceptance_rate(samples);
  if (out.acceptance.overall < 0.1 || out.acceptance.overall > 0.9)
    out.warnings.push_back(
        fmt::format("overall acceptance rate {:.3f} is outside [0.1, 0.9]", out.acceptance.overall));

  const std::size_t count = samples.states.size();
  if (count < 100)
    out.warnings.push_back(
        fmt::format("only {} retained samples; Geweke diagnostic needs 100", count));
  if (count < 10)
    out.warnings.push_back("fewer than 10 retained samples; effective sample size not computed");

  for (auto& trace : monitored_traces(samples, data)) {
    QuantitySummary q{trace.name, std::nullopt, std::nullopt};
    if (count >= 100) {
      const auto g = geweke_z(trace.values);
      if (g.degenerate)
        out.warnings.push_back(trace.name + ": constant trace, Geweke z undefined");
      else {
        q.geweke_z = g.z;
        if (std::abs(g.z) > kGewekeWarn)
          out.warnings.push_back(fmt::format("{}: Geweke |z| = {:.2f} exceeds {}", trace.name,
                                             std::abs(g.z), kGewekeWarn));
      }
    }
    if (count >= 10) {
      const auto e = effective_sample_size(trace.values);
      if (e.degenerate)
        out.warnings.push_back(trace.name + ": constant trace, effective sample size undefined");
      else
        q.ess = e.ess;
    }
    out.quantities.push_back(std::move(q));
  }
  return out;
}

}  // namespace decomp
