#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "decomp/sampler.hpp"

namespace decomp {

struct AcceptanceRates {
  double overall = 0.0;
  std::vector<double> per_site;
};

AcceptanceRates acceptance_rate(const PosteriorSamples& samples);

/// Asymptotic variance of the mean-scaled series (spectral density at
/// zero) from nonoverlapping batch means. Uses min(batches, length)
/// batches of equal size; trailing remainder values are not used.
double batch_means_variance(std::span<const double> trace, std::size_t batches = 20);

struct GewekeResult {
  double z = 0.0;
  /// Set when both segment variances vanish; z is then NaN.
  bool degenerate = false;
};

/// Compares the mean of the first `first_frac` of the trace to the mean of
/// the last `last_frac`. Requires at least 100 values.
GewekeResult geweke_z(std::span<const double> trace, double first_frac = 0.1,
                      double last_frac = 0.5);

struct EssResult {
  double ess = 0.0;
  /// Set for a constant trace; ess is then NaN.
  bool degenerate = false;
};

/// N / (1 + 2 sum rho_k), truncating at the first non-positive sum of an
/// adjacent autocorrelation pair. Clipped to N. Requires at least 10 values.
EssResult effective_sample_size(std::span<const double> trace);

/// Sites 0, n/4, n/2, 3n/4 and n-1 (rounded, duplicates removed).
std::vector<std::size_t> sentinel_sites(std::size_t n);

struct MonitoredTrace {
  std::string name;
  std::vector<double> values;
};

/// kappa_u, kappa_v, the log-likelihood, and eta at the sentinel sites.
std::vector<MonitoredTrace> monitored_traces(const PosteriorSamples& samples,
                                             const CountData& data);

struct QuantitySummary {
  std::string name;
  std::optional<double> geweke_z;  // absent when the trace is too short or degenerate
  std::optional<double> ess;
};

struct TraceSummary {
  AcceptanceRates acceptance;
  std::vector<QuantitySummary> quantities;
  std::vector<std::string> warnings;
};

/// Never throws on short or degenerate traces; those become warnings.
TraceSummary summarize(const PosteriorSamples& samples, const CountData& data);

}  // namespace decomp
