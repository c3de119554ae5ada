#include "decomp/credibility.hpp"

#include <string>

#include "decomp/error.hpp"

namespace decomp {

namespace {

std::size_t checked_size(std::span<const DetailSet> details, std::size_t level) {
  if (details.empty()) throw Error("no posterior samples to summarize");
  const auto& first = details.front();
  if (level >= first.z.size())
    throw Error("level " + std::to_string(level) + " out of range (" +
                std::to_string(first.z.size()) + " levels)");
  const std::size_t n = first.z[level].size();
  for (const auto& d : details)
    if (d.z.size() != first.z.size() || d.z[level].size() != n)
      throw DimensionError("detail sets have inconsistent dimensions");
  return n;
}

}  // namespace

std::string_view to_string(Credibility c) {
  switch (c) {
    case Credibility::negative: return "neg";
    case Credibility::positive: return "pos";
    case Credibility::none: break;
  }
  return "none";
}

std::vector<double> posterior_mean(std::span<const DetailSet> details, std::size_t level) {
  const std::size_t n = checked_size(details, level);
  std::vector<double> mean(n, 0.0);
  for (const auto& d : details)
    for (std::size_t i = 0; i < n; ++i) mean[i] += d.z[level][i];
  const double count = static_cast<double>(details.size());
  for (auto& m : mean) m /= count;
  return mean;
}

ProbabilityMap pointwise_probability_map(std::span<const DetailSet> details, std::size_t level,
                                         double alpha) {
  if (!(alpha > 0.0 && alpha < 0.5)) throw Error("alpha must lie in (0, 0.5)");
  const std::size_t n = checked_size(details, level);
  std::vector<std::size_t> positive(n, 0);
  for (const auto& d : details)
    for (std::size_t i = 0; i < n; ++i)
      if (d.z[level][i] > 0.0) ++positive[i];

  ProbabilityMap map;
  map.alpha = alpha;
  map.prob_positive.resize(n);
  map.classification.resize(n);
  const double count = static_cast<double>(details.size());
  for (std::size_t i = 0; i < n; ++i) {
    const double p = static_cast<double>(positive[i]) / count;
    map.prob_positive[i] = p;
    map.classification[i] = p >= 1.0 - alpha ? Credibility::positive
                            : p <= alpha     ? Credibility::negative
                                             : Credibility::none;
  }
  return map;
}

}  // namespace decomp
