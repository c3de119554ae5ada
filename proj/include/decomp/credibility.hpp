#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "decomp/decompose.hpp"

namespace decomp {

enum class Credibility { negative, none, positive };

std::string_view to_string(Credibility c);

struct ProbabilityMap {
  std::vector<double> prob_positive;
  std::vector<Credibility> classification;
  double alpha = 0.05;
};

/// Elementwise average of detail `level` (0-based) over the samples.
std::vector<double> posterior_mean(std::span<const DetailSet> details, std::size_t level);

/// Fraction of samples with z > 0 per region (zeros count as not positive);
/// positive when the fraction is at least 1 - alpha, negative when at most
/// alpha. alpha must lie in (0, 0.5).
ProbabilityMap pointwise_probability_map(std::span<const DetailSet> details, std::size_t level,
                                         double alpha = 0.05);

}  // namespace decomp
