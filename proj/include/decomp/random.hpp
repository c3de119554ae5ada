#pragma once

#include <cstdint>
#include <random>

namespace decomp {

/// Every stochastic routine takes its generator explicitly.
using Rng = std::mt19937_64;

}  // namespace decomp
