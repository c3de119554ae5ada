#include <doctest.h>

#include "decomp/diagnostics.hpp"
#include "decomp/error.hpp"
#include "oracles.hpp"

using namespace decomp;

namespace {

std::vector<double> ar1(std::size_t n, double phi, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<double> x(n);
  double prev = normal(rng) / std::sqrt(1.0 - phi * phi);
  for (auto& v : x) {
    prev = phi * prev + normal(rng);
    v = prev;
  }
  return x;
}

}  // namespace

TEST_CASE("acceptance_rate") {
  PosteriorSamples s;
  s.n = 3;
  s.accepted = {1000, 0, 250};
  s.proposed = {1000, 1000, 1000};
  const auto a = acceptance_rate(s);
  CHECK(a.per_site == std::vector<double>{1.0, 0.0, 0.25});
  CHECK(a.overall == doctest::Approx(1250.0 / 3000.0));
}

TEST_CASE("geweke_z on stationary noise") {
  int within = 0;
  constexpr int runs = 200;
  for (int r = 0; r < runs; ++r) {
    std::mt19937_64 rng(1000 + static_cast<std::uint64_t>(r));
    const auto x = oracle::random_vector(10000, rng);
    const auto g = geweke_z(x);
    CHECK_FALSE(g.degenerate);
    if (std::abs(g.z) < 3.0) ++within;
  }
  CHECK(within >= 194);
}

TEST_CASE("geweke_z detects a mean jump") {
  std::mt19937_64 rng(3);
  auto x = oracle::random_vector(10000, rng);
  for (std::size_t i = 5000; i < x.size(); ++i) x[i] += 10.0;
  CHECK(std::abs(geweke_z(x).z) > 10.0);
}

TEST_CASE("geweke_z edge cases and affine invariance") {
  const auto c = geweke_z(std::vector<double>(200, 4.0));
  CHECK(c.degenerate);
  CHECK(std::isnan(c.z));
  CHECK_THROWS_AS(geweke_z(std::vector<double>(99, 1.0)), Error);
  CHECK_THROWS_AS(geweke_z(std::vector<double>(200, 1.0), 0.6, 0.5), Error);

  const auto x = ar1(3000, 0.5, 8);
  auto y = x;
  for (auto& v : y) v = 3.0 * v - 7.0;
  CHECK(geweke_z(y).z == doctest::Approx(geweke_z(x).z).epsilon(1e-9));
  CHECK_NOTHROW(geweke_z(ar1(100, 0.2, 1)));
}

TEST_CASE("batch_means_variance") {
  // Batch means of size 1 reduce to the sample variance.
  const std::vector<double> x{1, 2, 3, 4};
  CHECK(batch_means_variance(x, 20) == doctest::Approx(5.0 / 3.0));
  CHECK_THROWS_AS(batch_means_variance(std::vector<double>{1.0}), Error);
  // AR(1) asymptotic variance is 1 / (1 - phi)^2 for unit innovations.
  const auto a = ar1(400000, 0.5, 12);
  CHECK(batch_means_variance(a) == doctest::Approx(4.0).epsilon(0.2));
}

TEST_CASE("effective_sample_size on independent noise") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    std::mt19937_64 rng(seed);
    const auto x = oracle::random_vector(10000, rng);
    const auto e = effective_sample_size(x);
    CHECK_FALSE(e.degenerate);
    CHECK(e.ess <= 10000.0);
    CHECK(e.ess >= 8000.0);
  }
}

TEST_CASE("effective_sample_size on AR(1)") {
  const double phi = 0.9;
  const std::size_t n = 100000;
  const auto x = ar1(n, phi, 4);
  const double analytic = static_cast<double>(n) * (1 - phi) / (1 + phi);
  CHECK(effective_sample_size(x).ess == doctest::Approx(analytic).epsilon(0.15));

  std::vector<double> thinned;
  for (std::size_t i = 0; i < n; i += 10) thinned.push_back(x[i]);
  const double per_full = effective_sample_size(x).ess / static_cast<double>(n);
  const double per_thin = effective_sample_size(thinned).ess / static_cast<double>(thinned.size());
  CHECK(per_thin > per_full);
}

TEST_CASE("effective_sample_size edge cases") {
  const auto c = effective_sample_size(std::vector<double>(10, 2.0));
  CHECK(c.degenerate);
  CHECK_THROWS_AS(effective_sample_size(std::vector<double>(9, 1.0)), Error);
  std::vector<double> alternating(1000);
  for (std::size_t i = 0; i < alternating.size(); ++i) alternating[i] = i % 2 ? 1.0 : -1.0;
  const auto a = effective_sample_size(alternating);
  CHECK(a.ess <= 1000.0);
  CHECK(a.ess > 0.0);
}

TEST_CASE("sentinel_sites") {
  CHECK(sentinel_sites(1) == std::vector<std::size_t>{0});
  CHECK(sentinel_sites(9) == std::vector<std::size_t>{0, 2, 4, 6, 8});
  CHECK(sentinel_sites(100) == std::vector<std::size_t>{0, 25, 50, 74, 99});
  CHECK(sentinel_sites(0).empty());
}

TEST_CASE("summarize tolerates empty and short traces") {
  const CountData data({3, 4}, {2.0, 2.0});
  PosteriorSamples s;
  s.n = 2;
  s.accepted = {5, 6};
  s.proposed = {10, 10};
  auto t = summarize(s, data);
  CHECK(t.acceptance.overall == doctest::Approx(0.55));
  REQUIRE(t.quantities.size() == 5);
  CHECK(t.quantities[0].name == "kappa_u");
  CHECK(t.quantities[3].name == "eta[0]");
  CHECK_FALSE(t.quantities[0].geweke_z.has_value());
  CHECK_FALSE(t.warnings.empty());

  std::mt19937_64 rng(6);
  for (int k = 0; k < 150; ++k) {
    const auto u = oracle::random_vector(2, rng);
    s.states.push_back({{u[0] - u[1], u[1] - u[0]}, oracle::random_vector(2, rng), 1.0 + k, 2.0});
  }
  t = summarize(s, data);
  CHECK(t.quantities[0].geweke_z.has_value());
  CHECK(t.quantities[0].ess.has_value());
  CHECK_FALSE(t.quantities[1].geweke_z.has_value());  // kappa_v constant
  const auto traces = monitored_traces(s, data);
  CHECK(traces[2].values[0] == doctest::Approx(log_likelihood(data, s.states[0].eta())));
}
