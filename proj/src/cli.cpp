#include "decomp/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <fmt/format.h>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <openssl/evp.h>
#include <sstream>

#include "decomp/credibility.hpp"
#include "decomp/diagnostics.hpp"
#include "decomp/error.hpp"
#include "decomp/graph.hpp"
#include "decomp/io.hpp"

namespace decomp::cli {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

constexpr const char* kPrecisionFile = "precision.txt";
constexpr const char* kTraceFile = "trace.txt";
constexpr const char* kReportFile = "report.json";
constexpr const char* kDetailsFile = "details.csv";
constexpr const char* kManifestFile = "manifest.json";

std::ofstream open_output(const RunConfig& config, const char* name) {
  fs::create_directories(config.output);
  std::ofstream out(config.output / name, std::ios::binary);
  if (!out) throw Error(fmt::format("cannot write '{}'", (config.output / name).string()));
  return out;
}

void require_file(const fs::path& path, const char* what) {
  if (path.empty()) throw Error(fmt::format("no {} file configured", what));
  if (!fs::exists(path)) throw Error(fmt::format("{} file '{}' does not exist", what, path.string()));
}

CountData load_counts(const RunConfig& config) {
  require_file(config.counts, "counts");
  return io::read_counts_file(config.counts);
}

AdjacencyGraph load_graph(const RunConfig& config, std::optional<std::size_t> n) {
  require_file(config.adjacency, "adjacency");
  AdjacencyReadOptions options;
  options.strict = config.strict_adjacency;
  options.n = n;
  return read_adjacency_file(config.adjacency.string(), options);
}

std::optional<double> finite_or_empty(std::optional<double> x) {
  if (x && !std::isfinite(*x)) return std::nullopt;
  return x;
}

Json optional_number(std::optional<double> x) {
  x = finite_or_empty(x);
  return x ? Json(*x) : Json(nullptr);
}

double pearson(std::span<const double> a, std::span<const double> b) {
  const auto n = static_cast<double>(a.size());
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

Json build_report(const PosteriorSamples& samples, const CountData& data,
                  const std::optional<fs::path>& truth) {
  const auto summary = summarize(samples, data);
  Json report;
  report["seed"] = samples.hyper.seed;
  report["n"] = samples.n;
  report["iterations"] = samples.hyper.iterations;
  report["burn_in"] = samples.hyper.burn_in;
  report["thinning"] = samples.hyper.thinning;
  report["retained"] = samples.states.size();
  report["acceptance"] = {{"overall", summary.acceptance.overall},
                          {"per_site", summary.acceptance.per_site}};
  Json diag = Json::array();
  for (const auto& q : summary.quantities)
    diag.push_back({{"name", q.name},
                    {"geweke_z", optional_number(q.geweke_z)},
                    {"ess", optional_number(q.ess)}});
  report["diagnostics"] = std::move(diag);
  report["warnings"] = summary.warnings;

  if (truth) {
    const auto true_eta = io::read_truth_file(*truth, data);
    if (samples.states.empty()) {
      report["truth_correlation"] = nullptr;
    } else {
      std::vector<double> mean(samples.n, 0.0);
      for (const auto& st : samples.states)
        for (std::size_t i = 0; i < samples.n; ++i) mean[i] += st.u[i] + st.v[i];
      for (auto& m : mean) m /= static_cast<double>(samples.states.size());
      report["truth_correlation"] = pearson(mean, true_eta);
    }
  }
  return report;
}

void write_report(const RunConfig& config, const Json& report) {
  auto out = open_output(config, kReportFile);
  out << report.dump(2) << '\n';
}

std::vector<double> dense_solve(std::vector<std::vector<double>> a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a[i][k]) > std::abs(a[piv][k])) piv = i;
    std::swap(a[k], a[piv]);
    std::swap(b[k], b[piv]);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = a[i][k] / a[k][k];
      for (std::size_t j = k; j < n; ++j) a[i][j] -= f * a[k][j];
      b[i] -= f * b[k];
    }
  }
  std::vector<double> x(n);
  for (std::size_t k = n; k-- > 0;) {
    double s = b[k];
    for (std::size_t j = k + 1; j < n; ++j) s -= a[k][j] * x[j];
    x[k] = s / a[k][k];
  }
  return x;
}

void dense_check_smoother(const MultiscaleSmoother& smoother, const SparseSymmetric& r,
                          std::span<const double> x) {
  constexpr std::size_t kMaxDense = 2000;
  if (r.size() > kMaxDense)
    throw Error(fmt::format("dense check limited to {} regions", kMaxDense));
  const auto lambdas = smoother.scales().lambdas();
  for (std::size_t l = 0; l < lambdas.size(); ++l) {
    const auto sparse = smoother.smooth_at(l, x);
    const auto dense = dense_solve(r.scaled_plus_identity(lambdas[l], 1.0).to_dense(),
                                   {x.begin(), x.end()});
    double err = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      err = std::max(err, std::abs(sparse[i] - dense[i]));
      scale = std::max(scale, std::abs(dense[i]));
    }
    if (err > 1e-8 * std::max(scale, 1.0))
      throw Error(fmt::format("dense check failed at lambda={}: max deviation {}", lambdas[l], err));
  }
}

std::string sha256_hex(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(fmt::format("cannot read '{}'", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string data = buf.str();
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw Error("SHA-256 computation failed");
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

template <class F>
auto stage(const char* name, F&& f) {
  try {
    return f();
  } catch (const std::exception& e) {
    throw Error(fmt::format("{}: {}", name, e.what()));
  }
}

}  // namespace

RunConfig load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(fmt::format("cannot open config '{}'", path.string()));
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(fmt::format("config '{}': {}", path.string(), e.what()));
  }

  const fs::path base = path.parent_path();
  auto resolve = [&](const std::string& p) { return fs::path(p).is_absolute() ? fs::path(p) : base / p; };

  RunConfig c;
  try {
    if (j.contains("counts")) c.counts = resolve(j["counts"].get<std::string>());
    if (j.contains("adjacency")) c.adjacency = resolve(j["adjacency"].get<std::string>());
    if (j.contains("truth")) c.truth = resolve(j["truth"].get<std::string>());
    if (j.contains("output")) c.output = resolve(j["output"].get<std::string>());
    if (j.contains("grid"))
      c.grid = GridSpec{j["grid"].at("nrow").get<std::size_t>(), j["grid"].at("ncol").get<std::size_t>()};
    c.strict_adjacency = j.value("strict_adjacency", false);
    if (j.contains("scales")) c.scales = ScaleSet(j["scales"].get<std::vector<double>>());
    c.alpha = j.value("alpha", c.alpha);
    c.workers = j.value("workers", c.workers);
    c.dense_check = j.value("dense_check", false);
    if (j.contains("sampler")) {
      const auto& s = j["sampler"];
      auto& h = c.hyper;
      h.a_u = s.value("a_u", h.a_u);
      h.b_u = s.value("b_u", h.b_u);
      h.a_v = s.value("a_v", h.a_v);
      h.b_v = s.value("b_v", h.b_v);
      h.proposal_sd = s.value("proposal_sd", h.proposal_sd);
      h.iterations = s.value("iterations", h.iterations);
      h.burn_in = s.value("burn_in", h.burn_in);
      h.thinning = s.value("thinning", h.thinning);
      h.seed = s.value("seed", h.seed);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(fmt::format("config '{}': {}", path.string(), e.what()));
  }
  c.hyper.validate();
  if (!(c.alpha > 0.0 && c.alpha < 0.5)) throw Error("config: alpha must lie in (0, 0.5)");
  return c;
}

void apply(RunConfig& config, const Overrides& overrides) {
  if (overrides.seed) config.hyper.seed = *overrides.seed;
  if (overrides.output) config.output = *overrides.output;
}

std::vector<fs::path> cmd_precision(const RunConfig& config) {
  SparseSymmetric m = config.grid ? build_igmrf2_grid_precision(config.grid->nrow, config.grid->ncol)
                                  : build_igmrf1_precision(load_graph(config, std::nullopt));
  auto out = open_output(config, kPrecisionFile);
  io::write_sparse(out, m);
  return {kPrecisionFile};
}

std::vector<fs::path> cmd_sample(const RunConfig& config) {
  const auto data = load_counts(config);
  const auto graph = load_graph(config, data.size());
  const auto samples = run_chain(data, graph, config.hyper);
  {
    auto out = open_output(config, kTraceFile);
    io::write_trace(out, samples);
  }
  write_report(config, build_report(samples, data, config.truth));
  return {kTraceFile, kReportFile};
}

std::vector<fs::path> cmd_diagnose(const RunConfig& config, const fs::path& trace) {
  const auto data = load_counts(config);
  const auto samples = io::read_trace_file(trace);
  if (samples.n != data.size())
    throw DimensionError(fmt::format("trace has {} regions, counts have {}", samples.n, data.size()));
  write_report(config, build_report(samples, data, config.truth));
  return {kReportFile};
}

std::vector<fs::path> cmd_decompose(const RunConfig& config, const fs::path& trace) {
  const auto data = load_counts(config);
  const auto graph = load_graph(config, data.size());
  const auto samples = io::read_trace_file(trace);
  if (samples.n != graph.size())
    throw DimensionError(
        fmt::format("trace has {} regions, adjacency has {}", samples.n, graph.size()));
  if (samples.states.empty()) throw Error("trace holds no retained samples");

  auto r = build_igmrf1_precision(graph);
  const MultiscaleSmoother smoother(r, connected_components(graph), config.scales);
  if (config.dense_check)
    dense_check_smoother(smoother, r, log_field(data, samples.states.front()));
  const auto details = decompose_samples(samples, data, smoother, config.workers);

  auto out = open_output(config, kDetailsFile);
  out << "region_id,level,mean,prob_positive,class\n";
  for (std::size_t l = 0; l < config.scales.levels(); ++l) {
    const auto mean = posterior_mean(details, l);
    const auto map = pointwise_probability_map(details, l, config.alpha);
    for (std::size_t i = 0; i < data.size(); ++i)
      out << data.label(i) << ',' << l + 1 << ',' << io::format_double(mean[i]) << ','
          << io::format_double(map.prob_positive[i]) << ',' << to_string(map.classification[i])
          << '\n';
  }
  return {kDetailsFile};
}

std::vector<fs::path> cmd_run(const RunConfig& config) {
  auto files = stage("sample", [&] { return cmd_sample(config); });
  const auto decomposed =
      stage("decompose", [&] { return cmd_decompose(config, config.output / kTraceFile); });
  files.insert(files.end(), decomposed.begin(), decomposed.end());
  std::sort(files.begin(), files.end());

  stage("manifest", [&] {
    Json manifest;
    manifest["files"] = Json::array();
    for (const auto& f : files)
      manifest["files"].push_back({{"path", f.generic_string()},
                                   {"sha256", sha256_hex(config.output / f)}});
    auto out = open_output(config, kManifestFile);
    out << manifest.dump(2) << '\n';
    return 0;
  });
  files.emplace_back(kManifestFile);
  return files;
}

int main(int argc, char** argv) {
  CLI::App app{"Bayesian multiresolution decomposition of areal count data"};
  app.require_subcommand(1);

  fs::path config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> output;
  std::optional<std::string> trace;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON run configuration")->required();
    sub->add_option("--seed", seed, "override the sampler seed");
    sub->add_option("--output", output, "override the output directory");
  };
  auto* precision = app.add_subcommand("precision", "write the IGMRF precision matrix");
  auto* sample = app.add_subcommand("sample", "run the sampler; write trace and report");
  auto* decompose = app.add_subcommand("decompose", "decompose a trace into scale details");
  auto* run = app.add_subcommand("run", "sample, decompose and write a manifest");
  auto* diagnose = app.add_subcommand("diagnose", "convergence report for an existing trace");
  for (auto* sub : {precision, sample, decompose, run, diagnose}) add_common(sub);
  for (auto* sub : {decompose, diagnose})
    sub->add_option("--trace", trace, "trace file (default: <output>/trace.txt)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    RunConfig config = load_config(config_path);
    Overrides ov{seed, std::nullopt};
    if (output) ov.output = fs::path(*output);
    apply(config, ov);
    const fs::path trace_path = trace ? fs::path(*trace) : config.output / kTraceFile;

    std::vector<fs::path> written;
    if (precision->parsed()) written = stage("precision", [&] { return cmd_precision(config); });
    if (sample->parsed()) written = stage("sample", [&] { return cmd_sample(config); });
    if (decompose->parsed())
      written = stage("decompose", [&] { return cmd_decompose(config, trace_path); });
    if (diagnose->parsed())
      written = stage("diagnose", [&] { return cmd_diagnose(config, trace_path); });
    if (run->parsed()) written = cmd_run(config);
    for (const auto& f : written) std::cout << (config.output / f).string() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "decomp: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace decomp::cli
