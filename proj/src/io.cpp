#include "decomp/io.hpp"

#include <algorithm>
#include <charconv>
#include <fmt/format.h>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string_view>

#include "decomp/error.hpp"

namespace decomp::io {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  while (true) {
    const auto pos = s.find(sep);
    out.push_back(trim(s.substr(0, pos)));
    if (pos == std::string_view::npos) break;
    s = s.substr(pos + 1);
  }
  return out;
}

std::vector<std::string_view> tokens(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t' && s[i] != '\r') ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

template <class T>
T parse_number(std::string_view token, std::size_t line, const char* what) {
  T value{};
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size())
    throw ParseError(line, fmt::format("invalid {} '{}'", what, token));
  return value;
}

std::ifstream open_input(const std::filesystem::path& path, const char* what) {
  std::ifstream in(path);
  if (!in) throw Error(fmt::format("cannot open {} file '{}'", what, path.string()));
  return in;
}

/// Reads the next line that is not blank; returns false at end of input.
bool next_line(std::istream& in, std::string& line, std::size_t& line_no) {
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) return true;
  }
  return false;
}

}  // namespace

std::string format_double(double x) { return fmt::format("{:.17g}", x); }

CountData read_counts(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  if (!next_line(in, line, line_no)) throw ParseError(0, "counts file is empty");
  std::string_view header = trim(line);
  if (header.starts_with("\xEF\xBB\xBF")) header.remove_prefix(3);
  const auto cols = split(header, ',');
  if (cols.size() != 3 || cols[0] != "region_id" || cols[1] != "y" || cols[2] != "e")
    throw ParseError(line_no, "expected header 'region_id,y,e'");

  std::vector<std::string> labels;
  std::vector<std::uint64_t> y;
  std::vector<double> e;
  while (next_line(in, line, line_no)) {
    const auto fields = split(trim(line), ',');
    if (fields.size() != 3)
      throw ParseError(line_no, fmt::format("expected 3 fields, found {}", fields.size()));
    if (fields[0].empty()) throw ParseError(line_no, "empty region_id");
    labels.emplace_back(fields[0]);
    y.push_back(parse_number<std::uint64_t>(fields[1], line_no, "count"));
    const double ei = parse_number<double>(fields[2], line_no, "expected count");
    if (!(ei > 0.0)) throw ParseError(line_no, "expected count must be positive");
    e.push_back(ei);
  }
  return CountData(std::move(y), std::move(e), std::move(labels));
}

CountData read_counts_file(const std::filesystem::path& path) {
  auto in = open_input(path, "counts");
  return read_counts(in);
}

std::vector<double> read_truth_file(const std::filesystem::path& path, const CountData& data) {
  auto in = open_input(path, "truth");
  std::string line;
  std::size_t line_no = 0;
  if (!next_line(in, line, line_no) || trim(line) != "region_id,eta")
    throw ParseError(line_no, "expected header 'region_id,eta'");
  std::vector<double> eta;
  while (next_line(in, line, line_no)) {
    const auto fields = split(trim(line), ',');
    if (fields.size() != 2) throw ParseError(line_no, "expected 2 fields");
    if (eta.size() >= data.size() || fields[0] != data.label(eta.size()))
      throw ParseError(line_no, "region order differs from the counts file");
    eta.push_back(parse_number<double>(fields[1], line_no, "eta"));
  }
  if (eta.size() != data.size()) throw DimensionError("truth file does not cover every region");
  return eta;
}

void write_sparse(std::ostream& out, const SparseSymmetric& m) {
  out << "% symmetric lower triangle, 0-based\n";
  out << "% n=" << m.size() << " nnz=" << m.nonzeros() << '\n';
  m.for_each_entry([&](std::size_t i, std::size_t j, double v) {
    out << i << ' ' << j << ' ' << format_double(v) << '\n';
  });
}

SparseSymmetric read_sparse(std::istream& in) {
  std::vector<Triplet> triplets;
  std::optional<std::size_t> n;
  std::size_t max_index = 0;
  std::string line;
  std::size_t line_no = 0;
  while (next_line(in, line, line_no)) {
    const auto t = trim(line);
    if (t.front() == '%') {
      for (const auto tok : tokens(t.substr(1)))
        if (tok.starts_with("n=")) n = parse_number<std::size_t>(tok.substr(2), line_no, "dimension");
      continue;
    }
    const auto tok = tokens(t);
    if (tok.size() != 3) throw ParseError(line_no, "expected 'i j value'");
    const auto i = parse_number<std::size_t>(tok[0], line_no, "row index");
    const auto j = parse_number<std::size_t>(tok[1], line_no, "column index");
    if (i < j) throw ParseError(line_no, "entry above the diagonal");
    triplets.push_back({i, j, parse_number<double>(tok[2], line_no, "value")});
    max_index = std::max(max_index, i);
  }
  const std::size_t dim = n ? *n : (triplets.empty() ? 0 : max_index + 1);
  return SparseSymmetric::from_triplets(dim, triplets);
}

namespace {

constexpr std::string_view kTraceMagic = "decomp-trace";
constexpr int kTraceVersion = 1;

template <class T>
void write_row(std::ostream& out, std::string_view key, const std::vector<T>& values) {
  out << key;
  for (const auto& v : values) out << ' ' << v;
  out << '\n';
}

}  // namespace

void write_trace(std::ostream& out, const PosteriorSamples& s) {
  const auto& h = s.hyper;
  out << kTraceMagic << ' ' << kTraceVersion << '\n';
  out << "n " << s.n << '\n';
  out << "a_u " << format_double(h.a_u) << '\n';
  out << "b_u " << format_double(h.b_u) << '\n';
  out << "a_v " << format_double(h.a_v) << '\n';
  out << "b_v " << format_double(h.b_v) << '\n';
  out << "proposal_sd " << format_double(h.proposal_sd) << '\n';
  out << "iterations " << h.iterations << '\n';
  out << "burn_in " << h.burn_in << '\n';
  out << "thinning " << h.thinning << '\n';
  out << "seed " << h.seed << '\n';
  write_row(out, "accepted", s.accepted);
  write_row(out, "proposed", s.proposed);
  out << "samples " << s.states.size() << '\n';
  for (const auto& st : s.states) {
    out << format_double(st.kappa_u) << ' ' << format_double(st.kappa_v);
    for (const double x : st.u) out << ' ' << format_double(x);
    for (const double x : st.v) out << ' ' << format_double(x);
    out << '\n';
  }
}

PosteriorSamples read_trace(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  auto expect = [&](std::string_view key, std::size_t count) {
    if (!next_line(in, line, line_no))
      throw ParseError(line_no, fmt::format("trace ends before '{}'", key));
    auto tok = tokens(line);
    if (tok.empty() || tok[0] != key)
      throw ParseError(line_no, fmt::format("expected '{}'", key));
    if (count != static_cast<std::size_t>(-1) && tok.size() != count + 1)
      throw ParseError(line_no, fmt::format("'{}' expects {} values", key, count));
    tok.erase(tok.begin());
    return tok;
  };
  const auto one = [&](std::string_view key) { return expect(key, 1)[0]; };

  const auto version = parse_number<int>(one(kTraceMagic), line_no, "version");
  if (version != kTraceVersion)
    throw ParseError(line_no, fmt::format("unsupported trace version {}", version));

  PosteriorSamples s;
  s.n = parse_number<std::size_t>(one("n"), line_no, "n");
  auto& h = s.hyper;
  h.a_u = parse_number<double>(one("a_u"), line_no, "a_u");
  h.b_u = parse_number<double>(one("b_u"), line_no, "b_u");
  h.a_v = parse_number<double>(one("a_v"), line_no, "a_v");
  h.b_v = parse_number<double>(one("b_v"), line_no, "b_v");
  h.proposal_sd = parse_number<double>(one("proposal_sd"), line_no, "proposal_sd");
  h.iterations = parse_number<std::uint64_t>(one("iterations"), line_no, "iterations");
  h.burn_in = parse_number<std::uint64_t>(one("burn_in"), line_no, "burn_in");
  h.thinning = parse_number<std::uint64_t>(one("thinning"), line_no, "thinning");
  h.seed = parse_number<std::uint64_t>(one("seed"), line_no, "seed");
  for (const auto tok : expect("accepted", s.n))
    s.accepted.push_back(parse_number<std::uint64_t>(tok, line_no, "count"));
  for (const auto tok : expect("proposed", s.n))
    s.proposed.push_back(parse_number<std::uint64_t>(tok, line_no, "count"));
  const auto count = parse_number<std::size_t>(one("samples"), line_no, "sample count");

  s.states.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    if (!next_line(in, line, line_no))
      throw ParseError(line_no, fmt::format("trace holds {} of {} samples", k, count));
    const auto tok = tokens(line);
    if (tok.size() != 2 + 2 * s.n)
      throw ParseError(line_no, fmt::format("sample row has {} values, expected {}", tok.size(),
                                            2 + 2 * s.n));
    ChainState st;
    st.kappa_u = parse_number<double>(tok[0], line_no, "kappa_u");
    st.kappa_v = parse_number<double>(tok[1], line_no, "kappa_v");
    st.u.resize(s.n);
    st.v.resize(s.n);
    for (std::size_t i = 0; i < s.n; ++i) {
      st.u[i] = parse_number<double>(tok[2 + i], line_no, "u");
      st.v[i] = parse_number<double>(tok[2 + s.n + i], line_no, "v");
    }
    s.states.push_back(std::move(st));
  }
  if (next_line(in, line, line_no)) throw ParseError(line_no, "unexpected data after samples");
  return s;
}

PosteriorSamples read_trace_file(const std::filesystem::path& path) {
  auto in = open_input(path, "trace");
  return read_trace(in);
}

}  // namespace decomp::io
