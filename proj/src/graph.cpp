#include "decomp/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <set>
#include <string_view>
#include <unordered_set>

#include "decomp/error.hpp"

namespace decomp {

AdjacencyGraph::AdjacencyGraph(std::size_t n, std::vector<Edge> edges,
                               std::vector<std::string> labels)
    : n_(n), labels_(std::move(labels)) {
  for (auto& [i, j] : edges) {
    if (i == j) throw Error("self-loop at node " + std::to_string(i));
    if (i >= n || j >= n)
      throw Error("edge {" + std::to_string(i) + ", " + std::to_string(j) +
                  "} references a node outside 0.." + std::to_string(n) + "-1");
    if (i > j) std::swap(i, j);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  edges_ = std::move(edges);

  if (!labels_.empty()) {
    if (labels_.size() != n) throw Error("label count does not match node count");
    std::unordered_set<std::string_view> seen;
    for (const auto& l : labels_)
      if (!seen.insert(l).second) throw Error("duplicate region identifier '" + l + "'");
  }

  std::vector<std::size_t> deg(n, 0);
  for (const auto& [i, j] : edges_) {
    ++deg[i];
    ++deg[j];
  }
  offsets_.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) offsets_[i + 1] = offsets_[i] + deg[i];
  adjacent_.resize(offsets_[n]);
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (const auto& [i, j] : edges_) {
    adjacent_[fill[i]++] = j;
    adjacent_[fill[j]++] = i;
  }
  for (std::size_t i = 0; i < n; ++i)
    std::sort(adjacent_.begin() + static_cast<std::ptrdiff_t>(offsets_[i]),
              adjacent_.begin() + static_cast<std::ptrdiff_t>(offsets_[i + 1]));
}

std::span<const std::size_t> AdjacencyGraph::neighbors(std::size_t i) const {
  if (i >= n_) throw Error("node index out of range");
  return std::span(adjacent_).subspan(offsets_[i], offsets_[i + 1] - offsets_[i]);
}

AdjacencyGraph AdjacencyGraph::with_labels(std::vector<std::string> labels) const {
  return AdjacencyGraph(n_, edges_, std::move(labels));
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::size_t parse_index(std::string_view token, std::size_t line) {
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size())
    throw ParseError(line, "expected a non-negative integer, got '" + std::string(token) + "'");
  return value;
}

}  // namespace

AdjacencyGraph read_adjacency(std::istream& in, const AdjacencyReadOptions& options) {
  std::optional<std::size_t> declared = options.n;
  // row owner -> (neighbors, line)
  std::map<std::size_t, std::pair<std::vector<std::size_t>, std::size_t>> rows;
  std::size_t max_index = 0;
  bool any_index = false;
  bool seen_content = false;

  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;

    if (!seen_content && line.starts_with("n=")) {
      seen_content = true;
      const std::size_t n = parse_index(trim(line.substr(2)), line_no);
      if (declared && *declared != n)
        throw ParseError(line_no, "header declares n=" + std::to_string(n) + " but " +
                                      std::to_string(*declared) + " regions are expected");
      declared = n;
      continue;
    }
    seen_content = true;

    const auto colon = line.find(':');
    if (colon == std::string_view::npos) throw ParseError(line_no, "missing ':' separator");
    const std::size_t owner = parse_index(trim(line.substr(0, colon)), line_no);
    if (rows.contains(owner))
      throw ParseError(line_no, "duplicate region identifier " + std::to_string(owner));

    std::vector<std::size_t> nbrs;
    std::string_view rest = line.substr(colon + 1);
    while (true) {
      rest = trim(rest);
      if (rest.empty()) break;
      const auto sep = rest.find_first_of(" \t");
      const std::string_view token = rest.substr(0, sep);
      const std::size_t j = parse_index(token, line_no);
      if (j == owner) throw ParseError(line_no, "region " + std::to_string(j) + " lists itself");
      nbrs.push_back(j);
      max_index = std::max(max_index, j);
      if (sep == std::string_view::npos) break;
      rest = rest.substr(sep);
    }
    max_index = std::max(max_index, owner);
    any_index = true;
    rows.emplace(owner, std::pair{std::move(nbrs), line_no});
  }

  const std::size_t n = declared ? *declared : (any_index ? max_index + 1 : 0);
  std::set<Edge> directed;
  std::vector<Edge> edges;
  for (const auto& [owner, entry] : rows) {
    const auto& [nbrs, line] = entry;
    if (owner >= n)
      throw ParseError(line, "region index " + std::to_string(owner) + " out of range (n=" +
                                 std::to_string(n) + ")");
    for (const std::size_t j : nbrs) {
      if (j >= n)
        throw ParseError(line, "neighbor index " + std::to_string(j) + " out of range (n=" +
                                   std::to_string(n) + ")");
      directed.emplace(owner, j);
      edges.emplace_back(owner, j);
    }
  }
  if (options.strict) {
    for (const auto& [i, j] : directed)
      if (!directed.contains({j, i}))
        throw ParseError(rows.at(i).second, "asymmetric adjacency: " + std::to_string(j) +
                                                " is listed for " + std::to_string(i) +
                                                " but not the reverse");
  }
  return AdjacencyGraph(n, std::move(edges));
}

AdjacencyGraph read_adjacency_file(const std::string& path, const AdjacencyReadOptions& options) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open adjacency file '" + path + "'");
  return read_adjacency(in, options);
}

AdjacencyGraph lattice_graph(std::size_t nrow, std::size_t ncol) {
  std::vector<Edge> edges;
  for (std::size_t r = 0; r < nrow; ++r)
    for (std::size_t c = 0; c < ncol; ++c) {
      const std::size_t k = r * ncol + c;
      if (c + 1 < ncol) edges.emplace_back(k, k + 1);
      if (r + 1 < nrow) edges.emplace_back(k, k + ncol);
    }
  return AdjacencyGraph(nrow * ncol, std::move(edges));
}

SparseSymmetric build_igmrf1_precision(const AdjacencyGraph& g) {
  std::vector<Triplet> t;
  t.reserve(g.size() + g.edges().size());
  for (std::size_t i = 0; i < g.size(); ++i)
    t.push_back({i, i, static_cast<double>(g.degree(i))});
  for (const auto& [i, j] : g.edges()) t.push_back({j, i, -1.0});
  return SparseSymmetric::from_triplets(g.size(), t);
}

SparseSymmetric build_igmrf2_grid_precision(std::size_t nrow, std::size_t ncol) {
  if (nrow == 0 || ncol == 0) throw Error("grid dimensions must be positive");
  const std::size_t n = nrow * ncol;
  std::vector<Triplet> t;
  // Q = D'D where row j of D computes sum_{i~j} x_i - 4 x_j under the
  // replicate-border rule.
  for (std::size_t r = 0; r < nrow; ++r)
    for (std::size_t c = 0; c < ncol; ++c) {
      const std::size_t j = r * ncol + c;
      std::map<std::size_t, double> row;
      row[j] -= 4.0;
      row[(r > 0 ? r - 1 : r) * ncol + c] += 1.0;
      row[(r + 1 < nrow ? r + 1 : r) * ncol + c] += 1.0;
      row[r * ncol + (c > 0 ? c - 1 : c)] += 1.0;
      row[r * ncol + (c + 1 < ncol ? c + 1 : c)] += 1.0;
      for (const auto& [a, da] : row)
        for (const auto& [b, db] : row)
          if (a >= b && da * db != 0.0) t.push_back({a, b, da * db});
    }
  return SparseSymmetric::from_triplets(n, t);
}

std::vector<std::size_t> connected_components(const AdjacencyGraph& g) {
  constexpr auto unset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> label(g.size(), unset);
  std::vector<std::size_t> stack;
  std::size_t next = 0;
  for (std::size_t s = 0; s < g.size(); ++s) {
    if (label[s] != unset) continue;
    label[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      const std::size_t i = stack.back();
      stack.pop_back();
      for (const std::size_t j : g.neighbors(i))
        if (label[j] == unset) {
          label[j] = next;
          stack.push_back(j);
        }
    }
    ++next;
  }
  return label;
}

std::size_t component_count(std::span<const std::size_t> labels) {
  std::size_t k = 0;
  for (const std::size_t l : labels) k = std::max(k, l + 1);
  return k;
}

}  // namespace decomp
