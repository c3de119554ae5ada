#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "decomp/sparse_symmetric.hpp"

namespace decomp {

/// Undirected edge with first < second.
using Edge = std::pair<std::size_t, std::size_t>;

/// Regions and their neighbor relation. Immutable once built.
class AdjacencyGraph {
 public:
  AdjacencyGraph() = default;

  /// Edges may be given in either orientation and may repeat; they are
  /// normalized and deduplicated. Throws on self-loops, out-of-range
  /// indices, a label count other than n, or repeated labels.
  AdjacencyGraph(std::size_t n, std::vector<Edge> edges, std::vector<std::string> labels = {});

  std::size_t size() const noexcept { return n_; }
  std::span<const Edge> edges() const noexcept { return edges_; }
  std::span<const std::string> labels() const noexcept { return labels_; }
  bool has_labels() const noexcept { return !labels_.empty(); }

  std::span<const std::size_t> neighbors(std::size_t i) const;
  std::size_t degree(std::size_t i) const { return neighbors(i).size(); }

  AdjacencyGraph with_labels(std::vector<std::string> labels) const;

 private:
  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::string> labels_;
  std::vector<std::size_t> offsets_{0};
  std::vector<std::size_t> adjacent_;
};

struct AdjacencyReadOptions {
  /// Reject files in which j appears in i's row but i not in j's row.
  bool strict = false;
  /// Dimension imposed by the caller; an `n=` header in the file must agree.
  std::optional<std::size_t> n;
};

/// Parses the `<index>: <neighbors...>` text format.
AdjacencyGraph read_adjacency(std::istream& in, const AdjacencyReadOptions& options = {});
AdjacencyGraph read_adjacency_file(const std::string& path,
                                   const AdjacencyReadOptions& options = {});

/// Rook (4-neighbor) adjacency on an nrow x ncol lattice, row-major indexing.
AdjacencyGraph lattice_graph(std::size_t nrow, std::size_t ncol);

/// First-order intrinsic GMRF structure: degree on the diagonal, -1 for
/// each edge, so that u'Ru = sum over edges of (u_i - u_j)^2.
SparseSymmetric build_igmrf1_precision(const AdjacencyGraph& g);

/// Second-order structure on a regular grid (row-major), with
/// x'Qx = sum_j (sum_{i~j} x_i - 4 x_j)^2. Cells beyond the border take the
/// value of the nearest cell inside, so every location has four neighbors.
SparseSymmetric build_igmrf2_grid_precision(std::size_t nrow, std::size_t ncol);

/// Component label per node. Labels are 0..k-1, numbered in order of each
/// component's smallest member.
std::vector<std::size_t> connected_components(const AdjacencyGraph& g);

/// Number of distinct labels in a labeling from connected_components.
std::size_t component_count(std::span<const std::size_t> labels);

}  // namespace decomp
