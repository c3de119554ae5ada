#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "decomp/sampler.hpp"
#include "decomp/sparse_symmetric.hpp"

namespace decomp::io {

/// 17 significant digits; parses back to the identical double.
std::string format_double(double x);

/// Delimited text with header `region_id,y,e`; row order is index order.
CountData read_counts(std::istream& in);
CountData read_counts_file(const std::filesystem::path& path);

/// Optional `region_id,eta` file with the true log-relative risk, for
/// simulation fixtures. Rows must follow the counts' region order.
std::vector<double> read_truth_file(const std::filesystem::path& path, const CountData& data);

/// Coordinate text: `%` comment header, then `i j value` per stored
/// lower-triangle entry (i >= j, 0-based), column by column.
void write_sparse(std::ostream& out, const SparseSymmetric& m);
SparseSymmetric read_sparse(std::istream& in);

/// Versioned text container; see README for the layout.
void write_trace(std::ostream& out, const PosteriorSamples& samples);
PosteriorSamples read_trace(std::istream& in);
PosteriorSamples read_trace_file(const std::filesystem::path& path);

}  // namespace decomp::io
