#pragma once

#include <filesystem>
#include <iosfwd>
#include <string_view>
#include <variant>

#include "spsd/core.hpp"
#include "spsd/kernels.hpp"

namespace spsd {

enum class DataFormat { matrix_market, csv_points, edge_list };

DataFormat parse_data_format(std::string_view name);
std::string_view to_string(DataFormat f);

using Dataset = std::variant<PointCloud, Graph, SpsdMatrix>;

/// Throws IoError when the file cannot be opened and FormatError on parse failures.
Dataset load_dataset(const std::filesystem::path& path, DataFormat format);

/// Coordinate MatrixMarket with a `symmetric` qualifier (real, integer or
/// pattern field). Any other symmetry qualifier is a FormatError. Dense
/// storage is subject to `dimension_cap`.
SpsdMatrix read_matrix_market(std::istream& in, double psd_tolerance = kDefaultPsdTolerance,
                              Index dimension_cap = kDefaultDimensionCap);
/// Writes the lower triangle in coordinate symmetric form with 17 significant digits.
/// Entries with |a_ij| <= drop_below are omitted.
void write_matrix_market(std::ostream& out, const Matrix& a, double drop_below = 0.0);

/// Comma separated, optional header row (detected when the first line is not numeric).
PointCloud read_csv_points(std::istream& in);
void write_csv_points(std::ostream& out, const PointCloud& p);

/// "i j [w]" per line, 0-based indices, '#' or '%' comments. n is 1 + the largest index.
Graph read_edge_list(std::istream& in);

}  // namespace spsd
