#include "spsd/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "spsd/error.hpp"

namespace spsd {
namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool parse_double(std::string_view s, double& out) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

DataFormat parse_data_format(std::string_view name) {
  const std::string n = lower(std::string(name));
  if (n == "matrix_market" || n == "mtx" || n == "mm") return DataFormat::matrix_market;
  if (n == "csv_points" || n == "csv") return DataFormat::csv_points;
  if (n == "edge_list" || n == "edges") return DataFormat::edge_list;
  throw ArgumentError("unknown data format '" + std::string(name) + "'");
}

std::string_view to_string(DataFormat f) {
  switch (f) {
    case DataFormat::matrix_market: return "matrix_market";
    case DataFormat::csv_points: return "csv_points";
    case DataFormat::edge_list: return "edge_list";
  }
  return "unknown";
}

SpsdMatrix read_matrix_market(std::istream& in, double psd_tolerance, Index dimension_cap) {
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) throw FormatError("empty MatrixMarket file", 1);
  ++lineno;
  std::istringstream header(lower(line));
  std::string banner, object, layout, field, symmetry;
  header >> banner >> object >> layout >> field >> symmetry;
  if (banner != "%%matrixmarket" || object != "matrix")
    throw FormatError("missing %%MatrixMarket matrix banner", lineno);
  if (layout != "coordinate") throw FormatError("only coordinate MatrixMarket files are supported", lineno);
  if (field != "real" && field != "integer" && field != "pattern")
    throw FormatError("unsupported MatrixMarket field '" + field + "'", lineno);
  if (symmetry != "symmetric")
    throw FormatError("MatrixMarket header declares '" + symmetry + "', expected symmetric", lineno);
  const bool pattern = field == "pattern";

  long long rows = -1, cols = -1, nnz = -1;
  while (std::getline(in, line)) {
    ++lineno;
    const auto t = trim(line);
    if (t.empty() || t.front() == '%') continue;
    std::istringstream ss{std::string(t)};
    if (!(ss >> rows >> cols >> nnz) || rows < 1 || cols < 1 || nnz < 0)
      throw FormatError("malformed MatrixMarket size line", lineno);
    break;
  }
  if (rows < 0) throw FormatError("MatrixMarket size line missing", lineno);
  if (rows != cols) throw FormatError("symmetric MatrixMarket matrix must be square", lineno);
  if (rows > dimension_cap)
    throw FormatError("dimension " + std::to_string(rows) + " exceeds the dense cap " +
                          std::to_string(dimension_cap),
                      lineno);

  Matrix a = Matrix::Zero(rows, cols);
  long long seen = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto t = trim(line);
    if (t.empty() || t.front() == '%') continue;
    std::istringstream ss{std::string(t)};
    long long i = 0, j = 0;
    double v = 1.0;
    std::string value;
    if (!(ss >> i >> j)) throw FormatError("malformed MatrixMarket entry", lineno);
    if (!pattern && !(ss >> value && parse_double(value, v)))
      throw FormatError("malformed MatrixMarket value", lineno);
    if (i < 1 || i > rows || j < 1 || j > cols) throw FormatError("MatrixMarket index out of range", lineno);
    a(i - 1, j - 1) += v;
    if (i != j) a(j - 1, i - 1) += v;
    ++seen;
  }
  if (seen != nnz)
    throw FormatError("MatrixMarket declares " + std::to_string(nnz) + " entries but has " +
                      std::to_string(seen));
  try {
    return SpsdMatrix(a, psd_tolerance, dimension_cap);
  } catch (const ArgumentError& e) {
    throw FormatError(std::string("MatrixMarket matrix is not SPSD: ") + e.what());
  }
}

void write_matrix_market(std::ostream& out, const Matrix& a, double drop_below) {
  if (a.rows() != a.cols()) throw ArgumentError("write_matrix_market: matrix must be square");
  std::ostringstream body;
  body << std::setprecision(17);
  long long nnz = 0;
  for (Index j = 0; j < a.cols(); ++j)
    for (Index i = j; i < a.rows(); ++i)
      if (std::abs(a(i, j)) > drop_below) {
        body << (i + 1) << ' ' << (j + 1) << ' ' << a(i, j) << '\n';
        ++nnz;
      }
  out << "%%MatrixMarket matrix coordinate real symmetric\n"
      << a.rows() << ' ' << a.cols() << ' ' << nnz << '\n'
      << body.str();
  if (!out) throw IoError("write_matrix_market: write failed");
}

PointCloud read_csv_points(std::istream& in) {
  PointCloud p;
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  std::size_t width = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto fields = split(line, ',');
    std::vector<double> values(fields.size());
    bool numeric = true;
    for (std::size_t c = 0; c < fields.size() && numeric; ++c) numeric = parse_double(fields[c], values[c]);
    if (first) {
      first = false;
      width = fields.size();
      if (!numeric) {
        for (auto f : fields) p.feature_names.emplace_back(trim(f));
        continue;
      }
    }
    if (fields.size() != width)
      throw FormatError("expected " + std::to_string(width) + " fields, found " +
                            std::to_string(fields.size()),
                        lineno);
    if (!numeric) throw FormatError("non-numeric CSV field", lineno);
    rows.push_back(std::move(values));
  }
  p.X.resize(static_cast<Index>(rows.size()), static_cast<Index>(width));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < width; ++c) p.X(static_cast<Index>(r), static_cast<Index>(c)) = rows[r][c];
  if (!p.X.allFinite()) throw FormatError("CSV contains non-finite values");
  return p;
}

void write_csv_points(std::ostream& out, const PointCloud& p) {
  out << std::setprecision(17);
  if (!p.feature_names.empty()) {
    for (std::size_t c = 0; c < p.feature_names.size(); ++c) out << (c ? "," : "") << p.feature_names[c];
    out << '\n';
  }
  for (Index i = 0; i < p.n(); ++i) {
    for (Index j = 0; j < p.d(); ++j) out << (j ? "," : "") << p.X(i, j);
    out << '\n';
  }
  if (!out) throw IoError("write_csv_points: write failed");
}

Graph read_edge_list(std::istream& in) {
  std::vector<Edge> edges;
  std::string line;
  std::size_t lineno = 0;
  Index n = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto t = trim(line);
    if (t.empty() || t.front() == '#' || t.front() == '%') continue;
    std::istringstream ss{std::string(t)};
    long long i = 0, j = 0;
    std::string w;
    Edge e;
    if (!(ss >> i >> j)) throw FormatError("malformed edge", lineno);
    if (i < 0 || j < 0) throw FormatError("negative node index", lineno);
    if (ss >> w && !parse_double(w, e.weight)) throw FormatError("malformed edge weight", lineno);
    if (!(e.weight >= 0.0)) throw FormatError("edge weight must be nonnegative", lineno);
    e.i = i;
    e.j = j;
    n = std::max<Index>(n, std::max<Index>(i, j) + 1);
    edges.push_back(e);
  }
  if (n == 0) throw FormatError("edge list is empty");
  return Graph(n, edges);
}

Dataset load_dataset(const std::filesystem::path& path, DataFormat format) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  switch (format) {
    case DataFormat::matrix_market: return read_matrix_market(in);
    case DataFormat::csv_points: return read_csv_points(in);
    case DataFormat::edge_list: return read_edge_list(in);
  }
  throw ArgumentError("unknown data format");
}

}  // namespace spsd
