#include "csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "esdr/error.hpp"

namespace esdr::cli {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

std::string unquote(std::string_view cell) {
  if (cell.size() >= 2 && cell.front() == '"' && cell.back() == '"') cell = cell.substr(1, cell.size() - 2);
  return std::string(cell);
}

double parse_number(std::string_view cell, const std::string& where) {
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size())
    throw Error("non-numeric cell '" + std::string(cell) + "' at " + where);
  if (!std::isfinite(value)) throw Error("non-finite cell '" + std::string(cell) + "' at " + where);
  return value;
}

}  // namespace

CsvTable parse_csv(std::istream& in, const std::string& source) {
  CsvTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);  // UTF-8 BOM
    if (!trim(line).empty()) break;
  }
  if (trim(line).empty()) throw Error(source + ": empty file, a header row is required");
  std::set<std::string> seen;
  for (auto cell : split(line)) {
    std::string name = unquote(cell);
    if (name.empty()) throw Error(source + ": empty column name in header");
    if (!seen.insert(name).second) throw Error(source + ": duplicate column name '" + name + "'");
    table.header.push_back(std::move(name));
  }

  std::vector<double> cells;
  Index rows = 0;
  const auto cols = table.header.size();
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto parts = split(line);
    if (parts.size() != cols)
      throw Error(source + ":" + std::to_string(line_no) + ": expected " + std::to_string(cols) + " cells, found " +
                  std::to_string(parts.size()));
    for (std::size_t c = 0; c < cols; ++c)
      cells.push_back(parse_number(parts[c], source + ":" + std::to_string(line_no) + " column '" +
                                                 table.header[c] + "'"));
    ++rows;
  }
  if (rows == 0) throw Error(source + ": no data rows");
  table.values = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      cells.data(), rows, static_cast<Index>(cols));
  return table;
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  return parse_csv(in, path);
}

Dataset dataset_from_table(const CsvTable& table, const std::vector<std::string>& response_cols) {
  std::vector<std::string> wanted = response_cols;
  if (wanted.empty()) {
    const bool has_y = std::find(table.header.begin(), table.header.end(), "y") != table.header.end();
    wanted.push_back(has_y ? "y" : table.header.back());
  }
  std::vector<Index> y_idx;
  for (const auto& name : wanted) {
    const auto it = std::find(table.header.begin(), table.header.end(), name);
    if (it == table.header.end()) throw Error("response column '" + name + "' not found in header");
    const auto idx = static_cast<Index>(it - table.header.begin());
    if (std::find(y_idx.begin(), y_idx.end(), idx) != y_idx.end())
      throw Error("response column '" + name + "' listed twice");
    y_idx.push_back(idx);
  }
  std::vector<Index> x_idx;
  for (Index c = 0; c < static_cast<Index>(table.header.size()); ++c)
    if (std::find(y_idx.begin(), y_idx.end(), c) == y_idx.end()) x_idx.push_back(c);
  if (x_idx.empty()) throw Error("no predictor columns left after removing the responses");
  return Dataset(table.values(Eigen::all, x_idx), table.values(Eigen::all, y_idx));
}

void write_csv(std::ostream& out, const std::vector<std::string>& header, const Matrix& values) {
  for (std::size_t c = 0; c < header.size(); ++c) out << (c ? "," : "") << header[c];
  out << '\n';
  std::ostringstream cell;
  for (Index i = 0; i < values.rows(); ++i) {
    for (Index c = 0; c < values.cols(); ++c) {
      cell.str({});
      cell << std::setprecision(17) << values(i, c);
      out << (c ? "," : "") << cell.str();
    }
    out << '\n';
  }
}

std::vector<std::string> default_header(Index p, Index s) {
  std::vector<std::string> header;
  for (Index c = 1; c <= p; ++c) header.push_back("x" + std::to_string(c));
  if (s == 1) {
    header.emplace_back("y");
  } else {
    for (Index c = 1; c <= s; ++c) header.push_back("y" + std::to_string(c));
  }
  return header;
}

}  // namespace esdr::cli
