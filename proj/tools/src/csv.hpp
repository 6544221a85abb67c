#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "esdr/dataset.hpp"

namespace esdr::cli {

/// A numeric table with a header row.
struct CsvTable {
  std::vector<std::string> header;
  Matrix values;
};

/// Parses comma-separated text with a mandatory header row. Cells must be finite
/// decimal numbers; duplicate header names, ragged rows and empty input are errors.
CsvTable parse_csv(std::istream& in, const std::string& source = "input");
CsvTable read_csv(const std::string& path);

/// Splits a table into predictors and the named response columns (default: "y" if
/// present, otherwise the last column). Every non-response column is a predictor.
Dataset dataset_from_table(const CsvTable& table, const std::vector<std::string>& response_cols);

void write_csv(std::ostream& out, const std::vector<std::string>& header, const Matrix& values);

/// Header "x1..xp,y" (or "y1..ys" when s > 1) matching dataset_from_table's default.
std::vector<std::string> default_header(Index p, Index s);

}  // namespace esdr::cli
