#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

#include "esdr/order.hpp"
#include "esdr/pipeline.hpp"
#include "experiments.hpp"

namespace esdr::cli {

/// Rounds to 12 significant digits, the precision promised for reported bases.
double round_significant(double value, int digits = 12);

nlohmann::json config_json(const FitConfig& cfg);

/// Column-major basis payload: {"rows", "cols", "values"}.
nlohmann::json basis_json(const Matrix& basis);

/// The single non-deterministic key of every JSON document.
nlohmann::json timestamp_json();

struct FitReportInput {
  const FitConfig& config;
  Method method;
  const FamilySpec& family;
  Index n, p, s;
  Index d;                       ///< selected or requested dimension
  const FitResult* fit;          ///< null when d = 0 was selected
  const CvCurve* curve;          ///< set for --dim auto
};

nlohmann::json fit_report(const FitReportInput& in);

/// Writes <dir>/<name>.csv, <name>_replicates.csv, <name>.json and, for plot
/// experiments, <name>_series.csv. Everything except the JSON timestamp key is a
/// deterministic function of the spec.
void write_result_files(const ResultTable& table, const ExperimentSpec& spec, const std::filesystem::path& dir);

void print_table(std::ostream& out, const ResultTable& table);

}  // namespace esdr::cli
