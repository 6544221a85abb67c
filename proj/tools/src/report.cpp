#include "report.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include "esdr/error.hpp"

namespace esdr::cli {
namespace {

std::string format17(double value) {
  std::ostringstream out;
  out << std::setprecision(17) << value;
  return out.str();
}

std::string iso8601_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buffer[32];
  std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buffer;
}

std::string metric_name(Metric metric) { return metric == Metric::distance ? "distance" : "correct_dimension"; }

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  return out;
}

}  // namespace

double round_significant(double value, int digits) {
  if (value == 0.0 || !std::isfinite(value)) return value;
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.*g", digits, value);
  return std::strtod(buffer, nullptr);
}

nlohmann::json config_json(const FitConfig& cfg) {
  return {{"m", cfg.m},
          {"varsigma", cfg.varsigma},
          {"tol", cfg.tol},
          {"max_inner_iter", cfg.max_inner_iter},
          {"stage_iterations", cfg.stage_iterations},
          {"max_outer_iter", cfg.max_outer_iter},
          {"kernel", std::string(to_string(cfg.kernel))},
          {"c0", cfg.c0},
          {"hbar0", cfg.hbar0},
          {"trim_quantile", cfg.trim_quantile},
          {"ridge", cfg.ridge},
          {"seed", cfg.seed},
          {"standardize_predictors", cfg.standardize_predictors},
          {"standardize_response", cfg.standardize_response}};
}

nlohmann::json basis_json(const Matrix& basis) {
  nlohmann::json values = nlohmann::json::array();
  for (Index c = 0; c < basis.cols(); ++c)
    for (Index r = 0; r < basis.rows(); ++r) values.push_back(round_significant(basis(r, c)));
  return {{"rows", basis.rows()}, {"cols", basis.cols()}, {"order", "column-major"}, {"values", values}};
}

nlohmann::json timestamp_json() { return iso8601_now(); }

nlohmann::json fit_report(const FitReportInput& in) {
  nlohmann::json config = config_json(in.config);
  config["method"] = std::string(to_string(in.method));
  config["family"] = std::string(to_string(in.family.kind));
  if (in.family.kind == FamilyKind::haar) config["haar_level"] = in.family.haar_level;

  nlohmann::json report;
  report["config"] = config;
  report["data"] = {{"n", in.n}, {"p", in.p}, {"s", in.s}};
  report["dimension"] = in.d;
  report["basis"] = basis_json(in.fit ? in.fit->basis.matrix() : Matrix(in.p, 0));

  if (in.curve) {
    nlohmann::json values = nlohmann::json::array();
    for (double v : in.curve->values) values.push_back(std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr));
    report["cv_curve"] = {{"values", values},
                          {"bandwidths", in.curve->bandwidths},
                          {"d_hat", in.curve->d_hat},
                          {"flags", in.curve->flags}};
  }

  nlohmann::json diagnostics = {{"converged", true}};
  if (in.fit) {
    const EnsembleFit& fit = in.fit->fit;
    report["objective_trace"] = fit.objective_trace;
    std::vector<double> eigenvalues(fit.eigenvalues.data(), fit.eigenvalues.data() + fit.eigenvalues.size());
    diagnostics = {{"converged", fit.converged},
                   {"inner_iterations", fit.inner_iterations},
                   {"outer_iterations", fit.outer_iterations},
                   {"outer_bandwidths", fit.outer_bandwidths},
                   {"ridged_systems", fit.ridged_systems},
                   {"trimmed_points", fit.trimmed_points},
                   {"panel_width", in.fit->panel_width},
                   {"warnings", fit.warnings},
                   {"notes", in.fit->notes}};
    if (!eigenvalues.empty()) diagnostics["opg_eigenvalues"] = eigenvalues;
  } else {
    report["objective_trace"] = nlohmann::json::array();
  }
  report["diagnostics"] = diagnostics;
  report["timestamp"] = timestamp_json();
  return report;
}

void write_result_files(const ResultTable& table, const ExperimentSpec& spec, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const std::string& name = table.experiment;

  {
    auto out = open_output(dir / (name + ".csv"));
    out << "setting,model,n,p,m,variant,metric,replicates,failed,mean,sd\n";
    for (const auto& row : table.rows) {
      const Cell& c = row.cell;
      out << c.setting << ',' << model_info(c.model).name << ',' << c.n << ',' << c.p << ',' << c.variant.m << ','
          << c.variant.label << ',' << metric_name(c.metric) << ',' << row.replicates.size() << ',' << row.failures
          << ',' << format17(row.mean) << ',' << format17(row.sd) << '\n';
    }
  }
  {
    auto out = open_output(dir / (name + "_replicates.csv"));
    out << "setting,variant,replicate,status,value,d_hat\n";
    for (const auto& row : table.rows)
      for (std::size_t r = 0; r < row.replicates.size(); ++r) {
        const auto& rep = row.replicates[r];
        out << row.cell.setting << ',' << row.cell.variant.label << ',' << r << ',' << (rep.failed ? "failed" : "ok")
            << ',' << (rep.failed ? std::string() : format17(rep.value)) << ','
            << (rep.d_hat >= 0 ? std::to_string(rep.d_hat) : std::string()) << '\n';
      }
  }
  if (name == "fig1" || name == "fig2") {
    auto out = open_output(dir / (name + "_series.csv"));
    out << "variant,n,m,x,mean,sd\n";
    for (const auto& row : table.rows)
      out << row.cell.variant.label << ',' << row.cell.n << ',' << row.cell.variant.m << ',' << format17(row.cell.x)
          << ',' << format17(row.mean) << ',' << format17(row.sd) << '\n';
  }

  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : table.rows) {
    nlohmann::json values = nlohmann::json::array();
    nlohmann::json errors = nlohmann::json::array();
    for (std::size_t r = 0; r < row.replicates.size(); ++r) {
      const auto& rep = row.replicates[r];
      values.push_back(rep.failed ? nlohmann::json(nullptr) : nlohmann::json(rep.value));
      if (rep.failed) errors.push_back({{"replicate", r}, {"message", rep.message}});
    }
    rows.push_back({{"setting", row.cell.setting},
                    {"model", model_info(row.cell.model).name},
                    {"n", row.cell.n},
                    {"p", row.cell.p},
                    {"m", row.cell.variant.m},
                    {"variant", row.cell.variant.label},
                    {"metric", metric_name(row.cell.metric)},
                    {"norm", row.cell.norm == NormKind::frobenius ? "frobenius" : "operator"},
                    {"x", row.cell.x},
                    {"mean", std::isfinite(row.mean) ? nlohmann::json(row.mean) : nlohmann::json(nullptr)},
                    {"sd", row.sd},
                    {"failed", row.failures},
                    {"values", values},
                    {"errors", errors}});
  }
  const nlohmann::json doc = {{"experiment", name},
                              {"replicates", spec.replicates},
                              {"seed", spec.seed},
                              {"config", config_json(spec.config)},
                              {"rows", rows},
                              {"failed_replicates", table.failures()},
                              {"timestamp", timestamp_json()}};
  auto out = open_output(dir / (name + ".json"));
  out << doc.dump(2) << '\n';
}

void print_table(std::ostream& out, const ResultTable& table) {
  const bool dimension = !table.rows.empty() && table.rows.front().cell.metric == Metric::dimension;
  out << table.experiment << (dimension ? ": fraction of replicates with the correct dimension\n"
                                        : ": mean and sd of the subspace distance\n");
  std::size_t width = 7;
  for (const auto& row : table.rows) width = std::max(width, row.cell.setting.size());
  out << std::left << std::setw(static_cast<int>(width + 2)) << "setting" << std::setw(16) << "variant"
      << std::right << std::setw(10) << (dimension ? "fraction" : "mean") << std::setw(10) << "sd" << std::setw(8)
      << "failed" << '\n';
  for (const auto& row : table.rows) {
    out << std::left << std::setw(static_cast<int>(width + 2)) << row.cell.setting << std::setw(16)
        << row.cell.variant.label << std::right << std::fixed << std::setprecision(4) << std::setw(10) << row.mean
        << std::setw(10) << row.sd << std::setw(8) << row.failures << '\n';
    out.unsetf(std::ios::fixed);
  }
}

}  // namespace esdr::cli
