#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "esdr/config.hpp"
#include "esdr/pipeline.hpp"
#include "esdr/simgen.hpp"
#include "esdr/subspace.hpp"

namespace esdr::cli {

/// One estimator column of a results table.
struct Variant {
  std::string label;
  Method method = Method::rmave;
  FamilySpec family;
  int m = 15;
};

enum class Metric { distance, dimension };

/// A (model, n, p, variant) combination evaluated over all replicates.
struct Cell {
  std::string setting;
  Model model = Model::ex1;
  Index n = 400;
  Index p = 10;
  Variant variant;
  Metric metric = Metric::distance;
  NormKind norm = NormKind::operator_norm;
  double x = 0.0;  ///< abscissa for plot series (m for fig1, 1/sqrt(n) for fig2)
};

struct ExperimentSpec {
  std::string name = "custom";  ///< table1..table5, fig1, fig2, ex8 or custom
  std::vector<std::string> models;
  std::vector<Index> n;
  std::vector<Index> p;
  std::vector<int> m;
  std::optional<Method> method;
  std::optional<FamilyKind> family;
  int replicates = 20;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  FitConfig config;
};

struct ReplicateResult {
  double value = 0.0;  ///< distance, or 1/0 for a correct/incorrect dimension
  Index d_hat = -1;    ///< selected dimension (dimension metric only)
  bool failed = false;
  std::string message;
};

struct CellResult {
  Cell cell;
  std::vector<ReplicateResult> replicates;
  double mean = 0.0;  ///< over successful replicates
  double sd = 0.0;    ///< sample sd (n - 1 divisor), 0 for a single value
  int failures = 0;
};

struct ResultTable {
  std::string experiment;
  std::vector<CellResult> rows;
  int failures() const;
};

/// Known experiment names, in display order.
const std::vector<std::string>& experiment_names();

/// Expands a spec into its cells; throws Error on unknown names or invalid settings.
std::vector<Cell> build_cells(const ExperimentSpec& spec);

/// Seeds are functions of (root, model, n, p, replicate) only, so every variant of a
/// table sees the same simulated datasets and results do not depend on the thread count.
std::uint64_t data_seed(std::uint64_t root, Model model, Index n, Index p, int replicate);
std::uint64_t fit_seed(std::uint64_t root, Model model, Index n, Index p, int replicate);

ReplicateResult run_replicate(const Cell& cell, const ExperimentSpec& spec, int replicate);
ResultTable run_experiment(const ExperimentSpec& spec);

/// Mean and sample sd over the successful replicates, accumulated in replicate order.
void summarize(CellResult& row);

}  // namespace esdr::cli
