#include "experiments.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

#include "esdr/error.hpp"
#include "esdr/order.hpp"
#include "esdr/random.hpp"
#include "worker_pool.hpp"

namespace esdr::cli {
namespace {

Variant cf_variant(int m) { return {"rmave-cf", Method::rmave, FamilySpec{FamilyKind::characteristic}, m}; }

// The three estimator columns reported for the simulation tables.
std::vector<Variant> table_variants(int cf_m) {
  FamilySpec boxcox{FamilyKind::boxcox};
  FamilySpec identity{FamilyKind::polynomial};
  return {cf_variant(cf_m),
          {"rmave-boxcox", Method::rmave, boxcox, static_cast<int>(boxcox.boxcox_grid.size())},
          {"rmave-identity", Method::rmave, identity, 1}};
}

struct Defaults {
  std::vector<std::string> models;
  std::vector<Index> n;
  std::vector<Index> p;
  std::vector<int> m;
  Metric metric = Metric::distance;
  NormKind norm = NormKind::operator_norm;
  bool table_columns = false;  ///< report cf, Box-Cox and identity columns
};

Defaults defaults_for(const std::string& name) {
  if (name == "table1") return {{"ex2"}, {400}, {10, 20}, {15}, Metric::distance, NormKind::operator_norm, true};
  if (name == "table2") return {{"ex3"}, {400}, {10, 20}, {15}, Metric::distance, NormKind::operator_norm, true};
  if (name == "table3") return {{"modelA", "modelB", "modelC"}, {100, 200, 400}, {10}, {15}, Metric::dimension};
  if (name == "table4")
    return {{"modelD", "modelE", "modelF", "modelG"}, {400}, {10, 20}, {15}, Metric::distance,
            NormKind::operator_norm, true};
  if (name == "table5") return {{"ex6"}, {400}, {10, 20}, {15}, Metric::distance, NormKind::operator_norm, true};
  if (name == "fig1") return {{"ex1"}, {400}, {10}, {5, 10, 15, 20, 30, 40, 50}};
  if (name == "fig2") return {{"modelD"}, {100, 200, 300, 400, 500}, {10}, {15}};
  if (name == "ex8") return {{"ex8"}, {100}, {6}, {15000}, Metric::distance, NormKind::frobenius};
  if (name == "custom") return {{"ex1"}, {}, {}, {15}};
  throw Error("unknown experiment '" + name + "'");
}

template <class T>
const std::vector<T>& pick(const std::vector<T>& given, const std::vector<T>& fallback) {
  return given.empty() ? fallback : given;
}

std::string setting_label(const ModelInfo& info, Index n, Index p, int m) {
  return "model=" + std::string(info.name) + " n=" + std::to_string(n) + " p=" + std::to_string(p) +
         " m=" + std::to_string(m);
}

}  // namespace

int ResultTable::failures() const {
  int total = 0;
  for (const auto& row : rows) total += row.failures;
  return total;
}

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"table1", "table2", "table3", "table4", "table5",
                                              "fig1",   "fig2",   "ex8",    "custom"};
  return names;
}

std::vector<Cell> build_cells(const ExperimentSpec& spec) {
  const Defaults def = defaults_for(spec.name);
  if (spec.replicates < 1) throw Error("replicates must be >= 1");
  const bool overridden = spec.method.has_value() || spec.family.has_value();
  const auto& m_values = pick(spec.m, def.m);
  for (int m : m_values)
    if (m < 1) throw Error("ensemble size must be ≥ 1");

  std::vector<Cell> cells;
  for (const auto& model_name : pick(spec.models, def.models)) {
    const auto model = parse_model(model_name);
    if (!model) throw Error("unknown model '" + model_name + "'");
    const ModelInfo& info = model_info(*model);
    const std::vector<Index> model_n{info.default_n};
    const std::vector<Index> model_p{info.default_p};
    for (Index p : pick(spec.p, def.p.empty() ? model_p : def.p)) {
      if (p < info.min_p) throw Error("model " + std::string(info.name) + " needs p >= " + std::to_string(info.min_p));
      for (Index n : pick(spec.n, def.n.empty() ? model_n : def.n)) {
        if (n < p + 2) throw Error("n must be at least p + 2");
        for (int m : m_values) {
          std::vector<Variant> variants;
          if (overridden) {
            Variant v{"", spec.method.value_or(Method::rmave), FamilySpec{spec.family.value_or(FamilyKind::characteristic)},
                      m};
            v.label = std::string(to_string(v.method)) + "-" + std::string(to_string(v.family.kind));
            variants.push_back(v);
          } else if (def.table_columns) {
            variants = table_variants(m);
          } else {
            variants.push_back(cf_variant(m));
          }
          for (const auto& variant : variants) {
            Cell cell;
            cell.model = *model;
            cell.n = n;
            cell.p = p;
            cell.variant = variant;
            cell.metric = def.metric;
            cell.norm = def.norm;
            cell.setting = setting_label(info, n, p, variant.m);
            cell.x = spec.name == "fig2" ? 1.0 / std::sqrt(static_cast<double>(n)) : static_cast<double>(variant.m);
            cells.push_back(std::move(cell));
          }
        }
      }
    }
  }
  return cells;
}

std::uint64_t data_seed(std::uint64_t root, Model model, Index n, Index p, int replicate) {
  return derive_seed(root, {stream_tag("data"), stream_tag(model_info(model).name), static_cast<std::uint64_t>(n),
                            static_cast<std::uint64_t>(p), static_cast<std::uint64_t>(replicate)});
}

std::uint64_t fit_seed(std::uint64_t root, Model model, Index n, Index p, int replicate) {
  return derive_seed(root, {stream_tag("fit"), stream_tag(model_info(model).name), static_cast<std::uint64_t>(n),
                            static_cast<std::uint64_t>(p), static_cast<std::uint64_t>(replicate)});
}

ReplicateResult run_replicate(const Cell& cell, const ExperimentSpec& spec, int replicate) {
  ReplicateResult out;
  try {
    const Simulated sim = generate({cell.model, cell.n, cell.p, data_seed(spec.seed, cell.model, cell.n, cell.p, replicate)});
    FitConfig cfg = spec.config;
    cfg.m = cell.variant.m;
    cfg.seed = fit_seed(spec.seed, cell.model, cell.n, cell.p, replicate);
    const Index d0 = model_info(cell.model).d0;
    if (cell.metric == Metric::distance) {
      const FitResult fit = fit_dataset(sim.data, cell.variant.family, cell.variant.method, d0, cfg);
      out.value = distance(fit.basis, sim.b0, cell.norm);
    } else {
      const CvCurve curve = estimate_dimension(sim.data, cell.variant.family, cfg, default_max_dimension(cell.p));
      out.d_hat = curve.d_hat;
      out.value = curve.d_hat == d0 ? 1.0 : 0.0;
    }
  } catch (const Error& e) {
    out.failed = true;
    out.message = e.what();
  }
  return out;
}

void summarize(CellResult& row) {
  double sum = 0.0;
  int count = 0;
  row.failures = 0;
  for (const auto& r : row.replicates) {
    if (r.failed) {
      ++row.failures;
      continue;
    }
    sum += r.value;
    ++count;
  }
  row.mean = count > 0 ? sum / count : std::nan("");
  double ss = 0.0;
  for (const auto& r : row.replicates)
    if (!r.failed) ss += (r.value - row.mean) * (r.value - row.mean);
  row.sd = count > 1 ? std::sqrt(ss / (count - 1)) : 0.0;
}

ResultTable run_experiment(const ExperimentSpec& spec) {
  ResultTable table;
  table.experiment = spec.name;
  for (auto& cell : build_cells(spec)) {
    CellResult row;
    row.cell = std::move(cell);
    row.replicates.resize(static_cast<std::size_t>(spec.replicates));
    table.rows.push_back(std::move(row));
  }
  const auto reps = static_cast<std::size_t>(spec.replicates);
  parallel_for(table.rows.size() * reps, spec.threads, [&](std::size_t task) {
    CellResult& row = table.rows[task / reps];
    row.replicates[task % reps] = run_replicate(row.cell, spec, static_cast<int>(task % reps));
  });
  for (auto& row : table.rows) summarize(row);
  return table;
}

std::size_t worker_count() {
  if (const char* env = std::getenv("SDR_THREADS")) {
    char* end = nullptr;
    const long value = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && value > 0) return static_cast<std::size_t>(value);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace esdr::cli
