#include "esdr/pipeline.hpp"

#include <numeric>

#include "esdr/error.hpp"
#include "esdr/random.hpp"

namespace esdr {

std::string_view to_string(Method method) {
  switch (method) {
    case Method::opg: return "opg";
    case Method::mave: return "mave";
    case Method::rmave: return "rmave";
  }
  return "unknown";
}

std::optional<Method> parse_method(std::string_view name) {
  if (name == "opg") return Method::opg;
  if (name == "mave") return Method::mave;
  if (name == "rmave") return Method::rmave;
  return std::nullopt;
}

std::optional<FamilyKind> parse_family(std::string_view name) {
  for (auto kind : {FamilyKind::characteristic, FamilyKind::boxcox, FamilyKind::haar, FamilyKind::slice,
                    FamilyKind::polynomial, FamilyKind::kernel_density})
    if (to_string(kind) == name) return kind;
  return std::nullopt;
}

PreparedFamily prepare_family(const FamilySpec& spec, const Matrix& y, const FitConfig& cfg) {
  if (cfg.m < 1) throw Error("ensemble size must be ≥ 1");
  std::vector<std::string> notes;
  switch (spec.kind) {
    case FamilyKind::characteristic: {
      Engine engine = derive_engine(cfg.seed, {stream_tag("cf-frequencies")});
      return {sample_cf_family(y.cols(), cfg.m, engine, cfg.standardize_response), y, std::move(notes)};
    }
    case FamilyKind::boxcox: {
      if (y.cols() != 1) throw Error("Box-Cox family needs a single response column");
      Matrix shifted = y;
      if (y.minCoeff() <= 0.0) {
        shifted = shift_nonneg(y);
        notes.emplace_back("responses shifted by -min(Y) + 0.5 before Box-Cox");
      }
      return {boxcox_family(spec.boxcox_grid), std::move(shifted), std::move(notes)};
    }
    case FamilyKind::haar: return {haar_family(spec.haar_level), y, std::move(notes)};
    case FamilyKind::slice: return {slice_family_from_quantiles(y, cfg.m), y, std::move(notes)};
    case FamilyKind::polynomial: {
      std::vector<int> degrees(static_cast<std::size_t>(cfg.m));
      std::iota(degrees.begin(), degrees.end(), 1);
      return {poly_family(std::move(degrees)), y, std::move(notes)};
    }
    case FamilyKind::kernel_density: return {kde_family_from_quantiles(y, cfg.m), y, std::move(notes)};
  }
  throw Error("unknown family");
}

Standardized working_predictors(const Matrix& x, const FitConfig& cfg) {
  if (cfg.standardize_predictors) return standardize_predictors(x);
  return {x, StandardizeRecord::identity(x.cols())};
}

EnsembleFit run_method(Method method, const Matrix& x, const ResponsePanel& panel, Index d, const FitConfig& cfg) {
  switch (method) {
    case Method::opg: return opg_ensemble(x, panel, d, cfg);
    case Method::mave: return mave_ensemble(x, panel, d, cfg);
    case Method::rmave: return rmave_ensemble(x, panel, d, cfg);
  }
  throw Error("unknown method");
}

FitResult fit_dataset(const Dataset& data, const FamilySpec& family, Method method, Index d, const FitConfig& cfg) {
  const auto errors = validate_config(cfg);
  if (!errors.empty()) throw Error("invalid configuration: " + errors.front());
  Standardized work = working_predictors(data.x(), cfg);
  PreparedFamily prepared = prepare_family(family, data.y(), cfg);
  const ResponsePanel panel = evaluate(prepared.family, prepared.y);
  EnsembleFit fit = run_method(method, work.z, panel, d, cfg);
  Basis original = orthonormalize(work.record.basis_to_original(fit.basis.matrix()));
  return {std::move(fit), std::move(original), std::move(work.record), panel.width(), std::move(prepared.notes)};
}

}  // namespace esdr
