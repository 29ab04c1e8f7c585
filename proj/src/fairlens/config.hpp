#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fairlens/ingest.hpp"
#include "fairlens/models/model.hpp"
#include "fairlens/splits.hpp"

namespace fairlens {

struct RunConfig {
  std::vector<DatasetSpec> datasets;
  FoldPlan plan;
  std::vector<ModelKind> models{kAllModelKinds.begin(), kAllModelKinds.end()};
  std::size_t search_draws = 10;
  std::size_t jobs = 1;
  std::vector<std::string> plot_models;  // empty: top two by pooled test AUC
  bool verbose = false;

  void validate() const;
};

struct PredictionSource {
  std::string model;  // empty when the file carries a model column
  std::filesystem::path path;
};

struct AuditConfig {
  std::string dataset = "external";
  std::vector<PredictionSource> files;
  std::vector<std::string> features;
  std::optional<double> fixed_threshold;
  std::string validation_column;  // rows with 1/true select the threshold and are not scored
  std::string model_column;
  std::map<std::string, std::string> reference_groups;
  std::vector<std::string> plot_models;

  void validate() const;
};

/// Desk-scale defaults: 3 seeds, 5 folds, 10 draws.
RunConfig desk_scale_defaults();
/// 10 seeds, 10 folds, 30 draws.
void apply_paper_scale(RunConfig& config);

DatasetSpec parse_dataset_spec(std::string_view json_text, const std::filesystem::path& base_dir);
DatasetSpec load_dataset_spec(const std::filesystem::path& path);

/// Run config JSON. Relative paths resolve against `base_dir`.
RunConfig parse_run_config(std::string_view json_text, const std::filesystem::path& base_dir);
RunConfig load_run_config(const std::filesystem::path& path);

/// Applies a JSON object of overrides with the run-config keys (folds, seeds,
/// validation_fraction, models, search_draws, jobs, plot_models,
/// paper_scale, verbose). `paper_scale` is applied first so explicit keys win.
void apply_overrides(RunConfig& config, std::string_view json_text);

AuditConfig parse_audit_config(std::string_view json_text, const std::filesystem::path& base_dir);

}  // namespace fairlens
