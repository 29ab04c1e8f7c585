#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fairlens/bundle.hpp"
#include "fairlens/config.hpp"

namespace fairlens {

/// Trains, audits and analyzes every (dataset, feature, seed) of `config`.
/// Failures are recorded in the bundle with their stage; completed cells are
/// kept.
AuditBundle run_pipeline(const RunConfig& config);

/// Audits externally produced scores; no training.
AuditBundle audit_external_predictions(const AuditConfig& config);

/// Distances, linkages and PCA for one assembled matrix. Stage failures are
/// appended to `failures`; the parts computed before a failure are kept.
ConditionRecord analyze_condition(MetricsMatrix matrix, const std::map<std::string, double>& pooled_auc,
                                  const std::string& reference_group, const std::vector<std::string>& plot_models,
                                  std::vector<FailureRecord>& failures);

/// Recomputes distances and linkages from the stored matrices, then the
/// robustness summary.
void recluster(AuditBundle& bundle);

/// Refits the per-model PCA. `reference_model` replaces the stored choice
/// when set; `plot_models` replaces the plotted models when non-empty.
void reproject(AuditBundle& bundle, const std::optional<std::string>& reference_model,
               const std::vector<std::string>& plot_models);

/// Cross-condition correlation of metric distance vectors, over the seeds in
/// which every condition completed. Cleared when fewer than two conditions.
void compute_robustness(AuditBundle& bundle);

/// Matrix restricted to the plotted models, with its own linkages.
struct FigureMatrix {
  MetricsMatrix matrix;
  Linkage columns;
  Linkage rows;
};
FigureMatrix figure_matrix(const ConditionRecord& condition);

/// Directory of one condition: <dataset>/<feature>/seed<k>, path-safe.
std::filesystem::path condition_directory(const ConditionRecord& condition);

/// matrix.csv, clustermap.svg and pca.svg per condition, plus the robustness
/// CSVs and heatmap.
void write_figures(const AuditBundle& bundle, const std::filesystem::path& out_dir);

/// write_figures, bundle.json and failures.json (removed when there are no
/// failures).
void write_outputs(const AuditBundle& bundle, const std::filesystem::path& out_dir);

}  // namespace fairlens
