#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fairlens/cluster.hpp"
#include "fairlens/fairmatrix.hpp"
#include "fairlens/metrics.hpp"
#include "fairlens/models/model.hpp"
#include "fairlens/pca.hpp"
#include "fairlens/robustness.hpp"

namespace fairlens {

inline constexpr std::string_view kBundleSchema = "fairlens.bundle/1";

enum class RunMode { Full, AuditOnly };
std::string to_string(RunMode mode);

struct PlanRecord {
  std::size_t folds = 0;
  std::vector<std::uint64_t> seeds;
  double validation_fraction = 0.0;
  std::size_t search_draws = 0;
  std::vector<std::string> models;
};

struct GroupSummary {
  std::string feature;
  std::vector<std::string> labels;
  std::vector<std::size_t> sizes;
  std::string reference;
};

/// Selected configuration of one model for one test fold.
struct FoldWinner {
  std::string model;
  std::size_t fold = 0;
  std::size_t draw_index = 0;
  std::string params;  // canonical "key=value;..." rendering of the draw
  double validation_auc = 0.0;
  bool validation_auc_imputed = false;
  double threshold = 0.5;
  bool threshold_fallback = false;
  std::size_t failed_draws = 0;
};

/// Everything one seed of one dataset produced before per-feature assembly.
struct SeedRun {
  std::uint64_t seed = 0;
  std::vector<FoldWinner> winners;
  std::map<std::string, double> pooled_test_auc;  // by model
};

struct DatasetRecord {
  std::string name;
  std::string positive_meaning;
  std::size_t rows = 0;
  std::size_t dropped_rows = 0;
  std::vector<std::string> features;  // declared protected features
  std::vector<std::string> design_columns;
  std::vector<GroupSummary> groups;
  std::vector<SeedRun> runs;
};

/// One (dataset, feature, seed) cell.
struct ConditionRecord {
  std::string dataset;
  std::string feature;
  std::uint64_t seed = 0;
  MetricsMatrix matrix;
  DistanceVector column_distances;
  DistanceVector row_distances;
  Linkage column_linkage;
  Linkage row_linkage;
  PcaModel full_pca;
  std::string reference_model;
  std::string reference_group;
  PcaModel model_pca;
  AlignedProjection projection;
  std::vector<std::string> plot_models;
  std::vector<std::string> notes;

  std::string label() const { return dataset + "/" + feature; }
};

struct FailureRecord {
  std::string dataset;
  std::string feature;  // empty when the failure precedes feature assembly
  std::optional<std::uint64_t> seed;
  std::string stage;
  std::string message;
};

struct RobustnessRecord {
  std::vector<CorrelationMatrix> per_seed;
  std::vector<std::uint64_t> seeds;
  CorrelationSummary summary;
};

/// Complete, self-contained result of a run. Re-rendering any figure needs
/// nothing else.
struct AuditBundle {
  std::string schema{kBundleSchema};
  RunMode mode = RunMode::Full;
  PlanRecord plan;
  std::vector<DatasetRecord> datasets;
  std::vector<ConditionRecord> conditions;
  std::optional<RobustnessRecord> robustness;
  std::vector<FailureRecord> failures;
  std::vector<std::string> warnings;

  /// Every declared (dataset, feature, seed) produced a condition.
  bool complete() const;
  const ConditionRecord* find_condition(std::string_view dataset, std::string_view feature, std::uint64_t seed) const;
};

/// Two-space indented JSON; doubles in shortest round-trip form.
std::string bundle_to_json(const AuditBundle& bundle);
/// Parses and validates.
AuditBundle bundle_from_json(std::string_view text);

/// Throws a parse error unless the schema tag matches and every declared
/// (dataset, feature, seed) has a condition or a failure record.
void validate_bundle(const AuditBundle& bundle);

std::string failures_to_json(const std::vector<FailureRecord>& failures);

/// "key=value;..." in a fixed key order.
std::string describe_params(const HyperDraw& draw);

}  // namespace fairlens
